//! Weighted arrangements: hyperplanes with rational equations and rational
//! monodromy exponents.
//!
//! A hyperplane is the zero locus of the affine functional
//! `coeffs . x + offset`. The weight `a_H` is the exponent of the local
//! system monodromy `exp(2 pi i a_H)` around the hyperplane. Input
//! arrangements must have non-integral weights (nontrivial monodromy around
//! every component); arrangements that arise internally from restriction to
//! a flat may carry integral weights and are built with
//! [`WeightedArrangement::new_relaxed`].

use crate::rat::{format_rat, is_integer, parse_rat, Rat};
use num::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ArrError {
    #[error("malformed input: {0}")]
    MalformedInput(String),
    #[error("hyperplane {0} has integer weight (trivial monodromy)")]
    IntegerWeight(String),
    #[error("projective arrangement must have integral total weight")]
    ProjectiveTotalNonintegral,
    #[error("hyperplanes {0} and {1} coincide")]
    DuplicateHyperplane(String, String),
    #[error("operation requires a central arrangement")]
    NotCentral,
    #[error("operation requires an affine arrangement")]
    NotAffine,
    #[error("flat does not belong to this arrangement")]
    FlatNotInArrangement,
    #[error("flat is neither dense nor in the building set")]
    FlatNotDenseNorInBuildingSet,
    #[error("exact and float backends disagree: exact {0:?} vs float {1:?}")]
    BackendDisagreement(Vec<usize>, Vec<usize>),
    #[error("cone split undefined: total weight not integral")]
    NonintegralTotal,
    #[error("cone split has no nonnegative solution for degrees {0:?}")]
    InconsistentRecursion(Vec<usize>),
    #[error("interval lower bound exceeds upper bound in degree {0}")]
    InconsistentBounds(usize),
    #[error("independently computed dual verdicts disagree at {0}")]
    DualMismatch(String),
    #[error("condition A fails at {0}")]
    ConditionAFailed(String),
    #[error("condition A undetermined at {0}")]
    ConditionAUndetermined(String),
    #[error("resolutions disagree on exact Betti numbers in degree {0}: {1} vs {2}")]
    CorollaryViolation(usize, usize, usize),
    #[error("example generation failed: {0}")]
    GenerationFailed(String),
}

impl ArrError {
    /// Stable machine-readable code for the error stream.
    pub fn code(&self) -> &'static str {
        use ArrError::*;
        match self {
            MalformedInput(_) => "MALFORMED_INPUT",
            IntegerWeight(_) => "INTEGER_WEIGHT",
            ProjectiveTotalNonintegral => "PROJECTIVE_TOTAL_NONINTEGRAL",
            DuplicateHyperplane(..) => "DUPLICATE_HYPERPLANE",
            NotCentral => "NOT_CENTRAL",
            NotAffine => "NOT_AFFINE",
            FlatNotInArrangement => "FLAT_NOT_IN_ARRANGEMENT",
            FlatNotDenseNorInBuildingSet => "FLAT_NOT_DENSE_NOR_IN_B",
            BackendDisagreement(..) => "BACKEND_DISAGREEMENT",
            NonintegralTotal => "NONINTEGRAL_TOTAL",
            InconsistentRecursion(_) => "INCONSISTENT_RECURSION",
            InconsistentBounds(_) => "INCONSISTENT_BOUNDS",
            DualMismatch(_) => "DUAL_MISMATCH",
            ConditionAFailed(_) => "CONDITION_A_FAILED",
            ConditionAUndetermined(_) => "CONDITION_A_UNDETERMINED",
            CorollaryViolation(..) => "COROLLARY_VIOLATION",
            GenerationFailed(_) => "GENERATION_FAILED",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    Affine,
    /// Central arrangement in C^dimension read as an arrangement in
    /// P^(dimension-1).
    Projective,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hyperplane {
    pub coeffs: Vec<Rat>,
    pub offset: Rat,
    pub weight: Rat,
    pub label: String,
}

impl Hyperplane {
    pub fn eval(&self, point: &[Rat]) -> Rat {
        crate::linalg::dot(&self.coeffs, point) + &self.offset
    }

    /// Canonical representative of the underlying projective functional,
    /// used for duplicate detection.
    fn canonical_functional(&self) -> Vec<Rat> {
        let mut v: Vec<Rat> = self.coeffs.clone();
        v.push(self.offset.clone());
        let lead = v.iter().find(|c| !c.is_zero()).cloned().unwrap();
        for c in v.iter_mut() {
            *c = &*c / &lead;
        }
        v
    }
}

#[derive(Clone, Debug)]
pub struct WeightedArrangement {
    pub dim: usize,
    pub space: Space,
    pub hyperplanes: Vec<Hyperplane>,
}

impl WeightedArrangement {
    /// Strict constructor for input arrangements: enforces every invariant.
    pub fn new(
        dim: usize,
        space: Space,
        hyperplanes: Vec<Hyperplane>,
    ) -> Result<Self, ArrError> {
        let arr = Self::new_relaxed(dim, space, hyperplanes)?;
        for h in &arr.hyperplanes {
            if is_integer(&h.weight) {
                return Err(ArrError::IntegerWeight(h.label.clone()));
            }
        }
        if space == Space::Projective && !is_integer(&arr.total_weight()) {
            return Err(ArrError::ProjectiveTotalNonintegral);
        }
        Ok(arr)
    }

    /// Structural checks only; integral weights allowed. Used for
    /// restriction arrangements where traces can carry trivial monodromy.
    pub fn new_relaxed(
        dim: usize,
        space: Space,
        hyperplanes: Vec<Hyperplane>,
    ) -> Result<Self, ArrError> {
        if dim == 0 {
            return Err(ArrError::MalformedInput("dimension must be positive".into()));
        }
        for h in &hyperplanes {
            if h.coeffs.len() != dim {
                return Err(ArrError::MalformedInput(format!(
                    "hyperplane {} has {} coefficients, expected {}",
                    h.label,
                    h.coeffs.len(),
                    dim
                )));
            }
            if h.coeffs.iter().all(|c| c.is_zero()) {
                return Err(ArrError::MalformedInput(format!(
                    "hyperplane {} has zero coefficient vector",
                    h.label
                )));
            }
            if space == Space::Projective && !h.offset.is_zero() {
                return Err(ArrError::MalformedInput(format!(
                    "projective arrangement requires zero offsets, {} has {}",
                    h.label,
                    format_rat(&h.offset)
                )));
            }
        }
        for i in 0..hyperplanes.len() {
            for j in i + 1..hyperplanes.len() {
                if hyperplanes[i].canonical_functional() == hyperplanes[j].canonical_functional() {
                    return Err(ArrError::DuplicateHyperplane(
                        hyperplanes[i].label.clone(),
                        hyperplanes[j].label.clone(),
                    ));
                }
            }
        }
        Ok(WeightedArrangement {
            dim,
            space,
            hyperplanes,
        })
    }

    pub fn n(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn total_weight(&self) -> Rat {
        self.hyperplanes.iter().map(|h| h.weight.clone()).sum()
    }

    pub fn is_central(&self) -> bool {
        self.hyperplanes.iter().all(|h| h.offset.is_zero())
    }

    /// Same hyperplanes with negated weights; represents the dual local
    /// system with inverse monodromy.
    pub fn dual(&self) -> WeightedArrangement {
        let mut out = self.clone();
        for h in out.hyperplanes.iter_mut() {
            h.weight = -h.weight.clone();
        }
        out
    }

    /// Subarrangement of the hyperplanes in `closure`, translated by
    /// `-point` so the common flat passes through the origin. Weights and
    /// labels are preserved. The result is central.
    pub fn localize(&self, closure: &[usize], point: &[Rat]) -> WeightedArrangement {
        let hyperplanes = closure
            .iter()
            .map(|&i| {
                let h = &self.hyperplanes[i];
                debug_assert!(h.eval(point).is_zero());
                Hyperplane {
                    coeffs: h.coeffs.clone(),
                    offset: Rat::zero(),
                    weight: h.weight.clone(),
                    label: h.label.clone(),
                }
            })
            .collect();
        WeightedArrangement {
            dim: self.dim,
            space: Space::Affine,
            hyperplanes,
        }
    }

    /// Quotient a central subarrangement by its common center: rewrite the
    /// functionals in coordinates on a complement of the center so the
    /// result is essential of rank = codim. `basis` spans the center.
    pub fn essentialize(&self, center_basis: &[Vec<Rat>]) -> WeightedArrangement {
        assert!(self.is_central());
        // Coordinates: restrict functionals to a complement of the center.
        // The functionals all vanish on the center, so expressing them in a
        // basis of the row span keeps exactness. We pick coordinates by
        // selecting dim - rank(center) independent directions: solve for a
        // basis of vectors completing center_basis, then evaluate.
        let k = self.dim;
        let c = center_basis.len();
        let target = k - c;
        // Complete center_basis to a basis of C^k greedily with unit vectors.
        let mut rows: Vec<Vec<Rat>> = center_basis.to_vec();
        let mut complement: Vec<Vec<Rat>> = Vec::new();
        for i in 0..k {
            if complement.len() == target {
                break;
            }
            let mut e = vec![Rat::zero(); k];
            e[i] = Rat::one();
            let mut test = rows.clone();
            test.push(e.clone());
            if crate::linalg::rank(test.clone()) > rows.len() {
                rows = test;
                complement.push(e);
            }
        }
        assert_eq!(complement.len(), target);
        let hyperplanes = self
            .hyperplanes
            .iter()
            .map(|h| Hyperplane {
                coeffs: complement
                    .iter()
                    .map(|v| crate::linalg::dot(&h.coeffs, v))
                    .collect(),
                offset: Rat::zero(),
                weight: h.weight.clone(),
                label: h.label.clone(),
            })
            .collect();
        WeightedArrangement {
            dim: target,
            space: Space::Affine,
            hyperplanes,
        }
    }
}

// ---------------------------------------------------------------------------
// JSON schema

#[derive(Serialize, Deserialize)]
struct HyperplaneFile {
    coeffs: Vec<String>,
    offset: String,
    weight: String,
    #[serde(default)]
    label: String,
}

#[derive(Serialize, Deserialize)]
struct ArrangementFile {
    space: Space,
    dimension: usize,
    hyperplanes: Vec<HyperplaneFile>,
}

/// Parse an arrangement file, enforcing all invariants.
pub fn parse_arrangement(text: &str) -> Result<WeightedArrangement, ArrError> {
    let file: ArrangementFile =
        serde_json::from_str(text).map_err(|e| ArrError::MalformedInput(e.to_string()))?;
    let mut hyperplanes = Vec::new();
    for (i, h) in file.hyperplanes.into_iter().enumerate() {
        let coeffs = h
            .coeffs
            .iter()
            .map(|s| parse_rat(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(ArrError::MalformedInput)?;
        let offset = parse_rat(&h.offset).map_err(ArrError::MalformedInput)?;
        let weight = parse_rat(&h.weight).map_err(ArrError::MalformedInput)?;
        let label = if h.label.is_empty() {
            format!("H{}", i + 1)
        } else {
            h.label
        };
        hyperplanes.push(Hyperplane {
            coeffs,
            offset,
            weight,
            label,
        });
    }
    WeightedArrangement::new(file.dimension, file.space, hyperplanes)
}

/// Emit the canonical file form; `parse_arrangement(emit(a)) == a`.
pub fn emit_arrangement(a: &WeightedArrangement) -> String {
    let file = ArrangementFile {
        space: a.space,
        dimension: a.dim,
        hyperplanes: a
            .hyperplanes
            .iter()
            .map(|h| HyperplaneFile {
                coeffs: h.coeffs.iter().map(format_rat).collect(),
                offset: format_rat(&h.offset),
                weight: format_rat(&h.weight),
                label: h.label.clone(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("serialization cannot fail")
}
