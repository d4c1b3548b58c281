//! A finite free cochain model of the complement, valid for every
//! character.
//!
//! Cells are pairs (face, adjacent chamber); the cell dimension is the
//! codimension of the face. Boundary terms pair a cell with its projections
//! across the covering faces. Incidence signs are solved per cell from the
//! requirement that each boundary is a cycle (the boundary of a cell is a
//! sphere, so the restricted kernel is one-dimensional with entries +-1),
//! and the twisting multiplies each term with the monomial of hyperplanes
//! crossed from the positive to the negative side. The composite of two
//! boundaries vanishes identically in the character variables, which is
//! checked symbolically on construction.
//!
//! Specializing every variable to 1 recovers untwisted cohomology (the
//! Whitney numbers); specializing at roots of unity computes twisted Betti
//! numbers, exactly over a cyclotomic field or in floating point through
//! singular values.

use crate::arrangement::{ArrError, Space, WeightedArrangement};
use crate::cyclotomic::CyclotomicField;
use crate::faces::{face_poset, FacePoset};
use crate::linalg::{self, Field};
use crate::poset::{euler_characteristic, intersection_poset, project_whitney};
use crate::rat::{is_integer, Rat};
use nalgebra::{Complex, DMatrix};
use num::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeMap;

/// Exponent vector of a monomial in the per-hyperplane variables.
pub type ExpVec = Vec<u16>;

/// A signed sum of monomials; the zero polynomial is the empty map.
pub type Poly = BTreeMap<ExpVec, i64>;

#[derive(Clone, Debug, Serialize)]
pub struct BoundaryTerm {
    pub target: usize,
    pub coeff: i64,
    pub exponents: ExpVec,
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistedComplexPresentation {
    /// Number of character variables (= hyperplanes).
    pub variables: usize,
    /// Ambient dimension; Betti vectors are padded to length dim+1.
    pub dim: usize,
    /// Cell counts per degree 0..=dim.
    pub cells: Vec<usize>,
    /// boundary[d][c] = terms of the boundary of cell c in degree d+1.
    pub boundary: Vec<Vec<Vec<BoundaryTerm>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiVector(pub Vec<usize>);

impl BettiVector {
    pub fn alternating_sum(&self) -> i64 {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Primary,
    Dual,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Exact,
    Float,
    Both,
}

/// Build the twisted presentation from the real face structure.
pub fn twisted_presentation(
    a: &WeightedArrangement,
) -> Result<TwistedComplexPresentation, ArrError> {
    let fp = face_poset(a)?;
    Ok(presentation_from_faces(a, &fp))
}

fn presentation_from_faces(
    a: &WeightedArrangement,
    fp: &FacePoset,
) -> TwistedComplexPresentation {
    let n = a.n();
    let max_dim = fp.faces.iter().map(|f| f.codim).max().unwrap_or(0);
    // cells_by_dim[d] = list of (face index, chamber index)
    let mut cells_by_dim: Vec<Vec<(usize, usize)>> = vec![Vec::new(); max_dim + 1];
    let mut cell_index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (fi, face) in fp.faces.iter().enumerate() {
        for &ch in &fp.chambers {
            if fp.in_closure(fi, ch) {
                let d = face.codim;
                cell_index.insert((fi, ch), cells_by_dim[d].len());
                cells_by_dim[d].push((fi, ch));
            }
        }
    }
    // covers[f] = faces G of codim(f)-1 with f in the closure of G
    let compose = |g: usize, c: usize| -> Vec<i8> {
        fp.faces[g]
            .signs
            .iter()
            .zip(&fp.faces[c].signs)
            .map(|(&gs, &cs)| if gs != 0 { gs } else { cs })
            .collect()
    };
    let chamber_by_signs: BTreeMap<Vec<i8>, usize> = fp
        .chambers
        .iter()
        .map(|&ch| (fp.faces[ch].signs.clone(), ch))
        .collect();

    // Unsigned boundary structure first: (target cell, exponent vector).
    let mut raw: Vec<Vec<Vec<(usize, ExpVec)>>> = Vec::new();
    for d in 1..=max_dim {
        let mut layer = Vec::new();
        for &(fi, ch) in &cells_by_dim[d] {
            let mut terms = Vec::new();
            for (gi, gface) in fp.faces.iter().enumerate() {
                if gface.codim + 1 != d || !fp.in_closure(fi, gi) {
                    continue;
                }
                let proj = compose(gi, ch);
                let target_ch = chamber_by_signs[&proj];
                let target = cell_index[&(gi, target_ch)];
                // Crossings from the positive to the negative side.
                let expv: ExpVec = (0..n)
                    .map(|i| {
                        let from = fp.faces[ch].signs[i];
                        let to = fp.faces[target_ch].signs[i];
                        u16::from(from == 1 && to == -1)
                    })
                    .collect();
                terms.push((target, expv));
            }
            layer.push(terms);
        }
        raw.push(layer);
    }

    // Incidence signs, solved dimension by dimension.
    let mut signs: Vec<Vec<Vec<i64>>> = Vec::new();
    for d in 1..=max_dim {
        let layer = &raw[d - 1];
        let mut layer_signs = Vec::with_capacity(layer.len());
        for terms in layer {
            if d == 1 {
                // Edge rule: the cell's own chamber endpoint gets -1.
                let (_fi, ch) = cells_by_dim[1][layer_signs.len()];
                let own = cell_index[&(ch, ch)];
                let s: Vec<i64> = terms
                    .iter()
                    .map(|&(t, _)| if t == own { -1 } else { 1 })
                    .collect();
                layer_signs.push(s);
            } else {
                layer_signs.push(solve_cell_signs(terms, &raw[d - 2], &signs[d - 2]));
            }
        }
        signs.push(layer_signs);
    }

    let boundary: Vec<Vec<Vec<BoundaryTerm>>> = raw
        .iter()
        .zip(&signs)
        .map(|(layer, layer_signs)| {
            layer
                .iter()
                .zip(layer_signs)
                .map(|(terms, ss)| {
                    terms
                        .iter()
                        .zip(ss)
                        .map(|(&(target, ref expv), &coeff)| BoundaryTerm {
                            target,
                            coeff,
                            exponents: expv.clone(),
                        })
                        .collect()
                })
                .collect()
        })
        .collect();

    let mut cells: Vec<usize> = cells_by_dim.iter().map(|c| c.len()).collect();
    cells.resize(a.dim + 1, 0);
    let pres = TwistedComplexPresentation {
        variables: n,
        dim: a.dim,
        cells,
        boundary,
    };
    debug_assert!(pres.verify_dd_zero());
    pres
}

/// Solve the incidence signs of one cell: the unique (up to global flip)
/// +-1 vector making its boundary a cycle.
fn solve_cell_signs(
    terms: &[(usize, ExpVec)],
    lower_raw: &[Vec<(usize, ExpVec)>],
    lower_signs: &[Vec<i64>],
) -> Vec<i64> {
    // Rows: cells two dimensions down; columns: boundary cells of this cell.
    let mut row_of: BTreeMap<usize, usize> = BTreeMap::new();
    let mut entries: Vec<(usize, usize, i64)> = Vec::new();
    for (col, &(mid, _)) in terms.iter().enumerate() {
        for (t, &s) in lower_raw[mid].iter().zip(&lower_signs[mid]) {
            let next = row_of.len();
            let r = *row_of.entry(t.0).or_insert(next);
            entries.push((r, col, s));
        }
    }
    let mut mat = vec![vec![Rat::zero(); terms.len()]; row_of.len()];
    for (r, c, s) in entries {
        mat[r][c] += Rat::from_integer(s.into());
    }
    let kernel = linalg::nullspace(&mat);
    assert_eq!(kernel.len(), 1, "cell boundary is not a sphere cycle");
    let v = &kernel[0];
    let lead = v.iter().find(|x| !x.is_zero()).expect("kernel vector is nonzero");
    let signs: Vec<i64> = v
        .iter()
        .map(|x| {
            let q = x / lead;
            assert!(
                q.abs() == Rat::one() || q.is_zero(),
                "incidence solve produced non-unit coefficient"
            );
            if q.is_zero() {
                0
            } else if q.is_positive() {
                1
            } else {
                -1
            }
        })
        .collect();
    assert!(
        signs.iter().all(|&s| s != 0),
        "every facet must appear in the boundary cycle"
    );
    signs
}

impl TwistedComplexPresentation {
    /// Check del(del(x)) = 0 identically in the character variables.
    pub fn verify_dd_zero(&self) -> bool {
        for d in 1..self.boundary.len() {
            let upper = &self.boundary[d];
            let lower = &self.boundary[d - 1];
            for terms in upper {
                let mut acc: BTreeMap<(usize, ExpVec), i64> = BTreeMap::new();
                for t in terms {
                    for u in &lower[t.target] {
                        let exps: ExpVec = t
                            .exponents
                            .iter()
                            .zip(&u.exponents)
                            .map(|(a, b)| a + b)
                            .collect();
                        *acc.entry((u.target, exps)).or_insert(0) += t.coeff * u.coeff;
                    }
                }
                if acc.values().any(|&c| c != 0) {
                    return false;
                }
            }
        }
        true
    }

    /// Boundary matrix in degree d (maps degree-d cells to degree-(d-1)
    /// cells), specialized to concrete field elements via `mono`.
    fn specialized_matrix<F: linalg::Field>(
        &self,
        d: usize,
        zero: &F,
        mono: &impl Fn(&ExpVec) -> F,
        scalar: &impl Fn(i64) -> F,
    ) -> Vec<Vec<F>> {
        let rows = self.cells[d - 1];
        let cols = if d <= self.boundary.len() {
            self.boundary[d - 1].len()
        } else {
            0
        };
        let mut m = vec![vec![zero.clone(); cols]; rows];
        for (c, terms) in self.boundary[d - 1].iter().enumerate() {
            for t in terms {
                let val = scalar(t.coeff).f_mul(&mono(&t.exponents));
                m[t.target][c] = m[t.target][c].f_add(&val);
            }
        }
        m
    }

    /// Betti numbers at the trivial character (all variables 1), which must
    /// reproduce the Whitney numbers of the complement.
    pub fn trivial_character_betti(&self) -> BettiVector {
        let one = Rat::one();
        
        self.betti_from_ranks(|d| {
            let m = self.specialized_matrix(
                d,
                &Rat::zero(),
                &|_| one.clone(),
                &|c| Rat::from_integer(c.into()),
            );
            linalg::rank(m)
        })
    }

    /// Exact twisted Betti numbers at the character sending the meridian of
    /// hyperplane i to the root of unity zeta_N^{m_i}.
    pub fn exact_betti(&self, conductor: usize, exponents: &[i64]) -> BettiVector {
        let field = CyclotomicField::new(conductor);
        self.betti_from_ranks(|d| {
            let m = self.specialized_matrix(
                d,
                &field.zero(),
                &|e: &ExpVec| {
                    let total: i64 = e
                        .iter()
                        .zip(exponents)
                        .map(|(&p, &m)| i64::from(p) * m)
                        .sum();
                    field.root_power(total)
                },
                &|c| {
                    let mut acc = field.zero();
                    let one = field.one();
                    let steps = c.unsigned_abs();
                    for _ in 0..steps {
                        acc = if c > 0 {
                            acc.f_add(&one)
                        } else {
                            acc.f_sub(&one)
                        };
                    }
                    acc
                },
            );
            linalg::rank(m)
        })
    }

    /// Float backend: complex matrices and singular value ranks, with
    /// singular values below 1e-8 of the largest counted as zero.
    pub fn float_betti(&self, angles: &[f64]) -> BettiVector {
        self.betti_from_ranks(|d| {
            let rows = self.cells[d - 1];
            let cols = self.boundary[d - 1].len();
            if rows == 0 || cols == 0 {
                return 0;
            }
            let mut m = DMatrix::<Complex<f64>>::zeros(rows, cols);
            for (c, terms) in self.boundary[d - 1].iter().enumerate() {
                for t in terms {
                    let theta: f64 = t
                        .exponents
                        .iter()
                        .zip(angles)
                        .map(|(&p, &a)| f64::from(p) * a)
                        .sum();
                    let val = Complex::new(theta.cos(), theta.sin()) * (t.coeff as f64);
                    m[(t.target, c)] += val;
                }
            }
            let svd = m.svd(false, false);
            let max = svd
                .singular_values
                .iter()
                .cloned()
                .fold(0.0f64, f64::max);
            if max == 0.0 {
                return 0;
            }
            svd.singular_values
                .iter()
                .filter(|&&s| s > 1e-8 * max)
                .count()
        })
    }

    fn betti_from_ranks(&self, rank_of: impl Fn(usize) -> usize) -> BettiVector {
        let top = self.boundary.len();
        let ranks: Vec<usize> = (1..=top).map(rank_of).collect();
        let mut dims = Vec::with_capacity(self.dim + 1);
        for d in 0..=self.dim {
            let cells = self.cells[d];
            let below = if d >= 1 && d <= top { ranks[d - 1] } else { 0 };
            let above = if d < top { ranks[d] } else { 0 };
            dims.push(cells - below - above);
        }
        BettiVector(dims)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("presentation serializes")
    }
}

/// Character data of a rational-weight system: conductor N and the exponent
/// of zeta_N attached to each hyperplane.
fn character_exponents(a: &WeightedArrangement, side: Side) -> (usize, Vec<i64>) {
    let mut conductor: i64 = 1;
    for h in &a.hyperplanes {
        let q = h.weight.denom().to_i64().expect("weight denominator fits i64");
        conductor = num::integer::lcm(conductor, q);
    }
    let n = conductor as usize;
    let exps = a
        .hyperplanes
        .iter()
        .map(|h| {
            let scaled = h.weight.clone() * Rat::from_integer(conductor.into());
            let m = scaled.to_integer().to_i64().expect("scaled weight fits i64");
            // Homology of the complex with monodromy t computes cohomology
            // of the local system with the inverse character.
            match side {
                Side::Primary => -m,
                Side::Dual => m,
            }
        })
        .collect();
    (n, exps)
}

/// Twisted Betti numbers of an affine complement.
pub fn twisted_betti_affine(
    a: &WeightedArrangement,
    side: Side,
    backend: Backend,
) -> Result<BettiVector, ArrError> {
    let pres = twisted_presentation(a)?;
    twisted_betti_from_presentation(a, &pres, side, backend)
}

pub fn twisted_betti_from_presentation(
    a: &WeightedArrangement,
    pres: &TwistedComplexPresentation,
    side: Side,
    backend: Backend,
) -> Result<BettiVector, ArrError> {
    let (conductor, exps) = character_exponents(a, side);
    let exact = || pres.exact_betti(conductor, &exps);
    let float = || {
        let angles: Vec<f64> = exps
            .iter()
            .map(|&m| 2.0 * std::f64::consts::PI * (m as f64) / (conductor as f64))
            .collect();
        pres.float_betti(&angles)
    };
    match backend {
        Backend::Exact => Ok(exact()),
        Backend::Float => Ok(float()),
        Backend::Both => {
            let e = exact();
            let f = float();
            if e != f {
                return Err(ArrError::BackendDisagreement(e.0, f.0));
            }
            Ok(e)
        }
    }
}

/// Split the Betti vector of a central complement through the product with
/// the punctured line: returns p with b^l = p^l + p^(l-1).
pub fn cone_split_projective(
    betti_affine: &BettiVector,
    total_weight: &Rat,
) -> Result<BettiVector, ArrError> {
    if !is_integer(total_weight) {
        return Err(ArrError::NonintegralTotal);
    }
    let b = &betti_affine.0;
    let k = b.len() - 1;
    let mut p = vec![0usize; k.max(1)];
    let mut prev = 0usize;
    for l in 0..k {
        if b[l] < prev {
            return Err(ArrError::InconsistentRecursion(b.clone()));
        }
        p[l] = b[l] - prev;
        prev = p[l];
    }
    if b[k] != prev {
        return Err(ArrError::InconsistentRecursion(b.clone()));
    }
    Ok(BettiVector(p))
}

/// Twisted Betti numbers of a projective-mode arrangement: compute on the
/// central cone and split off the punctured-line factor.
pub fn twisted_betti_projective(
    a: &WeightedArrangement,
    side: Side,
    backend: Backend,
) -> Result<BettiVector, ArrError> {
    debug_assert_eq!(a.space, Space::Projective);
    if a.n() == 0 {
        // Full projective space: only the trivial system, Betti 1,0,1,0,...
        let dims = (0..a.dim).map(|l| usize::from(l % 2 == 0)).collect();
        return Ok(BettiVector(dims));
    }
    let mut cone = a.clone();
    cone.space = Space::Affine;
    let affine = twisted_betti_affine(&cone, side, backend)?;
    cone_split_projective(&affine, &a.total_weight())
}

/// Betti numbers of the complement of any arrangement in its own mode.
pub fn twisted_betti(
    a: &WeightedArrangement,
    side: Side,
    backend: Backend,
) -> Result<BettiVector, ArrError> {
    match a.space {
        Space::Affine => twisted_betti_affine(a, side, backend),
        Space::Projective => twisted_betti_projective(a, side, backend),
    }
}

/// chi of the complement from the Moebius oracle, in the arrangement's mode.
pub fn complement_chi(a: &WeightedArrangement) -> i64 {
    let poset = intersection_poset(a);
    let (w, chi) = euler_characteristic(a, &poset);
    match a.space {
        Space::Affine => chi,
        Space::Projective => {
            let p = project_whitney(&w).expect("central Whitney numbers split");
            p.iter()
                .enumerate()
                .map(|(i, &x)| if i % 2 == 0 { x } else { -x })
                .sum()
        }
    }
}
