//! Certified Betti intervals for stratified models.
//!
//! A model is an open dense base stratum together with finitely many
//! locally closed strata of smaller dimension. Attaching strata one at a
//! time in decreasing dimension keeps each newly added piece closed in the
//! current union, so the long exact sequence of the pair (with the Thom
//! isomorphism shifting by twice the complex codimension) bounds every
//! Betti number from both sides. Connecting maps are never computed: where
//! the neighboring terms vanish the bounds collapse and the value is
//! exact, elsewhere an interval remains, which the Euler characteristic
//! constraint can tighten further.

use crate::arrangement::ArrError;
use crate::salvetti::BettiVector;
use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct DegreeInterval {
    pub degree: usize,
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
    pub provenance: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BettiIntervalVector {
    pub degrees: Vec<DegreeInterval>,
    /// False when the model was truncated; bounds are then not certified.
    pub determinate: bool,
}

impl BettiIntervalVector {
    pub fn fully_exact(&self) -> bool {
        self.determinate && self.degrees.iter().all(|d| d.exact)
    }

    pub fn exact_vector(&self) -> Option<BettiVector> {
        if !self.fully_exact() {
            return None;
        }
        Some(BettiVector(self.degrees.iter().map(|d| d.lower).collect()))
    }

    pub fn all_zero(&self) -> bool {
        self.degrees.iter().all(|d| d.lower == 0 && d.upper == 0)
    }
}

/// A stratum reduced to what the assembly needs: complex dimension and an
/// exact Betti vector.
#[derive(Clone, Debug)]
pub struct EvaluatedStratum {
    pub dim: usize,
    pub betti: BettiVector,
    pub label: String,
}

fn betti_at(b: &BettiVector, l: isize) -> usize {
    if l < 0 {
        return 0;
    }
    b.0.get(l as usize).copied().unwrap_or(0)
}

/// Assemble per-degree intervals for a model of complex dimension
/// `model_dim` with the given open dense base and lower strata.
pub fn assemble_intervals(
    model_dim: usize,
    base: &BettiVector,
    base_label: &str,
    strata: &[EvaluatedStratum],
    complete: bool,
) -> Result<BettiIntervalVector, ArrError> {
    let len = 2 * model_dim + 1;
    let mut lower: Vec<usize> = (0..len).map(|l| betti_at(base, l as isize)).collect();
    let mut upper = lower.clone();
    let mut provenance: Vec<String> = (0..len).map(|_| format!("base {base_label}")).collect();

    let mut order: Vec<&EvaluatedStratum> = strata.iter().collect();
    order.sort_by(|a, b| b.dim.cmp(&a.dim).then(a.label.cmp(&b.label)));
    let mut chi: i64 = base.alternating_sum();
    for s in &order {
        if s.betti.is_zero() {
            continue; // empty cohomology never perturbs the sequence
        }
        assert!(s.dim < model_dim, "stratum must have positive codimension");
        let c = (model_dim - s.dim) as isize;
        chi += s.betti.alternating_sum();
        let mut new_lower = vec![0usize; len];
        let mut new_upper = vec![0usize; len];
        for l in 0..len {
            let li = l as isize;
            let z_here = betti_at(&s.betti, li - 2 * c);
            let z_next = betti_at(&s.betti, li - 2 * c + 1);
            new_upper[l] = upper[l] + z_here;
            let from_w = lower[l].saturating_sub(z_next);
            let from_z = if l == 0 {
                z_here
            } else {
                z_here.saturating_sub(upper[l - 1])
            };
            new_lower[l] = from_w + from_z;
            if z_here != 0 || z_next != 0 {
                provenance[l] = format!("{}; gysin {}", provenance[l], s.label);
            }
        }
        lower = new_lower;
        upper = new_upper;
    }

    if complete {
        refine_by_chi(&mut lower, &mut upper, chi, &mut provenance)?;
    }

    let degrees = (0..len)
        .map(|l| DegreeInterval {
            degree: l,
            lower: lower[l],
            upper: upper[l],
            exact: complete && lower[l] == upper[l],
            provenance: if complete {
                provenance[l].clone()
            } else {
                format!("{}; model truncated", provenance[l])
            },
        })
        .collect();
    Ok(BettiIntervalVector {
        degrees,
        determinate: complete,
    })
}

/// Intersect the intervals with the Euler characteristic identity
/// sum (-1)^l b_l = chi, iterating to a fixed point.
fn refine_by_chi(
    lower: &mut [usize],
    upper: &mut [usize],
    chi: i64,
    provenance: &mut [String],
) -> Result<(), ArrError> {
    let len = lower.len();
    loop {
        let mut changed = false;
        for m in 0..len {
            // b_m = (-1)^m chi - sum_{same parity} b_l + sum_{other parity} b_l
            let signed_chi = if m % 2 == 0 { chi } else { -chi };
            let mut hi: i64 = signed_chi;
            let mut lo: i64 = signed_chi;
            for l in 0..len {
                if l == m {
                    continue;
                }
                let (a, b) = (lower[l] as i64, upper[l] as i64);
                if (l % 2 == 0) == (m % 2 == 0) {
                    hi -= a;
                    lo -= b;
                } else {
                    hi += b;
                    lo += a;
                }
            }
            let hi = hi.max(0) as usize;
            let lo = lo.max(0) as usize;
            if hi < upper[m] {
                upper[m] = hi;
                provenance[m] = format!("{}; chi", provenance[m]);
                changed = true;
            }
            if lo > lower[m] {
                lower[m] = lo;
                provenance[m] = format!("{}; chi", provenance[m]);
                changed = true;
            }
            if lower[m] > upper[m] {
                return Err(ArrError::InconsistentBounds(m));
            }
        }
        if !changed {
            return Ok(());
        }
    }
}
