//! Orlik-Solomon algebra oracle: cohomology of (A^*, omega wedge).
//!
//! Built on the coned arrangement so a single linear matroid drives
//! everything. The cone hyperplane gets index 0, the smallest label, and
//! deconing is the quotient by the ideal it generates: in the no-broken-
//! circuit basis that simply drops every monomial containing 0. The
//! differential multiplies by omega = sum of weight * generator and is
//! straightened back into the basis through the circuit relations.
//!
//! The resulting Betti numbers agree with the twisted engine exactly in
//! the nonresonant regime, which is how the oracle is used in tests.

use crate::arrangement::{ArrError, Space, WeightedArrangement};
use crate::linalg;
use crate::rat::Rat;
use crate::salvetti::{BettiVector, Side};
use num::{One, Zero};
use std::collections::BTreeMap;

type Monomial = Vec<usize>;
type Element = BTreeMap<Monomial, Rat>;

struct OsAlgebra {
    /// Homogenized functionals; index 0 is the cone hyperplane.
    vectors: Vec<Vec<Rat>>,
    straighten_cache: BTreeMap<Monomial, Element>,
}

impl OsAlgebra {
    fn new(a: &WeightedArrangement) -> Self {
        let k = a.dim;
        let mut vectors: Vec<Vec<Rat>> = Vec::with_capacity(a.n() + 1);
        let mut cone = vec![Rat::zero(); k + 1];
        cone[k] = Rat::one();
        vectors.push(cone);
        for h in &a.hyperplanes {
            let mut v = h.coeffs.clone();
            v.push(h.offset.clone());
            vectors.push(v);
        }
        OsAlgebra {
            vectors,
            straighten_cache: BTreeMap::new(),
        }
    }

    fn rank_of(&self, set: &[usize]) -> usize {
        linalg::rank(set.iter().map(|&i| self.vectors[i].clone()).collect::<Vec<_>>())
    }

    fn independent(&self, set: &[usize]) -> bool {
        self.rank_of(set) == set.len()
    }

    /// Smallest j outside `set` whose vector lies in the span of the larger
    /// members; `set` holds a broken circuit exactly when one exists.
    fn broken_circuit_witness(&self, set: &[usize]) -> Option<usize> {
        let max = *set.last()?;
        for j in 0..max {
            if set.binary_search(&j).is_ok() {
                continue;
            }
            let tail: Vec<usize> = set.iter().copied().filter(|&s| s > j).collect();
            if tail.is_empty() {
                continue;
            }
            let mut with = tail.clone();
            with.push(j);
            if self.rank_of(&with) == self.rank_of(&tail) {
                return Some(j);
            }
        }
        None
    }

    fn is_nbc(&self, set: &[usize]) -> bool {
        self.independent(set) && self.broken_circuit_witness(set).is_none()
    }

    /// Express e_set in the no-broken-circuit basis.
    fn straighten(&mut self, set: &Monomial) -> Element {
        if let Some(hit) = self.straighten_cache.get(set) {
            return hit.clone();
        }
        let result = self.straighten_uncached(set);
        self.straighten_cache.insert(set.clone(), result.clone());
        result
    }

    fn straighten_uncached(&mut self, set: &Monomial) -> Element {
        if !self.independent(set) {
            return Element::new();
        }
        let Some(j) = self.broken_circuit_witness(set) else {
            return Element::from([(set.clone(), Rat::one())]);
        };
        // Fundamental circuit of j over the independent tail: expand v_j in
        // the tail's coordinates and keep the support.
        let tail: Vec<usize> = set.iter().copied().filter(|&s| s > j).collect();
        let dim = self.vectors[0].len();
        let mat: Vec<Vec<Rat>> = (0..dim)
            .map(|r| tail.iter().map(|&c| self.vectors[c][r].clone()).collect())
            .collect();
        let rhs: Vec<Rat> = (0..dim).map(|r| self.vectors[j][r].clone()).collect();
        let coeffs = linalg::solve(&mat, &rhs).expect("witness lies in the span");
        let support: Vec<usize> = tail
            .iter()
            .zip(&coeffs)
            .filter(|(_, c)| !c.is_zero())
            .map(|(&t, _)| t)
            .collect();
        // Circuit C = {j} + support, j minimal. From the relation
        // sum_i (-1)^i e_{C - c_i} = 0 solve for e_{C - j} = e_support.
        let mut circuit = vec![j];
        circuit.extend(&support);
        let rest: Vec<usize> = set
            .iter()
            .copied()
            .filter(|s| !support.contains(s))
            .collect();
        let base_sign = merge_sign(&support, &rest);
        let mut out = Element::new();
        for (i, &drop) in circuit.iter().enumerate().skip(1) {
            // e_support = sum_{i>=1} (-1)^(i+1) e_{C - c_i}
            let coeff_sign = if i % 2 == 1 { 1i64 } else { -1i64 };
            let part: Vec<usize> = circuit.iter().copied().filter(|&c| c != drop).collect();
            if part.iter().any(|p| rest.contains(p)) {
                continue; // repeated generator wedges to zero
            }
            let sign2 = merge_sign(&part, &rest);
            let mut merged: Vec<usize> = part.iter().chain(&rest).copied().collect();
            merged.sort_unstable();
            let inner = self.straighten(&merged);
            let total = Rat::from_integer((base_sign * coeff_sign * sign2).into());
            for (mono, c) in inner {
                let acc = out.entry(mono).or_insert_with(Rat::zero);
                *acc += c * &total;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
}

/// Sign of the permutation sorting the concatenation of two disjoint sorted
/// sequences.
fn merge_sign(a: &[usize], b: &[usize]) -> i64 {
    let mut inversions = 0usize;
    for &x in a {
        inversions += b.iter().filter(|&&y| y < x).count();
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Cohomology of the Orlik-Solomon complex with differential omega wedge,
/// omega built from the weights of `a` (negated on the dual side).
pub fn aomoto_betti(a: &WeightedArrangement, side: Side) -> Result<BettiVector, ArrError> {
    if a.space != Space::Affine {
        return Err(ArrError::NotAffine);
    }
    let mut algebra = OsAlgebra::new(a);
    let n = a.n();
    let k = a.dim;
    let sign = match side {
        Side::Primary => Rat::one(),
        Side::Dual => -Rat::one(),
    };
    let weights: Vec<Rat> = a.hyperplanes.iter().map(|h| &sign * &h.weight).collect();

    // Basis per degree: nbc sets avoiding the cone generator 0.
    let mut basis: Vec<Vec<Monomial>> = vec![vec![vec![]]];
    for p in 1..=k {
        let mut level = Vec::new();
        for low in &basis[p - 1] {
            let start = low.last().map_or(1, |&l| l + 1);
            for next in start..=n {
                let mut cand = low.clone();
                cand.push(next);
                if algebra.is_nbc(&cand) {
                    level.push(cand);
                }
            }
        }
        basis.push(level);
    }
    let dims: Vec<usize> = basis.iter().map(|b| b.len()).collect();

    // Differential matrices in the deconed basis: multiply by omega, then
    // drop monomials containing the cone generator.
    let mut ranks = Vec::new();
    for p in 0..k {
        let index: BTreeMap<&Monomial, usize> =
            basis[p + 1].iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut mat = vec![vec![Rat::zero(); dims[p]]; dims[p + 1]];
        for (col, mono) in basis[p].iter().enumerate() {
            for (i, w) in weights.iter().enumerate() {
                let gen = i + 1; // generator labels are 1..=n
                if w.is_zero() || mono.contains(&gen) {
                    continue;
                }
                let pos = mono.iter().filter(|&&m| m < gen).count();
                let wedge_sign = if pos % 2 == 0 { 1i64 } else { -1 };
                let mut merged = mono.clone();
                merged.insert(pos, gen);
                let reduced = algebra.straighten(&merged);
                for (m, c) in reduced {
                    if m.contains(&0) {
                        continue;
                    }
                    let row = index[&m];
                    mat[row][col] += w * &c * Rat::from_integer(wedge_sign.into());
                }
            }
        }
        ranks.push(linalg::rank(mat));
    }

    let mut betti = Vec::with_capacity(k + 1);
    for p in 0..=k {
        let below = if p > 0 { ranks[p - 1] } else { 0 };
        let above = if p < k { ranks[p] } else { 0 };
        betti.push(dims[p] - below - above);
    }
    Ok(BettiVector(betti))
}

/// Dimensions of the deconed Orlik-Solomon algebra per degree; equals the
/// Whitney numbers of the complement.
pub fn os_dimensions(a: &WeightedArrangement) -> Vec<usize> {
    let algebra = OsAlgebra::new(a);
    let n = a.n();
    let k = a.dim;
    let mut dims = vec![1usize];
    let mut prev: Vec<Monomial> = vec![vec![]];
    for _p in 1..=k {
        let mut level = Vec::new();
        for low in &prev {
            let start = low.last().map_or(1, |&l| l + 1);
            for next in start..=n {
                let mut cand = low.clone();
                cand.push(next);
                if algebra.is_nbc(&cand) {
                    level.push(cand);
                }
            }
        }
        dims.push(level.len());
        prev = level;
    }
    dims
}
