//! The intersection poset of an arrangement: flats (edges), Moebius values,
//! weight sums, irreducible decompositions and dense flats.
//!
//! Flats are the nonempty intersections of subsets of hyperplanes, ordered
//! by reverse inclusion of subspaces (equivalently, inclusion of closures).
//! The ambient space is the bottom element with empty closure.

use crate::arrangement::{ArrError, Space, WeightedArrangement};
use crate::linalg::{self, rank};
use crate::rat::{is_integer, Rat};
use num::{One, Zero};
use std::collections::BTreeMap;

pub type FlatId = usize;

#[derive(Clone, Debug)]
pub struct Flat {
    /// Indices of all hyperplanes containing the subspace, sorted.
    pub closure: Vec<usize>,
    /// One rational point of the subspace.
    pub point: Vec<Rat>,
    /// Rational basis of the direction space.
    pub basis: Vec<Vec<Rat>>,
    pub codim: usize,
    /// Set by `dense_flats`; `None` until then.
    pub dense: Option<bool>,
    /// a(F): sum of weights over the closure.
    pub weight_sum: Rat,
    /// a(F) integral, i.e. the pulled-back monodromy around the exceptional
    /// divisor over F is trivial.
    pub exceptional_monodromy_trivial: bool,
    pub moebius: i64,
}

impl Flat {
    pub fn label(&self, a: &WeightedArrangement) -> String {
        if self.closure.is_empty() {
            return "ambient".into();
        }
        let names: Vec<&str> = self
            .closure
            .iter()
            .map(|&i| a.hyperplanes[i].label.as_str())
            .collect();
        format!("{{{}}}", names.join(","))
    }
}

#[derive(Clone, Debug)]
pub struct IntersectionPoset {
    pub flats: Vec<Flat>,
}

impl IntersectionPoset {
    pub fn ambient(&self) -> FlatId {
        0
    }

    /// Subspace containment: does flat `a` contain flat `b`?
    /// Equivalent to closure(a) being a subset of closure(b).
    pub fn contains(&self, a: FlatId, b: FlatId) -> bool {
        let (ca, cb) = (&self.flats[a].closure, &self.flats[b].closure);
        ca.iter().all(|i| cb.binary_search(i).is_ok())
    }

    pub fn by_closure(&self, closure: &[usize]) -> Option<FlatId> {
        self.flats.iter().position(|f| f.closure == closure)
    }

    /// Flats of a given codimension.
    pub fn of_codim(&self, codim: usize) -> Vec<FlatId> {
        (0..self.flats.len())
            .filter(|&i| self.flats[i].codim == codim)
            .collect()
    }

    /// In projective mode the flat at the cone point is not an edge of the
    /// projective space; everywhere else every flat of codim >= 1 is an edge.
    pub fn is_edge(&self, a: &WeightedArrangement, f: FlatId) -> bool {
        let flat = &self.flats[f];
        if flat.codim == 0 {
            return false;
        }
        !(a.space == Space::Projective && flat.basis.is_empty())
    }
}

/// Compute every nonempty intersection of subsets of hyperplanes.
pub fn intersection_poset(a: &WeightedArrangement) -> IntersectionPoset {
    let k = a.dim;
    // closure -> (point, basis), discovered level by level.
    let mut seen: BTreeMap<Vec<usize>, (Vec<Rat>, Vec<Vec<Rat>>)> = BTreeMap::new();
    let ambient_basis: Vec<Vec<Rat>> = (0..k)
        .map(|i| {
            let mut e = vec![Rat::zero(); k];
            e[i] = Rat::one();
            e
        })
        .collect();
    seen.insert(vec![], (vec![Rat::zero(); k], ambient_basis));
    let mut frontier: Vec<Vec<usize>> = vec![vec![]];
    while let Some(closure) = frontier.pop() {
        let dim_here = seen[&closure].1.len();
        if dim_here == 0 {
            continue;
        }
        for h in 0..a.n() {
            if closure.binary_search(&h).is_ok() {
                continue;
            }
            let mut sys: Vec<usize> = closure.clone();
            sys.push(h);
            let rows: Vec<Vec<Rat>> = sys.iter().map(|&i| a.hyperplanes[i].coeffs.clone()).collect();
            let rhs: Vec<Rat> = sys
                .iter()
                .map(|&i| -a.hyperplanes[i].offset.clone())
                .collect();
            let Some(point) = linalg::solve(&rows, &rhs) else {
                continue; // empty intersection
            };
            let basis = linalg::nullspace(&rows);
            // Closure: every hyperplane vanishing identically on the subspace.
            let full: Vec<usize> = (0..a.n())
                .filter(|&j| {
                    let hj = &a.hyperplanes[j];
                    hj.eval(&point).is_zero()
                        && basis.iter().all(|v| linalg::dot(&hj.coeffs, v).is_zero())
                })
                .collect();
            if seen.contains_key(&full) {
                continue;
            }
            seen.insert(full.clone(), (point, basis));
            frontier.push(full);
        }
    }
    let mut flats: Vec<Flat> = seen
        .into_iter()
        .map(|(closure, (point, basis))| {
            let codim = k - basis.len();
            let weight_sum: Rat = closure
                .iter()
                .map(|&i| a.hyperplanes[i].weight.clone())
                .sum();
            let trivial = is_integer(&weight_sum);
            Flat {
                closure,
                point,
                basis,
                codim,
                dense: None,
                weight_sum: weight_sum.clone(),
                exceptional_monodromy_trivial: trivial,
                moebius: 0,
            }
        })
        .collect();
    flats.sort_by(|x, y| x.codim.cmp(&y.codim).then(x.closure.cmp(&y.closure)));
    let mut poset = IntersectionPoset { flats };
    // Moebius recursion from the ambient flat down.
    for i in 0..poset.flats.len() {
        if poset.flats[i].codim == 0 {
            poset.flats[i].moebius = 1;
            continue;
        }
        let mut m = 0i64;
        for j in 0..poset.flats.len() {
            if j != i && poset.contains(j, i) {
                m += poset.flats[j].moebius;
            }
        }
        poset.flats[i].moebius = -m;
    }
    poset
}

/// a(F) for a flat, recomputed from the closure.
pub fn weight_sum(a: &WeightedArrangement, f: &Flat) -> Rat {
    f.closure.iter().map(|&i| a.hyperplanes[i].weight.clone()).sum()
}

/// The central subarrangement A_F, translated so F passes through 0.
pub fn localize(
    a: &WeightedArrangement,
    poset: &IntersectionPoset,
    f: FlatId,
) -> Result<WeightedArrangement, ArrError> {
    let flat = poset.flats.get(f).ok_or(ArrError::FlatNotInArrangement)?;
    Ok(a.localize(&flat.closure, &flat.point))
}

/// Finest partition of a central arrangement's hyperplanes into blocks whose
/// functional spans are independent subspaces in direct sum.
///
/// Computed as the connected components of the matroid of functionals: take
/// a basis, and merge every non-basis element with the members of its
/// fundamental circuit. Blocks are returned sorted by smallest member.
pub fn irreducible_decomposition(a: &WeightedArrangement) -> Result<Vec<Vec<usize>>, ArrError> {
    if !a.is_central() {
        return Err(ArrError::NotCentral);
    }
    let n = a.n();
    let vectors: Vec<Vec<Rat>> = a.hyperplanes.iter().map(|h| h.coeffs.clone()).collect();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let root = find(parent, parent[i]);
            parent[i] = root;
        }
        parent[i]
    }
    // Greedy basis.
    let mut basis: Vec<usize> = Vec::new();
    let mut basis_rows: Vec<Vec<Rat>> = Vec::new();
    for i in 0..n {
        let mut test = basis_rows.clone();
        test.push(vectors[i].clone());
        if rank(test.clone()) > basis_rows.len() {
            basis.push(i);
            basis_rows = test;
        }
    }
    for e in 0..n {
        if basis.contains(&e) {
            continue;
        }
        // Fundamental circuit: expand v_e over the basis; nonzero
        // coefficients are the circuit members.
        let cols = basis.len();
        let k = a.dim;
        let mat: Vec<Vec<Rat>> = (0..k)
            .map(|r| (0..cols).map(|c| vectors[basis[c]][r].clone()).collect())
            .collect();
        let rhs: Vec<Rat> = (0..k).map(|r| vectors[e][r].clone()).collect();
        let coeffs = linalg::solve(&mat, &rhs).expect("basis spans every vector");
        for (c, coeff) in coeffs.iter().enumerate() {
            if !coeff.is_zero() {
                let (x, y) = (find(&mut parent, e), find(&mut parent, basis[c]));
                parent[x] = y;
            }
        }
    }
    let mut blocks: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..n {
        let root = find(&mut parent, i);
        blocks.entry(root).or_default().push(i);
    }
    let mut out: Vec<Vec<usize>> = blocks.into_values().collect();
    out.sort_by_key(|b| b[0]);
    Ok(out)
}

/// Mark and return all dense flats: codim >= 2 and the localized
/// subarrangement is irreducible. Density is purely combinatorial and does
/// not see the weights.
pub fn dense_flats(a: &WeightedArrangement, poset: &mut IntersectionPoset) -> Vec<FlatId> {
    let mut out = Vec::new();
    for f in 0..poset.flats.len() {
        let dense = if poset.flats[f].codim < 2 {
            false
        } else {
            let local = a.localize(&poset.flats[f].closure, &poset.flats[f].point);
            let local = local.essentialize(&poset.flats[f].basis);
            let blocks = irreducible_decomposition(&local).expect("localization is central");
            blocks.len() == 1
        };
        poset.flats[f].dense = Some(dense);
        if dense {
            out.push(f);
        }
    }
    out
}

/// Whitney numbers of the complement and its Euler characteristic.
///
/// b_i = (-1)^i * sum of Moebius values over codim-i flats; the alternating
/// sum collapses to the plain sum of all Moebius values.
pub fn euler_characteristic(a: &WeightedArrangement, poset: &IntersectionPoset) -> (Vec<i64>, i64) {
    let k = a.dim;
    let mut whitney = vec![0i64; k + 1];
    for f in &poset.flats {
        let signed = if f.codim % 2 == 0 { f.moebius } else { -f.moebius };
        whitney[f.codim] += signed;
    }
    debug_assert!(whitney.iter().all(|&w| w >= 0));
    let chi = whitney
        .iter()
        .enumerate()
        .map(|(i, &w)| if i % 2 == 0 { w } else { -w })
        .sum();
    (whitney, chi)
}

/// Split Whitney numbers of a central arrangement through the (1+t) factor,
/// giving the untwisted Betti numbers of the projectivized complement.
pub fn project_whitney(whitney: &[i64]) -> Option<Vec<i64>> {
    let k = whitney.len() - 1;
    let mut p = vec![0i64; k];
    let mut prev = 0i64;
    for i in 0..k {
        p[i] = whitney[i] - prev;
        if p[i] < 0 {
            return None;
        }
        prev = p[i];
    }
    if whitney[k] != prev {
        return None;
    }
    Some(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{boolean_arrangement, concurrent_lines, example2};
    use crate::rat::{rat, rat_int};

    #[test]
    fn boolean2_poset() {
        let a = boolean_arrangement(2);
        let poset = intersection_poset(&a);
        // ambient, two lines, origin
        assert_eq!(poset.flats.len(), 4);
        let origin = poset.by_closure(&[0, 1]).unwrap();
        assert_eq!(poset.flats[origin].codim, 2);
    }

    #[test]
    fn single_hyperplane_in_c3() {
        let a = crate::arrangement::WeightedArrangement::new(
            3,
            Space::Affine,
            vec![crate::arrangement::Hyperplane {
                coeffs: vec![rat_int(1), rat_int(0), rat_int(0)],
                offset: rat_int(0),
                weight: rat(1, 3),
                label: "H".into(),
            }],
        )
        .unwrap();
        let poset = intersection_poset(&a);
        assert_eq!(poset.flats.len(), 2);
    }

    #[test]
    fn example2_poset_shape() {
        let a = example2();
        let poset = intersection_poset(&a);
        let counts: Vec<usize> = (0..=3).map(|c| poset.of_codim(c).len()).collect();
        assert_eq!(counts, vec![1, 6, 7, 1]);
        let triples = poset
            .of_codim(2)
            .into_iter()
            .filter(|&f| poset.flats[f].closure.len() == 3)
            .count();
        assert_eq!(triples, 4);
    }

    #[test]
    fn example2_weight_sums() {
        let a = example2();
        let poset = intersection_poset(&a);
        // Triple line {H1,H3,H5} has a(F) = 0.
        let f = poset.by_closure(&[0, 2, 4]).unwrap();
        assert!(poset.flats[f].weight_sum.is_zero());
        assert!(poset.flats[f].exceptional_monodromy_trivial);
        // The origin sums to 0 as well.
        let origin = poset.by_closure(&[0, 1, 2, 3, 4, 5]).unwrap();
        assert!(poset.flats[origin].weight_sum.is_zero());
        // A single hyperplane keeps its own (non-integral) weight.
        let h1 = poset.by_closure(&[0]).unwrap();
        assert_eq!(poset.flats[h1].weight_sum, rat(1, 3));
        assert!(!poset.flats[h1].exceptional_monodromy_trivial);
    }

    #[test]
    fn localize_example2_triple_line() {
        let a = example2();
        let poset = intersection_poset(&a);
        let f = poset.by_closure(&[0, 2, 4]).unwrap();
        let local = localize(&a, &poset, f).unwrap();
        assert_eq!(local.n(), 3);
        assert!(local.is_central());
        let weights: Vec<Rat> = local.hyperplanes.iter().map(|h| h.weight.clone()).collect();
        assert_eq!(weights, vec![rat(1, 3), rat(1, 3), rat(-2, 3)]);
    }

    #[test]
    fn localize_at_ambient_is_empty() {
        let a = example2();
        let poset = intersection_poset(&a);
        let local = localize(&a, &poset, poset.ambient()).unwrap();
        assert_eq!(local.n(), 0);
    }

    #[test]
    fn decomposition_boolean_splits() {
        let a = boolean_arrangement(2);
        let blocks = irreducible_decomposition(&a).unwrap();
        assert_eq!(blocks, vec![vec![0], vec![1]]);
    }

    #[test]
    fn decomposition_concurrent_lines_is_irreducible() {
        let a = concurrent_lines(3, &[rat(1, 5), rat(1, 5), rat(1, 5)]).unwrap();
        let blocks = irreducible_decomposition(&a).unwrap();
        assert_eq!(blocks.len(), 1);
    }

    #[test]
    fn decomposition_example2_origin_is_irreducible() {
        let a = example2();
        let blocks = irreducible_decomposition(&a).unwrap();
        assert_eq!(blocks.len(), 1);
    }

    #[test]
    fn decomposition_requires_central() {
        let a = crate::arrangement::WeightedArrangement::new(
            1,
            Space::Affine,
            vec![crate::arrangement::Hyperplane {
                coeffs: vec![rat_int(1)],
                offset: rat_int(-1),
                weight: rat(1, 2),
                label: "H".into(),
            }],
        )
        .unwrap();
        assert_eq!(
            irreducible_decomposition(&a).unwrap_err().code(),
            "NOT_CENTRAL"
        );
    }

    /// Brute-force oracle: search all ways to split the index set into two
    /// rank-additive parts, recursively.
    fn finest_partition_oracle(vectors: &[Vec<Rat>], indices: &[usize]) -> Vec<Vec<usize>> {
        let rk = |set: &[usize]| -> usize {
            rank(set.iter().map(|&i| vectors[i].clone()).collect::<Vec<_>>())
        };
        let n = indices.len();
        if n <= 1 {
            return vec![indices.to_vec()];
        }
        for mask in 1..(1u32 << (n - 1)) {
            let mut left = Vec::new();
            let mut right = Vec::new();
            for (pos, &i) in indices.iter().enumerate() {
                if mask & (1 << pos) != 0 {
                    left.push(i);
                } else {
                    right.push(i);
                }
            }
            if left.is_empty() || right.is_empty() {
                continue;
            }
            if rk(&left) + rk(&right) == rk(indices) {
                let mut out = finest_partition_oracle(vectors, &left);
                out.extend(finest_partition_oracle(vectors, &right));
                out.sort_by_key(|b| b[0]);
                return out;
            }
        }
        vec![indices.to_vec()]
    }

    #[test]
    fn decomposition_matches_bruteforce_oracle() {
        let cases: Vec<WeightedArrangement> = vec![
            boolean_arrangement(3),
            concurrent_lines(4, &vec![rat(1, 5); 4]).unwrap(),
            example2(),
        ];
        for a in cases {
            let vectors: Vec<Vec<Rat>> = a.hyperplanes.iter().map(|h| h.coeffs.clone()).collect();
            let indices: Vec<usize> = (0..a.n()).collect();
            let expected = finest_partition_oracle(&vectors, &indices);
            let got = irreducible_decomposition(&a).unwrap();
            assert_eq!(got, expected, "arrangement with {} hyperplanes", a.n());
        }
    }

    #[test]
    fn dense_flats_example2() {
        let a = example2();
        let mut poset = intersection_poset(&a);
        let dense = dense_flats(&a, &mut poset);
        assert_eq!(dense.len(), 5);
        // Four triple lines (codim 2) and the origin (codim 3).
        let codims: Vec<usize> = dense.iter().map(|&f| poset.flats[f].codim).collect();
        assert_eq!(codims.iter().filter(|&&c| c == 2).count(), 4);
        assert_eq!(codims.iter().filter(|&&c| c == 3).count(), 1);
        // Double lines are not dense.
        let double = poset.by_closure(&[0, 1]).unwrap();
        assert_eq!(poset.flats[double].dense, Some(false));
    }

    #[test]
    fn dense_flats_generic_three_planes_empty() {
        // Normal crossing: x, y, z in C^3.
        let a = boolean_arrangement(3);
        let mut poset = intersection_poset(&a);
        assert!(dense_flats(&a, &mut poset).is_empty());
    }

    #[test]
    fn dense_flats_concurrent_lines_origin_only() {
        let a = concurrent_lines(3, &[rat(1, 5), rat(1, 5), rat(1, 5)]).unwrap();
        let mut poset = intersection_poset(&a);
        let dense = dense_flats(&a, &mut poset);
        assert_eq!(dense.len(), 1);
        assert_eq!(poset.flats[dense[0]].codim, 2);
    }

    #[test]
    fn whitney_example2() {
        let a = example2();
        let poset = intersection_poset(&a);
        let (w, chi) = euler_characteristic(&a, &poset);
        assert_eq!(w, vec![1, 6, 11, 6]);
        assert_eq!(chi, 0);
    }

    #[test]
    fn whitney_boolean2() {
        let a = boolean_arrangement(2);
        let poset = intersection_poset(&a);
        let (w, chi) = euler_characteristic(&a, &poset);
        assert_eq!(w, vec![1, 2, 1]);
        assert_eq!(chi, 0);
    }

    #[test]
    fn whitney_generic_three_lines() {
        let a = crate::examples::generic_triangle();
        let poset = intersection_poset(&a);
        let (w, chi) = euler_characteristic(&a, &poset);
        assert_eq!(w, vec![1, 3, 3]);
        assert_eq!(chi, 1);
    }

    #[test]
    fn moebius_sums_to_zero_for_central() {
        for a in [boolean_arrangement(2), boolean_arrangement(3), example2()] {
            let poset = intersection_poset(&a);
            let total: i64 = poset.flats.iter().map(|f| f.moebius).sum();
            assert_eq!(total, 0);
        }
    }

    #[test]
    fn dual_weight_sums_negate() {
        let a = example2();
        let d = a.dual();
        let poset = intersection_poset(&a);
        let dual_poset = intersection_poset(&d);
        assert_eq!(poset.flats.len(), dual_poset.flats.len());
        for (f, g) in poset.flats.iter().zip(&dual_poset.flats) {
            assert_eq!(f.closure, g.closure);
            assert_eq!(f.weight_sum, -g.weight_sum.clone());
        }
    }

    #[test]
    fn project_whitney_example2() {
        assert_eq!(project_whitney(&[1, 6, 11, 6]), Some(vec![1, 5, 6]));
        assert_eq!(project_whitney(&[1, 0, 0]), None);
    }
}
