//! Per-edge vanishing verdicts and the applicability report.
//!
//! An edge passes when the open fiber over its generic point has no
//! cohomology above codim - 1. The verdict is four-valued: VACUOUS when
//! the fiber is empty, HOLDS when the certified upper bounds vanish in the
//! critical range, FAILS when a certified lower bound is positive there,
//! and UNDETERMINED otherwise. Verdicts for the dual system are computed
//! independently even though rational weights force them to agree; a
//! disagreement is a hard error, not a warning.

use crate::arrangement::{ArrError, WeightedArrangement};
use crate::assembly::BettiIntervalVector;
use crate::poset::{FlatId, IntersectionPoset};
use crate::rat::format_rat;
use crate::resolution::{
    assemble_fiber, assemble_global, fiber_model, global_open_model, BuildingSet,
    BuildingSetPreset, StratumCache,
};
use crate::salvetti::{Backend, Side};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum VerdictKind {
    Holds,
    Fails,
    Vacuous,
    Undetermined,
}

impl VerdictKind {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictKind::Holds => "HOLDS",
            VerdictKind::Fails => "FAILS",
            VerdictKind::Vacuous => "VACUOUS",
            VerdictKind::Undetermined => "UNDETERMINED",
        }
    }

    pub fn passes(self) -> bool {
        matches!(self, VerdictKind::Holds | VerdictKind::Vacuous)
    }
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub kind: VerdictKind,
    /// Per-degree interval evidence for the fiber.
    pub certificate: BettiIntervalVector,
}

#[derive(Clone, Debug)]
pub struct EdgeReport {
    pub flat: FlatId,
    pub label: String,
    pub codim: usize,
    pub weight_sum: String,
    pub primary: Verdict,
    pub dual: Verdict,
}

#[derive(Clone, Debug)]
pub struct ApplicabilityReport {
    pub building_set: BuildingSetPreset,
    pub edges: Vec<EdgeReport>,
    pub applicable: bool,
    /// Assembled intervals for the global open set, present when the
    /// verdicts allow the identification with intersection cohomology.
    pub ic_betti: Option<BettiIntervalVector>,
    pub notes: Vec<String>,
}

/// Decide the verdict at one dense edge.
pub fn check_edge(
    a: &WeightedArrangement,
    poset: &IntersectionPoset,
    b: &BuildingSet,
    f: FlatId,
    side: Side,
    backend: Backend,
    cache: &StratumCache,
) -> Result<Verdict, ArrError> {
    let model = fiber_model(a, poset, b, f)?;
    let intervals = assemble_fiber(&model, side, backend, cache)?;
    if model.empty {
        return Ok(Verdict {
            kind: VerdictKind::Vacuous,
            certificate: intervals,
        });
    }
    let cutoff = model.codim - 1; // vanishing required strictly above this
    let kind = if !intervals.determinate {
        VerdictKind::Undetermined
    } else if intervals.degrees.iter().any(|d| d.degree > cutoff && d.lower >= 1) {
        VerdictKind::Fails
    } else if intervals.degrees.iter().all(|d| d.degree <= cutoff || d.upper == 0) {
        VerdictKind::Holds
    } else {
        VerdictKind::Undetermined
    };
    Ok(Verdict {
        kind,
        certificate: intervals,
    })
}

/// Run both sides over every dense edge and aggregate applicability.
pub fn check_arrangement(
    a: &WeightedArrangement,
    poset: &mut IntersectionPoset,
    preset: BuildingSetPreset,
    backend: Backend,
) -> Result<ApplicabilityReport, ArrError> {
    let b = crate::resolution::building_set(a, poset, preset);
    let dual = a.dual();
    let dense: Vec<FlatId> = (0..poset.flats.len())
        .filter(|&f| poset.flats[f].dense == Some(true) && poset.is_edge(a, f))
        .collect();
    let cache = StratumCache::new();
    let dual_poset_check = {
        // The dual arrangement has the same poset; weight sums negate, so
        // integrality and hence the strata agree. Recompute independently.
        crate::poset::intersection_poset(&dual)
    };
    let edges: Vec<EdgeReport> = dense
        .par_iter()
        .map(|&f| -> Result<EdgeReport, ArrError> {
            let primary = check_edge(a, poset, &b, f, Side::Primary, backend, &cache)?;
            let dual_v = check_edge(&dual, &dual_poset_check, &b, f, Side::Primary, backend, &cache)?;
            if primary.kind != dual_v.kind {
                return Err(ArrError::DualMismatch(poset.flats[f].label(a)));
            }
            // Unitary shortcut, kept as an assertion: the two verdicts and
            // their certified intervals coincide degree by degree.
            for (p, d) in primary
                .certificate
                .degrees
                .iter()
                .zip(&dual_v.certificate.degrees)
            {
                if (p.lower, p.upper) != (d.lower, d.upper) {
                    return Err(ArrError::DualMismatch(poset.flats[f].label(a)));
                }
            }
            Ok(EdgeReport {
                flat: f,
                label: poset.flats[f].label(a),
                codim: poset.flats[f].codim,
                weight_sum: format_rat(&poset.flats[f].weight_sum),
                primary,
                dual: dual_v,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let applicable = edges
        .iter()
        .all(|e| e.primary.kind.passes() && e.dual.kind.passes());
    Ok(ApplicabilityReport {
        building_set: preset,
        edges,
        applicable,
        ic_betti: None,
        notes: Vec::new(),
    })
}

/// Full pipeline: verdicts, then (when applicable) the assembled Betti
/// intervals of the global open set, which the resolution identifies
/// with the intersection cohomology of the ambient space.
pub fn ic_betti(
    a: &WeightedArrangement,
    poset: &mut IntersectionPoset,
    preset: BuildingSetPreset,
    backend: Backend,
) -> Result<ApplicabilityReport, ArrError> {
    let mut report = check_arrangement(a, poset, preset, backend)?;
    if !report.applicable {
        let failing: Vec<&EdgeReport> = report
            .edges
            .iter()
            .filter(|e| !e.primary.kind.passes())
            .collect();
        if failing.iter().any(|e| e.primary.kind == VerdictKind::Fails) {
            let at = failing
                .iter()
                .find(|e| e.primary.kind == VerdictKind::Fails)
                .unwrap();
            return Err(ArrError::ConditionAFailed(at.label.clone()));
        }
        let at = failing.first().expect("inapplicable report has a failing edge");
        return Err(ArrError::ConditionAUndetermined(at.label.clone()));
    }
    let b = crate::resolution::building_set(a, poset, preset);
    let cache = StratumCache::new();
    let model = global_open_model(a, poset, &b)?;
    let primary = assemble_global(&model, Side::Primary, backend, &cache)?;
    let dual = assemble_global(&model.dual_model(), Side::Primary, backend, &cache)?;
    for (p, d) in primary.degrees.iter().zip(&dual.degrees) {
        if (p.lower, p.upper) != (d.lower, d.upper) {
            return Err(ArrError::DualMismatch(format!("degree {}", p.degree)));
        }
    }
    if primary.fully_exact() {
        report.notes.push("assembled Betti numbers are exact".into());
    } else {
        report
            .notes
            .push("assembled Betti numbers are interval bounds".into());
    }
    report.ic_betti = Some(primary);
    Ok(report)
}

#[derive(Clone, Debug, Serialize)]
pub struct CorollaryReport {
    pub first: BuildingSetPreset,
    pub second: BuildingSetPreset,
    pub both_exact: bool,
    pub agree: bool,
}

/// Independence of the answer from the resolution: on arrangements where
/// the verdicts pass under both building sets, exact assembled vectors
/// must agree and interval vectors must overlap.
pub fn crosscheck_corollary(
    a: &WeightedArrangement,
    first: BuildingSetPreset,
    second: BuildingSetPreset,
    backend: Backend,
) -> Result<CorollaryReport, ArrError> {
    let mut poset1 = crate::poset::intersection_poset(a);
    let r1 = ic_betti(a, &mut poset1, first, backend)?;
    let mut poset2 = crate::poset::intersection_poset(a);
    let r2 = ic_betti(a, &mut poset2, second, backend)?;
    let v1 = r1.ic_betti.expect("applicable report carries intervals");
    let v2 = r2.ic_betti.expect("applicable report carries intervals");
    let both_exact = v1.fully_exact() && v2.fully_exact();
    let len = v1.degrees.len().max(v2.degrees.len());
    for l in 0..len {
        let d1 = v1.degrees.get(l).map(|d| (d.lower, d.upper)).unwrap_or((0, 0));
        let d2 = v2.degrees.get(l).map(|d| (d.lower, d.upper)).unwrap_or((0, 0));
        if both_exact && d1 != d2 {
            return Err(ArrError::CorollaryViolation(l, d1.0, d2.0));
        }
        // intervals must overlap degree-wise even when not exact
        if d1.0 > d2.1 || d2.0 > d1.1 {
            return Err(ArrError::CorollaryViolation(l, d1.0, d2.0));
        }
    }
    Ok(CorollaryReport {
        first,
        second,
        both_exact,
        agree: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{boolean_arrangement, concurrent_lines, example1_generic, example2};
    use crate::poset::intersection_poset;
    use crate::rat::rat;
    use crate::resolution::building_set;

    #[test]
    fn example2_origin_fails() {
        let a = example2();
        let mut poset = intersection_poset(&a);
        let b = building_set(&a, &mut poset, BuildingSetPreset::Minimal);
        let origin = poset.by_closure(&[0, 1, 2, 3, 4, 5]).unwrap();
        let cache = StratumCache::new();
        let v = check_edge(&a, &poset, &b, origin, Side::Primary, Backend::Both, &cache).unwrap();
        assert_eq!(v.kind, VerdictKind::Fails);
        // Certified lower bound at degree 3 (above codim - 1 = 2).
        assert!(v.certificate.degrees[3].lower >= 1);
    }

    #[test]
    fn example2_triple_lines_hold() {
        let a = example2();
        let mut poset = intersection_poset(&a);
        let b = building_set(&a, &mut poset, BuildingSetPreset::Minimal);
        let line = poset.by_closure(&[0, 2, 4]).unwrap();
        let cache = StratumCache::new();
        let v = check_edge(&a, &poset, &b, line, Side::Primary, Backend::Both, &cache).unwrap();
        assert_eq!(v.kind, VerdictKind::Holds);
    }

    #[test]
    fn vacuous_when_weight_sum_nonintegral() {
        let a = concurrent_lines(3, &[rat(1, 5), rat(1, 5), rat(1, 5)]).unwrap();
        let mut poset = intersection_poset(&a);
        let b = building_set(&a, &mut poset, BuildingSetPreset::Minimal);
        let cache = StratumCache::new();
        let v = check_edge(&a, &poset, &b, b.flats[0], Side::Primary, Backend::Both, &cache)
            .unwrap();
        assert_eq!(v.kind, VerdictKind::Vacuous);
        assert!(v.certificate.all_zero());
    }

    #[test]
    fn example2_not_applicable() {
        let a = example2();
        let mut poset = intersection_poset(&a);
        let report =
            check_arrangement(&a, &mut poset, BuildingSetPreset::Minimal, Backend::Both).unwrap();
        assert!(!report.applicable);
        assert_eq!(report.edges.len(), 5);
        let fails: Vec<_> = report
            .edges
            .iter()
            .filter(|e| e.primary.kind == VerdictKind::Fails)
            .collect();
        assert_eq!(fails.len(), 1);
        assert_eq!(fails[0].codim, 3);
        for e in &report.edges {
            assert_eq!(e.primary.kind, e.dual.kind);
            assert_eq!(e.weight_sum, "0");
        }
        let err = ic_betti(&a, &mut poset, BuildingSetPreset::Minimal, Backend::Both).unwrap_err();
        assert_eq!(err.code(), "CONDITION_A_FAILED");
    }

    #[test]
    fn normal_crossing_applicable_vacuously() {
        let a = boolean_arrangement(2);
        let mut poset = intersection_poset(&a);
        let report = ic_betti(&a, &mut poset, BuildingSetPreset::Minimal, Backend::Both).unwrap();
        assert!(report.applicable);
        assert!(report.edges.is_empty());
        let iv = report.ic_betti.unwrap();
        assert!(iv.fully_exact());
        assert!(iv.all_zero());
    }

    #[test]
    fn generated_instance_applicable_with_exact_ic() {
        let a = example1_generic(2, 5, 3).unwrap();
        let mut poset = intersection_poset(&a);
        let report = ic_betti(&a, &mut poset, BuildingSetPreset::Minimal, Backend::Both).unwrap();
        assert!(report.applicable);
        let iv = report.ic_betti.unwrap();
        assert!(iv.fully_exact());
        // All dense vertices have nonintegral sums, so the model is base
        // only and the assembled vector equals the twisted Betti of U.
        let u = crate::salvetti::twisted_betti(&a, Side::Primary, Backend::Both).unwrap();
        let exact = iv.exact_vector().unwrap();
        for (l, &b) in u.0.iter().enumerate() {
            assert_eq!(exact.0[l], b);
        }
        for d in exact.0.iter().skip(u.0.len()) {
            assert_eq!(*d, 0);
        }
    }

    #[test]
    fn corollary_holds_on_generated_instances() {
        let a = example1_generic(2, 5, 4).unwrap();
        let report = crosscheck_corollary(
            &a,
            BuildingSetPreset::Minimal,
            BuildingSetPreset::AllEdges,
            Backend::Both,
        )
        .unwrap();
        assert!(report.agree);
        assert!(report.both_exact);
    }

    #[test]
    fn corollary_on_normal_crossings() {
        let a = boolean_arrangement(2);
        let report = crosscheck_corollary(
            &a,
            BuildingSetPreset::Minimal,
            BuildingSetPreset::AllEdges,
            Backend::Both,
        )
        .unwrap();
        assert!(report.agree);
    }

    #[test]
    fn resonant_dense_vertex_holds_with_affine_fiber() {
        // A projective line arrangement with one dense vertex whose weight
        // sum is integral: the fiber is a punctured projective line
        // (affine), so vanishing above codim - 1 = 1 holds exactly, and
        // the assembled global intervals stay honest but inexact.
        use crate::arrangement::{Hyperplane, Space};
        use crate::rat::{rat, rat_int};
        let mk = |c: [i64; 3], w: (i64, i64), label: &str| Hyperplane {
            coeffs: c.iter().map(|&x| rat_int(x)).collect(),
            offset: rat_int(0),
            weight: rat(w.0, w.1),
            label: label.into(),
        };
        let a = crate::arrangement::WeightedArrangement::new(
            3,
            Space::Projective,
            vec![
                mk([1, 0, 0], (1, 3), "L1"),
                mk([0, 1, 0], (1, 3), "L2"),
                mk([1, 1, 0], (1, 3), "L3"),
                mk([1, 2, 1], (1, 2), "L4"),
                mk([1, 5, 2], (1, 2), "L5"),
            ],
        )
        .unwrap();
        let mut poset = intersection_poset(&a);
        let report = ic_betti(&a, &mut poset, BuildingSetPreset::Minimal, Backend::Both).unwrap();
        assert!(report.applicable);
        let vertex = report
            .edges
            .iter()
            .find(|e| e.weight_sum == "1")
            .expect("the triple vertex has weight sum 1");
        assert_eq!(vertex.primary.kind, VerdictKind::Holds);
        // Nonvacuous: the fiber carries one dimension of H^1.
        assert_eq!(vertex.primary.certificate.degrees[1].lower, 1);
        let iv = report.ic_betti.unwrap();
        assert!(iv.determinate);
        assert!(!iv.fully_exact(), "connecting maps leave an interval");
    }

    #[test]
    fn dense_only_reduction_matches_all_edges_check() {
        // Checking every edge (all-edges building set) must not change the
        // aggregate applicability on small instances.
        for seed in [5u64, 6, 7] {
            let a = example1_generic(2, 5, seed).unwrap();
            let mut p1 = intersection_poset(&a);
            let r1 =
                check_arrangement(&a, &mut p1, BuildingSetPreset::Minimal, Backend::Both).unwrap();
            let mut p2 = intersection_poset(&a);
            let r2 =
                check_arrangement(&a, &mut p2, BuildingSetPreset::AllEdges, Backend::Both).unwrap();
            assert_eq!(r1.applicable, r2.applicable, "seed {seed}");
        }
    }
}
