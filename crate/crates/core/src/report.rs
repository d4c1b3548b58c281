//! Report structures mirrored onto the output JSON schema.
//!
//! Reports are deterministic: no timestamps, stable field order, rationals
//! as strings.

use crate::arrangement::WeightedArrangement;
use crate::assembly::BettiIntervalVector;
use crate::poset::IntersectionPoset;
use crate::rat::format_rat;
use crate::resolution::BuildingSetPreset;
use crate::verdict::ApplicabilityReport;
use serde::Serialize;

#[derive(Serialize)]
pub struct IntervalJson {
    pub degree: usize,
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
    pub provenance: String,
}

#[derive(Serialize)]
pub struct IcDegreeJson {
    pub degree: usize,
    pub lower: usize,
    pub upper: usize,
    pub exact: bool,
}

#[derive(Serialize)]
pub struct EdgeJson {
    pub flat: Vec<String>,
    pub codim: usize,
    pub weight_sum: String,
    pub verdict_primary: String,
    pub verdict_dual: String,
    pub intervals: Vec<IntervalJson>,
}

#[derive(Serialize)]
pub struct ConditionAJson {
    pub applicable: bool,
    pub edges: Vec<EdgeJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ic_betti: Option<Vec<IcDegreeJson>>,
    pub building_set: String,
    pub notes: Vec<String>,
}

#[derive(Serialize)]
pub struct FlatJson {
    pub closure: Vec<String>,
    pub codim: usize,
    pub moebius: i64,
    pub weight_sum: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dense: Option<bool>,
}

pub fn preset_name(p: BuildingSetPreset) -> &'static str {
    match p {
        BuildingSetPreset::Minimal => "minimal",
        BuildingSetPreset::AllEdges => "all-edges",
    }
}

fn intervals_json(iv: &BettiIntervalVector) -> Vec<IntervalJson> {
    iv.degrees
        .iter()
        .map(|d| IntervalJson {
            degree: d.degree,
            lower: d.lower,
            upper: d.upper,
            exact: d.exact,
            provenance: d.provenance.clone(),
        })
        .collect()
}

pub fn condition_a_json(_a: &WeightedArrangement, report: &ApplicabilityReport) -> ConditionAJson {
    let edges = report
        .edges
        .iter()
        .map(|e| {
            let flat: Vec<String> = e
                .label
                .trim_matches(|c| c == '{' || c == '}')
                .split(',')
                .filter(|s| !s.is_empty())
                .map(|s| s.to_string())
                .collect();
            EdgeJson {
                flat,
                codim: e.codim,
                weight_sum: e.weight_sum.clone(),
                verdict_primary: e.primary.kind.as_str().to_string(),
                verdict_dual: e.dual.kind.as_str().to_string(),
                intervals: intervals_json(&e.primary.certificate),
            }
        })
        .collect();
    let ic = report.ic_betti.as_ref().map(|iv| {
        iv.degrees
            .iter()
            .map(|d| IcDegreeJson {
                degree: d.degree,
                lower: d.lower,
                upper: d.upper,
                exact: d.exact,
            })
            .collect()
    });
    ConditionAJson {
        applicable: report.applicable,
        edges,
        ic_betti: ic,
        building_set: preset_name(report.building_set).to_string(),
        notes: report.notes.clone(),
    }
}

#[derive(Serialize)]
pub struct DivisorJson {
    pub kind: String,
    pub label: String,
    pub monodromy_trivial: bool,
    pub kept_in_dtilde: bool,
}

#[derive(Serialize)]
pub struct StratumJson {
    pub label: String,
    pub dim: usize,
    pub factors: usize,
    pub betti: Vec<usize>,
}

#[derive(Serialize)]
pub struct ResolutionJson {
    pub building_set: String,
    pub blowup_centers: Vec<String>,
    pub divisors: Vec<DivisorJson>,
    pub strata: Vec<StratumJson>,
    pub complete: bool,
    pub assembled: Vec<IntervalJson>,
}

/// Dump of the stratified model over the resolved space: divisor list,
/// strata with their Betti vectors, and the assembled intervals of the
/// global open set (primary side).
pub fn resolution_json(
    a: &WeightedArrangement,
    poset: &mut IntersectionPoset,
    preset: BuildingSetPreset,
    backend: crate::salvetti::Backend,
) -> Result<ResolutionJson, crate::arrangement::ArrError> {
    use crate::resolution;
    let b = resolution::building_set(a, poset, preset);
    let divisors = resolution::divisor_components(a, poset, &b)
        .into_iter()
        .map(|d| DivisorJson {
            kind: match d.kind {
                resolution::DivisorKind::ProperTransform(_) => "proper_transform".into(),
                resolution::DivisorKind::Exceptional(_) => "exceptional".into(),
            },
            label: d.label,
            monodromy_trivial: d.monodromy_trivial,
            kept_in_dtilde: d.kept_in_dtilde,
        })
        .collect();
    let model = resolution::global_open_model(a, poset, &b)?;
    let cache = resolution::StratumCache::new();
    let mut strata = Vec::new();
    for s in &model.strata {
        let (betti, _) =
            resolution::stratum_betti(s, crate::salvetti::Side::Primary, backend, &cache)?;
        strata.push(StratumJson {
            label: s.label.clone(),
            dim: s.dim,
            factors: s.factors.len(),
            betti: betti.0,
        });
    }
    let assembled =
        resolution::assemble_global(&model, crate::salvetti::Side::Primary, backend, &cache)?;
    Ok(ResolutionJson {
        building_set: preset_name(preset).to_string(),
        blowup_centers: b
            .flats
            .iter()
            .map(|&f| poset.flats[f].label(a))
            .collect(),
        divisors,
        strata,
        // certified end to end: the structural model and every product
        // stratum evaluation
        complete: model.complete && assembled.determinate,
        assembled: intervals_json(&assembled),
    })
}

pub fn lattice_json(a: &WeightedArrangement, poset: &IntersectionPoset) -> Vec<FlatJson> {
    poset
        .flats
        .iter()
        .map(|f| FlatJson {
            closure: f
                .closure
                .iter()
                .map(|&i| a.hyperplanes[i].label.clone())
                .collect(),
            codim: f.codim,
            moebius: f.moebius,
            weight_sum: format_rat(&f.weight_sum),
            dense: f.dense,
        })
        .collect()
}
