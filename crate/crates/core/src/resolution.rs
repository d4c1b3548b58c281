//! Combinatorics of the wonderful resolution: building sets, the divisor
//! over the resolved space, and stratified models of the open fibers and
//! of the global open complement.
//!
//! Strata are described by lists of arrangement factors whose complements
//! multiply to the stratum; their Betti vectors convolve. Fibers over a
//! flat F decompose into the projectivized complement of the localized
//! arrangement (the base) and one stratum per removed exceptional divisor
//! between F and the ambient space. When a configuration would need
//! strata beyond this depth (possible once the ambient dimension exceeds
//! three) the model is flagged incomplete and every consumer degrades to
//! UNDETERMINED rather than reporting uncertified numbers.

use crate::arrangement::{ArrError, Hyperplane, Space, WeightedArrangement};
use crate::assembly::{assemble_intervals, BettiIntervalVector, EvaluatedStratum};
use crate::linalg::dot;
use crate::poset::{dense_flats, FlatId, IntersectionPoset};
use crate::rat::Rat;
use crate::salvetti::{twisted_betti, Backend, BettiVector, Side};
use serde::Serialize;
use std::collections::HashMap;
use std::sync::Mutex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuildingSetPreset {
    Minimal,
    AllEdges,
}

#[derive(Clone, Debug)]
pub struct BuildingSet {
    pub preset: BuildingSetPreset,
    /// Flats ordered by increasing dimension (blow-up order), ties broken
    /// by closure.
    pub flats: Vec<FlatId>,
}

impl BuildingSet {
    pub fn contains(&self, f: FlatId) -> bool {
        self.flats.contains(&f)
    }
}

/// The minimal building set: exactly the dense edges.
pub fn minimal_building_set(
    a: &WeightedArrangement,
    poset: &mut IntersectionPoset,
) -> BuildingSet {
    building_set(a, poset, BuildingSetPreset::Minimal)
}

pub fn building_set(
    a: &WeightedArrangement,
    poset: &mut IntersectionPoset,
    preset: BuildingSetPreset,
) -> BuildingSet {
    let dense = dense_flats(a, poset);
    let mut flats: Vec<FlatId> = match preset {
        BuildingSetPreset::Minimal => dense,
        BuildingSetPreset::AllEdges => (0..poset.flats.len())
            .filter(|&f| poset.flats[f].codim >= 2 && poset.is_edge(a, f))
            .collect(),
    };
    // Projective mode never blows up the cone point; it is not an edge.
    flats.retain(|&f| poset.is_edge(a, f));
    flats.sort_by(|&x, &y| {
        let dx = poset.flats[x].basis.len();
        let dy = poset.flats[y].basis.len();
        dx.cmp(&dy).then(poset.flats[x].closure.cmp(&poset.flats[y].closure))
    });
    BuildingSet { preset, flats }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum DivisorKind {
    ProperTransform(usize),
    Exceptional(FlatId),
}

#[derive(Clone, Debug, Serialize)]
pub struct DivisorComponent {
    pub kind: DivisorKind,
    pub label: String,
    pub monodromy_trivial: bool,
    pub kept_in_dtilde: bool,
}

/// One component per hyperplane (always kept) and per building-set flat
/// (kept exactly when the pulled back monodromy around it is nontrivial).
pub fn divisor_components(
    a: &WeightedArrangement,
    poset: &IntersectionPoset,
    b: &BuildingSet,
) -> Vec<DivisorComponent> {
    let mut out = Vec::new();
    for (i, h) in a.hyperplanes.iter().enumerate() {
        out.push(DivisorComponent {
            kind: DivisorKind::ProperTransform(i),
            label: h.label.clone(),
            monodromy_trivial: false,
            kept_in_dtilde: true,
        });
    }
    for &f in &b.flats {
        let flat = &poset.flats[f];
        out.push(DivisorComponent {
            kind: DivisorKind::Exceptional(f),
            label: flat.label(a),
            monodromy_trivial: flat.exceptional_monodromy_trivial,
            kept_in_dtilde: !flat.exceptional_monodromy_trivial,
        });
    }
    out
}

/// A stratum as a product of arrangement complements. The Betti vector is
/// the convolution over the factors; `kunneth_trusted` is false for the
/// bundle-over-projective-base products where the product formula is only
/// used when some factor vanishes entirely.
#[derive(Clone, Debug)]
pub struct StratumDescriptor {
    pub center: Option<FlatId>,
    pub label: String,
    pub dim: usize,
    pub factors: Vec<WeightedArrangement>,
    pub kunneth_trusted: bool,
}

#[derive(Clone, Debug)]
pub struct FiberModel {
    pub flat: FlatId,
    pub codim: usize,
    /// True exactly when a(F) is non-integral: the fiber misses the open
    /// set entirely.
    pub empty: bool,
    pub base: Option<StratumDescriptor>,
    pub children: Vec<StratumDescriptor>,
    pub complete: bool,
    /// Hyperplanes through the flat: their transforms puncture the base.
    pub removed_transforms: usize,
}

#[derive(Clone, Debug)]
pub struct GlobalModel {
    pub dim: usize,
    pub base_label: String,
    /// The complement itself (kept apart from the lower strata).
    pub base: WeightedArrangement,
    pub strata: Vec<StratumDescriptor>,
    pub complete: bool,
}

impl GlobalModel {
    /// The same stratified model with every weight negated: the model for
    /// the dual local system.
    pub fn dual_model(&self) -> Self {
        let mut out = self.clone();
        out.base = out.base.dual();
        for s in out.strata.iter_mut() {
            for f in s.factors.iter_mut() {
                *f = f.dual();
            }
        }
        out
    }
}

/// Manifold dimension of a flat: subspace dimension, dropping the cone
/// direction in projective mode.
fn manifold_dim(a: &WeightedArrangement, poset: &IntersectionPoset, f: FlatId) -> usize {
    let d = poset.flats[f].basis.len();
    match a.space {
        Space::Affine => d,
        Space::Projective => d - 1,
    }
}

fn manifold_ambient_dim(a: &WeightedArrangement) -> usize {
    match a.space {
        Space::Affine => a.dim,
        Space::Projective => a.dim - 1,
    }
}

/// The projectivized complement of the essentialized localization at `f`:
/// the base stratum of its fiber.
fn localized_projective(
    a: &WeightedArrangement,
    poset: &IntersectionPoset,
    f: FlatId,
) -> WeightedArrangement {
    let flat = &poset.flats[f];
    let local = a.localize(&flat.closure, &flat.point);
    let mut ess = local.essentialize(&flat.basis);
    ess.space = Space::Projective;
    ess
}

/// Stratified model of the fiber over a generic point of `f`.
pub fn fiber_model(
    a: &WeightedArrangement,
    poset: &IntersectionPoset,
    b: &BuildingSet,
    f: FlatId,
) -> Result<FiberModel, ArrError> {
    let flat = poset.flats.get(f).ok_or(ArrError::FlatNotInArrangement)?;
    if !b.contains(f) && flat.dense != Some(true) {
        return Err(ArrError::FlatNotDenseNorInBuildingSet);
    }
    let codim = flat.codim;
    if !flat.exceptional_monodromy_trivial {
        return Ok(FiberModel {
            flat: f,
            codim,
            empty: true,
            base: None,
            children: Vec::new(),
            complete: true,
            removed_transforms: flat.closure.len(),
        });
    }
    let base_arr = localized_projective(a, poset, f);
    let base = StratumDescriptor {
        center: Some(f),
        label: format!("fiber base over {}", flat.label(a)),
        dim: codim - 1,
        factors: vec![base_arr],
        kunneth_trusted: true,
    };
    let mut children = Vec::new();
    let mut complete = true;
    let mut child_flats: Vec<FlatId> = Vec::new();
    for &e in &b.flats {
        if e == f || !poset.contains(e, f) {
            continue; // only flats strictly containing f index fiber strata
        }
        let eflat = &poset.flats[e];
        if !eflat.exceptional_monodromy_trivial {
            continue; // kept divisor: removed from the open fiber
        }
        child_flats.push(e);
        let gap = eflat.basis.len() - poset.flats[f].basis.len();
        let normal = localized_projective(a, poset, e);
        if gap == 1 {
            children.push(StratumDescriptor {
                center: Some(e),
                label: format!("exceptional over {}", eflat.label(a)),
                dim: eflat.codim - 1,
                factors: vec![normal],
                kunneth_trusted: true,
            });
        } else {
            // The exceptional locus traces a positive-dimensional family
            // inside the fiber; the product is only certified when the
            // normal factor has no cohomology.
            children.push(StratumDescriptor {
                center: Some(e),
                label: format!("deep exceptional over {}", eflat.label(a)),
                dim: (gap - 1) + (eflat.codim - 1),
                factors: vec![normal],
                kunneth_trusted: false,
            });
        }
    }
    // Nested removed exceptionals meet in deeper strata the depth-one
    // model does not carry.
    for (i, &e1) in child_flats.iter().enumerate() {
        for &e2 in child_flats.iter().skip(i + 1) {
            if poset.contains(e1, e2) || poset.contains(e2, e1) {
                complete = false;
            }
        }
    }
    Ok(FiberModel {
        flat: f,
        codim,
        empty: false,
        base: Some(base),
        children,
        complete,
        removed_transforms: flat.closure.len(),
    })
}

/// The restriction of the arrangement to a flat: one hyperplane per flat
/// covered by `f` downward, with the induced weight a(T) - a(F).
fn restriction_arrangement(
    a: &WeightedArrangement,
    poset: &IntersectionPoset,
    f: FlatId,
) -> WeightedArrangement {
    let flat = &poset.flats[f];
    let dim = flat.basis.len();
    let mut traces: Vec<Hyperplane> = Vec::new();
    for (t, tf) in poset.flats.iter().enumerate() {
        if tf.codim != flat.codim + 1 || !poset.contains(f, t) {
            continue;
        }
        // A defining hyperplane of the cover not containing f.
        let &h = tf
            .closure
            .iter()
            .find(|&&h| flat.closure.binary_search(&h).is_err())
            .expect("cover has a hyperplane outside the closure of f");
        let hp = &a.hyperplanes[h];
        let coeffs: Vec<Rat> = flat.basis.iter().map(|v| dot(&hp.coeffs, v)).collect();
        let offset = hp.eval(&flat.point);
        let weight = &tf.weight_sum - &flat.weight_sum;
        traces.push(Hyperplane {
            coeffs,
            offset,
            weight,
            label: format!("trace {}", tf.label(a)),
        });
    }
    WeightedArrangement {
        dim,
        space: a.space,
        hyperplanes: traces,
    }
}

/// Stratified model of the global open set over the resolved space: the
/// complement itself plus, for each removed exceptional divisor, the open
/// part of its flat fibered by the fiber-model strata.
pub fn global_open_model(
    a: &WeightedArrangement,
    poset: &IntersectionPoset,
    b: &BuildingSet,
) -> Result<GlobalModel, ArrError> {
    let dim = manifold_ambient_dim(a);
    let mut strata = Vec::new();
    let mut complete = true;
    for &f in &b.flats {
        let flat = &poset.flats[f];
        if !flat.exceptional_monodromy_trivial {
            continue;
        }
        let fiber = fiber_model(a, poset, b, f)?;
        complete &= fiber.complete;
        let fdim = manifold_dim(a, poset, f);
        let trace_factor = if fdim > 0 {
            Some(restriction_arrangement(a, poset, f))
        } else {
            None
        };
        let fiber_strata: Vec<&StratumDescriptor> =
            fiber.base.iter().chain(fiber.children.iter()).collect();
        for s in fiber_strata {
            let mut factors = Vec::new();
            let mut trusted = s.kunneth_trusted;
            if let Some(tf) = &trace_factor {
                factors.push(tf.clone());
                // A positive-dimensional projective family of fibers is a
                // bundle, not a product; the convolution is then certified
                // only if some factor vanishes.
                if a.space == Space::Projective {
                    trusted = false;
                }
            }
            factors.extend(s.factors.iter().cloned());
            strata.push(StratumDescriptor {
                center: Some(f),
                label: if fdim > 0 {
                    format!("{} along {}", s.label, flat.label(a))
                } else {
                    s.label.clone()
                },
                dim: fdim + s.dim,
                factors,
                kunneth_trusted: trusted,
            });
        }
    }
    // Coverage: a flat outside the building set can still carry fiber
    // points when every block of its localization has rank at least two
    // (possible only in ambient dimension four and up).
    for f in 0..poset.flats.len() {
        let flat = &poset.flats[f];
        if flat.codim < 2 || b.contains(f) || !poset.is_edge(a, f) {
            continue;
        }
        let local = a.localize(&flat.closure, &flat.point);
        let local = local.essentialize(&flat.basis);
        let blocks = crate::poset::irreducible_decomposition(&local)
            .expect("localization is central");
        let min_block_rank = blocks
            .iter()
            .map(|blk| {
                crate::linalg::rank(
                    blk.iter()
                        .map(|&i| local.hyperplanes[i].coeffs.clone())
                        .collect::<Vec<_>>(),
                )
            })
            .min()
            .unwrap_or(0);
        if min_block_rank >= 2 {
            complete = false;
        }
    }
    Ok(GlobalModel {
        dim,
        base_label: "complement".into(),
        base: a.clone(),
        strata,
        complete,
    })
}

/// Memoized evaluation of stratum Betti vectors.
pub struct StratumCache {
    map: Mutex<HashMap<String, BettiVector>>,
}

impl StratumCache {
    pub fn new() -> Self {
        StratumCache {
            map: Mutex::new(HashMap::new()),
        }
    }
}

impl Default for StratumCache {
    fn default() -> Self {
        Self::new()
    }
}

fn factor_key(arr: &WeightedArrangement, side: Side) -> String {
    let side_tag = match side {
        Side::Primary => "p",
        Side::Dual => "d",
    };
    format!("{}|{}", side_tag, crate::arrangement::emit_arrangement(arr))
}

fn factor_betti(
    arr: &WeightedArrangement,
    side: Side,
    backend: Backend,
    cache: &StratumCache,
) -> Result<BettiVector, ArrError> {
    let key = factor_key(arr, side);
    if let Some(hit) = cache.map.lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let b = twisted_betti(arr, side, backend)?;
    cache.map.lock().unwrap().insert(key, b.clone());
    Ok(b)
}

fn convolve(a: &BettiVector, b: &BettiVector) -> BettiVector {
    let mut out = vec![0usize; a.0.len() + b.0.len() - 1];
    for (i, &x) in a.0.iter().enumerate() {
        for (j, &y) in b.0.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    BettiVector(out)
}

/// Betti vector of a product stratum. Returns the vector together with a
/// certification flag: an untrusted product is only certified when it
/// vanishes.
pub fn stratum_betti(
    s: &StratumDescriptor,
    side: Side,
    backend: Backend,
    cache: &StratumCache,
) -> Result<(BettiVector, bool), ArrError> {
    let mut acc = BettiVector(vec![1]);
    for f in &s.factors {
        let fb = factor_betti(f, side, backend, cache)?;
        acc = convolve(&acc, &fb);
    }
    let certified = s.kunneth_trusted || acc.is_zero();
    Ok((acc, certified))
}

/// Evaluate and assemble a fiber model into per-degree intervals.
pub fn assemble_fiber(
    model: &FiberModel,
    side: Side,
    backend: Backend,
    cache: &StratumCache,
) -> Result<BettiIntervalVector, ArrError> {
    let fiber_dim = model.codim - 1;
    if model.empty {
        return assemble_intervals(fiber_dim, &BettiVector(vec![0]), "empty fiber", &[], true);
    }
    let base = model.base.as_ref().expect("nonempty fiber has a base");
    let (base_betti, base_ok) = stratum_betti(base, side, backend, cache)?;
    let mut complete = model.complete && base_ok;
    let mut strata = Vec::new();
    for child in &model.children {
        let (betti, ok) = stratum_betti(child, side, backend, cache)?;
        complete &= ok;
        strata.push(EvaluatedStratum {
            dim: child.dim,
            betti,
            label: child.label.clone(),
        });
    }
    assemble_intervals(fiber_dim, &base_betti, &base.label, &strata, complete)
}

/// Evaluate and assemble the global model.
pub fn assemble_global(
    model: &GlobalModel,
    side: Side,
    backend: Backend,
    cache: &StratumCache,
) -> Result<BettiIntervalVector, ArrError> {
    let base_betti = twisted_betti(&model.base, side, backend)?;
    let mut complete = model.complete;
    let mut strata = Vec::new();
    for s in &model.strata {
        let (betti, ok) = stratum_betti(s, side, backend, cache)?;
        complete &= ok;
        strata.push(EvaluatedStratum {
            dim: s.dim,
            betti,
            label: s.label.clone(),
        });
    }
    assemble_intervals(model.dim, &base_betti, &model.base_label, &strata, complete)
}
