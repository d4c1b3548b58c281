//! Built-in example arrangements and the seeded projective generator.

use crate::arrangement::{ArrError, Hyperplane, Space, WeightedArrangement};
use crate::poset::{dense_flats, intersection_poset};
use crate::rat::{is_integer, rat, rat_int, Rat};
use num::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The central arrangement of six planes in C^3
///   x1 - x3, x1 + x3, x2 - x3, x2 + x3, x1 - x2, x1 + x2
/// with weights (1/3, 1/3, 1/3, 1/3, -2/3, -2/3). Every pair sum constraint
/// a1 = a2, a3 = a4, a5 = a6 and a1 + a3 + a5 = 0 holds for this instance.
pub fn example2() -> WeightedArrangement {
    let data: [(i64, i64, i64, (i64, i64)); 6] = [
        (1, 0, -1, (1, 3)),
        (1, 0, 1, (1, 3)),
        (0, 1, -1, (1, 3)),
        (0, 1, 1, (1, 3)),
        (1, -1, 0, (-2, 3)),
        (1, 1, 0, (-2, 3)),
    ];
    let hyperplanes = data
        .iter()
        .enumerate()
        .map(|(i, &(c1, c2, c3, w))| Hyperplane {
            coeffs: vec![rat_int(c1), rat_int(c2), rat_int(c3)],
            offset: rat_int(0),
            weight: rat(w.0, w.1),
            label: format!("H{}", i + 1),
        })
        .collect();
    WeightedArrangement::new(3, Space::Affine, hyperplanes).expect("built-in example is valid")
}

/// Coordinate hyperplanes x_i = 0 in C^k, all weights 1/2.
pub fn boolean_arrangement(k: usize) -> WeightedArrangement {
    let hyperplanes = (0..k)
        .map(|i| {
            let mut coeffs = vec![rat_int(0); k];
            coeffs[i] = rat_int(1);
            Hyperplane {
                coeffs,
                offset: rat_int(0),
                weight: rat(1, 2),
                label: format!("x{}", i + 1),
            }
        })
        .collect();
    WeightedArrangement::new(k, Space::Affine, hyperplanes).expect("boolean arrangement is valid")
}

/// n distinct lines through the origin of C^2: x - j*y = 0 for j = 0..n-1,
/// with the given weights.
pub fn concurrent_lines(n: usize, weights: &[Rat]) -> Result<WeightedArrangement, ArrError> {
    if weights.len() != n {
        return Err(ArrError::MalformedInput(format!(
            "expected {n} weights, got {}",
            weights.len()
        )));
    }
    let hyperplanes = (0..n)
        .map(|j| Hyperplane {
            coeffs: vec![rat_int(1), rat_int(-(j as i64))],
            offset: rat_int(0),
            weight: weights[j].clone(),
            label: format!("L{}", j + 1),
        })
        .collect();
    WeightedArrangement::new(2, Space::Affine, hyperplanes)
}

/// Three affine lines in general position (a triangle), weights 1/5 each.
pub fn generic_triangle() -> WeightedArrangement {
    let hyperplanes = vec![
        Hyperplane {
            coeffs: vec![rat_int(1), rat_int(0)],
            offset: rat_int(0),
            weight: rat(1, 5),
            label: "L1".into(),
        },
        Hyperplane {
            coeffs: vec![rat_int(0), rat_int(1)],
            offset: rat_int(0),
            weight: rat(1, 5),
            label: "L2".into(),
        },
        Hyperplane {
            coeffs: vec![rat_int(1), rat_int(1)],
            offset: rat_int(-1),
            weight: rat(1, 5),
            label: "L3".into(),
        },
    ];
    WeightedArrangement::new(2, Space::Affine, hyperplanes).expect("triangle is valid")
}

/// Seeded generator for projective arrangements in P^k whose only dense
/// edges are vertices, the setting where every vanishing verdict is
/// automatic. Draws `n` hyperplanes through a designated dense vertex with
/// normal crossings elsewhere, verified through the intersection poset, and
/// weights with denominator <= 7 subject to validity. Dense vertices are
/// additionally required to have non-integral weight sums so that all fiber
/// strata vanish and the assembled Betti numbers stay exact.
pub fn example1_generic(k: usize, n: usize, seed: u64) -> Result<WeightedArrangement, ArrError> {
    if !(2..=3).contains(&k) {
        return Err(ArrError::GenerationFailed(format!(
            "supported projective dimensions are 2 and 3, got {k}"
        )));
    }
    let min_planes = k + 2; // a dense vertex needs k+1 concurrent hyperplanes
    if n < min_planes {
        return Err(ArrError::GenerationFailed(format!(
            "need at least {min_planes} hyperplanes in P^{k}"
        )));
    }
    let dim = k + 1; // cone dimension
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'outer: for _attempt in 0..200 {
        // Designated dense vertex: a line through the origin of the cone.
        let vertex: Vec<Rat> = random_direction(&mut rng, dim);
        let mut normals: Vec<Vec<Rat>> = Vec::new();
        // k+1 hyperplanes through the vertex, then n-k-1 generic ones.
        while normals.len() < k + 1 {
            let cand = random_normal_through(&mut rng, &vertex);
            normals.push(cand);
        }
        while normals.len() < n {
            normals.push(random_direction(&mut rng, dim));
        }
        let Some(arr) = assemble(dim, &normals) else {
            continue; // duplicates; redraw
        };
        // Geometry check: in P^k all codim-2..k-1 edges must be normal
        // crossings (only vertices may be dense), and the designated vertex
        // must actually be dense.
        let mut poset = intersection_poset(&arr);
        let dense = dense_flats(&arr, &mut poset);
        let mut has_designated = false;
        for &f in &dense {
            let flat = &poset.flats[f];
            if flat.basis.is_empty() {
                continue; // cone point, not a projective edge
            }
            if flat.codim != k {
                continue 'outer; // dense non-vertex edge: not an instance
            }
            if on_line(&poset.flats[f].basis, &vertex) {
                has_designated = true;
            }
        }
        if !has_designated {
            continue;
        }
        // Weights: common denominator q, nonintegral entries, integral total,
        // nonintegral sums at all dense vertices.
        'weights: for _ in 0..200 {
            let q = *[3i64, 4, 5, 6, 7].get(rng.gen_range(0..5)).unwrap();
            let mut weights: Vec<Rat> = Vec::new();
            for _ in 0..n - 1 {
                let mut c = 0i64;
                while c % q == 0 {
                    c = rng.gen_range(-q + 1..q);
                }
                weights.push(rat(c, q));
            }
            let partial: Rat = weights.iter().cloned().sum();
            // Last weight closes the total to the nearest integer.
            let last = partial.round() - &partial;
            if is_integer(&last) {
                continue 'weights;
            }
            weights.push(last);
            let mut candidate = arr.clone();
            for (h, w) in candidate.hyperplanes.iter_mut().zip(&weights) {
                h.weight = w.clone();
            }
            let candidate = WeightedArrangement::new(dim, Space::Projective, candidate.hyperplanes);
            let Ok(candidate) = candidate else {
                continue 'weights;
            };
            let poset2 = intersection_poset(&candidate);
            let resonant = dense.iter().any(|&f| {
                let flat = &poset.flats[f];
                if flat.basis.is_empty() {
                    return false;
                }
                let ws: Rat = flat
                    .closure
                    .iter()
                    .map(|&i| candidate.hyperplanes[i].weight.clone())
                    .sum();
                is_integer(&ws)
            });
            let _ = poset2;
            if resonant {
                continue 'weights;
            }
            return Ok(candidate);
        }
    }
    Err(ArrError::GenerationFailed(
        "rejection budget exceeded".into(),
    ))
}

fn random_direction(rng: &mut ChaCha8Rng, dim: usize) -> Vec<Rat> {
    loop {
        let v: Vec<Rat> = (0..dim).map(|_| rat_int(rng.gen_range(-6i64..=6))).collect();
        if v.iter().any(|c| !c.is_zero()) {
            return v;
        }
    }
}

/// A random normal vector orthogonal to `vertex` (so the hyperplane
/// contains the vertex line).
fn random_normal_through(rng: &mut ChaCha8Rng, vertex: &[Rat]) -> Vec<Rat> {
    let dim = vertex.len();
    loop {
        let mut v: Vec<Rat> = (0..dim).map(|_| rat_int(rng.gen_range(-6i64..=6))).collect();
        // Project out the vertex component exactly: v -= (v.vertex / vertex.vertex) * vertex
        let vv = crate::linalg::dot(vertex, vertex);
        let proj = crate::linalg::dot(&v, vertex) / &vv;
        for (vi, xi) in v.iter_mut().zip(vertex) {
            *vi = &*vi - &(&proj * xi);
        }
        if v.iter().any(|c| !c.is_zero()) {
            return v;
        }
    }
}

fn assemble(dim: usize, normals: &[Vec<Rat>]) -> Option<WeightedArrangement> {
    let hyperplanes: Vec<Hyperplane> = normals
        .iter()
        .enumerate()
        .map(|(i, n)| Hyperplane {
            coeffs: n.clone(),
            offset: rat_int(0),
            weight: rat(1, 2), // placeholder, replaced once geometry is accepted
            label: format!("H{}", i + 1),
        })
        .collect();
    WeightedArrangement::new_relaxed(dim, Space::Projective, hyperplanes).ok()
}

fn on_line(basis: &[Vec<Rat>], vertex: &[Rat]) -> bool {
    if basis.len() != 1 {
        return false;
    }
    // vertex parallel to basis[0]?
    let mut rows = vec![basis[0].clone(), vertex.to_vec()];
    crate::linalg::row_reduce(&mut rows).len() == 1
}
