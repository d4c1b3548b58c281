//! Faces of a real arrangement as sign vectors with exact rational
//! witnesses.
//!
//! Enumeration is recursive on the dimension of the supporting subspace:
//! the faces inside a hyperplane are the faces of its trace arrangement,
//! and every chamber witness is obtained by pushing a facet witness off to
//! both sides by an exactly-computed safe distance. No linear programming
//! is involved, and every sign vector comes with a rational point
//! realizing it.

use crate::arrangement::{ArrError, Space, WeightedArrangement};
use crate::linalg::{self, dot};
use crate::rat::Rat;
use num::{One, Signed, Zero};
use std::collections::BTreeMap;

pub type Sign = i8;

#[derive(Clone, Debug)]
pub struct Face {
    /// Entry per hyperplane in {-1, 0, +1}.
    pub signs: Vec<Sign>,
    pub witness: Vec<Rat>,
    /// Codimension of the supporting flat.
    pub codim: usize,
}

#[derive(Clone, Debug)]
pub struct FacePoset {
    pub faces: Vec<Face>,
    /// Indices of the faces with no zero sign.
    pub chambers: Vec<usize>,
}

impl FacePoset {
    /// Is face `f` contained in the closure of face `g`?
    pub fn in_closure(&self, f: usize, g: usize) -> bool {
        self.faces[f]
            .signs
            .iter()
            .zip(&self.faces[g].signs)
            .all(|(&a, &b)| a == 0 || a == b)
    }
}

fn sign_of(r: &Rat) -> Sign {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

fn sign_vector(a: &WeightedArrangement, point: &[Rat]) -> Vec<Sign> {
    a.hyperplanes.iter().map(|h| sign_of(&h.eval(point))).collect()
}

/// Enumerate all realizable sign vectors of an affine arrangement.
pub fn face_poset(a: &WeightedArrangement) -> Result<FacePoset, ArrError> {
    if a.space != Space::Affine {
        return Err(ArrError::NotAffine);
    }
    let k = a.dim;
    let origin = vec![Rat::zero(); k];
    let full_basis: Vec<Vec<Rat>> = (0..k)
        .map(|i| {
            let mut e = vec![Rat::zero(); k];
            e[i] = Rat::one();
            e
        })
        .collect();
    let mut witnesses: BTreeMap<Vec<Sign>, Vec<Rat>> = BTreeMap::new();
    collect_faces(a, &origin, &full_basis, &mut witnesses);
    let faces: Vec<Face> = witnesses
        .into_iter()
        .map(|(signs, witness)| {
            let zero_rows: Vec<Vec<Rat>> = signs
                .iter()
                .enumerate()
                .filter(|&(_, &s)| s == 0)
                .map(|(i, _)| a.hyperplanes[i].coeffs.clone())
                .collect();
            let codim = linalg::rank(zero_rows);
            Face {
                signs,
                witness,
                codim,
            }
        })
        .collect();
    let chambers = faces
        .iter()
        .enumerate()
        .filter(|(_, f)| f.signs.iter().all(|&s| s != 0))
        .map(|(i, _)| i)
        .collect();
    Ok(FacePoset { faces, chambers })
}

/// Recursively collect face witnesses inside the affine subspace
/// `point + span(basis)`, keyed by global sign vector.
fn collect_faces(
    a: &WeightedArrangement,
    point: &[Rat],
    basis: &[Vec<Rat>],
    out: &mut BTreeMap<Vec<Sign>, Vec<Rat>>,
) {
    // Traces: restricted functionals that are not identically zero or
    // constant on the subspace, deduplicated projectively.
    let mut traces: BTreeMap<Vec<String>, (Vec<Rat>, Rat)> = BTreeMap::new();
    for h in &a.hyperplanes {
        let coeffs: Vec<Rat> = basis.iter().map(|v| dot(&h.coeffs, v)).collect();
        if coeffs.iter().all(|c| c.is_zero()) {
            continue; // contains the subspace or misses it entirely
        }
        let offset = h.eval(point);
        let mut canon: Vec<Rat> = coeffs.clone();
        canon.push(offset.clone());
        let lead = canon.iter().find(|c| !c.is_zero()).cloned().unwrap();
        for c in canon.iter_mut() {
            *c = &*c / &lead;
        }
        let key: Vec<String> = canon.iter().map(crate::rat::format_rat).collect();
        traces.entry(key).or_insert((coeffs, offset));
    }
    if traces.is_empty() {
        out.entry(sign_vector(a, point)).or_insert_with(|| point.to_vec());
        return;
    }
    for (coeffs, offset) in traces.values() {
        // Subspace of this trace, in global coordinates.
        let Some(t0) = linalg::solve(std::slice::from_ref(coeffs), &[-offset.clone()]) else {
            continue;
        };
        let sub_point: Vec<Rat> = (0..point.len())
            .map(|i| {
                let mut x = point[i].clone();
                for (tj, bj) in t0.iter().zip(basis) {
                    x += tj * &bj[i];
                }
                x
            })
            .collect();
        let null = linalg::nullspace(std::slice::from_ref(coeffs));
        let sub_basis: Vec<Vec<Rat>> = null
            .iter()
            .map(|n| {
                (0..point.len())
                    .map(|i| {
                        let mut x = Rat::zero();
                        for (nj, bj) in n.iter().zip(basis) {
                            x += nj * &bj[i];
                        }
                        x
                    })
                    .collect()
            })
            .collect();
        let mut inner: BTreeMap<Vec<Sign>, Vec<Rat>> = BTreeMap::new();
        collect_faces(a, &sub_point, &sub_basis, &mut inner);
        // The normal direction of this trace inside the subspace.
        let normal: Vec<Rat> = (0..point.len())
            .map(|i| {
                let mut x = Rat::zero();
                for (cj, bj) in coeffs.iter().zip(basis) {
                    x += cj * &bj[i];
                }
                x
            })
            .collect();
        for (signs, w) in inner {
            // Facet check: every hyperplane vanishing at w must vanish on
            // the whole trace subspace, otherwise w lies in a deeper face.
            let is_facet = signs.iter().enumerate().all(|(j, &s)| {
                s != 0 || {
                    let hj = &a.hyperplanes[j];
                    sub_basis.iter().all(|v| dot(&hj.coeffs, v).is_zero())
                }
            });
            out.entry(signs).or_insert_with(|| w.clone());
            if !is_facet {
                continue;
            }
            // Push off to both sides by half the distance to the nearest
            // other hyperplane along the normal.
            let mut delta = Rat::one();
            for h in &a.hyperplanes {
                let val = h.eval(&w);
                let slope = dot(&h.coeffs, &normal);
                if !val.is_zero() && !slope.is_zero() {
                    let bound = (val / slope).abs();
                    if bound < delta {
                        delta = bound;
                    }
                }
            }
            delta /= Rat::from_integer(2.into());
            for dir in [Rat::one(), -Rat::one()] {
                let q: Vec<Rat> = w
                    .iter()
                    .zip(&normal)
                    .map(|(wi, ni)| wi + &(&delta * &dir) * ni)
                    .collect();
                out.entry(sign_vector(a, &q)).or_insert(q);
            }
        }
    }
}
