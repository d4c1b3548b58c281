//! Exact Gaussian elimination over an arbitrary field.
//!
//! Matrices are dense row-major `Vec<Vec<F>>`. Everything here is exact:
//! ranks, solutions and nullspaces are certified by construction. The same
//! routines serve `BigRational` and the cyclotomic field elements of the
//! twisted engine.

use crate::rat::Rat;

/// Minimal field interface for elimination. Method names carry an `f_`
/// prefix to stay clear of the `std::ops` and `num` trait methods on the
/// implementing types.
pub trait Field: Clone + PartialEq {
    fn f_is_zero(&self) -> bool;
    fn f_add(&self, other: &Self) -> Self;
    fn f_sub(&self, other: &Self) -> Self;
    fn f_mul(&self, other: &Self) -> Self;
    /// Multiplicative inverse; only called on nonzero elements.
    fn f_inv(&self) -> Self;
}

impl Field for Rat {
    fn f_is_zero(&self) -> bool {
        num::Zero::is_zero(self)
    }
    fn f_add(&self, other: &Self) -> Self {
        self + other
    }
    fn f_sub(&self, other: &Self) -> Self {
        self - other
    }
    fn f_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn f_inv(&self) -> Self {
        let one: Rat = num::One::one();
        one / self.clone()
    }
}

/// Row echelon reduction in place. Returns the pivot columns.
pub fn row_reduce<F: Field>(mat: &mut [Vec<F>]) -> Vec<usize> {
    let rows = mat.len();
    let cols = if rows == 0 { 0 } else { mat[0].len() };
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !mat[i][c].f_is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = mat[r][c].f_inv();
        for x in mat[r].iter_mut() {
            *x = x.f_mul(&inv);
        }
        for i in 0..rows {
            if i != r && !mat[i][c].f_is_zero() {
                let factor = mat[i][c].clone();
                for j in 0..cols {
                    let t = factor.f_mul(&mat[r][j]);
                    mat[i][j] = mat[i][j].f_sub(&t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    pivots
}

pub fn rank<F: Field>(mut mat: Vec<Vec<F>>) -> usize {
    row_reduce(&mut mat).len()
}

fn rat_zero() -> Rat {
    num::Zero::zero()
}

fn rat_one() -> Rat {
    num::One::one()
}

/// One solution of `A x = b`, if consistent.
pub fn solve(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut aug: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = row_reduce(&mut aug);
    if pivots.contains(&cols) {
        return None; // pivot in the constant column: inconsistent
    }
    let mut x = vec![rat_zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// Basis of the nullspace of `A` (columns = variables).
pub fn nullspace(a: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut mat = a.to_vec();
    let pivots = row_reduce(&mut mat);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut v = vec![rat_zero(); cols];
        v[free] = rat_one();
        for (r, &c) in pivots.iter().enumerate() {
            v[c] = -mat[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
