//! Arithmetic in the cyclotomic field Q(zeta_N).
//!
//! Elements are rational coefficient vectors of length phi(N), representing
//! polynomials in zeta modulo the N-th cyclotomic polynomial. Since every
//! monodromy in this crate is a root of unity, ranks of twisted boundary
//! matrices can be taken here with no numerical ambiguity at all.

use crate::linalg::Field;
use crate::rat::Rat;
use num::bigint::BigInt;
use num::{One, Zero};
use std::sync::Arc;

/// Coefficients of the N-th cyclotomic polynomial (monic, integer).
pub fn cyclotomic_poly(n: usize) -> Vec<BigInt> {
    assert!(n > 0);
    // x^n - 1 divided by Phi_d for every proper divisor d.
    let mut num = vec![BigInt::zero(); n + 1];
    num[0] = -BigInt::one();
    num[n] = BigInt::one();
    for d in 1..n {
        if !n.is_multiple_of(d) {
            continue;
        }
        let phi_d = cyclotomic_poly(d);
        num = poly_div_exact(&num, &phi_d);
    }
    num
}

/// Exact division of integer polynomials, panics on nonzero remainder.
fn poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let nd = rem.len() - 1;
    assert!(nd >= dd);
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = rem[i + dd].clone();
        quot[i] = c.clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division not exact");
    quot
}

#[derive(Debug)]
pub struct CyclotomicField {
    pub conductor: usize,
    /// Phi_N as rationals, length phi(N)+1, monic.
    modulus: Vec<Rat>,
    pub degree: usize,
}

impl CyclotomicField {
    pub fn new(conductor: usize) -> Arc<Self> {
        let poly = cyclotomic_poly(conductor);
        let modulus: Vec<Rat> = poly.iter().map(|c| Rat::from(c.clone())).collect();
        let degree = modulus.len() - 1;
        Arc::new(CyclotomicField {
            conductor,
            modulus,
            degree,
        })
    }

    pub fn zero(self: &Arc<Self>) -> CycElem {
        CycElem {
            field: Arc::clone(self),
            coeffs: vec![Rat::zero(); self.degree],
        }
    }

    pub fn one(self: &Arc<Self>) -> CycElem {
        self.root_power(0)
    }

    /// zeta^m as an element (m arbitrary, reduced mod N).
    pub fn root_power(self: &Arc<Self>, m: i64) -> CycElem {
        let n = self.conductor as i64;
        let m = m.rem_euclid(n) as usize;
        let mut raw = vec![Rat::zero(); m + 1];
        raw[m] = Rat::one();
        CycElem {
            field: Arc::clone(self),
            coeffs: self.reduce(raw),
        }
    }

    fn reduce(&self, mut raw: Vec<Rat>) -> Vec<Rat> {
        let d = self.degree;
        while raw.len() > d {
            let top = raw.len() - 1;
            let c = raw[top].clone();
            if !c.is_zero() {
                // x^top = -c * (lower terms of Phi) * x^(top-d)
                for j in 0..d {
                    let t = &c * &self.modulus[j];
                    raw[top - d + j] -= t;
                }
            }
            raw.pop();
        }
        raw.resize(d, Rat::zero());
        raw
    }
}

/// An element of Q(zeta_N).
#[derive(Clone, Debug)]
pub struct CycElem {
    field: Arc<CyclotomicField>,
    coeffs: Vec<Rat>,
}

impl PartialEq for CycElem {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl CycElem {
    pub fn is_rational_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn binop(&self, other: &Self, f: impl Fn(&Rat, &Rat) -> Rat) -> Self {
        debug_assert_eq!(self.field.conductor, other.field.conductor);
        CycElem {
            field: Arc::clone(&self.field),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }
}

impl Field for CycElem {
    fn f_is_zero(&self) -> bool {
        self.is_rational_zero()
    }
    fn f_add(&self, other: &Self) -> Self {
        self.binop(other, |a, b| a + b)
    }
    fn f_sub(&self, other: &Self) -> Self {
        self.binop(other, |a, b| a - b)
    }
    fn f_mul(&self, other: &Self) -> Self {
        let d = self.field.degree;
        let mut raw = vec![Rat::zero(); 2 * d];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                raw[i + j] += a * b;
            }
        }
        CycElem {
            field: Arc::clone(&self.field),
            coeffs: self.field.reduce(raw),
        }
    }
    fn f_inv(&self) -> Self {
        // Extended Euclid in Q[x] against Phi_N; gcd is 1 since Phi_N is
        // irreducible and self != 0.
        assert!(!self.is_rational_zero(), "inverse of zero");
        let trim = |v: &[Rat]| {
            let mut v = v.to_vec();
            while v.len() > 1 && v.last().unwrap().is_zero() {
                v.pop();
            }
            v
        };
        let mut r0 = trim(&self.field.modulus);
        let mut r1 = trim(&self.coeffs);
        let mut s0: Vec<Rat> = vec![Rat::zero()];
        let mut s1: Vec<Rat> = vec![Rat::one()];
        while r1.len() > 1 || !r1[0].is_zero() {
            let (q, r) = poly_divmod(&r0, &r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = trim(&r);
            s0 = s1;
            s1 = trim(&s);
        }
        // r0 = gcd (a nonzero constant); inverse = s0 / r0.
        assert_eq!(r0.len(), 1, "cyclotomic polynomial must be irreducible");
        let c = r0[0].f_inv();
        let coeffs: Vec<Rat> = s0.iter().map(|x| x * &c).collect();
        CycElem {
            field: Arc::clone(&self.field),
            coeffs: self.field.reduce(coeffs),
        }
    }
}

fn poly_divmod(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    let mut rem = num.to_vec();
    if rem.len() < den.len() {
        return (vec![Rat::zero()], rem);
    }
    let mut quot = vec![Rat::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + dd] / &lead;
        quot[i] = c.clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            let t = &c * dj;
            rem[i + j] -= t;
        }
    }
    rem.truncate(dd.max(1));
    (quot, rem)
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let mut out = vec![Rat::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    out
}
