//! Exact rational scalars and their `"p/q"` string form.
//!
//! All arithmetic in this crate is over `num::BigRational`, which keeps
//! fractions reduced with a positive denominator. The string form used in
//! arrangement files is an optional sign, the numerator, and an optional
//! `/q` part with q > 0; no whitespace.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(num: i64) -> Rat {
    BigRational::from(BigInt::from(num))
}

pub fn is_integer(r: &Rat) -> bool {
    r.denom().is_one()
}

/// Parse `"p"` or `"p/q"`, rejecting whitespace, empty parts and q <= 0.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let bad = || format!("invalid rational literal {s:?}");
    if s.is_empty() || s.chars().any(|c| c.is_whitespace()) {
        return Err(bad());
    }
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let num: BigInt = num_str.parse().map_err(|_| bad())?;
    let den: BigInt = match den_str {
        Some(d) if !d.starts_with('+') && !d.starts_with('-') => d.parse().map_err(|_| bad())?,
        Some(_) => return Err(bad()),
        None => BigInt::one(),
    };
    if den <= BigInt::zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// Canonical form: denominator omitted when 1.
pub fn format_rat(r: &Rat) -> String {
    if is_integer(r) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Distance to the nearest integer, as |fractional part| folded into [0, 1/2].
pub fn fractional_part(r: &Rat) -> Rat {
    let f = r - r.floor();
    debug_assert!(!f.is_negative());
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["0", "5", "-3", "1/3", "-2/3", "7/2"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
    }

    #[test]
    fn parse_reduces() {
        assert_eq!(format_rat(&parse_rat("2/6").unwrap()), "1/3");
        assert_eq!(format_rat(&parse_rat("-4/2").unwrap()), "-2");
    }

    #[test]
    fn parse_rejects_garbage() {
        for s in ["", " 1", "1 ", "1/ 2", "1/0", "1/-2", "a/b", "1.5", "1//2"] {
            assert!(parse_rat(s).is_err(), "accepted {s:?}");
        }
    }

    #[test]
    fn integrality() {
        assert!(is_integer(&rat(4, 2)));
        assert!(!is_integer(&rat(1, 3)));
    }
}
