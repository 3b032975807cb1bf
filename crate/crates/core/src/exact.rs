//! Exact rational helpers shared across the crate: parsing `p/q` and decimal
//! strings, canonical residues modulo a positive rational, and conversion to
//! floating point.

use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse `{0}` as an exact rational")]
pub struct ParseRationalError(pub String);

/// Parses `"p"`, `"p/q"`, or a finite decimal such as `"-0.125"` exactly.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let t = s.trim();
    let err = || ParseRationalError(s.to_string());
    if t.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = t.split_once('/') {
        let n = BigInt::from_str(num.trim()).map_err(|_| err())?;
        let d = BigInt::from_str(den.trim()).map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        let negative = int_part.starts_with('-');
        let int_digits = int_part.trim_start_matches(['-', '+']);
        let int_value = if int_digits.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(int_digits).map_err(|_| err())?
        };
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac_value = BigInt::from_str(frac_part).map_err(|_| err())?;
        let magnitude = Rational::new(int_value * &scale + frac_value, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    BigInt::from_str(t)
        .map(Rational::from_integer)
        .map_err(|_| err())
}

/// `p/q` in lowest terms, or just `p` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Canonical representative of `x` modulo `tau` in `[0, tau)`. `tau` must be positive.
pub fn rem_euclid(x: &Rational, tau: &Rational) -> Rational {
    debug_assert!(tau.is_positive());
    let q = (x / tau).floor();
    x - q * tau
}

pub fn to_f64(r: &Rational) -> f64 {
    // Ratio<BigInt>::to_f64 handles huge numerators and denominators correctly.
    r.to_f64().unwrap_or(f64::NAN)
}

/// Best rational approximation with denominator at most `max_den`, via
/// continued-fraction convergents and semiconvergents.
pub fn approximate_f64(x: f64, max_den: u64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let exact = Rational::from_float(x)?;
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut rest = exact.clone();
    let limit = BigInt::from(max_den);
    loop {
        let a = rest.floor().to_integer();
        let p2 = &a * &p1 + &p0;
        let q2 = &a * &q1 + &q0;
        if q2 > limit {
            // Largest admissible semiconvergent.
            let k = (&limit - &q0).div_floor(&q1);
            let ps = &k * &p1 + &p0;
            let qs = &k * &q1 + &q0;
            let conv = Rational::new(p1.clone(), q1.clone());
            let semi = Rational::new(ps, qs);
            let better = if (&semi - &exact).abs() < (&conv - &exact).abs() {
                semi
            } else {
                conv
            };
            return Some(better);
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let frac = &rest - Rational::from_integer(a);
        if frac.is_zero() {
            return Some(Rational::new(p1, q1));
        }
        rest = frac.recip();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parses_fractions_integers_and_decimals() {
        assert_eq!(parse_rational("3/4").unwrap(), q(3, 4));
        assert_eq!(parse_rational("-6/8").unwrap(), q(-3, 4));
        assert_eq!(parse_rational("7").unwrap(), q(7, 1));
        assert_eq!(parse_rational("-0.125").unwrap(), q(-1, 8));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn canonical_residues() {
        let tau = q(2, 1);
        assert_eq!(rem_euclid(&q(2, 1), &tau), q(0, 1));
        assert_eq!(rem_euclid(&q(3, 1), &tau), q(1, 1));
        assert_eq!(rem_euclid(&q(-1, 2), &tau), q(3, 2));
    }

    #[test]
    fn approximation_recovers_small_fractions() {
        let x = std::f64::consts::PI / 12.0 / std::f64::consts::PI;
        assert_eq!(approximate_f64(x, 10_000).unwrap(), q(1, 12));
        assert_eq!(approximate_f64(-0.25, 100).unwrap(), q(-1, 4));
        assert_eq!(approximate_f64(3.0, 100).unwrap(), q(3, 1));
    }

    #[test]
    fn formatting() {
        assert_eq!(format_rational(&q(4, 2)), "2");
        assert_eq!(format_rational(&q(-1, 3)), "-1/3");
    }
}
