//! Exact rational scalars.
//!
//! Every number in this crate is an arbitrary-precision rational; nothing is
//! ever rounded. `ExactScalar` is `num_rational::BigRational`, which already
//! guarantees lowest terms and a positive denominator.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational number, always in lowest terms.
pub type ExactScalar = BigRational;

/// Shorthand: the integer `n` as a scalar.
pub fn qi(n: i64) -> ExactScalar {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand: the fraction `n/d` as a scalar.
pub fn q(n: i64, d: i64) -> ExactScalar {
    assert!(d != 0, "zero denominator");
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// If `x` is the square of a rational, return that (non-negative) square root.
pub fn rational_sqrt(x: &ExactScalar) -> Option<ExactScalar> {
    if x.is_negative() {
        return None;
    }
    if x.is_zero() {
        return Some(ExactScalar::zero());
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    let candidate = ExactScalar::new(n, d);
    if &candidate * &candidate == *x {
        Some(candidate)
    } else {
        None
    }
}

/// Parse a rational from `a/b` or integer decimal notation.
pub fn parse_rational(s: &str) -> Option<ExactScalar> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}

/// Render a scalar as `a` or `a/b`.
pub fn format_rational(x: &ExactScalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_squares() {
        assert_eq!(rational_sqrt(&q(9, 4)), Some(q(3, 2)));
        assert_eq!(rational_sqrt(&qi(0)), Some(qi(0)));
        assert_eq!(rational_sqrt(&qi(2)), None);
        assert_eq!(rational_sqrt(&qi(-4)), None);
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-3/6"), Some(q(-1, 2)));
        assert_eq!(parse_rational("7"), Some(qi(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(format_rational(&q(-1, 2)), "-1/2");
        assert_eq!(format_rational(&qi(5)), "5");
    }
}
