//! Small helpers for exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Parses a plain decimal such as `0.03655`, `1`, or `.5` into an exact rational.
pub fn parse_decimal(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("not a decimal number: `{s}`"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().map_err(|_| bad())?
    };
    let denom = num_traits::pow(BigInt::from(10u32), frac_part.len());
    let value = BigRational::new(numer, denom);
    Ok(if neg { -value } else { value })
}

/// `2^exp` as a rational.
pub fn pow2(exp: u32) -> BigRational {
    BigRational::from_integer(BigInt::one() << exp)
}

pub fn to_f64(r: &BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
}
