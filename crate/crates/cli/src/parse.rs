//! Exact parsing of fractions and decimals given on the command line.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use qcensus::{Error, Result};

fn bad(s: &str, what: &str) -> Error {
    Error::InvalidParameter(format!("cannot read {what} from {s:?}"))
}

/// Reads `a/b`, an integer or a plain decimal such as `-0.125`.
pub fn rational(s: &str, what: &str) -> Result<BigRational> {
    let t = s.trim();
    if let Some((a, b)) = t.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad(s, what))?;
        let b: BigInt = b.trim().parse().map_err(|_| bad(s, what))?;
        if b.is_zero() {
            return Err(bad(s, what));
        }
        return Ok(BigRational::new(a, b));
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if (int.is_empty() && frac.is_empty()) || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad(s, what));
    }
    let digits: BigInt = format!("0{int}{frac}").parse().map_err(|_| bad(s, what))?;
    let scale = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(digits, scale);
    Ok(if neg { -r } else { r })
}

/// A nome in the open interval `(0, 1)`.
pub fn nome(s: &str) -> Result<BigRational> {
    let w = rational(s, "a nome")?;
    if w <= BigRational::zero() || w >= BigRational::one() {
        return Err(Error::InvalidParameter(format!("nome {s} is not in (0, 1)")));
    }
    Ok(w)
}

/// An integer or half-integer, returned as twice its value.
pub fn half_point(s: &str) -> Result<i64> {
    let r = rational(s, "a support point")? * BigRational::from_integer(2.into());
    if !r.is_integer() {
        return Err(Error::InvalidParameter(format!("{s} is neither an integer nor a half-integer")));
    }
    r.to_integer().try_into().map_err(|_| bad(s, "a support point"))
}

/// Comma-separated nonnegative integers.
pub fn list(s: &str) -> Result<Vec<u64>> {
    s.split(',').map(|x| x.trim().parse().map_err(|_| bad(s, "a list of dimensions"))).collect()
}
