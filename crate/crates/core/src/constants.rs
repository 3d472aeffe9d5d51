//! Certified enclosures of `K_q = prod_{j>=1} (1 - q^-j)`, its truncations and
//! the Jacobi constants `θ₂(w) = sum_k w^{(k+1/2)^2}`, `θ₃(w) = sum_k w^{k^2}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Default number of significant decimal digits.
pub const DEFAULT_DIGITS: u32 = 50;
/// Extra decimal digits carried internally on top of the requested ones.
pub const GUARD_DIGITS: u32 = 10;

/// Working precision in decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Precision {
    pub digits: u32,
}

impl Default for Precision {
    fn default() -> Self {
        Precision { digits: DEFAULT_DIGITS }
    }
}

impl Precision {
    pub fn new(digits: u32) -> Precision {
        Precision { digits }
    }

    /// Fractional bits used by interval computations at this precision.
    pub fn bits(self) -> u32 {
        ((self.digits + GUARD_DIGITS) as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 8
    }

    /// Smallest tolerance this precision can certify.
    pub fn finest_tolerance(self) -> f64 {
        10f64.powi(-(self.digits as i32))
    }

    fn check(self, tolerance: f64) -> Result<()> {
        if !(tolerance.is_finite() && tolerance > 0.0) {
            return Err(Error::InvalidParameter(format!("tolerance {tolerance} must be positive")));
        }
        if tolerance < self.finest_tolerance() {
            return Err(Error::ToleranceBelowPrecision { tolerance, digits: self.digits });
        }
        Ok(())
    }
}

/// A certified enclosure of a named constant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertifiedInterval {
    pub interval: Interval,
    pub context: String,
}

impl CertifiedInterval {
    pub fn lo(&self) -> BigRational {
        self.interval.lo()
    }

    pub fn hi(&self) -> BigRational {
        self.interval.hi()
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        self.interval.contains_f64(x)
    }
}

fn tolerance_rational(tolerance: f64) -> BigRational {
    BigRational::from_float(tolerance).expect("finite tolerance")
}

fn ensure_width(interval: Interval, tolerance: f64, prec: Precision) -> Result<Interval> {
    if interval.width() <= tolerance_rational(tolerance) {
        Ok(interval)
    } else {
        Err(Error::ToleranceBelowPrecision { tolerance, digits: prec.digits })
    }
}

fn inverse_power(q: u64, j: u64, bits: u32) -> Interval {
    Interval::from_ratio(&BigInt::one(), &num_traits::pow(BigInt::from(q), j as usize), bits)
}

/// `prod_{j=1}^{k} (1 - q^-j)` with outward rounding.
fn truncated_product(q: u64, k: u64, bits: u32) -> Interval {
    let one = Interval::one(bits);
    (1..=k).fold(Interval::one(bits), |acc, j| &acc * &(&one - &inverse_power(q, j, bits)))
}

/// Encloses `K_q`.
///
/// The product is cut after `J` factors. For `q >= 2` the discarded factors
/// satisfy `|log prod_{j>J} (1 - q^-j)| <= 2 q^-J`, so the true value lies in
/// `[P_J (1 - 2 q^-J), P_J]`. `J` is the first index for which `2 q^-J` is
/// below a quarter of the tolerance.
pub fn euler_kq(q: u64, tolerance: f64, prec: Precision) -> Result<CertifiedInterval> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("K_q needs q >= 2, got {q}")));
    }
    prec.check(tolerance)?;
    let bits = prec.bits();
    let target = tolerance_rational(tolerance) / BigRational::from_integer(4.into());
    let mut terms = 1u64;
    while BigRational::new(2.into(), num_traits::pow(BigInt::from(q), terms as usize)) > target {
        terms += 1;
    }
    let partial = truncated_product(q, terms, bits);
    let factor = &Interval::one(bits) - &(&Interval::from_int(2, bits) * &inverse_power(q, terms, bits));
    let lower = &partial * &factor;
    let enclosure = Interval::from_raw(lower.lo_raw().clone(), partial.hi_raw().clone(), bits);
    Ok(CertifiedInterval {
        interval: ensure_width(enclosure, tolerance, prec)?,
        context: format!("K_{q} (product cut after {terms} factors, {} digits)", prec.digits),
    })
}

/// Encloses `K_q(k) = prod_{j=1}^{k} (1 - q^-j)`; `K_q(0) = 1`.
pub fn kq_truncated(q: u64, k: u64, tolerance: f64, prec: Precision) -> Result<CertifiedInterval> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("K_q(k) needs q >= 2, got {q}")));
    }
    prec.check(tolerance)?;
    // k extra bits absorb the rounding of k products.
    let bits = prec.bits() + 64 - k.leading_zeros();
    let value = truncated_product(q, k, bits).with_bits(prec.bits());
    Ok(CertifiedInterval {
        interval: ensure_width(value, tolerance, prec)?,
        context: format!("K_{q}({k}), {} digits", prec.digits),
    })
}

fn validate_nome(w: &BigRational) -> Result<()> {
    if w.is_positive() && *w < BigRational::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("nome {w} must lie in (0, 1)")))
    }
}

/// `sum_{k>=0} w^{e(k)}` for an increasing exponent sequence, cut once the
/// bound `w^{e(K+1)} / (1 - w)` on the remainder drops under `limit`. Returns
/// the partial sum, the remainder bound and the number of terms kept.
fn exponent_series(
    w: &BigRational,
    exponent: impl Fn(u64) -> u64,
    limit: &BigRational,
    bits: u32,
) -> (Interval, Interval, u64) {
    let wi = Interval::from_rational(w, bits);
    let denom = &Interval::one(bits) - &wi;
    let mut sum = Interval::zero(bits);
    let mut k = 0u64;
    loop {
        sum = &sum + &wi.powu(exponent(k));
        k += 1;
        let tail = &wi.powu(exponent(k)) / &denom;
        if tail.hi() <= *limit {
            return (sum, tail, k);
        }
    }
}

fn nonneg_tail(bound: &Interval) -> Interval {
    Interval::from_raw(BigInt::zero(), bound.hi_raw().clone(), bound.bits())
}

/// Encloses `θ₃(w)` for a rational nome `0 < w < 1`.
pub fn theta3(w: &BigRational, tolerance: f64, prec: Precision) -> Result<CertifiedInterval> {
    validate_nome(w)?;
    prec.check(tolerance)?;
    let bits = prec.bits() + 16;
    // θ₃ = 1 + 2 sum_{k>=1} w^{k^2}; tail of the k-sum <= w^{(K+1)^2}/(1-w).
    let limit = tolerance_rational(tolerance) / BigRational::from_integer(8.into());
    let (sum, tail, terms) = exponent_series(w, |k| (k + 1) * (k + 1), &limit, bits);
    let two = Interval::from_int(2, bits);
    let value = &Interval::one(bits) + &(&two * &(&sum + &nonneg_tail(&tail)));
    Ok(CertifiedInterval {
        interval: ensure_width(value.with_bits(prec.bits()), tolerance, prec)?,
        context: format!("theta3({w}) with |k| <= {terms}, {} digits", prec.digits),
    })
}

/// Encloses `w^{1/4}`.
pub fn quarter_power(w: &BigRational, bits: u32) -> Interval {
    Interval::from_rational(w, bits + 8).nth_root(4).with_bits(bits)
}

/// Encloses `θ₂(w)` for a rational nome `0 < w < 1`, summed over half-integer
/// exponents as `2 w^{1/4} sum_{k>=0} w^{k(k+1)}`.
pub fn theta2(w: &BigRational, tolerance: f64, prec: Precision) -> Result<CertifiedInterval> {
    validate_nome(w)?;
    prec.check(tolerance)?;
    let bits = prec.bits() + 16;
    let limit = tolerance_rational(tolerance) / BigRational::from_integer(8.into());
    let (sum, tail, terms) = exponent_series(w, |k| k * (k + 1), &limit, bits);
    let two = Interval::from_int(2, bits);
    let value = &(&two * &quarter_power(w, bits)) * &(&sum + &nonneg_tail(&tail));
    Ok(CertifiedInterval {
        interval: ensure_width(value.with_bits(prec.bits()), tolerance, prec)?,
        context: format!("theta2({w}) with 0 <= k < {terms}, {} digits", prec.digits),
    })
}

/// `sum_{r in Z} q^{-|r|} = (q + 1) / (q - 1)`, exact.
pub fn geometric_two_sided_sum(q: u64) -> BigRational {
    BigRational::new(BigInt::from(q + 1), BigInt::from(q - 1))
}

/// Enclosure of the default-precision nome `1/q`.
pub fn inverse_nome(q: u64) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(q))
}
