//! Asymptotic estimates for q-binomials, `S(n)` and class counts, carried in
//! log base `q`, plus a symbolic classifier for dimension functions `k(n)`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::combinatorics::{factorial, qbinom_unchecked, sum_qbinom_unchecked, GroupKind};
use crate::constants::{euler_kq, inverse_nome, kq_truncated, theta2, theta3, Precision};
use crate::error::{Error, Result};
use crate::field::prime_power;
use crate::interval::{to_scientific, Interval};

/// A positive quantity `q^logq` with `logq` enclosed in an interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogQValue {
    pub q: u64,
    pub logq: Interval,
}

fn ln_int(v: u64, bits: u32) -> Interval {
    Interval::from_int(v as i64, bits).ln()
}

fn ln_biguint(v: &BigUint, bits: u32) -> Interval {
    Interval::from_biguint(v, bits).ln()
}

impl LogQValue {
    pub fn from_log(q: u64, logq: Interval) -> LogQValue {
        LogQValue { q, logq }
    }

    /// `q^e` for an integer exponent.
    pub fn power(q: u64, e: i64, bits: u32) -> LogQValue {
        LogQValue { q, logq: Interval::from_int(e, bits) }
    }

    /// `log_q` of a positive enclosure.
    pub fn from_positive(q: u64, value: &Interval) -> LogQValue {
        let bits = value.bits();
        LogQValue { q, logq: &value.ln() / &ln_int(q, bits) }
    }

    pub fn from_biguint(q: u64, value: &BigUint, bits: u32) -> LogQValue {
        LogQValue { q, logq: &ln_biguint(value, bits) / &ln_int(q, bits) }
    }

    pub fn mul(&self, other: &LogQValue) -> LogQValue {
        assert_eq!(self.q, other.q, "log bases differ");
        LogQValue { q: self.q, logq: &self.logq + &other.logq }
    }

    pub fn div(&self, other: &LogQValue) -> LogQValue {
        assert_eq!(self.q, other.q, "log bases differ");
        LogQValue { q: self.q, logq: &self.logq - &other.logq }
    }

    /// Natural logarithm of the value.
    pub fn ln(&self) -> Interval {
        &self.logq * &ln_int(self.q, self.logq.bits())
    }

    /// Enclosure of the value itself.
    pub fn value(&self) -> Interval {
        self.ln().exp()
    }

    pub fn log10(&self) -> Interval {
        let bits = self.logq.bits();
        &self.ln() / &Interval::ln10(bits)
    }

    /// `exact / self`, useful for convergence checks against exact counts.
    pub fn ratio_from(&self, exact: &BigUint) -> Interval {
        (&ln_biguint(exact, self.logq.bits()) - &self.ln()).exp()
    }

    /// Scientific rendering with `digits` significant digits.
    pub fn render(&self, digits: usize) -> String {
        let l10 = self.log10();
        let e = floor_to_i64(&l10.mid());
        let bits = l10.bits();
        let frac = &l10 - &Interval::from_int(e, bits);
        let mantissa = (&frac * &Interval::ln10(bits)).exp();
        let m = to_scientific(&mantissa.mid(), digits);
        let (body, shift) = m.split_once('e').expect("scientific form");
        let shift: i64 = shift.parse().expect("integer exponent");
        format!("{body}e{}", e + shift)
    }

    /// Nearest `f64` (infinite or zero when out of range).
    pub fn to_f64(&self) -> f64 {
        (self.q as f64).powf(self.logq.mid_f64())
    }
}

fn floor_to_i64(r: &BigRational) -> i64 {
    r.floor().to_integer().to_i64().expect("exponent fits in i64")
}

fn kq_tolerance(prec: Precision) -> f64 {
    prec.finest_tolerance()
}

fn check_q(q: u64) -> Result<()> {
    prime_power(q).map(|_| ()).ok_or(Error::NotPrimePower(q))
}

fn check_nk(n: u64, k: u64) -> Result<()> {
    if k > n {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds n = {n}")));
    }
    Ok(())
}

/// `log_q K_q`.
fn log_kq(q: u64, prec: Precision) -> Result<Interval> {
    let kq = euler_kq(q, kq_tolerance(prec), prec)?;
    Ok(LogQValue::from_positive(q, &kq.interval).logq)
}

fn log_kq_truncated(q: u64, k: u64, prec: Precision) -> Result<Interval> {
    let kk = kq_truncated(q, k, kq_tolerance(prec), prec)?;
    Ok(LogQValue::from_positive(q, &kk.interval).logq)
}

/// `q^{k(n-k)} / K_q(k)`.
pub fn estimate_qbinom(n: u64, k: u64, q: u64, prec: Precision) -> Result<LogQValue> {
    check_q(q)?;
    check_nk(n, k)?;
    let bits = prec.bits();
    let e = Interval::from_int((k * (n - k)) as i64, bits);
    Ok(LogQValue::from_log(q, &e - &log_kq_truncated(q, k, prec)?))
}

/// A q-binomial divided by the central one, exactly and asymptotically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralComparison {
    pub exact: BigRational,
    /// `(K_q / K_q(k)) q^{-(⌊n/2⌋-k)(⌈n/2⌉-k)}`.
    pub asymptotic: LogQValue,
}

impl CentralComparison {
    /// `exact / asymptotic`.
    pub fn ratio(&self) -> Interval {
        let bits = self.asymptotic.logq.bits();
        &Interval::from_rational(&self.exact, bits) / &self.asymptotic.value()
    }
}

pub fn ratio_to_central(n: u64, k: u64, q: u64, prec: Precision) -> Result<CentralComparison> {
    check_q(q)?;
    check_nk(n, k)?;
    let (fl, ce) = ((n / 2) as i64, n.div_ceil(2) as i64);
    let exact = BigRational::new(
        qbinom_unchecked(n, k as i64, q).into(),
        qbinom_unchecked(n, fl, q).into(),
    );
    let ki = k as i64;
    let e = Interval::from_int(-(fl - ki) * (ce - ki), prec.bits());
    let logq = &(&e + &log_kq(q, prec)?) - &log_kq_truncated(q, k, prec)?;
    Ok(CentralComparison { exact, asymptotic: LogQValue::from_log(q, logq) })
}

/// `binom(n, ⌊n/2⌋)_q / q^{⌊n/2⌋⌈n/2⌉}` next to its limit `1/K_q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralRatio {
    pub exact: BigRational,
    pub limit: Interval,
    pub kq: Interval,
}

impl CentralRatio {
    /// `exact · K_q - 1`.
    pub fn deviation(&self) -> Interval {
        let bits = self.kq.bits();
        &(&Interval::from_rational(&self.exact, bits) * &self.kq) - &Interval::one(bits)
    }
}

pub fn central_ratio_to_power(n: u64, q: u64, prec: Precision) -> Result<CentralRatio> {
    check_q(q)?;
    let (fl, ce) = (n / 2, n.div_ceil(2));
    let power: BigUint = num_traits::pow(BigUint::from(q), (fl * ce) as usize);
    let exact = BigRational::new(qbinom_unchecked(n, fl as i64, q).into(), power.into());
    let kq = euler_kq(q, kq_tolerance(prec), prec)?.interval;
    Ok(CentralRatio { exact, limit: kq.recip(), kq })
}

fn check_h(q: u64, h: u32) -> Result<()> {
    match prime_power(q) {
        Some((_, hh)) if hh == h => Ok(()),
        Some((p, hh)) => Err(Error::InvalidParameter(format!("q = {q} = {p}^{hh}, not degree {h}"))),
        None => Err(Error::NotPrimePower(q)),
    }
}

/// `log_q` of the group-size divisor `n!`, `n!(q-1)^{n-1}` or `h n!(q-1)^{n-1}`.
fn log_group_divisor(kind: GroupKind, n: u64, q: u64, h: u32, bits: u32) -> Interval {
    let mut d = factorial(n);
    if kind != GroupKind::Permutation && n >= 1 {
        d *= num_traits::pow(BigUint::from(q - 1), (n - 1) as usize);
    }
    if kind == GroupKind::Semilinear {
        d *= h;
    }
    LogQValue::from_biguint(q, &d, bits).logq
}

/// `q^{k(n-k)} / (K_q n!)`, with the extra factor `(q-1)^{n-1}` for the
/// monomial kind and `h (q-1)^{n-1}` for the semilinear kind.
pub fn estimate_class_count(kind: GroupKind, n: u64, k: u64, q: u64, h: u32, prec: Precision) -> Result<LogQValue> {
    check_h(q, h)?;
    check_nk(n, k)?;
    let bits = prec.bits();
    let e = Interval::from_int((k * (n - k)) as i64, bits);
    let logq = &(&e - &log_kq(q, prec)?) - &log_group_divisor(kind, n, q, h, bits);
    Ok(LogQValue::from_log(q, logq))
}

/// Where `S(n)` comes from in [`estimate_total_classes`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SSource {
    #[default]
    Exact,
    Asymptotic,
}

/// `S(n) / n!`, `S(n) / (n!(q-1)^{n-1})` or `S(n) / (h n!(q-1)^{n-1})`.
pub fn estimate_total_classes(
    kind: GroupKind,
    n: u64,
    q: u64,
    h: u32,
    source: SSource,
    prec: Precision,
) -> Result<LogQValue> {
    check_h(q, h)?;
    let bits = prec.bits();
    let s = match source {
        SSource::Exact => LogQValue::from_biguint(q, &sum_qbinom_unchecked(n, q), bits),
        SSource::Asymptotic => estimate_s(n, q, prec)?.estimate,
    };
    Ok(LogQValue::from_log(q, &s.logq - &log_group_divisor(kind, n, q, h, bits)))
}

/// Asymptotic form of `S(n)` with the two constants it is built from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SEstimate {
    pub estimate: LogQValue,
    pub uses_theta3: bool,
    /// `θ₂(1/q) / K_q`.
    pub d1: Interval,
    /// `θ₃(1/q) / K_q`.
    pub d2: Interval,
}

/// `S(2m) ~ d₂ q^{m²}` and `S(2m+1) ~ d₁ q^{(m+1/2)²}`.
pub fn estimate_s(n: u64, q: u64, prec: Precision) -> Result<SEstimate> {
    check_q(q)?;
    let bits = prec.bits();
    let tol = prec.finest_tolerance();
    let w = inverse_nome(q);
    let kq = euler_kq(q, tol, prec)?.interval;
    let d1 = &theta2(&w, tol, prec)?.interval / &kq;
    let d2 = &theta3(&w, tol, prec)?.interval / &kq;
    let m = (n / 2) as i64;
    let even = n % 2 == 0;
    let (d, exponent) = if even {
        (&d2, Interval::from_int(m * m, bits))
    } else {
        // (m + 1/2)^2 = m^2 + m + 1/4
        let quarter = Interval::from_ratio(&BigInt::one(), &BigInt::from(4), bits);
        (&d1, &Interval::from_int(m * m + m, bits) + &quarter)
    };
    let logq = &exponent + &LogQValue::from_positive(q, d).logq;
    Ok(SEstimate { estimate: LogQValue::from_log(q, logq), uses_theta3: even, d1, d2 })
}

/// Symbolic families of dimension functions `k(n)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DimensionFamily {
    /// `⌊n/2⌋ - r`
    HalfFloorMinusConst { r: u64 },
    /// `⌈n/2⌉ + r`
    HalfCeilPlusConst { r: u64 },
    /// `⌊n/2⌋ - ⌊ℓ(n)⌋` with `ℓ(n) = n^α (ln n)^β`, `0 <= α < 1`.
    HalfMinusPowerLog { alpha: f64, beta: f64 },
    /// `k(n) = α`
    ConstantDim { alpha: u64 },
    /// `⌊λ n⌋`, `0 < λ < 1/2`
    LinearFraction { lambda: f64 },
    /// Explicit values `k(0), k(1), ...`.
    Tabulated { values: Vec<u64> },
}

impl DimensionFamily {
    pub fn validate(&self) -> Result<()> {
        match *self {
            DimensionFamily::HalfMinusPowerLog { alpha, beta } => {
                if !(alpha.is_finite() && beta.is_finite() && (0.0..1.0).contains(&alpha)) {
                    return Err(Error::InvalidParameter(format!("need 0 <= alpha < 1, got alpha={alpha}, beta={beta}")));
                }
            }
            DimensionFamily::LinearFraction { lambda } => {
                if !(lambda > 0.0 && lambda < 0.5) {
                    return Err(Error::InvalidParameter(format!("need 0 < lambda < 1/2, got {lambda}")));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// `k(n)`, or `None` when it falls outside `[0, n]` or the table.
    pub fn eval(&self, n: u64) -> Option<u64> {
        let k: i64 = match *self {
            DimensionFamily::HalfFloorMinusConst { r } => (n / 2) as i64 - r as i64,
            DimensionFamily::HalfCeilPlusConst { r } => (n.div_ceil(2) + r) as i64,
            DimensionFamily::HalfMinusPowerLog { alpha, beta } => {
                let nf = n as f64;
                let ell = if n < 2 { 0.0 } else { nf.powf(alpha) * nf.ln().powf(beta) };
                (n / 2) as i64 - ell.floor() as i64
            }
            DimensionFamily::ConstantDim { alpha } => alpha as i64,
            DimensionFamily::LinearFraction { lambda } => (lambda * n as f64).floor() as i64,
            DimensionFamily::Tabulated { ref values } => *values.get(n as usize)? as i64,
        };
        (0..=n as i64).contains(&k).then_some(k as u64)
    }

    /// `lim K_q / K_q(k(n))`: one when `k(n)` grows without bound,
    /// `K_q / K_q(α)` for a constant dimension, unknown for tables.
    pub fn truncation_limit(&self, q: u64, prec: Precision) -> Result<Option<Interval>> {
        self.validate()?;
        check_q(q)?;
        Ok(match *self {
            DimensionFamily::ConstantDim { alpha } => {
                let tol = prec.finest_tolerance();
                Some(&euler_kq(q, tol, prec)?.interval / &kq_truncated(q, alpha, tol, prec)?.interval)
            }
            DimensionFamily::Tabulated { .. } => None,
            _ => Some(Interval::one(prec.bits())),
        })
    }
}

/// Outcome of [`star_classify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StarClass {
    Satisfied,
    NotSatisfied,
    UnknownDependsOnConstants,
}

impl StarClass {
    pub fn name(self) -> &'static str {
        match self {
            StarClass::Satisfied => "satisfied",
            StarClass::NotSatisfied => "not_satisfied",
            StarClass::UnknownDependsOnConstants => "unknown",
        }
    }
}

/// Classifies a family by the growth of `δ(n) = n²/4 - k(n)(n - k(n))`:
/// bounded or `o(n)` is satisfied, `Θ(n)` depends on the unknown constants,
/// and faster growth is not satisfied.
///
/// For `k(n) = ⌊n/2⌋ - ℓ(n)` one has `δ(n) ≍ ℓ(n)²`, so `n^α (ln n)^β`
/// falls in `o(n)` exactly when `α < 1/2`, or `α = 1/2` and `β < 0`.
pub fn star_classify(family: &DimensionFamily) -> Result<StarClass> {
    family.validate()?;
    Ok(match *family {
        DimensionFamily::HalfFloorMinusConst { .. } | DimensionFamily::HalfCeilPlusConst { .. } => {
            StarClass::Satisfied
        }
        DimensionFamily::HalfMinusPowerLog { alpha, beta } => {
            if alpha < 0.5 || (alpha == 0.5 && beta < 0.0) {
                StarClass::Satisfied
            } else if alpha == 0.5 && beta == 0.0 {
                StarClass::UnknownDependsOnConstants
            } else {
                StarClass::NotSatisfied
            }
        }
        DimensionFamily::ConstantDim { .. } | DimensionFamily::LinearFraction { .. } => StarClass::NotSatisfied,
        DimensionFamily::Tabulated { .. } => StarClass::UnknownDependsOnConstants,
    })
}

/// The signed excess `n²/4 - k(n - k)` at one point, exactly.
pub fn star_gap(n: u64, k: u64) -> Result<BigRational> {
    check_nk(n, k)?;
    let quarter = BigRational::new(BigInt::from(n * n), BigInt::from(4));
    Ok(quarter - BigRational::from_integer(BigInt::from(k * (n - k))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::rational_to_f64;
    use num_traits::{Signed, Zero};

    fn prec() -> Precision {
        Precision::default()
    }

    fn close(x: &Interval, expected: f64, tol: f64) -> bool {
        (x.lo_f64() - expected).abs() < tol && (x.hi_f64() - expected).abs() < tol
    }

    #[test]
    fn qbinom_estimate_examples() {
        let e = estimate_qbinom(7, 0, 3, prec()).unwrap();
        assert!(e.logq.contains(&BigRational::zero()));
        let e = estimate_qbinom(10, 5, 2, prec()).unwrap();
        assert!(close(&e.value(), 112597196.90486, 1e-3));
        assert_eq!(e.render(6), "1.12597e8");
        let exact = qbinom_unchecked(20, 10, 2);
        let r = estimate_qbinom(20, 10, 2, prec()).unwrap().ratio_from(&exact);
        assert!(close(&r, 0.99902470809, 1e-9));
        assert!(estimate_qbinom(3, 4, 2, prec()).is_err());
    }

    #[test]
    fn central_comparisons() {
        let c = ratio_to_central(6, 2, 2, prec()).unwrap();
        assert_eq!(c.exact, BigRational::new(651.into(), 1395.into()));
        let c = ratio_to_central(40, 18, 2, prec()).unwrap();
        assert!(close(&c.ratio(), 1.0000016689, 1e-9));
        let mid = ratio_to_central(40, 20, 2, prec()).unwrap();
        assert!(mid.exact.is_one());

        let r = central_ratio_to_power(6, 2, prec()).unwrap();
        assert_eq!(r.exact, BigRational::new(1395.into(), 512.into()));
        assert!(close(&r.limit, 3.46275, 1e-4));
        let r = central_ratio_to_power(40, 2, prec()).unwrap();
        assert!(r.deviation().abs().hi_f64() < 1e-4);
        let r = central_ratio_to_power(0, 3, prec()).unwrap();
        assert!(r.exact.is_one());
        assert!(close(&r.deviation(), 0.56012607792794894 - 1.0, 1e-12));
    }

    #[test]
    fn class_count_estimates() {
        let p = prec();
        let perm = estimate_class_count(GroupKind::Permutation, 10, 5, 2, 1, p).unwrap();
        assert!(close(&perm.value(), 32.018985884, 1e-6));
        let mono = estimate_class_count(GroupKind::Monomial, 10, 5, 2, 1, p).unwrap();
        assert!((&perm.logq - &mono.logq).abs().hi_f64() < 1e-40);
        let m5 = estimate_class_count(GroupKind::Monomial, 7, 3, 5, 1, p).unwrap();
        let s5 = estimate_class_count(GroupKind::Semilinear, 7, 3, 5, 1, p).unwrap();
        assert_eq!(m5, s5);
        let p5 = estimate_class_count(GroupKind::Permutation, 7, 3, 5, 1, p).unwrap();
        // (q-1)^{n-1} = 4^6 = 5^{6 log_5 4}
        let shift = &p5.logq - &m5.logq;
        assert!(close(&shift, 6.0 * 4f64.ln() / 5f64.ln(), 1e-12));
        let m4 = estimate_class_count(GroupKind::Monomial, 6, 3, 4, 2, p).unwrap();
        let s4 = estimate_class_count(GroupKind::Semilinear, 6, 3, 4, 2, p).unwrap();
        assert!(close(&(&m4.logq - &s4.logq), 0.5, 1e-40));
        assert!(estimate_class_count(GroupKind::Semilinear, 6, 3, 4, 1, p).is_err());
    }

    #[test]
    fn total_class_estimates() {
        let p = prec();
        let t = estimate_total_classes(GroupKind::Permutation, 2, 2, 1, SSource::Exact, p).unwrap();
        assert!(close(&t.value(), 2.5, 1e-30));
        let m = estimate_total_classes(GroupKind::Monomial, 2, 2, 1, SSource::Exact, p).unwrap();
        assert_eq!(t, m);
        let big = estimate_total_classes(GroupKind::Permutation, 20, 2, 1, SSource::Exact, p).unwrap();
        let exact = BigRational::new(sum_qbinom_unchecked(20, 2).into(), factorial(20).into());
        assert!(close(&big.value(), rational_to_f64(&exact), 1e-3));
        let a = estimate_total_classes(GroupKind::Monomial, 40, 2, 1, SSource::Asymptotic, p).unwrap();
        let e = estimate_total_classes(GroupKind::Monomial, 40, 2, 1, SSource::Exact, p).unwrap();
        assert!((&a.logq - &e.logq).abs().hi_f64() < 2e-3);
    }

    #[test]
    fn s_estimates() {
        let e = estimate_s(6, 2, prec()).unwrap();
        assert!(e.uses_theta3);
        assert!(close(&e.estimate.value(), 3774.448026, 1e-5));
        assert!(e.d1.certainly_lt(&e.d2));
        let r = estimate_s(40, 2, prec()).unwrap().estimate.ratio_from(&sum_qbinom_unchecked(40, 2));
        assert!(r.lo_f64() > 1.0 - 1e-3 && r.hi_f64() < 1.0 + 1e-3);
        for n in 0..30 {
            assert_eq!(estimate_s(n, 3, prec()).unwrap().uses_theta3, n % 2 == 0);
        }
        let odd = estimate_s(41, 2, prec()).unwrap().estimate.ratio_from(&sum_qbinom_unchecked(41, 2));
        assert!((odd.mid_f64() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn rendering() {
        let v = LogQValue::power(10, 300, 128);
        assert_eq!(v.render(4), "1.000e300");
        let v = LogQValue::power(2, -3, 128);
        assert_eq!(v.render(3), "1.25e-1");
        let v = LogQValue::from_biguint(2, &BigUint::from(999_999u32), 160);
        assert_eq!(v.render(3), "1.00e6");
    }

    #[test]
    fn star_examples() {
        use DimensionFamily::*;
        assert_eq!(star_classify(&HalfFloorMinusConst { r: 3 }).unwrap(), StarClass::Satisfied);
        assert_eq!(star_classify(&HalfCeilPlusConst { r: 0 }).unwrap(), StarClass::Satisfied);
        assert_eq!(star_classify(&ConstantDim { alpha: 2 }).unwrap(), StarClass::NotSatisfied);
        assert_eq!(star_classify(&LinearFraction { lambda: 0.3 }).unwrap(), StarClass::NotSatisfied);
        for (alpha, beta) in [(0.0, 5.0), (0.25, -1.0), (0.49, 3.0)] {
            assert_eq!(star_classify(&HalfMinusPowerLog { alpha, beta }).unwrap(), StarClass::Satisfied);
        }
        let half = |beta| star_classify(&HalfMinusPowerLog { alpha: 0.5, beta }).unwrap();
        assert_eq!(half(-1.0), StarClass::Satisfied);
        assert_eq!(half(0.0), StarClass::UnknownDependsOnConstants);
        assert_eq!(half(1.0), StarClass::NotSatisfied);
        assert_eq!(star_classify(&Tabulated { values: vec![0, 0, 1] }).unwrap(), StarClass::UnknownDependsOnConstants);
        assert!(star_classify(&LinearFraction { lambda: 0.5 }).is_err());
        assert!(star_classify(&HalfMinusPowerLog { alpha: 1.0, beta: 0.0 }).is_err());
    }

    #[test]
    fn family_evaluation() {
        use DimensionFamily::*;
        assert_eq!(HalfFloorMinusConst { r: 1 }.eval(7), Some(2));
        assert_eq!(HalfFloorMinusConst { r: 5 }.eval(7), None);
        assert_eq!(HalfCeilPlusConst { r: 1 }.eval(7), Some(5));
        assert_eq!(ConstantDim { alpha: 3 }.eval(2), None);
        assert_eq!(LinearFraction { lambda: 0.25 }.eval(10), Some(2));
        assert_eq!(Tabulated { values: vec![0, 1] }.eval(1), Some(1));
        assert_eq!(Tabulated { values: vec![0, 1] }.eval(2), None);
        // ℓ(100) = 100^0.25 = 3.16..
        assert_eq!(HalfMinusPowerLog { alpha: 0.25, beta: 0.0 }.eval(100), Some(47));
        for n in 0..200 {
            let k = HalfFloorMinusConst { r: 2 }.eval(n);
            if let Some(k) = k {
                let gap = star_gap(n, k).unwrap();
                assert!(gap <= BigRational::new(BigInt::from(1 + 4 * 6), BigInt::from(4)));
            }
        }
    }

    #[test]
    fn truncation_limits() {
        let p = prec();
        let b = DimensionFamily::ConstantDim { alpha: 1 }.truncation_limit(2, p).unwrap().unwrap();
        assert!(close(&b, 2.0 * 0.28878809508660242, 1e-15));
        let one = DimensionFamily::HalfFloorMinusConst { r: 0 }.truncation_limit(2, p).unwrap().unwrap();
        assert!(one.contains(&BigRational::one()));
        assert!(DimensionFamily::Tabulated { values: vec![] }.truncation_limit(2, p).unwrap().is_none());
    }

    #[test]
    fn exact_gap_sign() {
        assert!(star_gap(4, 2).unwrap().is_zero());
        assert!(star_gap(5, 2).unwrap().is_positive());
    }
}
