//! Exact q-binomials, projective-space sizes and group orders.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{prime_power, FieldSpec};
use crate::interval::Interval;

/// An exact nonnegative count.
pub type ExactCount = BigUint;

/// The three isometry groups acting on codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Permutation,
    Monomial,
    Semilinear,
}

impl GroupKind {
    pub const ALL: [GroupKind; 3] = [GroupKind::Permutation, GroupKind::Monomial, GroupKind::Semilinear];

    /// Short name used on the command line and in reports.
    pub fn short_name(self) -> &'static str {
        match self {
            GroupKind::Permutation => "perm",
            GroupKind::Monomial => "mono",
            GroupKind::Semilinear => "semi",
        }
    }

    pub fn from_short_name(s: &str) -> Option<GroupKind> {
        GroupKind::ALL.into_iter().find(|k| k.short_name() == s)
    }
}

fn validate_q(q: u64) -> Result<()> {
    prime_power(q).map(|_| ()).ok_or(Error::NotPrimePower(q))
}

fn qpow(q: u64, e: u64) -> BigUint {
    num_traits::pow(BigUint::from(q), e as usize)
}

/// The number of `k`-dimensional subspaces of `F_q^n`; zero when `k` lies
/// outside `[0, n]`.
pub fn qbinom(n: i64, k: i64, q: u64) -> Result<ExactCount> {
    validate_q(q)?;
    if n < 0 {
        return Err(Error::InvalidParameter(format!("n = {n} must be nonnegative")));
    }
    Ok(qbinom_unchecked(n as u64, k, q))
}

pub(crate) fn qbinom_unchecked(n: u64, k: i64, q: u64) -> BigUint {
    if k < 0 || k as u64 > n {
        return BigUint::zero();
    }
    let k = (k as u64).min(n - k as u64);
    // After step i the accumulator equals qbinom(n, i), so every division is exact.
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc *= qpow(q, n - i + 1) - 1u32;
        let den = qpow(q, i) - 1u32;
        debug_assert!((&acc % &den).is_zero());
        acc /= den;
    }
    acc
}

/// `S(n)`, the number of subspaces of `F_q^n` of any dimension.
pub fn sum_qbinom(n: i64, q: u64) -> Result<ExactCount> {
    validate_q(q)?;
    if n < 0 {
        return Err(Error::InvalidParameter(format!("n = {n} must be nonnegative")));
    }
    Ok(sum_qbinom_unchecked(n as u64, q))
}

pub(crate) fn sum_qbinom_unchecked(n: u64, q: u64) -> BigUint {
    (0..=n as i64).map(|k| qbinom_unchecked(n, k, q)).sum()
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

/// Order of the permutation, monomial or semilinear group on `F_q^n`.
pub fn group_order(kind: GroupKind, n: u64, field: &FieldSpec) -> Result<ExactCount> {
    if n == 0 {
        return Err(Error::InvalidParameter("group order needs n >= 1".into()));
    }
    Ok(group_order_unchecked(kind, n, field.q() as u64, field.h()))
}

pub(crate) fn group_order_unchecked(kind: GroupKind, n: u64, q: u64, h: u32) -> BigUint {
    let perm = factorial(n);
    match kind {
        GroupKind::Permutation => perm,
        GroupKind::Monomial => perm * num_traits::pow(BigUint::from(q - 1), n as usize),
        GroupKind::Semilinear => perm * num_traits::pow(BigUint::from(q - 1), n as usize) * h,
    }
}

/// Outcome of one bound check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundCheck {
    pub k: i64,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

impl BoundCheck {
    pub fn passed(&self) -> bool {
        self.lower_ok && self.upper_ok
    }
}

// `value * x <= bound` with `x` an interval endpoint, decided exactly.
fn times_endpoint_le(value: &BigUint, x_num: &BigInt, x_bits: u32, bound: &BigUint) -> bool {
    BigInt::from(value.clone()) * x_num <= BigInt::from(bound.clone()) << x_bits
}

/// Checks `q^{k(n-k)} <= [n k]_q <= q^{k(n-k)} / K_q` for every `0 <= k <= n`.
///
/// The lower bound is an integer comparison. The upper bound is certified:
/// it is accepted only when `[n k]_q * hi(K_q) <= q^{k(n-k)}`, which implies
/// the bound for every value in the enclosure.
pub fn check_qbinom_bounds(n: u64, q: u64, kq: &Interval) -> Result<Vec<BoundCheck>> {
    validate_q(q)?;
    Ok((0..=n)
        .map(|k| {
            let b = qbinom_unchecked(n, k as i64, q);
            let power = qpow(q, k * (n - k));
            BoundCheck {
                k: k as i64,
                lower_ok: power <= b,
                upper_ok: times_endpoint_le(&b, kq.hi_raw(), kq.bits(), &power),
            }
        })
        .collect())
}

/// Checks `q^{⌊n/2⌋⌈n/2⌉} <= S(n) < (θ₃(1/q) + 1) / K_q · q^{⌊n/2⌋⌈n/2⌉}`.
///
/// The strict upper bound is accepted when
/// `S(n) * hi(K_q) < (lo(θ₃) + 1) * q^{⌊n/2⌋⌈n/2⌉}`.
pub fn check_s_bounds(n: u64, q: u64, kq: &Interval, theta3: &Interval) -> Result<BoundCheck> {
    validate_q(q)?;
    let s = sum_qbinom_unchecked(n, q);
    let power = qpow(q, (n / 2) * n.div_ceil(2));
    let lower_ok = power <= s;
    let lhs = kq.clone() * Interval::from_biguint(&s, kq.bits());
    let rhs = (theta3.clone() + Interval::one(theta3.bits())) * Interval::from_biguint(&power, theta3.bits());
    Ok(BoundCheck { k: n as i64, lower_ok, upper_ok: lhs.certainly_lt(&rhs) })
}
