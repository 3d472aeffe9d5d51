//! Outward-rounded interval arithmetic on dyadic fixed-point numbers.
//!
//! An [`Interval`] is `[lo, hi] * 2^-bits` with arbitrary-precision integer
//! endpoints. Every operation rounds the lower endpoint toward minus infinity
//! and the upper endpoint toward plus infinity, so a true value enclosed by the
//! inputs stays enclosed by the output. Mixed-precision operands are aligned to
//! the finer of the two scales before combining.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: BigInt,
    hi: BigInt,
    bits: u32,
}

// floor(x / 2^s)
fn floor_shr(x: &BigInt, s: u32) -> BigInt {
    // BigInt's shift rounds toward negative infinity.
    x >> s
}

// ceil(x / 2^s)
fn ceil_shr(x: &BigInt, s: u32) -> BigInt {
    -((-x) >> s)
}

fn floor_div(x: &BigInt, y: &BigInt) -> BigInt {
    x.div_floor(y)
}

fn ceil_div(x: &BigInt, y: &BigInt) -> BigInt {
    -((-x).div_floor(y))
}

fn pow2(e: u32) -> BigInt {
    BigInt::one() << e
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", to_scientific(&self.lo(), 20), to_scientific(&self.hi(), 20))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(12);
        write!(f, "[{}, {}]", to_scientific(&self.lo(), digits), to_scientific(&self.hi(), digits))
    }
}

impl Interval {
    /// Builds an interval from raw scaled endpoints.
    ///
    /// # Panics
    /// If `lo > hi`.
    pub fn from_raw(lo: BigInt, hi: BigInt, bits: u32) -> Interval {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi, bits }
    }

    pub fn zero(bits: u32) -> Interval {
        Interval { lo: BigInt::zero(), hi: BigInt::zero(), bits }
    }

    pub fn one(bits: u32) -> Interval {
        Interval::from_int(1, bits)
    }

    pub fn from_int(v: i64, bits: u32) -> Interval {
        Interval::from_bigint(&BigInt::from(v), bits)
    }

    pub fn from_bigint(v: &BigInt, bits: u32) -> Interval {
        let x = v << bits;
        Interval { lo: x.clone(), hi: x, bits }
    }

    pub fn from_biguint(v: &BigUint, bits: u32) -> Interval {
        Interval::from_bigint(&BigInt::from(v.clone()), bits)
    }

    /// Smallest interval at this scale containing `num / den`.
    pub fn from_ratio(num: &BigInt, den: &BigInt, bits: u32) -> Interval {
        assert!(!den.is_zero(), "zero denominator");
        let scaled = num << bits;
        Interval { lo: floor_div(&scaled, den), hi: ceil_div(&scaled, den), bits }
    }

    pub fn from_rational(r: &BigRational, bits: u32) -> Interval {
        Interval::from_ratio(r.numer(), r.denom(), bits)
    }

    /// Encloses an `f64` exactly (every finite double is dyadic).
    pub fn from_f64(x: f64, bits: u32) -> Interval {
        let r = BigRational::from_float(x).expect("finite float");
        Interval::from_rational(&r, bits)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn lo_raw(&self) -> &BigInt {
        &self.lo
    }

    pub fn hi_raw(&self) -> &BigInt {
        &self.hi
    }

    fn scale(&self) -> BigInt {
        pow2(self.bits)
    }

    pub fn lo(&self) -> BigRational {
        BigRational::new(self.lo.clone(), self.scale())
    }

    pub fn hi(&self) -> BigRational {
        BigRational::new(self.hi.clone(), self.scale())
    }

    pub fn mid(&self) -> BigRational {
        BigRational::new(&self.lo + &self.hi, self.scale() << 1)
    }

    pub fn width(&self) -> BigRational {
        BigRational::new(&self.hi - &self.lo, self.scale())
    }

    pub fn lo_f64(&self) -> f64 {
        rational_to_f64(&self.lo())
    }

    pub fn hi_f64(&self) -> f64 {
        rational_to_f64(&self.hi())
    }

    pub fn mid_f64(&self) -> f64 {
        rational_to_f64(&self.mid())
    }

    pub fn width_f64(&self) -> f64 {
        rational_to_f64(&self.width())
    }

    /// Re-expresses the interval at another scale, rounding outward when
    /// precision is dropped.
    pub fn with_bits(&self, bits: u32) -> Interval {
        match bits.cmp(&self.bits) {
            Ordering::Equal => self.clone(),
            Ordering::Greater => {
                let s = bits - self.bits;
                Interval { lo: &self.lo << s, hi: &self.hi << s, bits }
            }
            Ordering::Less => {
                let s = self.bits - bits;
                Interval { lo: floor_shr(&self.lo, s), hi: ceil_shr(&self.hi, s), bits }
            }
        }
    }

    fn aligned(a: &Interval, b: &Interval) -> (Interval, Interval) {
        let bits = a.bits.max(b.bits);
        (a.with_bits(bits), b.with_bits(bits))
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        self.lo() <= *x && *x <= self.hi()
    }

    pub fn contains_f64(&self, x: f64) -> bool {
        BigRational::from_float(x).is_some_and(|r| self.contains(&r))
    }

    /// True when `self` lies inside `other`.
    pub fn is_subset_of(&self, other: &Interval) -> bool {
        let (a, b) = Interval::aligned(self, other);
        b.lo <= a.lo && a.hi <= b.hi
    }

    /// True when every point of `self` is below every point of `other`.
    pub fn certainly_lt(&self, other: &Interval) -> bool {
        let (a, b) = Interval::aligned(self, other);
        a.hi < b.lo
    }

    pub fn certainly_le(&self, other: &Interval) -> bool {
        let (a, b) = Interval::aligned(self, other);
        a.hi <= b.lo
    }

    pub fn certainly_positive(&self) -> bool {
        self.lo.is_positive()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// `hi <= bound` for a rational bound.
    pub fn hi_at_most(&self, bound: &BigRational) -> bool {
        self.hi() <= *bound
    }

    /// Convex hull of two intervals.
    pub fn hull(&self, other: &Interval) -> Interval {
        let (a, b) = Interval::aligned(self, other);
        Interval { lo: a.lo.min(b.lo), hi: a.hi.max(b.hi), bits: a.bits }
    }

    pub fn abs(&self) -> Interval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            -self
        } else {
            Interval { lo: BigInt::zero(), hi: (-&self.lo).max(self.hi.clone()), bits: self.bits }
        }
    }

    /// Componentwise maximum, the enclosure of `max(x, y)`.
    pub fn max(&self, other: &Interval) -> Interval {
        let (a, b) = Interval::aligned(self, other);
        Interval { lo: a.lo.max(b.lo), hi: a.hi.max(b.hi), bits: a.bits }
    }

    /// Widens the upper endpoint by `eps` (a nonnegative raw amount at this scale).
    pub fn widen_up(&self, eps: &BigInt) -> Interval {
        Interval { lo: self.lo.clone(), hi: &self.hi + eps, bits: self.bits }
    }

    pub fn recip(&self) -> Interval {
        Interval::one(self.bits) / self
    }

    pub fn powu(&self, mut e: u64) -> Interval {
        let mut base = self.clone();
        let mut acc = Interval::one(self.bits);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    pub fn square(&self) -> Interval {
        let a = self.abs();
        a.mul_nonneg(&a)
    }

    fn mul_nonneg(&self, other: &Interval) -> Interval {
        let (a, b) = Interval::aligned(self, other);
        let s = a.bits;
        Interval { lo: floor_shr(&(&a.lo * &b.lo), s), hi: ceil_shr(&(&a.hi * &b.hi), s), bits: s }
    }

    /// Principal `n`-th root of a nonnegative interval.
    ///
    /// # Panics
    /// If the interval has a negative upper endpoint or `n == 0`.
    pub fn nth_root(&self, n: u32) -> Interval {
        assert!(n > 0 && !self.hi.is_negative(), "nth_root of a negative interval");
        let shift = self.bits as usize * (n as usize - 1);
        let lo = if self.lo.is_positive() { (&self.lo << shift).nth_root(n) } else { BigInt::zero() };
        let hi_scaled = &self.hi << shift;
        let mut hi = hi_scaled.nth_root(n);
        if num_traits::pow(hi.clone(), n as usize) < hi_scaled {
            hi += 1;
        }
        Interval { lo, hi, bits: self.bits }
    }

    /// Natural logarithm of a positive interval.
    ///
    /// # Panics
    /// If the lower endpoint is not positive.
    pub fn ln(&self) -> Interval {
        assert!(self.lo.is_positive(), "ln of a non-positive interval");
        let lo = ln_point(&self.lo, self.bits);
        let hi = if self.hi == self.lo { lo.clone() } else { ln_point(&self.hi, self.bits) };
        Interval { lo: lo.lo, hi: hi.hi, bits: self.bits }
    }

    pub fn exp(&self) -> Interval {
        let lo = exp_point(&self.lo, self.bits);
        let hi = if self.hi == self.lo { lo.clone() } else { exp_point(&self.hi, self.bits) };
        Interval { lo: lo.lo, hi: hi.hi, bits: self.bits }
    }

    /// Enclosure of `ln 2` at `bits` fractional bits.
    pub fn ln2(bits: u32) -> Interval {
        let work = bits + 32;
        let third = Interval::from_ratio(&BigInt::one(), &BigInt::from(3), work);
        (atanh_small(&third) * Interval::from_int(2, work)).with_bits(bits)
    }

    /// Enclosure of `ln 10`.
    pub fn ln10(bits: u32) -> Interval {
        Interval::from_int(10, bits).ln()
    }
}

// atanh(t) for 0 <= t <= 1/3 by its Taylor series with a certified tail.
fn atanh_small(t: &Interval) -> Interval {
    let bits = t.bits;
    let t2 = t.square();
    let mut sum = t.clone();
    let mut power = t.clone();
    let mut j: i64 = 1;
    loop {
        power = &power * &t2;
        let term = &power / &Interval::from_int(2 * j + 1, bits);
        sum = &sum + &term;
        j += 1;
        // The remaining terms sum to at most (9/8) t^{2j+1} <= 2 * power * t^2.
        if power.hi <= BigInt::one() {
            let tail = (&power * &t2).hi * 2 + 2;
            return sum.widen_up(&tail);
        }
    }
}

fn ln_point(x: &BigInt, bits: u32) -> Interval {
    let len = x.bits() as i64;
    let exponent = len - 1 - bits as i64;
    let work = bits + 32 + (64 - exponent.unsigned_abs().leading_zeros());
    // x * 2^-bits = 2^exponent * y with y in [1, 2).
    let y = Interval::from_ratio(x, &pow2((len - 1) as u32), work);
    let one = Interval::one(work);
    let t = &(&y - &one) / &(&y + &one);
    let t = Interval { lo: t.lo.max(BigInt::zero()), hi: t.hi, bits: work };
    let ln_y = atanh_small(&t) * Interval::from_int(2, work);
    let total = &(Interval::ln2(work) * Interval::from_int(exponent, work)) + &ln_y;
    total.with_bits(bits)
}

fn exp_point(x: &BigInt, bits: u32) -> Interval {
    // Halve the argument until |y| <= 1/2, sum the Taylor series, square back.
    let magnitude = x.bits() as i64 - bits as i64;
    let halvings = (magnitude + 1).max(0) as u32;
    let work = bits + halvings + 40;
    let y = Interval::from_ratio(x, &pow2(bits + halvings), work);
    let mut sum = Interval::one(work);
    let mut term = Interval::one(work);
    let mut i = 1i64;
    loop {
        term = &(&term * &y) / &Interval::from_int(i, work);
        sum = &sum + &term;
        i += 1;
        // With |y| <= 1/2 the remainder is at most twice the next term.
        if term.abs().hi <= BigInt::one() {
            let next = (&term * &y).abs().hi * 2 + 2;
            sum = Interval { lo: &sum.lo - &next, hi: &sum.hi + &next, bits: work };
            break;
        }
    }
    let mut r = Interval { lo: sum.lo.max(BigInt::zero()), hi: sum.hi, bits: work };
    for _ in 0..halvings {
        r = r.square();
    }
    r.with_bits(bits)
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo, bits: self.bits }
    }
}

impl Neg for Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        -&self
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        let (a, b) = Interval::aligned(self, rhs);
        Interval { lo: a.lo + b.lo, hi: a.hi + b.hi, bits: a.bits }
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        let (a, b) = Interval::aligned(self, rhs);
        Interval { lo: a.lo - b.hi, hi: a.hi - b.lo, bits: a.bits }
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        let (a, b) = Interval::aligned(self, rhs);
        let s = a.bits;
        if !a.lo.is_negative() && !b.lo.is_negative() {
            return a.mul_nonneg(&b);
        }
        let products = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
        let min = products.iter().min().unwrap();
        let max = products.iter().max().unwrap();
        Interval { lo: floor_shr(min, s), hi: ceil_shr(max, s), bits: s }
    }
}

impl Div for &Interval {
    type Output = Interval;
    /// # Panics
    /// If the divisor contains zero.
    fn div(self, rhs: &Interval) -> Interval {
        let (a, b) = Interval::aligned(self, rhs);
        assert!(!b.contains_zero(), "division by an interval containing zero");
        let s = a.bits;
        let (alo, ahi) = (&a.lo << s, &a.hi << s);
        let lows = [floor_div(&alo, &b.lo), floor_div(&alo, &b.hi), floor_div(&ahi, &b.lo), floor_div(&ahi, &b.hi)];
        let highs = [ceil_div(&alo, &b.lo), ceil_div(&alo, &b.hi), ceil_div(&ahi, &b.lo), ceil_div(&ahi, &b.hi)];
        Interval { lo: lows.into_iter().min().unwrap(), hi: highs.into_iter().max().unwrap(), bits: s }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for Interval {
            type Output = Interval;
            fn $m(self, rhs: Interval) -> Interval { (&self).$m(&rhs) }
        }
        impl $tr<&Interval> for Interval {
            type Output = Interval;
            fn $m(self, rhs: &Interval) -> Interval { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul, Div::div);

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back through the exponent for values out of the direct range.
        let n = r.numer().bits() as i64;
        let d = r.denom().bits() as i64;
        if n - d > 1024 {
            f64::INFINITY.copysign(if r.is_negative() { -1.0 } else { 1.0 })
        } else {
            0.0
        }
    })
}

fn pow10(e: u32) -> BigInt {
    num_traits::pow(BigInt::from(10), e as usize)
}

/// Rounding direction for decimal renderings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rounding {
    /// Half away from zero.
    Nearest,
    /// Toward minus infinity.
    Down,
    /// Toward plus infinity.
    Up,
}

// Rounds the magnitude `a` of a value with the given sign; directed modes
// refer to the signed value.
fn round_magnitude(a: &BigRational, mode: Rounding, negative: bool) -> BigInt {
    match mode {
        Rounding::Nearest => {
            let twice = a * BigRational::from_integer(BigInt::from(2));
            let num = twice.numer() + twice.denom();
            num.div_floor(&(twice.denom() * 2))
        }
        Rounding::Down if !negative => a.floor().to_integer(),
        Rounding::Up if negative => a.floor().to_integer(),
        _ => a.ceil().to_integer(),
    }
}

fn p10(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(pow10(e as u32))
    } else {
        BigRational::new(BigInt::one(), pow10((-e) as u32))
    }
}

// Decimal exponent `e` with `10^e <= a < 10^{e+1}`, for `a > 0`.
fn decimal_exponent(a: &BigRational) -> i64 {
    let est = (a.numer().bits() as f64 - a.denom().bits() as f64) * std::f64::consts::LOG10_2;
    let mut e = est.floor() as i64;
    while a >= &p10(e + 1) {
        e += 1;
    }
    while a < &p10(e) {
        e -= 1;
    }
    e
}

/// Decimal scientific rendering with `digits` significant digits, e.g.
/// `4.697180e-1`, rounding half away from zero.
pub fn to_scientific(r: &BigRational, digits: usize) -> String {
    to_scientific_rounded(r, digits, Rounding::Nearest)
}

pub fn to_scientific_rounded(r: &BigRational, digits: usize, mode: Rounding) -> String {
    let digits = digits.max(1);
    if r.is_zero() {
        return format!("{}e0", fixed_zero(digits));
    }
    let negative = r.is_negative();
    let a = r.abs();
    let mut e = decimal_exponent(&a);
    let mut m = round_magnitude(&(&a * p10(digits as i64 - 1 - e)), mode, negative);
    if m >= pow10(digits as u32) {
        m = round_magnitude(&BigRational::new(m, BigInt::from(10)), mode, negative);
        e += 1;
    }
    let s = m.to_string();
    let mantissa = if s.len() > 1 { format!("{}.{}", &s[..1], &s[1..]) } else { s };
    let sign = if negative { "-" } else { "" };
    format!("{sign}{mantissa}e{e}")
}

fn fixed_zero(digits: usize) -> String {
    if digits > 1 {
        format!("0.{}", "0".repeat(digits - 1))
    } else {
        "0".into()
    }
}

/// Decimal rendering with exactly `frac_digits` digits after the point,
/// rounding half away from zero.
pub fn to_fixed(r: &BigRational, frac_digits: usize) -> String {
    to_fixed_rounded(r, frac_digits, Rounding::Nearest)
}

pub fn to_fixed_rounded(r: &BigRational, frac_digits: usize, mode: Rounding) -> String {
    let negative = r.is_negative();
    let m = round_magnitude(&(r.abs() * p10(frac_digits as i64)), mode, negative);
    let mut s = m.to_string();
    if frac_digits > 0 {
        if s.len() <= frac_digits {
            s = format!("{}{}", "0".repeat(frac_digits + 1 - s.len()), s);
        }
        s.insert(s.len() - frac_digits, '.');
    }
    if negative && m.sign() != Sign::NoSign {
        format!("-{s}")
    } else {
        s
    }
}

/// `digits` significant digits in positional notation when the exponent
/// lies in `[-6, 21)`, scientific notation otherwise.
pub fn to_decimal(r: &BigRational, digits: usize, mode: Rounding) -> String {
    let digits = digits.max(1);
    if r.is_zero() {
        return "0".into();
    }
    let e = decimal_exponent(&r.abs());
    if !(-6..21).contains(&e) {
        return to_scientific_rounded(r, digits, mode);
    }
    let frac = (digits as i64 - 1 - e).max(0) as usize;
    to_fixed_rounded(r, frac, mode)
}

/// Outward decimal renderings of the two endpoints.
pub fn render_bounds(iv: &Interval, digits: usize) -> (String, String) {
    (to_decimal(&iv.lo(), digits, Rounding::Down), to_decimal(&iv.hi(), digits, Rounding::Up))
}
