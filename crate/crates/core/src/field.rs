//! Table-driven arithmetic in GF(p^h) for small prime powers.
//!
//! Elements are stored as indices in `[0, q)`. The index of an element is the
//! base-`p` integer formed by the coefficients of its polynomial
//! representative, least significant coefficient first, so `0` is zero, `1` is
//! one and `p` is the class of `x`. The modulus is the first monic irreducible
//! polynomial of degree `h` when the non-leading coefficients are read as a
//! base-`p` integer in increasing order (for GF(4) this is `x^2 + x + 1`,
//! for GF(8) `x^3 + x + 1`, for GF(9) `x^2 + 1`).

use std::fmt;

use crate::error::{Error, Result};

/// Default ceiling on the field order.
pub const DEFAULT_FIELD_CEILING: u64 = 256;

/// An element of a [`FieldSpec`], identified by its index.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElement(pub u8);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Arithmetic tables for GF(q), q = p^h.
///
/// Immutable after construction; share it freely between threads.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldSpec {
    p: u64,
    h: u32,
    q: usize,
    /// Coefficients `c_0..c_{h-1}` of the monic modulus `x^h + sum c_i x^i`.
    modulus: Vec<u64>,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    /// Row `e` holds `x -> x^(p^e)`.
    frob: Vec<u8>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("h", &self.h)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^h` with `p` prime, or returns `None`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && q % p != 0 {
        p += 1;
    }
    if q % p != 0 {
        // q itself is prime
        return Some((q, 1));
    }
    let mut rest = q;
    let mut h = 0;
    while rest % p == 0 {
        rest /= p;
        h += 1;
    }
    (rest == 1).then_some((p, h))
}

/// Builds GF(p^h) with the default order ceiling.
pub fn make_field(p: u64, h: u32) -> Result<FieldSpec> {
    FieldSpec::with_ceiling(p, h, DEFAULT_FIELD_CEILING)
}

// Polynomials over F_p as coefficient vectors, lowest degree first.
fn poly_rem(mut num: Vec<u64>, den: &[u64], p: u64) -> Vec<u64> {
    let dd = den.len() - 1;
    let lead_inv = mod_inv(den[dd], p);
    while num.len() > dd {
        let top = *num.last().unwrap();
        if top != 0 {
            let c = top * lead_inv % p;
            let shift = num.len() - 1 - dd;
            for (i, &d) in den.iter().enumerate() {
                num[shift + i] = (num[shift + i] + p - c * d % p) % p;
            }
        }
        num.pop();
    }
    num
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // p is prime and small
    (1..p).find(|&b| a * b % p == 1).expect("nonzero residue")
}

fn digits(mut index: u64, p: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0; len];
    for d in out.iter_mut() {
        *d = index % p;
        index /= p;
    }
    out
}

fn is_irreducible(poly: &[u64], p: u64) -> bool {
    let deg = poly.len() - 1;
    for d in 1..=deg / 2 {
        // every monic polynomial of degree d
        for tail in 0..p.pow(d as u32) {
            let mut f = digits(tail, p, d);
            f.push(1);
            if poly_rem(poly.to_vec(), &f, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn first_irreducible(p: u64, h: u32) -> Vec<u64> {
    if h == 1 {
        return vec![0];
    }
    (0..p.pow(h))
        .map(|tail| digits(tail, p, h as usize))
        .find(|tail| {
            let mut f = tail.clone();
            f.push(1);
            is_irreducible(&f, p)
        })
        .expect("an irreducible polynomial exists in every degree")
}

impl FieldSpec {
    /// Builds GF(p^h), refusing orders above `ceiling`.
    pub fn with_ceiling(p: u64, h: u32, ceiling: u64) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if h == 0 {
            return Err(Error::InvalidParameter("extension degree must be at least 1".into()));
        }
        let q = p
            .checked_pow(h)
            .filter(|&q| q <= ceiling.min(DEFAULT_FIELD_CEILING))
            .ok_or(Error::FieldTooLarge { p, h, ceiling: ceiling.min(DEFAULT_FIELD_CEILING) })?;
        let qs = q as usize;
        let hs = h as usize;
        let modulus = first_irreducible(p, h);

        let elems: Vec<Vec<u64>> = (0..q).map(|i| digits(i, p, hs)).collect();
        let encode = |c: &[u64]| c.iter().rev().fold(0u64, |acc, &d| acc * p + d) as u8;

        let mut add = vec![0u8; qs * qs];
        let mut mul = vec![0u8; qs * qs];
        let mut full_mod = modulus.clone();
        full_mod.push(1);
        for a in 0..qs {
            for b in 0..qs {
                let sum: Vec<u64> = (0..hs).map(|i| (elems[a][i] + elems[b][i]) % p).collect();
                add[a * qs + b] = encode(&sum);
                let mut prod = vec![0u64; 2 * hs - 1];
                for i in 0..hs {
                    for j in 0..hs {
                        prod[i + j] = (prod[i + j] + elems[a][i] * elems[b][j]) % p;
                    }
                }
                let mut r = if hs > 1 { poly_rem(prod, &full_mod, p) } else { prod };
                r.resize(hs, 0);
                mul[a * qs + b] = encode(&r);
            }
        }
        let neg = (0..qs)
            .map(|a| (0..qs).find(|&b| add[a * qs + b] == 0).unwrap() as u8)
            .collect();
        let mut inv = vec![0u8; qs];
        for a in 1..qs {
            inv[a] = (1..qs).find(|&b| mul[a * qs + b] == 1).unwrap() as u8;
        }
        let mut frob = vec![0u8; hs * qs];
        for a in 0..qs {
            let mut x = a as u8;
            for e in 0..hs {
                frob[e * qs + a] = x;
                // raise to the p-th power
                let base = x as usize;
                let mut y = 1u8;
                for _ in 0..p {
                    y = mul[y as usize * qs + base];
                }
                x = y;
            }
        }
        Ok(FieldSpec { p, h, q: qs, modulus, add, mul, neg, inv, frob })
    }

    /// Builds the field of order `q`, which must be a prime power.
    pub fn of_order(q: u64) -> Result<FieldSpec> {
        let (p, h) = prime_power(q).ok_or(Error::NotPrimePower(q))?;
        make_field(p, h)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Non-leading coefficients of the modulus, lowest degree first.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn element(&self, index: usize) -> Result<FieldElement> {
        if index < self.q {
            Ok(FieldElement(index as u8))
        } else {
            Err(Error::InvalidParameter(format!("element index {index} outside GF({})", self.q)))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(|i| FieldElement(i as u8))
    }

    /// Nonzero elements in index order.
    pub fn units(&self) -> Vec<FieldElement> {
        (1..self.q).map(|i| FieldElement(i as u8)).collect()
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.add[a.index() * self.q + b.index()])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.index()])
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.mul[a.index() * self.q + b.index()])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            Err(Error::InverseOfZero)
        } else {
            Ok(FieldElement(self.inv[a.index()]))
        }
    }

    /// `a^(p^e)` for `0 <= e < h`.
    pub fn frobenius(&self, e: u32, a: FieldElement) -> Result<FieldElement> {
        if e >= self.h {
            return Err(Error::FrobeniusExponent { e, h: self.h });
        }
        Ok(FieldElement(self.frob[e as usize * self.q + a.index()]))
    }

    pub fn pow(&self, a: FieldElement, mut exp: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Smallest-index generator of the multiplicative group.
    pub fn primitive_element(&self) -> FieldElement {
        let order = self.q as u64 - 1;
        let divisors: Vec<u64> = (1..order).filter(|d| order % d == 0).collect();
        self.units()
            .into_iter()
            .find(|&a| divisors.iter().all(|&d| self.pow(a, d) != FieldElement::ONE))
            .expect("multiplicative group of a finite field is cyclic")
    }

    // Raw table rows for the census inner loops.
    #[inline]
    pub(crate) fn mul_row(&self, a: FieldElement) -> &[u8] {
        &self.mul[a.index() * self.q..(a.index() + 1) * self.q]
    }

    #[inline]
    pub(crate) fn frob_row(&self, e: u32) -> &[u8] {
        &self.frob[e as usize * self.q..(e as usize + 1) * self.q]
    }

    #[inline]
    pub(crate) fn add_raw(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: u8) -> u8 {
        self.neg[a as usize]
    }

    #[inline]
    pub(crate) fn inv_raw(&self, a: u8) -> u8 {
        self.inv[a as usize]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(i: u8) -> FieldElement {
        FieldElement(i)
    }

    #[test]
    fn gf2_tables() {
        let f = make_field(2, 1).unwrap();
        assert_eq!(f.q(), 2);
        assert_eq!(f.add(el(1), el(1)), el(0));
        assert_eq!(f.mul(el(1), el(1)), el(1));
        assert_eq!(f.units(), vec![el(1)]);
    }

    #[test]
    fn gf4_on_x2_x_1() {
        let f = make_field(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1]);
        let w = el(2);
        // x^2 = x + 1
        assert_eq!(f.mul(w, w), el(3));
        assert_eq!(f.frobenius(1, w).unwrap(), el(3));
        assert_eq!(f.frobenius(1, f.frobenius(1, w).unwrap()).unwrap(), w);
        assert_eq!(f.units().len(), 3);
    }

    #[test]
    fn moduli_are_first_irreducibles() {
        assert_eq!(make_field(2, 3).unwrap().modulus(), &[1, 1, 0]);
        assert_eq!(make_field(3, 2).unwrap().modulus(), &[1, 0]);
    }

    #[test]
    fn gf3_inverse() {
        let f = make_field(3, 1).unwrap();
        assert_eq!(f.inv(el(2)).unwrap(), el(2));
        assert_eq!(f.units(), vec![el(1), el(2)]);
        assert!(matches!(f.inv(el(0)), Err(Error::InverseOfZero)));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(make_field(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(make_field(2, 9), Err(Error::FieldTooLarge { .. })));
        assert!(matches!(FieldSpec::with_ceiling(3, 2, 8), Err(Error::FieldTooLarge { .. })));
        assert!(matches!(FieldSpec::of_order(6), Err(Error::NotPrimePower(6))));
        assert!(make_field(2, 8).is_ok());
    }

    #[test]
    fn frobenius_range() {
        let f = make_field(3, 2).unwrap();
        assert!(matches!(f.frobenius(2, el(1)), Err(Error::FrobeniusExponent { e: 2, h: 2 })));
        for a in f.elements() {
            assert_eq!(f.frobenius(0, a).unwrap(), a);
        }
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(2), Some((2, 1)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(64), Some((2, 6)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
        assert_eq!(prime_power(97), Some((97, 1)));
    }

    #[test]
    fn primitive_elements() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 16] {
            let f = FieldSpec::of_order(q).unwrap();
            let g = f.primitive_element();
            let mut seen = std::collections::HashSet::new();
            let mut x = FieldElement::ONE;
            for _ in 0..q - 1 {
                seen.insert(x);
                x = f.mul(x, g);
            }
            assert_eq!(seen.len() as u64, q - 1);
        }
    }
}
