//! Permutation, monomial and semilinear transformations of `F_q^n`.
//!
//! An element `(perm, scale, frob)` maps `x` to `y` with
//! `y[perm[i]] = scale[i] * x[i]^(p^frob)`: the field automorphism is applied
//! entrywise first, then the coordinate scaling, then the permutation.

use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::combinatorics::{factorial, GroupKind};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::subspace::Subspace;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    kind: GroupKind,
    perm: Vec<usize>,
    scale: Vec<FieldElement>,
    frob: u32,
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}

impl GroupElement {
    pub fn identity(kind: GroupKind, n: usize) -> GroupElement {
        GroupElement { kind, perm: (0..n).collect(), scale: vec![FieldElement::ONE; n], frob: 0 }
    }

    /// Validates and builds an element of the group of the given kind.
    pub fn new(
        kind: GroupKind,
        field: &FieldSpec,
        perm: Vec<usize>,
        scale: Vec<FieldElement>,
        frob: u32,
    ) -> Result<GroupElement> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParameter(format!("{perm:?} is not a permutation")));
            }
        }
        if scale.len() != n {
            return Err(Error::InvalidParameter("scale vector length differs from n".into()));
        }
        if scale.iter().any(|s| s.is_zero() || s.index() >= field.q()) {
            return Err(Error::InvalidParameter("scale entries must be units".into()));
        }
        if frob >= field.h() {
            return Err(Error::FrobeniusExponent { e: frob, h: field.h() });
        }
        let all_ones = scale.iter().all(|&s| s == FieldElement::ONE);
        match kind {
            GroupKind::Permutation if !all_ones || frob != 0 => {
                Err(Error::InvalidParameter("permutation elements carry no scaling or automorphism".into()))
            }
            GroupKind::Monomial if frob != 0 => {
                Err(Error::InvalidParameter("monomial elements carry no automorphism".into()))
            }
            _ => Ok(GroupElement { kind, perm, scale, frob }),
        }
    }

    /// A coordinate permutation, lifted into a group of the given kind.
    pub fn permutation(kind: GroupKind, perm: Vec<usize>) -> Result<GroupElement> {
        let n = perm.len();
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        if sorted != (0..n).collect::<Vec<_>>() {
            return Err(Error::InvalidParameter(format!("{perm:?} is not a permutation")));
        }
        Ok(GroupElement { kind, perm, scale: vec![FieldElement::ONE; n], frob: 0 })
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn scale(&self) -> &[FieldElement] {
        &self.scale
    }

    pub fn frob_exp(&self) -> u32 {
        self.frob
    }

    /// Whether this is a scalar matrix `aI` (acts trivially on subspaces).
    pub fn is_scalar(&self) -> bool {
        self.frob == 0
            && self.perm.iter().enumerate().all(|(i, &p)| i == p)
            && self.scale.windows(2).all(|w| w[0] == w[1])
    }

    pub fn descriptor(&self) -> String {
        let perm: Vec<String> = self.perm.iter().map(|p| p.to_string()).collect();
        match self.kind {
            GroupKind::Permutation => format!("perm=[{}]", perm.join(" ")),
            _ => {
                let scale: Vec<String> = self.scale.iter().map(|s| s.to_string()).collect();
                let base = format!("perm=[{}] scale=[{}]", perm.join(" "), scale.join(" "));
                if self.kind == GroupKind::Semilinear {
                    format!("{base} frob={}", self.frob)
                } else {
                    base
                }
            }
        }
    }

    pub fn apply_vector(&self, field: &FieldSpec, x: &[FieldElement]) -> Vec<FieldElement> {
        let mut y = vec![FieldElement::ZERO; x.len()];
        for (i, &xi) in x.iter().enumerate() {
            let fx = field.frobenius(self.frob, xi).expect("validated exponent");
            y[self.perm[i]] = field.mul(self.scale[i], fx);
        }
        y
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, field: &FieldSpec, other: &GroupElement) -> GroupElement {
        let n = self.n();
        let h = field.h();
        let mut perm = vec![0; n];
        let mut scale = vec![FieldElement::ONE; n];
        for i in 0..n {
            let mid = other.perm[i];
            perm[i] = self.perm[mid];
            let twisted = field.frobenius(self.frob, other.scale[i]).expect("validated exponent");
            scale[i] = field.mul(self.scale[mid], twisted);
        }
        GroupElement { kind: self.kind.max(other.kind), perm, scale, frob: (self.frob + other.frob) % h }
    }

    pub fn inverse(&self, field: &FieldSpec) -> GroupElement {
        let n = self.n();
        let h = field.h();
        let back = (h - self.frob) % h;
        let mut perm = vec![0; n];
        let mut scale = vec![FieldElement::ONE; n];
        for i in 0..n {
            let j = self.perm[i];
            perm[j] = i;
            let inv = field.inv(self.scale[i]).expect("scale entries are units");
            scale[j] = field.frobenius(back, inv).expect("in range");
        }
        GroupElement { kind: self.kind, perm, scale, frob: back }
    }

    pub(crate) fn compile(&self, field: &FieldSpec) -> CompiledElement {
        let q = field.q();
        let frob = field.frob_row(self.frob);
        let mut maps = vec![0u8; self.n() * q];
        for (i, &s) in self.scale.iter().enumerate() {
            let row = field.mul_row(s);
            for x in 0..q {
                maps[i * q + x] = row[frob[x] as usize];
            }
        }
        CompiledElement { dest: self.perm.clone(), maps, q }
    }
}

/// Lookup-table form of a group element for the census inner loops.
pub(crate) struct CompiledElement {
    dest: Vec<usize>,
    maps: Vec<u8>,
    q: usize,
}

impl CompiledElement {
    #[inline]
    pub(crate) fn apply_raw(&self, x: &[u8], y: &mut [u8]) {
        for (i, &xi) in x.iter().enumerate() {
            y[self.dest[i]] = self.maps[i * self.q + xi as usize];
        }
    }
}

/// Image of a subspace under a group element, re-canonicalized.
pub fn act(field: &FieldSpec, g: &GroupElement, v: &Subspace) -> Subspace {
    let compiled = g.compile(field);
    act_compiled(field, &compiled, v)
}

pub(crate) fn act_compiled(field: &FieldSpec, g: &CompiledElement, v: &Subspace) -> Subspace {
    let n = v.ambient_dim();
    let k = v.dim();
    let mut data = vec![0u8; k * n];
    for (src, dst) in v.raw_rows().chunks(n.max(1)).zip(data.chunks_mut(n.max(1))) {
        g.apply_raw(src, dst);
    }
    Subspace::from_matrix_raw(field, data, k, n)
}

/// Number of elements of the group, if it fits in a `u64`.
pub fn group_size(kind: GroupKind, field: &FieldSpec, n: usize) -> Option<u64> {
    let units = field.q() as u64 - 1;
    let mut size = factorial(n as u64).to_u64()?;
    if kind != GroupKind::Permutation {
        size = size.checked_mul(units.checked_pow(n as u32)?)?;
    }
    if kind == GroupKind::Semilinear {
        size = size.checked_mul(field.h() as u64)?;
    }
    Some(size)
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

/// Every element of the group in a fixed order: permutations outermost,
/// then scale vectors (base `q-1` counting over unit indices, coordinate 0
/// fastest), then Frobenius exponents.
pub fn elements(kind: GroupKind, field: &FieldSpec, n: usize) -> impl Iterator<Item = GroupElement> + '_ {
    let scales = scale_vectors(kind, field, n, false);
    let frobs = frob_range(kind, field);
    let (lo, hi) = (frobs.start, frobs.end);
    permutations(n).into_iter().flat_map(move |perm| {
        let scales = scales.clone();
        scales.into_iter().flat_map(move |scale| {
            let perm = perm.clone();
            (lo..hi).map(move |frob| GroupElement { kind, perm: perm.clone(), scale: scale.clone(), frob })
        })
    })
}

pub(crate) fn frob_range(kind: GroupKind, field: &FieldSpec) -> std::ops::Range<u32> {
    if kind == GroupKind::Semilinear {
        0..field.h()
    } else {
        0..1
    }
}

/// Scale vectors for the kind; with `normalized`, only those whose first
/// entry is one (one representative per coset of the scalar subgroup).
pub(crate) fn scale_vectors(kind: GroupKind, field: &FieldSpec, n: usize, normalized: bool) -> Vec<Vec<FieldElement>> {
    if kind == GroupKind::Permutation {
        return vec![vec![FieldElement::ONE; n]];
    }
    let units = field.units();
    let free = if normalized && n > 0 { n - 1 } else { n };
    let total = units.len().pow(free as u32);
    (0..total)
        .map(|mut idx| {
            let mut v = Vec::with_capacity(n);
            if normalized && n > 0 {
                v.push(FieldElement::ONE);
            }
            for _ in 0..free {
                v.push(units[idx % units.len()]);
                idx /= units.len();
            }
            v
        })
        .collect()
}

/// Generators of the group: adjacent transpositions, a scaling of the first
/// coordinate by a primitive element, and the Frobenius automorphism.
pub fn generators(kind: GroupKind, field: &FieldSpec, n: usize) -> Vec<GroupElement> {
    let mut gens = Vec::new();
    for i in 0..n.saturating_sub(1) {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(i, i + 1);
        gens.push(GroupElement { kind, perm, scale: vec![FieldElement::ONE; n], frob: 0 });
    }
    if kind != GroupKind::Permutation && field.q() > 2 && n > 0 {
        let mut scale = vec![FieldElement::ONE; n];
        scale[0] = field.primitive_element();
        gens.push(GroupElement { kind, perm: (0..n).collect(), scale, frob: 0 });
    }
    if kind == GroupKind::Semilinear && field.h() > 1 {
        gens.push(GroupElement { kind, perm: (0..n).collect(), scale: vec![FieldElement::ONE; n], frob: 1 });
    }
    gens
}

/// A conjugacy class of `S_n`, described by its cycle type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleClass {
    /// Cycle lengths in non-increasing order.
    pub cycle_type: Vec<usize>,
    pub size: BigUint,
    pub representative: Vec<usize>,
}

impl CycleClass {
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.cycle_type.iter().map(|c| c.to_string()).collect();
        format!("cycles=({})", parts.join(","))
    }
}

fn partitions(n: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if n == 0 {
        out.push(prefix.clone());
        return;
    }
    for part in (1..=max.min(n)).rev() {
        prefix.push(part);
        partitions(n - part, part, prefix, out);
        prefix.pop();
    }
}

/// Conjugacy classes of `S_n` with their sizes `n! / prod_i (i^{m_i} m_i!)`.
pub fn cycle_classes(n: usize) -> Vec<CycleClass> {
    let mut types = Vec::new();
    partitions(n, n, &mut Vec::new(), &mut types);
    types
        .into_iter()
        .map(|cycle_type| {
            let mut representative = vec![0; n];
            let mut start = 0;
            for &len in &cycle_type {
                for j in 0..len {
                    representative[start + j] = start + (j + 1) % len;
                }
                start += len;
            }
            let mut denom = BigUint::from(1u32);
            for len in 1..=n {
                let mult = cycle_type.iter().filter(|&&c| c == len).count();
                denom *= num_traits::pow(BigUint::from(len), mult) * factorial(mult as u64);
            }
            CycleClass { size: factorial(n as u64) / denom, cycle_type, representative }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::{canonicalize, enumerate_grassmannian};
    use proptest::prelude::*;

    fn el(i: u8) -> FieldElement {
        FieldElement(i)
    }

    fn line(f: &FieldSpec, v: &[u8]) -> Subspace {
        canonicalize(f, v.len(), &[v.iter().map(|&x| el(x)).collect()]).unwrap()
    }

    #[test]
    fn action_examples() {
        let f2 = FieldSpec::of_order(2).unwrap();
        let v = line(&f2, &[1, 0]);
        assert_eq!(act(&f2, &GroupElement::identity(GroupKind::Permutation, 2), &v), v);
        let swap = GroupElement::permutation(GroupKind::Permutation, vec![1, 0]).unwrap();
        assert_eq!(act(&f2, &swap, &v), line(&f2, &[0, 1]));

        let f3 = FieldSpec::of_order(3).unwrap();
        let g = GroupElement::new(GroupKind::Monomial, &f3, vec![0, 1], vec![el(1), el(2)], 0).unwrap();
        assert_eq!(act(&f3, &g, &line(&f3, &[1, 1])), line(&f3, &[1, 2]));
    }

    #[test]
    fn semilinear_action_applies_frobenius_first() {
        let f4 = FieldSpec::of_order(4).unwrap();
        // <(1, w)> maps to <(1, w^2)> = <(1, w+1)> under Frobenius
        let g = GroupElement::new(GroupKind::Semilinear, &f4, vec![0, 1], vec![el(1), el(1)], 1).unwrap();
        assert_eq!(act(&f4, &g, &line(&f4, &[1, 2])), line(&f4, &[1, 3]));
    }

    #[test]
    fn validation() {
        let f3 = FieldSpec::of_order(3).unwrap();
        assert!(GroupElement::new(GroupKind::Monomial, &f3, vec![0, 0], vec![el(1), el(1)], 0).is_err());
        assert!(GroupElement::new(GroupKind::Monomial, &f3, vec![0, 1], vec![el(0), el(1)], 0).is_err());
        assert!(GroupElement::new(GroupKind::Permutation, &f3, vec![0, 1], vec![el(2), el(1)], 0).is_err());
        assert!(GroupElement::new(GroupKind::Semilinear, &f3, vec![0, 1], vec![el(1), el(1)], 1).is_err());
    }

    #[test]
    fn element_counts_match_group_orders() {
        for q in [2u64, 3, 4] {
            let f = FieldSpec::of_order(q).unwrap();
            for kind in GroupKind::ALL {
                for n in 1..=3 {
                    let all: Vec<_> = elements(kind, &f, n).collect();
                    assert_eq!(all.len() as u64, group_size(kind, &f, n).unwrap());
                    let distinct: std::collections::HashSet<_> = all.iter().collect();
                    assert_eq!(distinct.len(), all.len());
                }
            }
        }
    }

    #[test]
    fn cycle_classes_partition_sn() {
        for n in 1..=7 {
            let classes = cycle_classes(n);
            let total: BigUint = classes.iter().map(|c| c.size.clone()).sum();
            assert_eq!(total, factorial(n as u64));
        }
        let c3 = cycle_classes(3);
        let sizes: Vec<u32> = c3.iter().map(|c| c.size.to_u32().unwrap()).collect();
        assert_eq!(sizes, vec![2, 3, 1]);
    }

    #[test]
    fn generators_generate() {
        // closure of the generators has the full group order
        for q in [2u64, 3, 4] {
            let f = FieldSpec::of_order(q).unwrap();
            for kind in GroupKind::ALL {
                let n = 3;
                let gens = generators(kind, &f, n);
                let mut seen = std::collections::HashSet::new();
                let mut frontier = vec![GroupElement::identity(kind, n)];
                seen.insert(frontier[0].clone());
                while let Some(g) = frontier.pop() {
                    for s in &gens {
                        let h = s.compose(&f, &g);
                        if seen.insert(h.clone()) {
                            frontier.push(h);
                        }
                    }
                }
                assert_eq!(seen.len() as u64, group_size(kind, &f, n).unwrap(), "{kind:?} q={q}");
            }
        }
    }

    fn arb_element(f: &FieldSpec, n: usize) -> impl Strategy<Value = GroupElement> {
        let q = f.q();
        let h = f.h();
        (Just((0..n).collect::<Vec<_>>()).prop_shuffle(), prop::collection::vec(1..q, n), 0..h).prop_map(
            move |(perm, scale, frob)| GroupElement {
                kind: GroupKind::Semilinear,
                perm,
                scale: scale.into_iter().map(|s| FieldElement(s as u8)).collect(),
                frob,
            },
        )
    }

    proptest! {
        #[test]
        fn action_is_a_group_action(
            (g, g2, idx) in arb_element(&FieldSpec::of_order(4).unwrap(), 4)
                .prop_flat_map(|g| (Just(g), arb_element(&FieldSpec::of_order(4).unwrap(), 4), 0usize..357))
        ) {
            let f = FieldSpec::of_order(4).unwrap();
            let v = enumerate_grassmannian(&f, 4, 2).unwrap().nth(idx).unwrap();
            let back = act(&f, &g, &act(&f, &g.inverse(&f), &v));
            prop_assert_eq!(&back, &v);
            let composed = act(&f, &g.compose(&f, &g2), &v);
            let stepwise = act(&f, &g, &act(&f, &g2, &v));
            prop_assert_eq!(composed, stepwise);
            let x: Vec<FieldElement> = v.basis()[0].clone();
            prop_assert_eq!(g.compose(&f, &g2).apply_vector(&f, &x), g.apply_vector(&f, &g2.apply_vector(&f, &x)));
        }
    }
}
