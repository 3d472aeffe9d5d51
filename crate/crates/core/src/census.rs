//! Exact counts of equivalence classes of codes under the permutation,
//! monomial and semilinear groups.
//!
//! Two independent routes are provided. [`census_burnside`] averages fixed
//! point counts over the group; [`census_orbits`] partitions the
//! Grassmannian into orbits by closing under a generating set.
//!
//! The Burnside sum over `S_n` runs over cycle types, weighting each
//! representative by its class size. For monomial and semilinear groups it
//! runs over every element, except that the elements `aI·g` (`a` a nonzero
//! scalar) share one fixed-point count, so one representative per coset of
//! the scalar subgroup is evaluated and counted `q-1` times.
//!
//! [`fix_sum_excess`] subtracts the contribution of the scalar matrices for
//! both the monomial and the semilinear kind. The kernel of the semilinear
//! action on a Grassmannian can be larger than the scalars; taking only the
//! scalars is a convention of this crate.

use std::collections::{BTreeMap, HashMap};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::{group_order_unchecked, GroupKind};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::group::{
    act_compiled, cycle_classes, frob_range, generators, permutations, scale_vectors, CompiledElement, GroupElement,
};
use crate::subspace::{
    enumerate_grassmannian_with_ceiling, grassmannian_size, reduce_against, Subspace, DEFAULT_ENUMERATION_CEILING,
};

/// Default ceiling on `|G| * |X|` element-actions for one census.
pub const DEFAULT_WORK_CEILING: u64 = 1_000_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CensusConfig {
    pub enumeration_ceiling: u64,
    pub work_ceiling: u64,
    pub threads: usize,
    /// Keep the per-element fixed-point counts in the result.
    pub keep_profile: bool,
}

impl Default for CensusConfig {
    fn default() -> Self {
        CensusConfig {
            enumeration_ceiling: DEFAULT_ENUMERATION_CEILING,
            work_ceiling: DEFAULT_WORK_CEILING,
            threads: 1,
            keep_profile: false,
        }
    }
}

impl CensusConfig {
    pub fn with_threads(threads: usize) -> CensusConfig {
        CensusConfig { threads, ..CensusConfig::default() }
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        if self.threads == 0 {
            return Err(Error::InvalidParameter("thread count must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Burnside,
    Orbits,
    Both,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Burnside => "burnside",
            Method::Orbits => "orbits",
            Method::Both => "both",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CensusResult {
    pub kind: GroupKind,
    pub n: usize,
    /// `None` for the whole projective space.
    pub k: Option<usize>,
    pub q: usize,
    pub count: BigUint,
    pub method: Method,
    pub burnside_count: Option<BigUint>,
    pub orbit_count: Option<BigUint>,
    pub group_order: BigUint,
    /// Sum of fixed-point counts over the whole group (Burnside only).
    pub fix_sum: Option<BigUint>,
    /// Fixed-point count per element (per cycle type for permutations).
    pub fix_profile: Option<BTreeMap<String, u64>>,
    pub elapsed: Duration,
}

impl CensusResult {
    /// Whether both methods agree; `None` unless both were run.
    pub fn agreement(&self) -> Option<bool> {
        match (&self.burnside_count, &self.orbit_count) {
            (Some(a), Some(b)) => Some(a == b),
            _ => None,
        }
    }
}

/// A Grassmannian stored flat for fast fixed-point scans.
pub(crate) struct SubspaceSet {
    n: usize,
    k: usize,
    len: usize,
    rows: Vec<u8>,
    pivots: Vec<usize>,
}

impl SubspaceSet {
    fn build(field: &FieldSpec, n: usize, k: usize, ceiling: u64) -> Result<SubspaceSet> {
        let iter = enumerate_grassmannian_with_ceiling(field, n, k, ceiling)?;
        let len = iter.len();
        let mut rows = Vec::with_capacity(len * n * k);
        let mut pivots = Vec::with_capacity(len * k);
        for s in iter {
            rows.extend_from_slice(s.raw_rows());
            pivots.extend(s.pivots());
        }
        Ok(SubspaceSet { n, k, len, rows, pivots })
    }

    fn subspace(&self, i: usize) -> Subspace {
        let w = self.n * self.k;
        Subspace::from_rref_unchecked(self.n, self.k, self.rows[i * w..(i + 1) * w].to_vec())
    }

    /// Number of members fixed by `g`.
    fn fixed_by(&self, field: &FieldSpec, g: &CompiledElement) -> u64 {
        let (n, k) = (self.n, self.k);
        if k == 0 || k == n {
            return self.len as u64;
        }
        let w = n * k;
        let mut y = vec![0u8; n];
        let mut fixed = 0;
        'subspaces: for i in 0..self.len {
            let rows = &self.rows[i * w..(i + 1) * w];
            let pivots = &self.pivots[i * k..(i + 1) * k];
            for r in 0..k {
                g.apply_raw(&rows[r * n..(r + 1) * n], &mut y);
                reduce_against(field, &mut y, rows, pivots, n);
                if y.iter().any(|&x| x != 0) {
                    continue 'subspaces;
                }
            }
            fixed += 1;
        }
        fixed
    }
}

fn check_work(kind: GroupKind, field: &FieldSpec, n: usize, points: u64, ceiling: u64) -> Result<()> {
    let order = group_order_unchecked(kind, n as u64, field.q() as u64, field.h());
    let work = order * points;
    if work > BigUint::from(ceiling) {
        return Err(Error::WorkCeiling { work: work.to_string(), ceiling });
    }
    Ok(())
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidParameter("code length n must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn build_sets(field: &FieldSpec, n: usize, dims: &[usize], config: &CensusConfig) -> Result<Vec<SubspaceSet>> {
    let mut total = 0u64;
    for &k in dims {
        total = total.saturating_add(grassmannian_size(field.q(), n, k, config.enumeration_ceiling)?);
    }
    if total > config.enumeration_ceiling {
        return Err(Error::EnumerationCeiling { count: total.to_string(), ceiling: config.enumeration_ceiling });
    }
    dims.iter().map(|&k| SubspaceSet::build(field, n, k, config.enumeration_ceiling)).collect()
}

struct BurnsideSum {
    total: BigUint,
    profile: Option<BTreeMap<String, u64>>,
}

fn fixed_in_sets(field: &FieldSpec, sets: &[SubspaceSet], g: &CompiledElement) -> u64 {
    sets.iter().map(|s| s.fixed_by(field, g)).sum()
}

fn burnside_sum(
    kind: GroupKind,
    field: &FieldSpec,
    n: usize,
    sets: &[SubspaceSet],
    config: &CensusConfig,
) -> Result<BurnsideSum> {
    let pool = config.pool()?;
    if kind == GroupKind::Permutation {
        let classes = cycle_classes(n);
        let fixed: Vec<u64> = pool.install(|| {
            classes
                .par_iter()
                .map(|c| {
                    let g = GroupElement::permutation(kind, c.representative.clone()).expect("valid permutation");
                    fixed_in_sets(field, sets, &g.compile(field))
                })
                .collect()
        });
        let total = classes.iter().zip(&fixed).map(|(c, &f)| &c.size * f).sum();
        let profile =
            config.keep_profile.then(|| classes.iter().zip(&fixed).map(|(c, &f)| (c.label(), f)).collect());
        return Ok(BurnsideSum { total, profile });
    }

    // One representative per scalar coset: scale vectors with first entry 1.
    let perms = permutations(n);
    let scales = scale_vectors(kind, field, n, true);
    let frobs: Vec<u32> = frob_range(kind, field).collect();
    let per_perm = scales.len() * frobs.len();
    let reps = perms.len() * per_perm;
    let decode = |idx: usize| {
        let perm = &perms[idx / per_perm];
        let rest = idx % per_perm;
        let scale = &scales[rest / frobs.len()];
        let frob = frobs[rest % frobs.len()];
        GroupElement::new(kind, field, perm.clone(), scale.clone(), frob).expect("valid element")
    };
    let fixed: Vec<u64> = pool.install(|| {
        (0..reps).into_par_iter().map(|idx| fixed_in_sets(field, sets, &decode(idx).compile(field))).collect()
    });
    let coset = field.q() as u64 - 1;
    let rep_sum: u64 = fixed.iter().sum();
    let total = BigUint::from(rep_sum) * coset;
    let profile = config.keep_profile.then(|| {
        let mut map = BTreeMap::new();
        for (idx, &f) in fixed.iter().enumerate() {
            let rep = decode(idx);
            for a in field.units() {
                let scale: Vec<FieldElement> = rep.scale().iter().map(|&s| field.mul(a, s)).collect();
                let g = GroupElement::new(kind, field, rep.perm().to_vec(), scale, rep.frob_exp()).expect("valid");
                map.insert(g.descriptor(), f);
            }
        }
        map
    });
    Ok(BurnsideSum { total, profile })
}

/// `|Fix(g, G(k,n))|` by a full scan of the Grassmannian.
pub fn fixed_count(g: &GroupElement, field: &FieldSpec, n: usize, k: usize, config: &CensusConfig) -> Result<BigUint> {
    if g.n() != n {
        return Err(Error::InvalidParameter(format!("element acts on length {}, not {n}", g.n())));
    }
    let set = SubspaceSet::build(field, n, k, config.enumeration_ceiling)?;
    Ok(BigUint::from(set.fixed_by(field, &g.compile(field))))
}

fn finish_burnside(
    kind: GroupKind,
    field: &FieldSpec,
    n: usize,
    sum: BurnsideSum,
) -> (BigUint, BigUint, BigUint, Option<BTreeMap<String, u64>>) {
    let order = group_order_unchecked(kind, n as u64, field.q() as u64, field.h());
    let (count, rem) = sum.total.div_rem(&order);
    assert!(rem.is_zero(), "Burnside sum {} not divisible by |G| = {}", sum.total, order);
    (count, order, sum.total, sum.profile)
}

/// Number of orbits on `G(k,n)` by the Burnside lemma.
pub fn census_burnside(
    kind: GroupKind,
    field: &FieldSpec,
    n: usize,
    k: usize,
    config: &CensusConfig,
) -> Result<CensusResult> {
    census(kind, field, n, Some(k), Method::Burnside, config)
}

/// Number of orbits on `G(k,n)` by explicit orbit partition.
pub fn census_orbits(
    kind: GroupKind,
    field: &FieldSpec,
    n: usize,
    k: usize,
    config: &CensusConfig,
) -> Result<CensusResult> {
    census(kind, field, n, Some(k), Method::Orbits, config)
}

/// Number of orbits on the projective space `G(n)`, computed directly on the
/// union of all Grassmannians.
pub fn census_all_dims(
    kind: GroupKind,
    field: &FieldSpec,
    n: usize,
    method: Method,
    config: &CensusConfig,
) -> Result<CensusResult> {
    census(kind, field, n, None, method, config)
}

/// Runs one census with the chosen method(s). `k = None` selects all
/// dimensions at once.
pub fn census(
    kind: GroupKind,
    field: &FieldSpec,
    n: usize,
    k: Option<usize>,
    method: Method,
    config: &CensusConfig,
) -> Result<CensusResult> {
    check_n(n)?;
    let start = Instant::now();
    let dims: Vec<usize> = match k {
        Some(k) => vec![k],
        None => (0..=n).collect(),
    };
    let sets = build_sets(field, n, &dims, config)?;
    let points: u64 = sets.iter().map(|s| s.len as u64).sum();
    let order = group_order_unchecked(kind, n as u64, field.q() as u64, field.h());

    let mut burnside_count = None;
    let mut fix_sum = None;
    let mut fix_profile = None;
    if matches!(method, Method::Burnside | Method::Both) {
        check_work(kind, field, n, points, config.work_ceiling)?;
        let sum = burnside_sum(kind, field, n, &sets, config)?;
        let (count, _, total, profile) = finish_burnside(kind, field, n, sum);
        burnside_count = Some(count);
        fix_sum = Some(total);
        fix_profile = profile;
    }
    let orbit_count = if matches!(method, Method::Orbits | Method::Both) {
        let gens = generators(kind, field, n);
        let work = points.saturating_mul(gens.len().max(1) as u64);
        if work > config.work_ceiling {
            return Err(Error::WorkCeiling { work: work.to_string(), ceiling: config.work_ceiling });
        }
        Some(BigUint::from(sets.iter().map(|s| orbit_partition_of(field, s, &gens).len() as u64).sum::<u64>()))
    } else {
        None
    };
    let count = burnside_count.clone().or_else(|| orbit_count.clone()).expect("at least one method ran");
    Ok(CensusResult {
        kind,
        n,
        k,
        q: field.q(),
        count,
        method,
        burnside_count,
        orbit_count,
        group_order: order,
        fix_sum,
        fix_profile,
        elapsed: start.elapsed(),
    })
}

fn find(parent: &mut [u32], mut x: u32) -> u32 {
    while parent[x as usize] != x {
        parent[x as usize] = parent[parent[x as usize] as usize];
        x = parent[x as usize];
    }
    x
}

/// Orbits as lists of member indices, ordered by their smallest member.
fn orbit_partition_of(field: &FieldSpec, set: &SubspaceSet, gens: &[GroupElement]) -> Vec<Vec<usize>> {
    let index: HashMap<Subspace, u32> = (0..set.len).map(|i| (set.subspace(i), i as u32)).collect();
    let compiled: Vec<CompiledElement> = gens.iter().map(|g| g.compile(field)).collect();
    let mut parent: Vec<u32> = (0..set.len as u32).collect();
    for i in 0..set.len {
        let v = set.subspace(i);
        for g in &compiled {
            let image = act_compiled(field, g, &v);
            let j = index[&image];
            let (a, b) = (find(&mut parent, i as u32), find(&mut parent, j));
            if a != b {
                // keep the smaller index as the root
                parent[a.max(b) as usize] = a.min(b);
            }
        }
    }
    let mut orbits: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for i in 0..set.len {
        let root = find(&mut parent, i as u32);
        orbits.entry(root).or_default().push(i);
    }
    orbits.into_values().collect()
}

/// The orbits of the group on `G(k,n)`, each listed in enumeration order.
pub fn orbit_partition(
    kind: GroupKind,
    field: &FieldSpec,
    n: usize,
    k: usize,
    config: &CensusConfig,
) -> Result<Vec<Vec<Subspace>>> {
    check_n(n)?;
    let set = SubspaceSet::build(field, n, k, config.enumeration_ceiling)?;
    let gens = generators(kind, field, n);
    Ok(orbit_partition_of(field, &set, &gens)
        .into_iter()
        .map(|orbit| orbit.into_iter().map(|i| set.subspace(i)).collect())
        .collect())
}

/// Size of the subgroup treated as the kernel: the identity for permutations,
/// the `q-1` scalar matrices otherwise.
pub fn kernel_size(kind: GroupKind, field: &FieldSpec) -> u64 {
    match kind {
        GroupKind::Permutation => 1,
        _ => field.q() as u64 - 1,
    }
}

/// `sum_{g not in Δ} |Fix(g, G(k,n))|`, where `Δ` is the subgroup of
/// [`kernel_size`].
pub fn fix_sum_excess(
    kind: GroupKind,
    field: &FieldSpec,
    n: usize,
    k: usize,
    config: &CensusConfig,
) -> Result<BigUint> {
    let result = census_burnside(kind, field, n, k, config)?;
    let size = grassmannian_size(field.q(), n, k, config.enumeration_ceiling)?;
    let kernel = BigUint::from(kernel_size(kind, field)) * size;
    Ok(result.fix_sum.expect("Burnside run") - kernel)
}

/// `N * |G| >= |Δ| * [n k]_q`, the bound obtained by dropping the
/// non-kernel terms of the Burnside sum.
pub fn burnside_lower_bound_holds(result: &CensusResult, field: &FieldSpec, subspaces: &BigUint) -> bool {
    &result.count * &result.group_order >= BigUint::from(kernel_size(result.kind, field)) * subspaces
}
