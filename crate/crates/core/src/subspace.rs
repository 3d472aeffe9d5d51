//! Subspaces of `F_q^n` in canonical reduced row echelon form.

use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::combinatorics::qbinom_unchecked;
use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};

/// Default ceiling on the number of subspaces a single enumeration may emit.
pub const DEFAULT_ENUMERATION_CEILING: u64 = 10_000_000;

/// A `k`-dimensional subspace of `F_q^n`, stored as its RREF basis with one
/// byte per entry. Two subspaces are equal iff their stored bases are equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: usize,
    k: usize,
    rows: Vec<u8>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, row) in self.rows.chunks(self.n.max(1)).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            for x in row {
                write!(f, "{x}")?;
            }
        }
        write!(f, ">")
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Row-reduces the `nrows x n` matrix in place and returns its rank. The
/// first `rank` rows then hold the RREF basis.
pub(crate) fn rref_in_place(field: &FieldSpec, data: &mut [u8], nrows: usize, n: usize) -> usize {
    let mut rank = 0;
    for col in 0..n {
        if rank == nrows {
            break;
        }
        let Some(pivot) = (rank..nrows).find(|&r| data[r * n + col] != 0) else {
            continue;
        };
        if pivot != rank {
            for j in 0..n {
                data.swap(pivot * n + j, rank * n + j);
            }
        }
        let inv = field.inv_raw(data[rank * n + col]);
        if inv != 1 {
            for j in col..n {
                data[rank * n + j] = field.mul_raw(inv, data[rank * n + j]);
            }
        }
        for r in 0..nrows {
            if r == rank {
                continue;
            }
            let c = data[r * n + col];
            if c != 0 {
                let neg = field.neg_raw(c);
                for j in col..n {
                    let t = field.mul_raw(neg, data[rank * n + j]);
                    data[r * n + j] = field.add_raw(data[r * n + j], t);
                }
            }
        }
        rank += 1;
    }
    rank
}

impl Subspace {
    /// The zero subspace of `F_q^n`.
    pub fn zero(n: usize) -> Subspace {
        Subspace { n, k: 0, rows: Vec::new() }
    }

    /// The whole space `F_q^n`.
    pub fn full(n: usize) -> Subspace {
        let mut rows = vec![0u8; n * n];
        for i in 0..n {
            rows[i * n + i] = 1;
        }
        Subspace { n, k: n, rows }
    }

    pub(crate) fn from_rref_unchecked(n: usize, k: usize, rows: Vec<u8>) -> Subspace {
        debug_assert_eq!(rows.len(), n * k);
        Subspace { n, k, rows }
    }

    /// Row-reduces a flat `nrows x n` matrix of raw indices.
    pub(crate) fn from_matrix_raw(field: &FieldSpec, mut data: Vec<u8>, nrows: usize, n: usize) -> Subspace {
        let k = rref_in_place(field, &mut data, nrows, n);
        data.truncate(k * n);
        Subspace { n, k, rows: data }
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.k
    }

    pub fn entry(&self, row: usize, col: usize) -> FieldElement {
        FieldElement(self.rows[row * self.n + col])
    }

    pub fn basis(&self) -> Vec<Vec<FieldElement>> {
        self.rows.chunks(self.n.max(1)).take(self.k).map(|r| r.iter().map(|&x| FieldElement(x)).collect()).collect()
    }

    pub(crate) fn raw_rows(&self) -> &[u8] {
        &self.rows
    }

    /// Pivot column of each basis row.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows
            .chunks(self.n.max(1))
            .take(self.k)
            .map(|r| r.iter().position(|&x| x != 0).expect("RREF rows are nonzero"))
            .collect()
    }

    /// Whether `v` lies in the subspace.
    pub fn contains(&self, field: &FieldSpec, v: &[FieldElement]) -> bool {
        let mut y: Vec<u8> = v.iter().map(|x| x.0).collect();
        reduce_against(field, &mut y, &self.rows, &self.pivots(), self.n);
        y.iter().all(|&x| x == 0)
    }
}

/// Subtracts from `y` the combination of RREF rows that clears its pivot
/// coordinates. `y` is left at zero iff it lies in the row space.
#[inline]
pub(crate) fn reduce_against(field: &FieldSpec, y: &mut [u8], rows: &[u8], pivots: &[usize], n: usize) {
    for (i, &p) in pivots.iter().enumerate() {
        let c = y[p];
        if c != 0 {
            let neg = field.neg_raw(c);
            let row = &rows[i * n..(i + 1) * n];
            for j in p..n {
                if row[j] != 0 {
                    y[j] = field.add_raw(y[j], field.mul_raw(neg, row[j]));
                }
            }
        }
    }
}

/// Canonical RREF representative of the row space of `rows`.
///
/// Rank-deficient input yields a subspace of smaller dimension.
pub fn canonicalize(field: &FieldSpec, n: usize, rows: &[Vec<FieldElement>]) -> Result<Subspace> {
    let mut data = Vec::with_capacity(rows.len() * n);
    for row in rows {
        if row.len() != n {
            return Err(Error::InvalidParameter(format!("row of length {} in F_q^{n}", row.len())));
        }
        for x in row {
            if x.index() >= field.q() {
                return Err(Error::InvalidParameter(format!("element {x} outside GF({})", field.q())));
            }
            data.push(x.0);
        }
    }
    Ok(Subspace::from_matrix_raw(field, data, rows.len(), n))
}

/// Checks `0 <= k <= n` and the enumeration ceiling, returning `|G(k,n)|`.
pub(crate) fn grassmannian_size(q: usize, n: usize, k: usize, ceiling: u64) -> Result<u64> {
    if k > n {
        return Err(Error::InvalidParameter(format!("dimension {k} exceeds length {n}")));
    }
    let size: BigUint = qbinom_unchecked(n as u64, k as i64, q as u64);
    match size.to_u64() {
        Some(s) if s <= ceiling => Ok(s),
        _ => Err(Error::EnumerationCeiling { count: size.to_string(), ceiling }),
    }
}

/// Streams every `k`-dimensional subspace of `F_q^n` exactly once.
///
/// Subspaces are produced pivot pattern by pivot pattern (patterns in
/// lexicographic order), and within a pattern by counting through the free
/// entries in base `q`.
pub fn enumerate_grassmannian(field: &FieldSpec, n: usize, k: usize) -> Result<GrassmannIter> {
    enumerate_grassmannian_with_ceiling(field, n, k, DEFAULT_ENUMERATION_CEILING)
}

pub fn enumerate_grassmannian_with_ceiling(
    field: &FieldSpec,
    n: usize,
    k: usize,
    ceiling: u64,
) -> Result<GrassmannIter> {
    let total = grassmannian_size(field.q(), n, k, ceiling)?;
    let mut it = GrassmannIter {
        q: field.q() as u8,
        n,
        k,
        pivots: (0..k).collect(),
        free: Vec::new(),
        counter: Vec::new(),
        remaining: total,
    };
    it.reset_pattern();
    Ok(it)
}

pub struct GrassmannIter {
    q: u8,
    n: usize,
    k: usize,
    pivots: Vec<usize>,
    /// Flat positions of the free entries for the current pivot pattern.
    free: Vec<usize>,
    counter: Vec<u8>,
    remaining: u64,
}

impl GrassmannIter {
    fn reset_pattern(&mut self) {
        self.free.clear();
        for (i, &p) in self.pivots.iter().enumerate() {
            for j in p + 1..self.n {
                if !self.pivots.contains(&j) {
                    self.free.push(i * self.n + j);
                }
            }
        }
        self.counter = vec![0; self.free.len()];
    }

    fn next_pattern(&mut self) -> bool {
        let (n, k) = (self.n, self.k);
        let Some(i) = (0..k).rev().find(|&i| self.pivots[i] < n - k + i) else {
            return false;
        };
        self.pivots[i] += 1;
        for j in i + 1..k {
            self.pivots[j] = self.pivots[j - 1] + 1;
        }
        true
    }

    fn advance(&mut self) {
        for c in self.counter.iter_mut() {
            *c += 1;
            if *c < self.q {
                return;
            }
            *c = 0;
        }
        // counter wrapped: move to the next pivot pattern
        if self.next_pattern() {
            self.reset_pattern();
        }
    }
}

impl Iterator for GrassmannIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.remaining == 0 {
            return None;
        }
        let mut rows = vec![0u8; self.k * self.n];
        for (i, &p) in self.pivots.iter().enumerate() {
            rows[i * self.n + p] = 1;
        }
        for (&pos, &v) in self.free.iter().zip(&self.counter) {
            rows[pos] = v;
        }
        self.remaining -= 1;
        if self.remaining > 0 {
            self.advance();
        }
        Some(Subspace::from_rref_unchecked(self.n, self.k, rows))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining as usize, Some(self.remaining as usize))
    }
}

impl ExactSizeIterator for GrassmannIter {}
