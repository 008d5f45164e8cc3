//! Exact linear algebra over ℚ on sparse column vectors.
//!
//! Everything per-degree in the engine (kernels of contractions, d-stability,
//! cohomology) reduces to an [`Echelon`]: an incrementally built row-echelon
//! basis whose rows remember how they were combined from the inserted vectors.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sparse vector with entries sorted by index and no stored zeros.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SparseVec {
    entries: Vec<(usize, Scalar)>,
}

impl SparseVec {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(i: usize) -> Self {
        Self {
            entries: vec![(i, Scalar::one())],
        }
    }

    /// Builds from unsorted entries, summing duplicates.
    pub fn from_entries(mut entries: Vec<(usize, Scalar)>) -> Self {
        entries.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, Scalar)> = Vec::with_capacity(entries.len());
        for (i, x) in entries {
            match out.last_mut() {
                Some((j, y)) if *j == i => *y += x,
                _ => out.push((i, x)),
            }
        }
        out.retain(|(_, x)| !x.is_zero());
        Self { entries: out }
    }

    pub fn from_dense(v: &[Scalar]) -> Self {
        Self {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect(),
        }
    }

    pub fn to_dense(&self, len: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); len];
        for (i, x) in &self.entries {
            out[*i] = x.clone();
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, Scalar)] {
        &self.entries
    }

    pub fn leading(&self) -> Option<(usize, &Scalar)> {
        self.entries.first().map(|(i, x)| (*i, x))
    }

    pub fn get(&self, i: usize) -> Scalar {
        match self.entries.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(pos) => self.entries[pos].1.clone(),
            Err(_) => Scalar::zero(),
        }
    }

    pub fn scale(&mut self, a: &Scalar) {
        if a.is_zero() {
            self.entries.clear();
        } else {
            for (_, x) in &mut self.entries {
                *x *= a;
            }
        }
    }

    pub fn scaled(&self, a: &Scalar) -> Self {
        let mut out = self.clone();
        out.scale(a);
        out
    }

    /// `self += a * other`
    pub fn axpy(&mut self, a: &Scalar, other: &SparseVec) {
        if a.is_zero() || other.is_zero() {
            return;
        }
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let mut lhs = std::mem::take(&mut self.entries).into_iter().peekable();
        let mut rhs = other.entries.iter().peekable();
        loop {
            match (lhs.peek(), rhs.peek()) {
                (Some((i, _)), Some((j, _))) if i < j => out.push(lhs.next().unwrap()),
                (Some((i, _)), Some((j, _))) if i > j => {
                    let (j, y) = rhs.next().unwrap();
                    out.push((*j, a * y));
                }
                (Some(_), Some(_)) => {
                    let (i, x) = lhs.next().unwrap();
                    let (_, y) = rhs.next().unwrap();
                    let s = x + a * y;
                    if !s.is_zero() {
                        out.push((i, s));
                    }
                }
                (Some(_), None) => out.push(lhs.next().unwrap()),
                (None, Some(_)) => {
                    let (j, y) = rhs.next().unwrap();
                    out.push((*j, a * y));
                }
                (None, None) => break,
            }
        }
        self.entries = out;
    }

    pub fn dot_dense(&self, dense: &[Scalar]) -> Scalar {
        self.entries
            .iter()
            .fold(Scalar::zero(), |acc, (i, x)| acc + x * &dense[*i])
    }
}

/// A matrix stored column by column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: Vec<SparseVec>,
}

impl Matrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols: vec![SparseVec::new(); cols],
        }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(SparseVec::is_zero)
    }

    pub fn rank(&self) -> usize {
        let mut ech = Echelon::new(false);
        for c in &self.cols {
            ech.insert(c.clone());
        }
        ech.rank()
    }

    /// Basis of the null space, one vector per non-pivot column.
    pub fn kernel(&self) -> Vec<SparseVec> {
        let mut ech = Echelon::new(true);
        let mut kernel = Vec::new();
        for (j, c) in self.cols.iter().enumerate() {
            if let Some(combo) = ech.insert_tagged(c.clone(), j) {
                let mut k = SparseVec::unit(j);
                k.axpy(&-Scalar::one(), &combo);
                kernel.push(k);
            }
        }
        kernel
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (j, x) in v.entries() {
            out.axpy(x, &self.cols[*j]);
        }
        out
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<Scalar>> {
        let mut rows = vec![vec![Scalar::zero(); self.cols.len()]; self.rows];
        for (j, c) in self.cols.iter().enumerate() {
            for (i, x) in c.entries() {
                rows[*i][j] = x.clone();
            }
        }
        rows
    }
}

#[derive(Debug, Clone)]
struct Row {
    vec: SparseVec,
    combo: SparseVec,
}

/// Incremental row-echelon basis.
///
/// Rows have pairwise distinct leading indices and leading coefficient 1.
/// With tracking enabled every row also carries its expression in terms of
/// the tags of the inserted vectors, which turns membership tests into
/// solves.
#[derive(Debug, Clone)]
pub struct Echelon {
    rows: Vec<Row>,
    pivots: HashMap<usize, usize>,
    track: bool,
    next_tag: usize,
}

impl Echelon {
    pub fn new(track: bool) -> Self {
        Self {
            rows: Vec::new(),
            pivots: HashMap::new(),
            track,
            next_tag: 0,
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` by leading terms. Returns the remainder (zero iff `v` is in
    /// the span) and the coefficients used, indexed by tag.
    fn reduce_full(&self, mut v: SparseVec) -> (SparseVec, SparseVec) {
        let mut used = SparseVec::new();
        while let Some((lead, coef)) = v.leading() {
            let Some(&r) = self.pivots.get(&lead) else {
                break;
            };
            let coef = coef.clone();
            let row = &self.rows[r];
            v.axpy(&-coef.clone(), &row.vec);
            if self.track {
                used.axpy(&coef, &row.combo);
            }
        }
        (v, used)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce_full(v.clone()).0.is_zero()
    }

    /// Expresses `v` as a combination of the inserted vectors (by tag), or
    /// `None` when `v` is outside the span. Requires tracking.
    pub fn express(&self, v: &SparseVec) -> Option<SparseVec> {
        debug_assert!(self.track);
        let (rest, used) = self.reduce_full(v.clone());
        rest.is_zero().then_some(used)
    }

    /// Inserts with the next sequential tag. Returns `true` if the rank grew.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let tag = self.next_tag;
        self.insert_tagged(v, tag).is_none()
    }

    /// Inserts `v` under `tag`. When `v` is dependent nothing is stored and
    /// the expression of `v` in earlier tags is returned.
    pub fn insert_tagged(&mut self, v: SparseVec, tag: usize) -> Option<SparseVec> {
        self.next_tag = self.next_tag.max(tag + 1);
        let (mut rest, used) = self.reduce_full(v);
        let Some((lead, coef)) = rest.leading() else {
            return Some(used);
        };
        let inv = coef.recip();
        rest.scale(&inv);
        let combo = if self.track {
            // rest = v - used  ⇒  row = (tag - used) / coef
            let mut combo = SparseVec::unit(tag);
            combo.axpy(&-Scalar::one(), &used);
            combo.scale(&inv);
            combo
        } else {
            SparseVec::new()
        };
        self.pivots.insert(lead, self.rows.len());
        self.rows.push(Row { vec: rest, combo });
        None
    }
}

/// Inverse of a square dense matrix by Gauss-Jordan elimination.
pub fn inverse(m: &[Vec<Scalar>]) -> Result<Vec<Vec<Scalar>>> {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero()).ok_or(Error::Singular)?;
        a.swap(c, p);
        let inv = a[c][c].recip();
        for x in &mut a[c] {
            *x *= &inv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                let pivot_row = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row.iter()) {
                    *x -= &f * y;
                }
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub fn dense_rank(rows: &[Vec<Scalar>]) -> usize {
    let mut ech = Echelon::new(false);
    for r in rows {
        ech.insert(SparseVec::from_dense(r));
    }
    ech.rank()
}

pub fn mat_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Scalar::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

pub fn identity(n: usize) -> Vec<Vec<Scalar>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Scalar::one() } else { Scalar::zero() })
                .collect()
        })
        .collect()
}
