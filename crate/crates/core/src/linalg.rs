//! Exact rational scalars and the dense/sparse elimination kernel.
//!
//! Everything downstream (centers, derivation algebras, free quotients) reduces
//! to row reduction over ℚ, so this module is deliberately small and exact:
//! there is no floating point anywhere in the crate.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// An element of the ground field ℚ, always kept in lowest terms.
pub type Scalar = BigRational;

/// A sparse vector: strictly increasing indices, no explicit zeros.
pub type SparseVec = Vec<(usize, Scalar)>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("rows have differing lengths")]
    RaggedRows,
    #[error("invalid rational literal `{0}`")]
    InvalidLiteral(String),
}

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

pub fn ints(values: &[i64]) -> Vec<Scalar> {
    values.iter().map(|&v| int(v)).collect()
}

/// Parses `p` or `p/q` with an optional leading minus and no inner whitespace.
pub fn parse_scalar(text: &str) -> Result<Scalar, LinalgError> {
    let bad = || LinalgError::InvalidLiteral(text.to_string());
    let body = text.strip_prefix('-').unwrap_or(text);
    let negative = body.len() != text.len();
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    if !digits(num) || !den.is_none_or(digits) {
        return Err(bad());
    }
    let numer: BigInt = num.parse().map_err(|_| bad())?;
    let denom: BigInt = match den {
        Some(d) => d.parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(bad());
    }
    let value = Scalar::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// Renders as `p` or `p/q`; the inverse of [`parse_scalar`].
pub fn format_scalar(x: &Scalar) -> String {
    x.to_string()
}

pub fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).filter(|(x, y)| !x.is_zero() && !y.is_zero()).fold(Scalar::zero(), |acc, (x, y)| acc + x * y)
}

pub fn to_sparse(v: &[Scalar]) -> SparseVec {
    v.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect()
}

pub fn to_dense(v: &SparseVec, len: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); len];
    for (i, x) in v {
        out[*i] = x.clone();
    }
    out
}

/// `a + c·b` for sparse vectors.
pub fn sparse_axpy(a: &SparseVec, c: &Scalar, b: &SparseVec) -> SparseVec {
    if c.is_zero() {
        return a.clone();
    }
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, c * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + c * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sparse_scale(a: &SparseVec, c: &Scalar) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|(i, x)| (*i, x * c)).collect()
}

/// Accumulates sparse contributions in index order.
#[derive(Debug, Default, Clone)]
pub struct SparseAccumulator {
    entries: BTreeMap<usize, Scalar>,
}

impl SparseAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, index: usize, value: Scalar) {
        if value.is_zero() {
            return;
        }
        let slot = self.entries.entry(index).or_insert_with(Scalar::zero);
        *slot += value;
    }

    pub fn add_scaled(&mut self, c: &Scalar, v: &SparseVec) {
        if c.is_zero() {
            return;
        }
        for (i, x) in v {
            self.add(*i, c * x);
        }
    }

    pub fn finish(self) -> SparseVec {
        self.entries.into_iter().filter(|(_, x)| !x.is_zero()).collect()
    }
}

/// Dense row-major matrix over ℚ.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self, LinalgError> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::RaggedRows);
        }
        let n = rows.len();
        Ok(Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    /// Builds a matrix with explicit shape, so that `rows == 0` keeps its column count.
    pub fn from_rows_with_cols(rows: Vec<Vec<Scalar>>, cols: usize) -> Result<Self, LinalgError> {
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(LinalgError::DimensionMismatch { expected: cols, found: r.len() });
        }
        let n = rows.len();
        Ok(Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_columns(columns: &[Vec<Scalar>], rows: usize) -> Result<Self, LinalgError> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(LinalgError::DimensionMismatch { expected: rows, found: col.len() });
            }
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self, LinalgError> {
        Self::from_rows(rows.iter().map(|r| ints(r)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Row-major flattening, used to treat matrix spaces as subspaces of ℚ^(r·c).
    pub fn as_slice(&self) -> &[Scalar] {
        &self.data
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.data)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        Ok((0..self.rows).map(|i| dot(self.row(i), v)).collect())
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * c).collect() }
    }

    /// Reduced row-echelon form with leftmost-first pivoting.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(p, r);
            let inv = m.get(r, c).recip();
            for j in c..m.cols {
                let v = m.get(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let f = m.get(i, c).clone();
                for j in c..m.cols {
                    let sub = &f * m.get(r, j);
                    if !sub.is_zero() {
                        let idx = i * m.cols + j;
                        m.data[idx] -= sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : self·v = 0}`, one vector per free column, with a 1 in that column.
    pub fn null_space(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let mut pivot_row = vec![None; self.cols];
        for (row, &c) in pivots.iter().enumerate() {
            pivot_row[c] = Some(row);
        }
        (0..self.cols)
            .filter(|&c| pivot_row[c].is_none())
            .map(|free| {
                let mut v = vec![Scalar::zero(); self.cols];
                v[free] = Scalar::one();
                for (row, &pc) in pivots.iter().enumerate() {
                    v[pc] = -r.get(row, free).clone();
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, Scalar::one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(format_scalar).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Rank of the span of the given vectors.
pub fn rank_of(vectors: &[Vec<Scalar>], len: usize) -> Result<usize, LinalgError> {
    Ok(Matrix::from_rows_with_cols(vectors.to_vec(), len)?.rank())
}

/// Coefficients expressing `v` in terms of `basis`, or `None` when `v` is outside the span.
///
/// With a dependent `basis` the coefficients of redundant vectors are zero.
pub fn span_membership(basis: &[Vec<Scalar>], v: &[Scalar]) -> Result<Option<Vec<Scalar>>, LinalgError> {
    let n = v.len();
    if let Some(b) = basis.iter().find(|b| b.len() != n) {
        return Err(LinalgError::DimensionMismatch { expected: n, found: b.len() });
    }
    let k = basis.len();
    let mut aug = Matrix::zeros(n, k + 1);
    for (j, b) in basis.iter().enumerate() {
        for (i, x) in b.iter().enumerate() {
            aug.set(i, j, x.clone());
        }
    }
    for (i, x) in v.iter().enumerate() {
        aug.set(i, k, x.clone());
    }
    let (r, pivots) = aug.rref();
    if pivots.last() == Some(&k) {
        return Ok(None);
    }
    let mut coeffs = vec![Scalar::zero(); k];
    for (row, &c) in pivots.iter().enumerate() {
        coeffs[c] = r.get(row, k).clone();
    }
    Ok(Some(coeffs))
}

/// Incremental sparse Gaussian elimination.
///
/// Rows are kept in semi-echelon form (normalized leading 1, later entries
/// arbitrary), keyed by pivot column. Optionally each stored row remembers its
/// expression as a combination of the accepted input rows, so membership
/// queries can return an explicit certificate.
#[derive(Debug, Clone)]
pub struct SparseEchelon {
    cols: usize,
    rows: BTreeMap<usize, SparseVec>,
    combos: Option<BTreeMap<usize, SparseVec>>,
    accepted: usize,
}

impl SparseEchelon {
    pub fn new(cols: usize) -> Self {
        SparseEchelon { cols, rows: BTreeMap::new(), combos: None, accepted: 0 }
    }

    /// Like [`SparseEchelon::new`], but tracks each row as a combination of accepted inputs.
    pub fn with_provenance(cols: usize) -> Self {
        SparseEchelon { cols, rows: BTreeMap::new(), combos: Some(BTreeMap::new()), accepted: 0 }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.keys().copied().collect()
    }

    /// Reduces `row` and stores it if independent. Returns the index assigned to
    /// the accepted row (its provenance tag) or `None` when it was dependent.
    pub fn insert(&mut self, row: SparseVec) -> Option<usize> {
        let tracking = self.combos.is_some();
        let (residual, multipliers) = self.reduce_inner(row, tracking);
        let (lead, lead_val) = residual.first()?.clone();
        let inv = lead_val.recip();
        let tag = self.accepted;
        self.accepted += 1;
        let normalized = sparse_scale(&residual, &inv);
        if let Some(combos) = self.combos.as_mut() {
            // residual = input − Σ c_p·row_p, so its combination is e_tag − Σ c_p·combo_p
            let mut acc = SparseAccumulator::new();
            acc.add(tag, Scalar::one());
            for (pivot, c) in &multipliers {
                acc.add_scaled(&(-c.clone()), &combos[pivot]);
            }
            combos.insert(lead, sparse_scale(&acc.finish(), &inv));
        }
        self.rows.insert(lead, normalized);
        Some(tag)
    }

    /// Residual of `row` after elimination against the stored rows.
    pub fn reduce(&self, row: SparseVec) -> SparseVec {
        self.reduce_inner(row, false).0
    }

    /// Residual plus the combination of accepted inputs that was subtracted:
    /// `row = residual + Σ combo[tag]·input[tag]`.
    ///
    /// Returns `None` for the combination when provenance is not tracked.
    pub fn reduce_with_certificate(&self, row: SparseVec) -> (SparseVec, Option<SparseVec>) {
        if self.combos.is_none() {
            return (self.reduce(row), None);
        }
        let (residual, multipliers) = self.reduce_inner(row, true);
        let combos = self.combos.as_ref().expect("checked above");
        let mut acc = SparseAccumulator::new();
        for (pivot, c) in &multipliers {
            acc.add_scaled(c, &combos[pivot]);
        }
        (residual, Some(acc.finish()))
    }

    // Second component: (pivot, multiplier) pairs when `track`, otherwise empty.
    fn reduce_inner(&self, mut row: SparseVec, track: bool) -> (SparseVec, SparseVec) {
        let mut multipliers: SparseVec = Vec::new();
        let mut pos = 0;
        while pos < row.len() {
            let (col, ref c) = row[pos];
            match self.rows.get(&col) {
                Some(pivot_row) => {
                    let c = c.clone();
                    if track {
                        multipliers.push((col, c.clone()));
                    }
                    row = sparse_axpy(&row, &(-c), pivot_row);
                }
                None => pos += 1,
            }
        }
        (row, multipliers)
    }

    /// Full reduced row-echelon form of the stored row space.
    pub fn to_rref(&self) -> Vec<(usize, SparseVec)> {
        let mut rows: Vec<(usize, SparseVec)> = self.rows.iter().map(|(p, r)| (*p, r.clone())).collect();
        // back substitution from the last pivot upwards
        for k in (0..rows.len()).rev() {
            let (pk, ref rk) = rows[k];
            let rk = rk.clone();
            for row in rows.iter_mut().take(k) {
                if let Ok(pos) = row.1.binary_search_by_key(&pk, |(i, _)| *i) {
                    let c = row.1[pos].1.clone();
                    row.1 = sparse_axpy(&row.1, &(-c), &rk);
                }
            }
        }
        rows
    }
}
