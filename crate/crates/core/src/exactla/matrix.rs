use std::fmt;

use serde::{Deserialize, Serialize};

use super::field::Fp;
use crate::error::{Error, Result};
use crate::par::{self, Strategy};

/// Dense row-major matrix over F_p.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix {
    field: Fp,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Reduced row echelon form with its pivot columns.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl Matrix {
    pub fn zeros(field: Fp, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: Fp, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % field.p();
        }
        m
    }

    pub fn from_data(field: Fp, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        let p = field.p();
        Ok(Matrix { field, rows, cols, data: data.into_iter().map(|v| v % p).collect() })
    }

    /// Build from signed integer rows (reduced mod p).
    pub fn from_rows(field: Fp, rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data = rows.iter().flatten().map(|&v| field.from_i64(v)).collect();
        Ok(Matrix { field, rows: r, cols: c, data })
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(field: Fp, rows: usize, cols: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(field, rows, cols.len());
        for (j, v) in cols.iter().enumerate() {
            debug_assert_eq!(v.len(), rows);
            for (i, &x) in v.iter().enumerate() {
                m.data[i * m.cols + j] = x;
            }
        }
        m
    }

    pub fn field(&self) -> Fp {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn data(&self) -> &[u32] {
        &self.data
    }
    pub fn entries(&self) -> usize {
        self.data.len()
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.field.p();
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: u32) {
        let i = r * self.cols + c;
        self.data[i] = self.field.add(self.data[i], v);
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    fn check_same_shape(&self, o: &Matrix) -> Result<()> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::DimensionMismatch(format!("{}x{} vs {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        Ok(())
    }

    pub fn add(&self, o: &Matrix) -> Result<Matrix> {
        self.check_same_shape(o)?;
        let f = self.field;
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| f.add(a, b)).collect();
        Ok(Matrix { field: f, rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, o: &Matrix) -> Result<Matrix> {
        self.check_same_shape(o)?;
        let f = self.field;
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| f.sub(a, b)).collect();
        Ok(Matrix { field: f, rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, s: u32) -> Matrix {
        let f = self.field;
        let data = self.data.iter().map(|&a| f.mul(a, s)).collect();
        Matrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Matrix {
        let f = self.field;
        let data = self.data.iter().map(|&a| f.neg(a)).collect();
        Matrix { field: f, rows: self.rows, cols: self.cols, data }
    }

    /// self += s * o
    pub fn add_scaled(&mut self, o: &Matrix, s: u32) {
        debug_assert!(self.rows == o.rows && self.cols == o.cols);
        if s == 0 {
            return;
        }
        let f = self.field;
        for (a, &b) in self.data.iter_mut().zip(&o.data) {
            *a = f.mul_add(*a, s, b);
        }
    }

    pub fn mul(&self, o: &Matrix) -> Result<Matrix> {
        self.mul_with(o, Strategy::Auto)
    }

    pub fn mul_with(&self, o: &Matrix, strategy: Strategy) -> Result<Matrix> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!("product of {}x{} and {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let f = self.field;
        let p = f.p() as u64;
        let (n, m) = (self.cols, o.cols);
        let mut out = Matrix::zeros(f, self.rows, m);
        let work = self.rows * n * m;
        par::for_each_row(strategy.with_work(work), &mut out.data, m, |r, row| {
            let mut acc = vec![0u64; m];
            let a = &self.data[r * n..(r + 1) * n];
            for (k, &ak) in a.iter().enumerate() {
                if ak == 0 {
                    continue;
                }
                let b = &o.data[k * m..(k + 1) * m];
                for (x, &bk) in acc.iter_mut().zip(b) {
                    *x = (*x + ak as u64 * bk as u64) % p;
                }
            }
            for (d, s) in row.iter_mut().zip(acc) {
                *d = s as u32;
            }
        });
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!("{}x{} matrix applied to vector of length {}", self.rows, self.cols, v.len())));
        }
        let p = self.field.p() as u64;
        Ok((0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let mut s = 0u64;
                for (&a, &b) in row.iter().zip(v) {
                    s = (s + a as u64 * b as u64) % p;
                }
                s as u32
            })
            .collect())
    }

    /// Kronecker product self ⊗ o (row-major index (i, k) -> i * o.rows + k).
    pub fn kron(&self, o: &Matrix) -> Matrix {
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        let b = o.get(k, l);
                        if b != 0 {
                            out.set(i * o.rows + k, j * o.cols + l, f.mul(a, b));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn hstack(parts: &[&Matrix]) -> Result<Matrix> {
        let first = parts.first().ok_or_else(|| Error::InvalidInput("hstack of nothing".into()))?;
        let rows = first.rows;
        if parts.iter().any(|m| m.rows != rows) {
            return Err(Error::DimensionMismatch("hstack row counts differ".into()));
        }
        let cols: usize = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(first.field, rows, cols);
        let mut off = 0;
        for m in parts {
            out.set_block(0, off, m);
            off += m.cols;
        }
        Ok(out)
    }

    pub fn vstack(parts: &[&Matrix]) -> Result<Matrix> {
        let first = parts.first().ok_or_else(|| Error::InvalidInput("vstack of nothing".into()))?;
        let cols = first.cols;
        if parts.iter().any(|m| m.cols != cols) {
            return Err(Error::DimensionMismatch("vstack column counts differ".into()));
        }
        let mut data = Vec::new();
        for m in parts {
            data.extend_from_slice(&m.data);
        }
        let rows = parts.iter().map(|m| m.rows).sum();
        Ok(Matrix { field: first.field, rows, cols, data })
    }

    pub fn block_diag(field: Fp, parts: &[Matrix]) -> Matrix {
        let rows = parts.iter().map(|m| m.rows).sum();
        let cols = parts.iter().map(|m| m.cols).sum();
        let mut out = Matrix::zeros(field, rows, cols);
        let (mut r, mut c) = (0, 0);
        for m in parts {
            out.set_block(r, c, m);
            r += m.rows;
            c += m.cols;
        }
        out
    }

    /// Overwrite the block starting at (r0, c0) with `m`.
    pub fn set_block(&mut self, r0: usize, c0: usize, m: &Matrix) {
        for r in 0..m.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + m.cols].copy_from_slice(m.row(r));
        }
    }

    /// Add `m` into the block starting at (r0, c0).
    pub fn add_block(&mut self, r0: usize, c0: usize, m: &Matrix) {
        let f = self.field;
        for r in 0..m.rows {
            for c in 0..m.cols {
                let i = (r0 + r) * self.cols + c0 + c;
                self.data[i] = f.add(self.data[i], m.get(r, c));
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zeros(self.field, rows, cols);
        for r in 0..rows {
            let src = (r0 + r) * self.cols + c0;
            out.data[r * cols..(r + 1) * cols].copy_from_slice(&self.data[src..src + cols]);
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.data[r * cols.len() + j] = self.get(r, c);
            }
        }
        out
    }

    pub fn rref(&self) -> Rref {
        self.rref_with(Strategy::Auto)
    }

    /// Gauss-Jordan elimination. Pivots are chosen leftmost column first, and
    /// within a column the first row (at or below the current pivot row) that
    /// is nonzero.
    pub fn rref_with(&self, strategy: Strategy) -> Rref {
        let f = self.field;
        let p = f.p() as u64;
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.data.clone();
        let mut pivots = Vec::new();
        let mut prow = 0;
        for c in 0..cols {
            if prow == rows {
                break;
            }
            let Some(r) = (prow..rows).find(|&r| a[r * cols + c] != 0) else {
                continue;
            };
            if r != prow {
                for k in 0..cols {
                    a.swap(r * cols + k, prow * cols + k);
                }
            }
            let inv = f.inv(a[prow * cols + c]);
            for k in c..cols {
                let i = prow * cols + k;
                a[i] = f.mul(a[i], inv);
            }
            let pivot_row: Vec<u32> = a[prow * cols..(prow + 1) * cols].to_vec();
            let work = rows * (cols - c);
            let pr = prow;
            par::for_each_row(strategy.with_work(work), &mut a, cols, |r, row| {
                if r == pr {
                    return;
                }
                let factor = row[c];
                if factor == 0 {
                    return;
                }
                let neg = p - factor as u64;
                for k in c..cols {
                    let b = pivot_row[k];
                    if b != 0 {
                        row[k] = ((row[k] as u64 + neg * b as u64) % p) as u32;
                    }
                }
            });
            pivots.push(c);
            prow += 1;
        }
        Rref { matrix: Matrix { field: f, rows, cols, data: a }, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Basis of the right null space. One vector per free column, listed in
    /// increasing free-column order; each vector has a 1 at its free column and
    /// zeros at all other free columns.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let rr = self.rref();
        kernel_from_rref(&rr, self.cols)
    }

    /// Kernel basis as the columns of a `cols x nullity` matrix.
    pub fn kernel_matrix(&self) -> Matrix {
        Matrix::from_columns(self.field, self.cols, &self.kernel_basis())
    }

    /// Some x with self * x = b, or `None` if b is not in the column space.
    /// Free variables are set to zero.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!("right-hand side of length {} for {} rows", b.len(), self.rows)));
        }
        let mut aug = Matrix::zeros(self.field, self.rows, self.cols + 1);
        aug.set_block(0, 0, self);
        for (r, &v) in b.iter().enumerate() {
            aug.set(r, self.cols, v);
        }
        let rr = aug.rref();
        if rr.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0; self.cols];
        for (i, &c) in rr.pivots.iter().enumerate() {
            x[c] = rr.matrix.get(i, self.cols);
        }
        Ok(Some(x))
    }

    /// Solve self * X = B column by column; `None` if any column is unsolvable.
    pub fn solve_matrix(&self, b: &Matrix) -> Result<Option<Matrix>> {
        if b.rows != self.rows {
            return Err(Error::DimensionMismatch("solve_matrix row mismatch".into()));
        }
        let mut aug = Matrix::zeros(self.field, self.rows, self.cols + b.cols);
        aug.set_block(0, 0, self);
        aug.set_block(0, self.cols, b);
        let rr = aug.rref();
        if rr.pivots.iter().any(|&c| c >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(self.field, self.cols, b.cols);
        for (i, &c) in rr.pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(c, j, rr.matrix.get(i, self.cols + j));
            }
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let x = self.solve_matrix(&Matrix::identity(self.field, self.rows)).ok()??;
        (self.rank() == self.rows).then_some(x)
    }

    /// Basis (as columns of a matrix) of the column space, taken from the
    /// pivot columns of the original matrix.
    pub fn column_space(&self) -> Matrix {
        let rr = self.rref();
        self.select_columns(&rr.pivots)
    }
}

pub(crate) fn kernel_from_rref(rr: &Rref, cols: usize) -> Vec<Vec<u32>> {
    let f = rr.matrix.field;
    let mut is_pivot = vec![false; cols];
    for &c in &rr.pivots {
        is_pivot[c] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![0; cols];
            v[free] = 1 % f.p();
            for (i, &pc) in rr.pivots.iter().enumerate() {
                v[pc] = f.neg(rr.matrix.get(i, free));
            }
            v
        })
        .collect()
}

impl Strategy {
    /// Keep explicit choices, resolve `Auto` against the given work size.
    pub fn with_work(self, work: usize) -> Strategy {
        match self {
            Strategy::Auto if self.use_parallel(work) => Strategy::Parallel,
            Strategy::Auto => Strategy::Sequential,
            s => s,
        }
    }
}

/// Upper bound on the number of dense matrix entries a computation may
/// allocate. Configurable via the `HOCHKIT_BUDGET` environment variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub max_entries: usize,
}

pub const DEFAULT_BUDGET: usize = 1 << 24;

impl Default for Budget {
    fn default() -> Self {
        Budget { max_entries: DEFAULT_BUDGET }
    }
}

impl Budget {
    pub fn new(max_entries: usize) -> Self {
        Budget { max_entries }
    }

    pub fn unlimited() -> Self {
        Budget { max_entries: usize::MAX }
    }

    pub fn from_env() -> Self {
        std::env::var("HOCHKIT_BUDGET").ok().and_then(|s| s.trim().parse().ok()).map(Budget::new).unwrap_or_default()
    }

    pub fn check(&self, rows: usize, cols: usize) -> Result<()> {
        let needed = rows.saturating_mul(cols);
        if needed > self.max_entries {
            return Err(Error::BudgetExceeded { needed, limit: self.max_entries });
        }
        Ok(())
    }

    pub fn check_count(&self, needed: usize) -> Result<()> {
        if needed > self.max_entries {
            return Err(Error::BudgetExceeded { needed, limit: self.max_entries });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> Fp {
        Fp::new(5).unwrap()
    }

    fn m(rows: &[Vec<i64>]) -> Matrix {
        Matrix::from_rows(f5(), rows).unwrap()
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        assert!(Matrix::identity(f5(), 2).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_rank_one() {
        // enumerate all of F_5^2 to get the expected null space
        let a = m(&[vec![1, 2], vec![2, 4]]);
        let mut null = Vec::new();
        for x in 0..5u32 {
            for y in 0..5u32 {
                if a.mul_vec(&[x, y]).unwrap() == vec![0, 0] {
                    null.push((x, y));
                }
            }
        }
        assert_eq!(null.len(), 5);
        assert!(null.contains(&(3, 1)));
        assert_eq!(a.kernel_basis(), vec![vec![3, 1]]);
    }

    #[test]
    fn kernel_of_zero_is_standard_basis() {
        let z = Matrix::zeros(f5(), 2, 2);
        assert_eq!(z.kernel_basis(), vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::identity(f5(), 3);
        assert_eq!(id.solve(&[1, 4, 2]).unwrap(), Some(vec![1, 4, 2]));
        let col = m(&[vec![1], vec![0]]);
        assert_eq!(col.solve(&[0, 1]).unwrap(), None);
        let two = m(&[vec![2]]);
        assert_eq!(two.solve(&[1]).unwrap(), Some(vec![3]));
        assert!(two.solve(&[1, 2]).is_err());
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m(&[vec![1, 2], vec![3, 4]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(f5(), 2));
        assert!(m(&[vec![1, 2], vec![2, 4]]).inverse().is_none());
    }

    #[test]
    fn strategies_agree() {
        let f = Fp::new(7).unwrap();
        let data: Vec<u32> = (0..60 * 50).map(|i| ((i * 37 + 11) % 7) as u32).collect();
        let a = Matrix::from_data(f, 60, 50, data).unwrap();
        let s = a.rref_with(Strategy::Sequential);
        let p = a.rref_with(Strategy::Parallel);
        assert_eq!(s.matrix, p.matrix);
        assert_eq!(s.pivots, p.pivots);
        let b = a.transpose();
        assert_eq!(a.mul_with(&b, Strategy::Sequential).unwrap(), a.mul_with(&b, Strategy::Parallel).unwrap());
    }

    #[test]
    fn budget_rejects_large() {
        let b = Budget::new(100);
        assert!(b.check(10, 10).is_ok());
        assert!(matches!(b.check(10, 11), Err(Error::BudgetExceeded { needed: 110, limit: 100 })));
    }
}
