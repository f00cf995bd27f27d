//! Dense and compressed-row matrices behind a common interface.

use crate::error::{Error, Result};
use crate::la::container::{Container, Cow};
use crate::la::pattern::SparsityPattern;
use crate::la::vector::DenseVector;

/// Entry access and the row/column manipulations needed for constraints.
///
/// Sparse implementations only allow mutation of entries in their pattern.
pub trait Matrix: Container {
    fn rows(&self) -> usize;

    fn cols(&self) -> usize;

    fn get_entry(&self, i: usize, j: usize) -> Result<f64>;

    fn set_entry(&mut self, i: usize, j: usize, value: f64) -> Result<()>;

    fn add_to_entry(&mut self, i: usize, j: usize, value: f64) -> Result<()>;

    /// `A x`.
    fn mv(&self, x: &DenseVector) -> Result<DenseVector>;

    fn clear_row(&mut self, i: usize) -> Result<()>;

    fn clear_col(&mut self, j: usize) -> Result<()>;

    /// Clears row `i` and puts a one on the diagonal.
    fn unit_row(&mut self, i: usize) -> Result<()> {
        self.clear_row(i)?;
        self.set_entry(i, i, 1.0)
    }

    /// Clears column `j` and puts a one on the diagonal.
    fn unit_col(&mut self, j: usize) -> Result<()> {
        self.clear_col(j)?;
        self.set_entry(j, j, 1.0)
    }

    fn pattern(&self) -> SparsityPattern;

    /// A copy whose pattern omits every entry with `|a_ij| <= eps`.
    fn pruned(&self, eps: f64) -> Self;

    /// Largest entry magnitude.
    fn max_abs(&self) -> f64;

    fn has_inf_or_nan(&self) -> bool;

    /// Row-major dense copy of the entries.
    fn to_dense_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows())
            .map(|i| (0..self.cols()).map(|j| self.get_entry(i, j).unwrap_or(0.0)).collect())
            .collect()
    }
}

fn index_error(index: usize, size: usize) -> Error {
    Error::Index { index, size }
}

#[derive(Debug, Clone)]
struct DenseBackend {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

/// Row-major dense matrix with copy-on-write storage.
#[derive(Debug)]
pub struct DenseMatrix {
    data: Cow<DenseBackend>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            data: Cow::new(DenseBackend {
                rows,
                cols,
                values: vec![0.0; rows * cols],
            }),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data.get_mut().values[i * n + i] = 1.0;
        }
        m
    }

    /// Zero matrix of the pattern's shape; every entry is accessible.
    pub fn from_pattern(pattern: &SparsityPattern) -> Self {
        Self::zeros(pattern.num_rows(), pattern.num_cols())
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("rows of different length".into()));
        }
        Ok(Self {
            data: Cow::new(DenseBackend {
                rows: r,
                cols: c,
                values: rows.concat(),
            }),
        })
    }

    /// Row-major entries.
    pub fn values(&self) -> &[f64] {
        &self.data.get().values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.data.get_mut().values
    }

    fn check(&self, i: usize, j: usize) -> Result<usize> {
        let b = self.data.get();
        if i >= b.rows {
            return Err(index_error(i, b.rows));
        }
        if j >= b.cols {
            return Err(index_error(j, b.cols));
        }
        Ok(i * b.cols + j)
    }
}

impl Container for DenseMatrix {
    fn copy(&self) -> Self {
        Self { data: self.data.share() }
    }

    fn scal(&mut self, alpha: f64) {
        for x in self.values_mut() {
            *x *= alpha;
        }
    }

    fn axpy(&mut self, alpha: f64, other: &Self) -> Result<()> {
        if (self.rows(), self.cols()) != (other.rows(), other.cols()) {
            return Err(Error::Shape(format!(
                "{}x{} and {}x{} matrices",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        for (x, y) in self.data.get_mut().values.iter_mut().zip(other.values()) {
            *x += alpha * y;
        }
        Ok(())
    }

    fn share_count(&self) -> usize {
        self.data.share_count()
    }

    fn deep_copies(&self) -> usize {
        self.data.deep_copies()
    }
}

impl Matrix for DenseMatrix {
    fn rows(&self) -> usize {
        self.data.get().rows
    }

    fn cols(&self) -> usize {
        self.data.get().cols
    }

    fn get_entry(&self, i: usize, j: usize) -> Result<f64> {
        let k = self.check(i, j)?;
        Ok(self.values()[k])
    }

    fn set_entry(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        let k = self.check(i, j)?;
        self.values_mut()[k] = value;
        Ok(())
    }

    fn add_to_entry(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        let k = self.check(i, j)?;
        self.values_mut()[k] += value;
        Ok(())
    }

    fn mv(&self, x: &DenseVector) -> Result<DenseVector> {
        let (r, c) = (self.rows(), self.cols());
        if x.size() != c {
            return Err(Error::Shape(format!("{r}x{c} matrix times vector of size {}", x.size())));
        }
        let xs = x.as_slice();
        let y = self
            .values()
            .chunks(c.max(1))
            .take(r)
            .map(|row| row.iter().zip(xs).map(|(a, b)| a * b).sum())
            .collect();
        Ok(DenseVector::from_vec(y))
    }

    fn clear_row(&mut self, i: usize) -> Result<()> {
        if i >= self.rows() {
            return Err(index_error(i, self.rows()));
        }
        let c = self.cols();
        self.values_mut()[i * c..(i + 1) * c].fill(0.0);
        Ok(())
    }

    fn clear_col(&mut self, j: usize) -> Result<()> {
        if j >= self.cols() {
            return Err(index_error(j, self.cols()));
        }
        let c = self.cols();
        for row in self.values_mut().chunks_mut(c) {
            row[j] = 0.0;
        }
        Ok(())
    }

    /// The full pattern.
    fn pattern(&self) -> SparsityPattern {
        SparsityPattern::full(self.rows(), self.cols())
    }

    /// Dense storage keeps its shape; entries with `|a_ij| <= eps` become zero.
    fn pruned(&self, eps: f64) -> Self {
        let mut out = Self::zeros(self.rows(), self.cols());
        for (o, v) in out.values_mut().iter_mut().zip(self.values()) {
            if v.abs() > eps {
                *o = *v;
            }
        }
        out
    }

    fn max_abs(&self) -> f64 {
        self.values().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn has_inf_or_nan(&self) -> bool {
        self.values().iter().any(|v| !v.is_finite())
    }
}

impl Clone for DenseMatrix {
    fn clone(&self) -> Self {
        self.copy()
    }
}

#[derive(Debug, Clone)]
struct CsrBackend {
    pattern: SparsityPattern,
    offsets: Vec<usize>,
    values: Vec<f64>,
}

/// Compressed-row sparse matrix with copy-on-write storage.
#[derive(Debug)]
pub struct CsrMatrix {
    data: Cow<CsrBackend>,
}

impl CsrMatrix {
    /// Zero matrix with storage for every pattern entry.
    pub fn from_pattern(pattern: SparsityPattern) -> Self {
        let offsets = pattern.row_offsets();
        let nnz = pattern.nnz();
        Self {
            data: Cow::new(CsrBackend {
                pattern,
                offsets,
                values: vec![0.0; nnz],
            }),
        }
    }

    /// Stores every entry of `rows` whose magnitude exceeds `eps`.
    pub fn from_dense_rows(rows: &[Vec<f64>], eps: f64) -> Result<Self> {
        let dense = DenseMatrix::from_rows(rows)?;
        let mut pattern = SparsityPattern::new(dense.rows(), dense.cols());
        for i in 0..dense.rows() {
            for j in 0..dense.cols() {
                if dense.get_entry(i, j)?.abs() > eps {
                    pattern.insert(i, j)?;
                }
            }
        }
        let mut m = Self::from_pattern(pattern);
        for i in 0..dense.rows() {
            for j in 0..dense.cols() {
                let v = dense.get_entry(i, j)?;
                if v.abs() > eps {
                    m.set_entry(i, j, v)?;
                }
            }
        }
        Ok(m)
    }

    pub fn nnz(&self) -> usize {
        self.data.get().values.len()
    }

    /// Values aligned with the pattern positions, row by row.
    pub fn values(&self) -> &[f64] {
        &self.data.get().values
    }

    pub fn sparsity(&self) -> &SparsityPattern {
        &self.data.get().pattern
    }

    /// Columns and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let b = self.data.get();
        (b.pattern.row(i), &b.values[b.offsets[i]..b.offsets[i + 1]])
    }

    fn slot(&self, i: usize, j: usize) -> Result<Option<usize>> {
        let b = self.data.get();
        if i >= b.pattern.num_rows() {
            return Err(index_error(i, b.pattern.num_rows()));
        }
        if j >= b.pattern.num_cols() {
            return Err(index_error(j, b.pattern.num_cols()));
        }
        Ok(b.pattern.position(i, j).map(|p| b.offsets[i] + p))
    }

    fn mutable_slot(&self, i: usize, j: usize) -> Result<usize> {
        self.slot(i, j)?.ok_or(Error::NotInPattern { row: i, col: j })
    }
}

impl Container for CsrMatrix {
    fn copy(&self) -> Self {
        Self { data: self.data.share() }
    }

    fn scal(&mut self, alpha: f64) {
        for x in &mut self.data.get_mut().values {
            *x *= alpha;
        }
    }

    /// Requires identical patterns.
    fn axpy(&mut self, alpha: f64, other: &Self) -> Result<()> {
        if self.sparsity() != other.sparsity() {
            return Err(Error::Shape("sparse axpy requires identical patterns".into()));
        }
        for (x, y) in self.data.get_mut().values.iter_mut().zip(other.values()) {
            *x += alpha * y;
        }
        Ok(())
    }

    fn share_count(&self) -> usize {
        self.data.share_count()
    }

    fn deep_copies(&self) -> usize {
        self.data.deep_copies()
    }
}

impl Matrix for CsrMatrix {
    fn rows(&self) -> usize {
        self.sparsity().num_rows()
    }

    fn cols(&self) -> usize {
        self.sparsity().num_cols()
    }

    /// Entries outside the pattern read as zero.
    fn get_entry(&self, i: usize, j: usize) -> Result<f64> {
        Ok(self.slot(i, j)?.map_or(0.0, |k| self.values()[k]))
    }

    fn set_entry(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        let k = self.mutable_slot(i, j)?;
        self.data.get_mut().values[k] = value;
        Ok(())
    }

    fn add_to_entry(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        let k = self.mutable_slot(i, j)?;
        self.data.get_mut().values[k] += value;
        Ok(())
    }

    fn mv(&self, x: &DenseVector) -> Result<DenseVector> {
        if x.size() != self.cols() {
            return Err(Error::Shape(format!(
                "{}x{} matrix times vector of size {}",
                self.rows(),
                self.cols(),
                x.size()
            )));
        }
        let xs = x.as_slice();
        let y = (0..self.rows())
            .map(|i| {
                let (cols, vals) = self.row(i);
                cols.iter().zip(vals).map(|(j, a)| a * xs[*j]).sum()
            })
            .collect();
        Ok(DenseVector::from_vec(y))
    }

    fn clear_row(&mut self, i: usize) -> Result<()> {
        if i >= self.rows() {
            return Err(index_error(i, self.rows()));
        }
        let b = self.data.get_mut();
        let (start, end) = (b.offsets[i], b.offsets[i + 1]);
        b.values[start..end].fill(0.0);
        Ok(())
    }

    fn clear_col(&mut self, j: usize) -> Result<()> {
        if j >= self.cols() {
            return Err(index_error(j, self.cols()));
        }
        let b = self.data.get_mut();
        for i in 0..b.pattern.num_rows() {
            if let Some(p) = b.pattern.position(i, j) {
                b.values[b.offsets[i] + p] = 0.0;
            }
        }
        Ok(())
    }

    fn unit_row(&mut self, i: usize) -> Result<()> {
        // checked before clearing so a failure leaves the matrix untouched
        self.mutable_slot(i, i)?;
        self.clear_row(i)?;
        self.set_entry(i, i, 1.0)
    }

    fn unit_col(&mut self, j: usize) -> Result<()> {
        self.mutable_slot(j, j)?;
        self.clear_col(j)?;
        self.set_entry(j, j, 1.0)
    }

    fn pattern(&self) -> SparsityPattern {
        self.sparsity().clone()
    }

    fn pruned(&self, eps: f64) -> Self {
        let mut pattern = SparsityPattern::new(self.rows(), self.cols());
        for i in 0..self.rows() {
            let (cols, vals) = self.row(i);
            for (j, v) in cols.iter().zip(vals) {
                if v.abs() > eps {
                    pattern.insert(i, *j).expect("in range");
                }
            }
        }
        let mut out = Self::from_pattern(pattern);
        for i in 0..self.rows() {
            let (cols, vals) = self.row(i);
            for (j, v) in cols.iter().zip(vals) {
                if v.abs() > eps {
                    out.set_entry(i, *j, *v).expect("in pattern");
                }
            }
        }
        out
    }

    fn max_abs(&self) -> f64 {
        self.values().iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn has_inf_or_nan(&self) -> bool {
        self.values().iter().any(|v| !v.is_finite())
    }
}

impl Clone for CsrMatrix {
    fn clone(&self) -> Self {
        self.copy()
    }
}
