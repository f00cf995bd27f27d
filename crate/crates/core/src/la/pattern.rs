use crate::error::{Error, Result};

/// Per-row sorted column indices of the admissible matrix entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsityPattern {
    num_cols: usize,
    rows: Vec<Vec<usize>>,
}

impl SparsityPattern {
    pub fn new(num_rows: usize, num_cols: usize) -> Self {
        Self {
            num_cols,
            rows: vec![Vec::new(); num_rows],
        }
    }

    pub fn full(num_rows: usize, num_cols: usize) -> Self {
        Self {
            num_cols,
            rows: vec![(0..num_cols).collect(); num_rows],
        }
    }

    pub fn diagonal(n: usize) -> Self {
        Self {
            num_cols: n,
            rows: (0..n).map(|i| vec![i]).collect(),
        }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.num_cols
    }

    /// Adds `(row, col)`; inserting an existing entry is a no-op.
    pub fn insert(&mut self, row: usize, col: usize) -> Result<()> {
        if row >= self.rows.len() {
            return Err(Error::Index {
                index: row,
                size: self.rows.len(),
            });
        }
        if col >= self.num_cols {
            return Err(Error::Index {
                index: col,
                size: self.num_cols,
            });
        }
        let cols = &mut self.rows[row];
        if let Err(pos) = cols.binary_search(&col) {
            cols.insert(pos, col);
        }
        Ok(())
    }

    pub fn contains(&self, row: usize, col: usize) -> bool {
        self.position(row, col).is_some()
    }

    /// Offset of `(row, col)` within its row.
    pub(crate) fn position(&self, row: usize, col: usize) -> Option<usize> {
        self.rows.get(row)?.binary_search(&col).ok()
    }

    pub fn row(&self, row: usize) -> &[usize] {
        &self.rows[row]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub(crate) fn row_offsets(&self) -> Vec<usize> {
        let mut offsets = Vec::with_capacity(self.rows.len() + 1);
        offsets.push(0);
        for r in &self.rows {
            offsets.push(offsets.last().copied().unwrap_or(0) + r.len());
        }
        offsets
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_keeps_rows_sorted() {
        let mut p = SparsityPattern::new(2, 5);
        for c in [4, 1, 3, 1] {
            p.insert(0, c).unwrap();
        }
        assert_eq!(p.row(0), &[1, 3, 4]);
        assert_eq!(p.nnz(), 3);
        assert!(p.contains(0, 3) && !p.contains(0, 2) && !p.contains(1, 3) && !p.contains(7, 0));
        assert!(p.insert(0, 5).is_err());
        assert!(p.insert(2, 0).is_err());
        assert_eq!(p.row_offsets(), vec![0, 3, 3]);
    }

    #[test]
    fn shapes() {
        assert_eq!(SparsityPattern::full(2, 3).nnz(), 6);
        assert_eq!(SparsityPattern::diagonal(4).row(2), &[2]);
    }
}
