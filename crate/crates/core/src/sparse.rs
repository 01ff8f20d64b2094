//! Compressed sparse matrix kept in both row and column orientation so that
//! `Av` and `A⊤w` are each a single sequential pass.

use crate::error::{check_len, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    // CSR
    row_ptr: Vec<usize>,
    row_cols: Vec<usize>,
    row_vals: Vec<f64>,
    // CSC
    col_ptr: Vec<usize>,
    col_rows: Vec<usize>,
    col_vals: Vec<f64>,
}

impl SparseMatrix {
    /// Builds a matrix from `(row, col, value)` triplets. Duplicate positions,
    /// out-of-range indices and non-finite values are rejected. Explicit zeros
    /// are dropped.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: &[(usize, usize, f64)],
    ) -> Result<Self> {
        let mut entries: Vec<(usize, usize, f64)> = Vec::with_capacity(triplets.len());
        for &(r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::InvalidEntry {
                    row: r,
                    col: c,
                    rows,
                    cols,
                    reason: "index out of range",
                });
            }
            if !v.is_finite() {
                return Err(Error::InvalidEntry {
                    row: r,
                    col: c,
                    rows,
                    cols,
                    reason: "non-finite value",
                });
            }
            entries.push((r, c, v));
        }
        entries.sort_by_key(|&(r, c, _)| (r, c));
        for w in entries.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                return Err(Error::InvalidEntry {
                    row: w[0].0,
                    col: w[0].1,
                    rows,
                    cols,
                    reason: "duplicate entry",
                });
            }
        }
        entries.retain(|e| e.2 != 0.0);

        let mut row_ptr = vec![0usize; rows + 1];
        for &(r, _, _) in &entries {
            row_ptr[r + 1] += 1;
        }
        for i in 0..rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        let row_cols = entries.iter().map(|e| e.1).collect();
        let row_vals = entries.iter().map(|e| e.2).collect();

        let mut by_col = entries;
        by_col.sort_by_key(|&(r, c, _)| (c, r));
        let mut col_ptr = vec![0usize; cols + 1];
        for &(_, c, _) in &by_col {
            col_ptr[c + 1] += 1;
        }
        for j in 0..cols {
            col_ptr[j + 1] += col_ptr[j];
        }
        let col_rows = by_col.iter().map(|e| e.0).collect();
        let col_vals = by_col.iter().map(|e| e.2).collect();

        Ok(Self {
            rows,
            cols,
            row_ptr,
            row_cols,
            row_vals,
            col_ptr,
            col_rows,
            col_vals,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_triplets(rows, cols, &[]).expect("empty matrix is valid")
    }

    pub fn identity(n: usize) -> Self {
        let t: Vec<_> = (0..n).map(|i| (i, i, 1.0)).collect();
        Self::from_triplets(n, n, &t).expect("identity is valid")
    }

    pub fn diagonal(d: &[f64]) -> Result<Self> {
        let t: Vec<_> = d.iter().enumerate().map(|(i, &v)| (i, i, v)).collect();
        Self::from_triplets(d.len(), d.len(), &t)
    }

    pub fn from_dense(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        let mut t = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            check_len("dense row", n, r.len())?;
            for (j, &v) in r.iter().enumerate() {
                if v != 0.0 {
                    t.push((i, j, v));
                }
            }
        }
        Self::from_triplets(m, n, &t)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.row_vals.len()
    }

    /// Stored entries in row-major order.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.nnz());
        for i in 0..self.rows {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                out.push((i, self.row_cols[k], self.row_vals[k]));
            }
        }
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.cols]; self.rows];
        for (i, j, v) in self.triplets() {
            d[i][j] = v;
        }
        d
    }

    /// Entries of one column as `(row, value)` pairs.
    pub fn column(&self, j: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.col_ptr[j]..self.col_ptr[j + 1];
        self.col_rows[range.clone()]
            .iter()
            .copied()
            .zip(self.col_vals[range].iter().copied())
    }

    pub fn transpose(&self) -> Self {
        Self {
            rows: self.cols,
            cols: self.rows,
            row_ptr: self.col_ptr.clone(),
            row_cols: self.col_rows.clone(),
            row_vals: self.col_vals.clone(),
            col_ptr: self.row_ptr.clone(),
            col_rows: self.row_cols.clone(),
            col_vals: self.row_vals.clone(),
        }
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        let mut out = self.clone();
        out.row_vals.iter_mut().for_each(|v| *v *= alpha);
        out.col_vals.iter_mut().for_each(|v| *v *= alpha);
        out
    }

    /// `Av`.
    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        check_len("matvec input", self.cols, v.len())?;
        let mut out = vec![0.0; self.rows];
        self.apply(v, &mut out);
        Ok(out)
    }

    /// `A⊤w`.
    pub fn matvec_transpose(&self, w: &[f64]) -> Result<Vec<f64>> {
        check_len("transpose matvec input", self.rows, w.len())?;
        let mut out = vec![0.0; self.cols];
        self.apply_transpose(w, &mut out);
        Ok(out)
    }

    /// `out = Av`; lengths are the caller's responsibility.
    pub(crate) fn apply(&self, v: &[f64], out: &mut [f64]) {
        assert_eq!(v.len(), self.cols);
        assert_eq!(out.len(), self.rows);
        for (i, o) in out.iter_mut().enumerate() {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.row_vals[k] * v[self.row_cols[k]];
            }
            *o = s;
        }
    }

    /// `out = A⊤w`; lengths are the caller's responsibility.
    pub(crate) fn apply_transpose(&self, w: &[f64], out: &mut [f64]) {
        assert_eq!(w.len(), self.rows);
        assert_eq!(out.len(), self.cols);
        for (j, o) in out.iter_mut().enumerate() {
            let mut s = 0.0;
            for k in self.col_ptr[j]..self.col_ptr[j + 1] {
                s += self.col_vals[k] * w[self.col_rows[k]];
            }
            *o = s;
        }
    }

    pub(crate) fn apply_vec(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows];
        self.apply(v, &mut out);
        out
    }

    pub(crate) fn apply_transpose_vec(&self, w: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.cols];
        self.apply_transpose(w, &mut out);
        out
    }
}
