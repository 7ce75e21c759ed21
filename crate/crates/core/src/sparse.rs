//! Coordinate triplets and compressed-row sparse matrices.

use alloc::vec;
use alloc::vec::Vec;

use crate::dense::Mat;

/// Coordinate-format accumulator; [`push`](Triplets::push) skips zeros.
#[derive(Clone, Debug, Default)]
pub struct Triplets {
    nrows: usize,
    ncols: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl Triplets {
    /// Empty `nrows × ncols` accumulator.
    pub fn new(nrows: usize, ncols: usize) -> Self {
        Self { nrows, ncols, entries: Vec::new() }
    }

    /// Adds `v` at `(i, j)`; duplicates are summed on conversion.
    pub fn push(&mut self, i: usize, j: usize, v: f64) {
        assert!(i < self.nrows && j < self.ncols, "triplet ({i}, {j}) out of bounds");
        if v != 0.0 {
            self.entries.push((i, j, v));
        }
    }

    /// Appends all entries of `other` (zeros included) shifted by `(row_off, col_off)`.
    pub fn extend_shifted(&mut self, other: &[(usize, usize, f64)], row_off: usize, col_off: usize) {
        for &(i, j, v) in other {
            self.push_structural(i + row_off, j + col_off, v);
        }
    }

    /// Appends `v` at `(i, j)` even when it is zero (an explicit structural entry).
    pub fn push_structural(&mut self, i: usize, j: usize, v: f64) {
        assert!(i < self.nrows && j < self.ncols, "triplet ({i}, {j}) out of bounds");
        self.entries.push((i, j, v));
    }

    /// Converts to CSR, summing duplicates.
    ///
    /// A position that received at least one entry stays stored even if its
    /// contributions cancel.
    pub fn to_csr(mut self) -> CsrMatrix {
        self.entries.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut indptr = vec![0usize; self.nrows + 1];
        let mut indices = Vec::with_capacity(self.entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(self.entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in self.entries {
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
            } else {
                indices.push(j);
                values.push(v);
                indptr[i + 1] += 1;
                last = Some((i, j));
            }
        }
        for i in 0..self.nrows {
            indptr[i + 1] += indptr[i];
        }
        CsrMatrix { nrows: self.nrows, ncols: self.ncols, indptr, indices, values }
    }
}

/// Compressed sparse row matrix with sorted column indices.
#[derive(Clone, Debug, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Empty matrix with the given shape.
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Triplets::new(nrows, ncols).to_csr()
    }

    /// Sparse copy of a dense matrix.
    pub fn from_dense(a: &Mat) -> Self {
        let mut t = Triplets::new(a.rows(), a.cols());
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                t.push(i, j, a[(i, j)]);
            }
        }
        t.to_csr()
    }

    /// Number of rows.
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    /// Number of columns.
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Number of stored entries.
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices and values of row `i`.
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.indptr[i]..self.indptr[i + 1];
        (&self.indices[r.clone()], &self.values[r])
    }

    /// Iterator over `(row, col, value)`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            let (c, v) = self.row(i);
            c.iter().zip(v).map(move |(&j, &x)| (i, j, x))
        })
    }

    /// `A x`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols);
        (0..self.nrows)
            .map(|i| {
                let (c, v) = self.row(i);
                c.iter().zip(v).map(|(&j, a)| a * x[j]).sum()
            })
            .collect()
    }

    /// `Aᵀ y`.
    pub fn tr_matvec(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.nrows);
        let mut out = vec![0.0; self.ncols];
        for (i, j, a) in self.iter() {
            out[j] += a * y[i];
        }
        out
    }

    /// Dense copy.
    pub fn to_dense(&self) -> Mat {
        let mut m = Mat::zeros(self.nrows, self.ncols);
        for (i, j, v) in self.iter() {
            m[(i, j)] = v;
        }
        m
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        crate::dense::norm2(&self.values)
    }

    /// Largest Euclidean column norm.
    pub fn max_col_norm(&self) -> f64 {
        let mut s = vec![0.0; self.ncols];
        for (_, j, v) in self.iter() {
            s[j] += v * v;
        }
        libm::sqrt(s.into_iter().fold(0.0, f64::max))
    }
}
