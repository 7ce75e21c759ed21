//! Column-major dense matrices and the Householder QR kernel with column
//! pivoting shared by every solver.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use crate::{Error, Result, EPS};

/// Dense column-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Mat {
    /// `rows × cols` zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    /// `n × n` identity.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Matrix with entries `f(i, j)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Matrix from row slices; all rows must have equal length.
    pub fn from_rows(rows: &[&[f64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |i, j| rows[i][j])
    }

    /// Diagonal matrix.
    pub fn diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len(), d.len());
        for (i, &v) in d.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Column `j` as a slice.
    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// Column `j` as a mutable slice.
    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// Row `i` copied out.
    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.cols).map(|j| self[(i, j)]).collect()
    }

    /// Column-major storage.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Swaps columns `a` and `b`.
    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(a * self.rows + i, b * self.rows + i);
            }
        }
    }

    /// Transpose.
    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    /// Product `self · other`.
    pub fn matmul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Mat::zeros(self.rows, other.cols);
        for j in 0..other.cols {
            for p in 0..self.cols {
                let b = other[(p, j)];
                if b != 0.0 {
                    let a = self.col(p);
                    let o = &mut out.data[j * self.rows..(j + 1) * self.rows];
                    for (oi, ai) in o.iter_mut().zip(a) {
                        *oi += ai * b;
                    }
                }
            }
        }
        out
    }

    /// `self · x`.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len());
        let mut y = vec![0.0; self.rows];
        for (j, &xj) in x.iter().enumerate() {
            if xj != 0.0 {
                for (yi, a) in y.iter_mut().zip(self.col(j)) {
                    *yi += a * xj;
                }
            }
        }
        y
    }

    /// `selfᵀ · x`.
    pub fn tr_matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.rows, x.len());
        (0..self.cols).map(|j| dot(self.col(j), x)).collect()
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        norm2(&self.data)
    }

    /// Largest Euclidean column norm.
    pub fn max_col_norm(&self) -> f64 {
        (0..self.cols).map(|j| norm2(self.col(j))).fold(0.0, f64::max)
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[j * self.rows + i]
    }
}

impl IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[j * self.rows + i]
    }
}

/// Dot product.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm, scaled against overflow.
pub fn norm2(v: &[f64]) -> f64 {
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return scale;
    }
    let s: f64 = v.iter().map(|x| (x / scale) * (x / scale)).sum();
    scale * libm::sqrt(s)
}

/// Elementary reflector `H = I − τ v vᵀ` acting on rows `row0..row0 + v.len()`, with `v[0] = 1`.
#[derive(Clone, Debug)]
pub struct Reflector {
    /// First row the reflector touches.
    pub row0: usize,
    /// Householder vector, `v[0] = 1`.
    pub v: Vec<f64>,
    /// Scalar factor.
    pub tau: f64,
}

impl Reflector {
    /// Applies `H` to `y` (indexed like the matrix rows).
    pub fn apply(&self, y: &mut [f64]) {
        if self.tau == 0.0 {
            return;
        }
        let seg = &mut y[self.row0..self.row0 + self.v.len()];
        let w = self.tau * dot(&self.v, seg);
        for (s, vi) in seg.iter_mut().zip(&self.v) {
            *s -= w * vi;
        }
    }
}

/// Builds the reflector zeroing `a[row0+1.., col]`; `a[row0, col]` receives β.
fn make_reflector(a: &mut Mat, row0: usize, col: usize) -> Reflector {
    let x = &mut a.col_mut(col)[row0..];
    let alpha = x[0];
    let tail = norm2(&x[1..]);
    if tail == 0.0 {
        let mut v = vec![0.0; x.len()];
        v[0] = 1.0;
        return Reflector { row0, v, tau: 0.0 };
    }
    let beta = -alpha.signum() * libm::hypot(alpha, tail);
    let beta = if beta == 0.0 { -tail } else { beta };
    let tau = (beta - alpha) / beta;
    let inv = 1.0 / (alpha - beta);
    let mut v = Vec::with_capacity(x.len());
    v.push(1.0);
    for xi in x[1..].iter_mut() {
        v.push(*xi * inv);
        *xi = 0.0;
    }
    x[0] = beta;
    Reflector { row0, v, tau }
}

fn apply_to_cols(a: &mut Mat, h: &Reflector, cols: core::ops::Range<usize>) {
    for j in cols {
        h.apply(a.col_mut(j));
    }
}

/// Householder steps with column pivoting on the block `rows row0.., cols lo..hi`.
///
/// Pivot columns are swapped into place within `lo..hi` (mirrored in `perm`)
/// and every reflector is applied to all columns to the right of its pivot.
/// Stops when the largest remaining column norm is `≤ tol`; returns the
/// number of steps taken (the numerical rank of the block).
pub fn factor_pivoted(
    a: &mut Mat,
    row0: usize,
    lo: usize,
    hi: usize,
    tol: f64,
    perm: &mut [usize],
    out: &mut Vec<Reflector>,
) -> usize {
    let nrows = a.rows();
    let mut norms: Vec<f64> = (lo..hi).map(|j| norm2(&a.col(j)[row0.min(nrows)..])).collect();
    let mut refn = norms.clone();
    let mut rank = 0;
    let steps = (hi - lo).min(nrows.saturating_sub(row0));
    while rank < steps {
        let r = row0 + rank;
        let c = lo + rank;
        let (best, &bn) = norms[rank..]
            .iter()
            .enumerate()
            .fold((0, &-1.0), |acc, x| if *x.1 > *acc.1 { x } else { acc });
        if bn <= tol {
            break;
        }
        let p = c + best;
        if p != c {
            a.swap_cols(p, c);
            perm.swap(p, c);
            norms.swap(rank + best, rank);
            refn.swap(rank + best, rank);
        }
        let h = make_reflector(a, r, c);
        apply_to_cols(a, &h, c + 1..a.cols());
        out.push(h);
        // downdate partial column norms (LAPACK xGEQP3 scheme)
        for (jj, j) in (c + 1..hi).enumerate() {
            let idx = rank + 1 + jj;
            if norms[idx] == 0.0 {
                continue;
            }
            let ratio = a[(r, j)].abs() / norms[idx];
            let t = (1.0 - ratio * ratio).max(0.0);
            let t2 = t * (norms[idx] / refn[idx]) * (norms[idx] / refn[idx]);
            if t2 <= libm::sqrt(EPS) {
                let v = norm2(&a.col(j)[r + 1..]);
                norms[idx] = v;
                refn[idx] = v;
            } else {
                norms[idx] *= libm::sqrt(t);
            }
        }
        rank += 1;
    }
    rank
}

/// Unpivoted Householder steps on `rows row0.., cols lo..hi`; returns steps taken.
pub fn factor_plain(a: &mut Mat, row0: usize, lo: usize, hi: usize, out: &mut Vec<Reflector>) -> usize {
    let steps = (hi - lo).min(a.rows().saturating_sub(row0));
    for s in 0..steps {
        let h = make_reflector(a, row0 + s, lo + s);
        apply_to_cols(a, &h, lo + s + 1..a.cols());
        out.push(h);
    }
    steps
}

/// Complete pivoted QR `A P = Q R` of a dense matrix.
#[derive(Clone, Debug)]
pub struct PivotedQr {
    /// `R` in the upper triangle (below-diagonal entries are zero).
    pub r: Mat,
    /// Householder reflectors defining `Q`.
    pub reflectors: Vec<Reflector>,
    /// `perm[j]` is the original column sitting at position `j`.
    pub perm: Vec<usize>,
    /// Numerical rank.
    pub rank: usize,
}

impl PivotedQr {
    /// Factors `a` with rank tolerance `tol` on the remaining column norms.
    pub fn new(mut a: Mat, tol: f64) -> Self {
        let mut perm: Vec<usize> = (0..a.cols()).collect();
        let mut reflectors = Vec::new();
        let cols = a.cols();
        let rank = factor_pivoted(&mut a, 0, 0, cols, tol, &mut perm, &mut reflectors);
        // the trailing rows below the rank are treated as zero
        for j in 0..cols {
            for i in rank.max(j + 1)..a.rows() {
                a[(i, j)] = 0.0;
            }
        }
        Self { r: a, reflectors, perm, rank }
    }

    /// Factors with the default rank tolerance `ε^{1/2} · max column norm`.
    pub fn with_default_tol(a: Mat) -> Self {
        let tol = libm::sqrt(EPS) * a.max_col_norm();
        Self::new(a, tol)
    }

    /// Applies `Qᵀ` to `b` in place.
    pub fn apply_qt(&self, b: &mut [f64]) {
        for h in &self.reflectors {
            h.apply(b);
        }
    }

    /// Applies `Q` to `b` in place.
    pub fn apply_q(&self, b: &mut [f64]) {
        for h in self.reflectors.iter().rev() {
            h.apply(b);
        }
    }

    /// Explicit `Q` (`rows × rows`).
    pub fn q(&self) -> Mat {
        let n = self.r.rows();
        let mut q = Mat::identity(n);
        for j in 0..n {
            self.apply_q(q.col_mut(j));
        }
        q
    }

    /// Basic least-squares solution (dependent columns set to zero).
    pub fn solve_basic(&self, b: &[f64]) -> Vec<f64> {
        let mut y = b.to_vec();
        self.apply_qt(&mut y);
        let k = self.rank;
        let mut z = vec![0.0; self.r.cols()];
        for i in (0..k).rev() {
            let mut s = y[i];
            for j in i + 1..k {
                s -= self.r[(i, j)] * z[j];
            }
            z[i] = s / self.r[(i, i)];
        }
        let mut x = vec![0.0; self.r.cols()];
        for (pos, &orig) in self.perm.iter().enumerate() {
            x[orig] = z[pos];
        }
        x
    }

    /// Minimum-norm least-squares solution via a complete orthogonal decomposition.
    pub fn solve_min_norm(&self, b: &[f64]) -> Vec<f64> {
        let k = self.rank;
        let n = self.r.cols();
        if k == n {
            return self.solve_basic(b);
        }
        let mut y = b.to_vec();
        self.apply_qt(&mut y);
        // [R11 R12]ᵀ = Z [T; 0]
        let mut rt = Mat::from_fn(n, k, |i, j| self.r[(j, i)]);
        let mut zr = Vec::new();
        factor_plain(&mut rt, 0, 0, k, &mut zr);
        // [R11 R12] = Tᵀ Zᵀ; solve Tᵀ w = y[..k] (Tᵀ lower triangular)
        let mut w = vec![0.0; n];
        for i in 0..k {
            let mut s = y[i];
            for j in 0..i {
                s -= rt[(j, i)] * w[j];
            }
            w[i] = s / rt[(i, i)];
        }
        for h in zr.iter().rev() {
            h.apply(&mut w);
        }
        let mut x = vec![0.0; n];
        for (pos, &orig) in self.perm.iter().enumerate() {
            x[orig] = w[pos];
        }
        x
    }
}

/// Solves the square system `A X = B` by pivoted QR; fails if `A` is singular
/// to working precision (rank tolerance `n · ε · max column norm`).
pub fn solve_square(a: &Mat, b: &Mat) -> Result<Mat> {
    let n = a.rows();
    if a.cols() != n || b.rows() != n {
        return Err(Error::DimensionMismatch(alloc::format!(
            "square solve with {}x{} matrix and {} right-hand-side rows",
            a.rows(),
            a.cols(),
            b.rows()
        )));
    }
    let tol = n as f64 * EPS * a.max_col_norm();
    let qr = PivotedQr::new(a.clone(), tol);
    if qr.rank < n {
        return Err(Error::Singular);
    }
    let mut x = Mat::zeros(n, b.cols());
    for j in 0..b.cols() {
        let s = qr.solve_basic(b.col(j));
        x.col_mut(j).copy_from_slice(&s);
    }
    Ok(x)
}

/// Inverse of a square matrix via [`solve_square`].
pub fn inverse(a: &Mat) -> Result<Mat> {
    solve_square(a, &Mat::identity(a.rows()))
}

/// Spectral condition number `σ_max / σ_min`.
///
/// Returns `+∞` when the matrix is numerically singular, i.e.
/// `σ_min ≤ n · ε · σ_max`.
pub fn cond2(a: &Mat) -> f64 {
    let n = a.rows().max(a.cols());
    if n == 0 {
        return 1.0;
    }
    let m = nalgebra::DMatrix::from_column_slice(a.rows(), a.cols(), a.as_slice());
    let sv = m.singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if smax == 0.0 || smin <= n as f64 * EPS * smax {
        return f64::INFINITY;
    }
    smax / smin
}
