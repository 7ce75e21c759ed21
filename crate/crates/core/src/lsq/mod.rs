//! Solvers for `min ‖𝒜c − r‖` subject to `𝒞c = 0`.
//!
//! * [`solve_direct`]: exact constraints. Small systems use an orthonormal
//!   null-space basis of `𝒞` (dense); large ones use direct elimination of
//!   the constraints inside the block-frontal QR of [`frontal`].
//! * [`solve_weighted`]: unconstrained least squares for `[ω𝒞; 𝒜]`.
//! * [`solve_deferred`]: weighted factorization reused in a correction loop
//!   that drives `𝒞c` to zero.

pub mod frontal;

use alloc::vec;
use alloc::vec::Vec;

use crate::assembly::{DiscreteSystem, SystemShape};
use crate::dense::{norm2, Mat, PivotedQr};
use crate::sparse::CsrMatrix;
use crate::{Error, Result, EPS};
pub use frontal::{FrontalQr, SparseRow};

/// Up to this many unknowns [`Route::Auto`] picks the dense route.
pub const DENSE_LIMIT: usize = 1500;

/// Factorization route.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Route {
    /// Dense below [`DENSE_LIMIT`] unknowns, frontal above.
    #[default]
    Auto,
    /// Dense Householder QR (null-space method for exact constraints).
    Dense,
    /// Block-frontal sparse QR.
    Frontal,
}

impl Route {
    fn resolve(self, ncols: usize) -> Route {
        match self {
            Route::Auto if ncols <= DENSE_LIMIT => Route::Dense,
            Route::Auto => Route::Frontal,
            r => r,
        }
    }
}

/// Row order of the stacked matrix `[ω𝒞; 𝒜]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Ordering {
    /// All weighted constraint rows first.
    #[default]
    ConstraintsFirst,
    /// Interface `j`'s constraint rows right after interval `j`'s
    /// collocation rows; boundary rows last.
    Interleaved,
}

/// Which solver produced a solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    /// Exact constraints.
    Direct,
    /// Weighted constraints.
    Weighted,
    /// Weighted factorization with deferred correction.
    Deferred,
}

/// A constrained least-squares problem with homogeneous constraints.
#[derive(Clone, Debug)]
pub struct LsqProblem<'a> {
    /// `𝒜`.
    pub a: &'a CsrMatrix,
    /// `𝒞`.
    pub c: &'a CsrMatrix,
    /// `r`.
    pub r: &'a [f64],
    /// First column of each column group, followed by the column count.
    pub groups: Vec<usize>,
    /// Layout of a collocation system, if known.
    pub shape: Option<SystemShape>,
    /// Relative rank threshold of the least-squares factorizations: a pivot
    /// is dependent once the largest remaining column norm is at most
    /// `rank_rtol · max column norm`. `None` selects
    /// [`default_rank_rtol`] for the matrix being factored.
    pub rank_rtol: Option<f64>,
}

/// `20 (rows + cols) ε`, the usual sparse-QR rank threshold.
pub fn default_rank_rtol(rows: usize, cols: usize) -> f64 {
    20.0 * (rows + cols) as f64 * EPS
}

impl<'a> LsqProblem<'a> {
    /// Generic problem with a single column group.
    pub fn new(a: &'a CsrMatrix, c: &'a CsrMatrix, r: &'a [f64]) -> Result<Self> {
        let p = Self { a, c, r, groups: vec![0, a.ncols()], shape: None, rank_rtol: None };
        p.check()?;
        Ok(p)
    }

    fn check(&self) -> Result<()> {
        let n = self.a.ncols();
        if self.c.ncols() != n || self.r.len() != self.a.nrows() {
            return Err(Error::DimensionMismatch(alloc::format!(
                "A is {}x{}, C is {}x{}, r has {} entries",
                self.a.nrows(),
                n,
                self.c.nrows(),
                self.c.ncols(),
                self.r.len()
            )));
        }
        if self.groups.first() != Some(&0)
            || self.groups.last() != Some(&n)
            || self.groups.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(Error::InvalidArgument("column groups must partition the columns".into()));
        }
        if let Some(t) = self.rank_rtol {
            if !(0.0..1.0).contains(&t) {
                return Err(Error::InvalidArgument(alloc::format!("rank_rtol must lie in [0, 1), got {t}")));
            }
        }
        Ok(())
    }

    /// Replaces the relative rank threshold.
    pub fn with_rank_rtol(mut self, rtol: f64) -> Self {
        self.rank_rtol = Some(rtol);
        self
    }

    fn rtol(&self, rows: usize, cols: usize) -> f64 {
        self.rank_rtol.unwrap_or_else(|| default_rank_rtol(rows, cols))
    }

    /// Number of unknowns.
    pub fn unknowns(&self) -> usize {
        self.a.ncols()
    }
}

impl<'a> From<&'a DiscreteSystem> for LsqProblem<'a> {
    fn from(s: &'a DiscreteSystem) -> Self {
        let bl = s.shape.block_len();
        Self {
            a: &s.a_mat,
            c: &s.c_mat,
            r: &s.rhs,
            groups: (0..=s.shape.n).map(|j| j * bl).collect(),
            shape: Some(s.shape),
            rank_rtol: None,
        }
    }
}

/// Diagnostics of a solve.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverReport {
    /// Solver.
    pub method: Method,
    /// Route actually used (never `Auto`).
    pub route: Route,
    /// Constraint weight (weighted and deferred solvers).
    pub omega: Option<f64>,
    /// Row order (weighted and deferred solvers).
    pub ordering: Option<Ordering>,
    /// Unknowns.
    pub unknowns: usize,
    /// Rows of `𝒜`.
    pub rows: usize,
    /// Rows of `𝒞`.
    pub constraints: usize,
    /// Numerical rank of `𝒞` (direct solver).
    pub constraint_rank: usize,
    /// Numerical rank of the least-squares part: `𝒜` on the null space of
    /// `𝒞` (direct) or the stacked matrix (weighted).
    pub ls_rank: usize,
    /// `𝒞` was found rank deficient.
    pub constraint_rank_deficient: bool,
    /// The least-squares part was rank deficient.
    pub rank_deficient: bool,
    /// The minimum-norm solution was returned.
    pub min_norm: bool,
    /// `n m N + k` for collocation systems.
    pub null_space_dim: Option<usize>,
    /// `n m N + k − l` for collocation systems.
    pub null_space_dim_minus_l: Option<usize>,
    /// `‖𝒜c − r‖`.
    pub residual: f64,
    /// `‖𝒞c‖`.
    pub constraint_residual: f64,
    /// Deferred-correction steps taken.
    pub iterations: usize,
    /// Correction norms `‖Δc‖`, one per deferred-correction step.
    pub corrections: Vec<f64>,
    /// Whether the deferred-correction stopping rule was met.
    pub converged: Option<bool>,
    /// Stopping rule of the deferred correction.
    pub stopping_rule: Option<&'static str>,
}

/// Coefficients and diagnostics.
#[derive(Clone, Debug)]
pub struct LsqSolution {
    /// Coefficient vector.
    pub coeffs: Vec<f64>,
    /// Diagnostics.
    pub report: SolverReport,
}

/// Options of [`solve_deferred`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DeferredOptions {
    /// Constraint weight, default `ε^{-1/3}`.
    pub omega: f64,
    /// Relative correction tolerance, default `1e-15`.
    pub tol: f64,
    /// Maximal number of corrections, default 2.
    pub max_iter: usize,
    /// Row order.
    pub ordering: Ordering,
    /// Route.
    pub route: Route,
}

impl Default for DeferredOptions {
    fn default() -> Self {
        Self {
            omega: default_deferred_omega(),
            tol: 1e-15,
            max_iter: 2,
            ordering: Ordering::ConstraintsFirst,
            route: Route::Auto,
        }
    }
}

/// `ε^{-1/3}`.
pub fn default_deferred_omega() -> f64 {
    1.0 / libm::cbrt(EPS)
}

const STOPPING_RULE: &str = "‖Δc‖ ≤ tol · max(1, ‖c‖)";

fn rows_of(m: &CsrMatrix, scale: f64) -> impl Iterator<Item = SparseRow> + '_ {
    (0..m.nrows()).map(move |i| {
        let (c, v) = m.row(i);
        SparseRow::new(c.to_vec(), v.iter().map(|x| x * scale).collect())
    })
}

fn col_sq_norms(m: &CsrMatrix, scale: f64, acc: &mut [f64]) {
    for (_, j, v) in m.iter() {
        acc[j] += (v * scale) * (v * scale);
    }
}

/// Orthonormal basis `𝒞̃` of the null space of `c` (as columns) and the rank
/// of `c`, from a pivoted QR of `cᵀ` with tolerance `ε^{1/2} · max column norm`.
pub fn null_space_basis(c: &CsrMatrix) -> (Mat, usize) {
    let n = c.ncols();
    if c.nrows() == 0 {
        return (Mat::identity(n), 0);
    }
    let qr = PivotedQr::with_default_tol(c.to_dense().transpose());
    let q = qr.q();
    let rank = qr.rank;
    (Mat::from_fn(n, n - rank, |i, j| q[(i, rank + j)]), rank)
}

fn sparse_times_dense(a: &CsrMatrix, b: &Mat) -> Mat {
    let mut out = Mat::zeros(a.nrows(), b.cols());
    for (i, j, v) in a.iter() {
        for c in 0..b.cols() {
            out[(i, c)] += v * b[(j, c)];
        }
    }
    out
}

fn residuals(p: &LsqProblem<'_>, x: &[f64]) -> (f64, f64) {
    let ax = p.a.matvec(x);
    let res: Vec<f64> = ax.iter().zip(p.r).map(|(u, v)| u - v).collect();
    (norm2(&res), norm2(&p.c.matvec(x)))
}

fn base_report(p: &LsqProblem<'_>, method: Method, route: Route) -> SolverReport {
    SolverReport {
        method,
        route,
        omega: None,
        ordering: None,
        unknowns: p.unknowns(),
        rows: p.a.nrows(),
        constraints: p.c.nrows(),
        constraint_rank: 0,
        ls_rank: 0,
        constraint_rank_deficient: false,
        rank_deficient: false,
        min_norm: false,
        null_space_dim: p.shape.map(|s| s.null_space_dim()),
        null_space_dim_minus_l: p.shape.map(|s| s.null_space_dim() - s.l),
        residual: 0.0,
        constraint_residual: 0.0,
        iterations: 0,
        corrections: Vec::new(),
        converged: None,
        stopping_rule: None,
    }
}

/// Constrained solve with the automatic route.
pub fn solve_direct(p: &LsqProblem<'_>) -> Result<LsqSolution> {
    solve_direct_with(p, Route::Auto)
}

/// Constrained solve on a chosen route.
pub fn solve_direct_with(p: &LsqProblem<'_>, route: Route) -> Result<LsqSolution> {
    p.check()?;
    let route = route.resolve(p.unknowns());
    let mut report = base_report(p, Method::Direct, route);
    let coeffs = match route {
        Route::Dense => {
            let (basis, rank) = null_space_basis(p.c);
            let ac = sparse_times_dense(p.a, &basis);
            let tol = p.rtol(ac.rows(), ac.cols()) * ac.max_col_norm();
            let qr = PivotedQr::new(ac, tol);
            report.constraint_rank = rank;
            report.constraint_rank_deficient = rank < p.c.nrows();
            report.ls_rank = qr.rank;
            report.rank_deficient = qr.rank < basis.cols();
            report.min_norm = report.rank_deficient;
            let z = if report.rank_deficient { qr.solve_min_norm(p.r) } else { qr.solve_basic(p.r) };
            basis.matvec(&z)
        }
        _ => {
            let ls: Vec<SparseRow> = rows_of(p.a, 1.0).collect();
            let cs: Vec<SparseRow> = rows_of(p.c, 1.0).collect();
            let rows = p.a.nrows() + p.c.nrows();
            let tol_ls = p.rtol(rows, p.unknowns()) * p.a.max_col_norm();
            let tol_c = libm::sqrt(EPS) * p.c.max_col_norm();
            let f = FrontalQr::factor(&ls, &cs, &p.groups, tol_ls, tol_c);
            report.constraint_rank = f.c_rank();
            report.constraint_rank_deficient = f.c_rank() < p.c.nrows();
            report.ls_rank = f.ls_rank();
            report.rank_deficient = f.c_rank() + f.ls_rank() < p.unknowns();
            f.solve(p.r, &vec![0.0; p.c.nrows()])
        }
    };
    (report.residual, report.constraint_residual) = residuals(p, &coeffs);
    Ok(LsqSolution { coeffs, report })
}

#[derive(Clone, Copy)]
enum RowRef {
    A(usize),
    C(usize),
}

fn row_order(p: &LsqProblem<'_>, ordering: Ordering) -> Result<Vec<RowRef>> {
    let (na, nc) = (p.a.nrows(), p.c.nrows());
    match ordering {
        Ordering::ConstraintsFirst => Ok((0..nc).map(RowRef::C).chain((0..na).map(RowRef::A)).collect()),
        Ordering::Interleaved => {
            let s = p
                .shape
                .ok_or_else(|| Error::Unsupported("interleaved ordering needs a collocation layout".into()))?;
            let rpi = s.rows_per_interval();
            let mut order = Vec::with_capacity(na + nc);
            for j in 0..s.n {
                order.extend((j * rpi..(j + 1) * rpi).map(RowRef::A));
                if j + 1 < s.n {
                    order.extend((j * s.k..(j + 1) * s.k).map(RowRef::C));
                }
            }
            order.extend((s.n * rpi..na).map(RowRef::A));
            Ok(order)
        }
    }
}

enum Factor {
    Dense(PivotedQr),
    Frontal(FrontalQr),
}

struct Weighted {
    order: Vec<RowRef>,
    factor: Factor,
    rank: usize,
}

impl Weighted {
    fn new(p: &LsqProblem<'_>, omega: f64, ordering: Ordering, route: Route) -> Result<Self> {
        p.check()?;
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::InvalidArgument(alloc::format!("omega must be positive, got {omega}")));
        }
        let order = row_order(p, ordering)?;
        let n = p.unknowns();
        // the rank threshold is measured on the unweighted rows: relative to
        // ‖[ω𝒞; 𝒜]‖ it would discard all of 𝒜 once ω exceeds ε^{-1/2}
        let mut sq = vec![0.0; n];
        col_sq_norms(p.a, 1.0, &mut sq);
        col_sq_norms(p.c, 1.0, &mut sq);
        let tol = p.rtol(order.len(), n) * sq.iter().fold(0.0f64, |m, v| m.max(libm::sqrt(*v)));
        let factor = match route.resolve(n) {
            Route::Dense => {
                let mut g = Mat::zeros(order.len(), n);
                for (i, r) in order.iter().enumerate() {
                    let (cols, vals, s) = match *r {
                        RowRef::A(k) => (p.a.row(k).0, p.a.row(k).1, 1.0),
                        RowRef::C(k) => (p.c.row(k).0, p.c.row(k).1, omega),
                    };
                    for (&c, &v) in cols.iter().zip(vals) {
                        g[(i, c)] = v * s;
                    }
                }
                Factor::Dense(PivotedQr::new(g, tol))
            }
            _ => {
                let rows: Vec<SparseRow> = order
                    .iter()
                    .map(|r| {
                        let (m, k, s) = match *r {
                            RowRef::A(k) => (p.a, k, 1.0),
                            RowRef::C(k) => (p.c, k, omega),
                        };
                        let (c, v) = m.row(k);
                        SparseRow::new(c.to_vec(), v.iter().map(|x| x * s).collect())
                    })
                    .collect();
                Factor::Frontal(FrontalQr::factor(&rows, &[], &p.groups, tol, tol))
            }
        };
        let rank = match &factor {
            Factor::Dense(q) => q.rank,
            Factor::Frontal(f) => f.ls_rank(),
        };
        Ok(Self { order, factor, rank })
    }

    fn route(&self) -> Route {
        match self.factor {
            Factor::Dense(_) => Route::Dense,
            Factor::Frontal(_) => Route::Frontal,
        }
    }

    /// Least-squares solution for targets `b_c` of the weighted constraint
    /// rows and `b_a` of the rows of `𝒜`.
    fn solve(&self, b_c: &[f64], b_a: &[f64], n: usize) -> Vec<f64> {
        let rhs: Vec<f64> = self
            .order
            .iter()
            .map(|r| match *r {
                RowRef::A(k) => b_a[k],
                RowRef::C(k) => b_c[k],
            })
            .collect();
        match &self.factor {
            Factor::Dense(q) if q.rank < n => q.solve_min_norm(&rhs),
            Factor::Dense(q) => q.solve_basic(&rhs),
            Factor::Frontal(f) => f.solve(&rhs, &[]),
        }
    }
}

/// Weighted solve with the automatic route.
pub fn solve_weighted(p: &LsqProblem<'_>, omega: f64, ordering: Ordering) -> Result<LsqSolution> {
    solve_weighted_with(p, omega, ordering, Route::Auto)
}

/// Weighted solve `min ‖[ω𝒞; 𝒜]c − [0; r]‖` on a chosen route.
pub fn solve_weighted_with(
    p: &LsqProblem<'_>,
    omega: f64,
    ordering: Ordering,
    route: Route,
) -> Result<LsqSolution> {
    let w = Weighted::new(p, omega, ordering, route)?;
    let n = p.unknowns();
    let coeffs = w.solve(&vec![0.0; p.c.nrows()], p.r, n);
    let mut report = base_report(p, Method::Weighted, w.route());
    report.omega = Some(omega);
    report.ordering = Some(ordering);
    report.ls_rank = w.rank;
    report.rank_deficient = w.rank < n;
    report.min_norm = report.rank_deficient && w.route() == Route::Dense;
    (report.residual, report.constraint_residual) = residuals(p, &coeffs);
    Ok(LsqSolution { coeffs, report })
}

/// Weighted solve followed by deferred corrections that reuse the
/// factorization. Each step updates the accumulated constraint shift
/// `g ← g + ω r_C` and solves for `Δc` with right-hand side
/// `(g + ω r_C; r_A)`, where `r_C = −𝒞c` and `r_A = r − 𝒜c`.
pub fn solve_deferred(p: &LsqProblem<'_>, opts: &DeferredOptions) -> Result<LsqSolution> {
    if !(opts.tol > 0.0) || opts.max_iter == 0 {
        return Err(Error::InvalidArgument("deferred correction needs tol > 0 and max_iter >= 1".into()));
    }
    let w = Weighted::new(p, opts.omega, opts.ordering, opts.route)?;
    let n = p.unknowns();
    let nc = p.c.nrows();
    let mut c = w.solve(&vec![0.0; nc], p.r, n);
    let mut g = vec![0.0; nc];
    let mut corrections = Vec::new();
    let mut converged = false;
    for _ in 0..opts.max_iter {
        let r_c: Vec<f64> = p.c.matvec(&c).iter().map(|v| -v).collect();
        let r_a: Vec<f64> = p.a.matvec(&c).iter().zip(p.r).map(|(ac, r)| r - ac).collect();
        for (gi, ri) in g.iter_mut().zip(&r_c) {
            *gi += opts.omega * ri;
        }
        let target: Vec<f64> = g.iter().zip(&r_c).map(|(gi, ri)| gi + opts.omega * ri).collect();
        let dc = w.solve(&target, &r_a, n);
        for (ci, di) in c.iter_mut().zip(&dc) {
            *ci += di;
        }
        let dn = norm2(&dc);
        corrections.push(dn);
        if dn <= opts.tol * norm2(&c).max(1.0) {
            converged = true;
            break;
        }
    }
    let mut report = base_report(p, Method::Deferred, w.route());
    report.omega = Some(opts.omega);
    report.ordering = Some(opts.ordering);
    report.ls_rank = w.rank;
    report.rank_deficient = w.rank < n;
    report.min_norm = report.rank_deficient && w.route() == Route::Dense;
    report.iterations = corrections.len();
    report.corrections = corrections;
    report.converged = Some(converged);
    report.stopping_rule = Some(STOPPING_RULE);
    (report.residual, report.constraint_residual) = residuals(p, &c);
    Ok(LsqSolution { coeffs: c, report })
}

/// `‖𝒞̃ᵀ 𝒜ᵀ (𝒜c − r)‖`: the first-order optimality residual on the null
/// space of `𝒞` (dense, for moderate sizes).
pub fn projected_gradient_norm(p: &LsqProblem<'_>, x: &[f64]) -> f64 {
    let (basis, _) = null_space_basis(p.c);
    let res: Vec<f64> = p.a.matvec(x).iter().zip(p.r).map(|(u, v)| u - v).collect();
    norm2(&basis.tr_matvec(&p.a.tr_matvec(&res)))
}
