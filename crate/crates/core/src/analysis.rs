//! Piecewise-polynomial solutions as functions, error norms and observed
//! convergence orders.

use alloc::vec;
use alloc::vec::Vec;

use crate::basis::{scaled, BasisSpec};
use crate::model::{DaeProblem, ExactSolution, Partition};
use crate::nodes::{make_nodes, NodeKind};
use crate::{Error, Result};

/// Coefficients of a discrete solution together with everything needed to
/// evaluate it.
///
/// Interval `j` owns the block `c_j` of length `mN + k`: for each
/// differentiated component `κ < k` the `N + 1` coefficients of
/// `p̄_{j0}..p̄_{jN}`, then for each algebraic component the `N`
/// coefficients of `p_{j0}..p_{j,N−1}`.
#[derive(Clone, Debug)]
pub struct AnsatzSolution {
    problem: DaeProblem,
    partition: Partition,
    basis: BasisSpec,
    coeffs: Vec<f64>,
}

/// Number of coefficients per interval, `mN + k`.
pub fn block_len(m: usize, k: usize, n_deg: usize) -> usize {
    m * n_deg + k
}

/// Offset of coefficient `l` of component `kappa` inside an interval block.
pub fn coeff_offset(k: usize, n_deg: usize, kappa: usize, l: usize) -> usize {
    if kappa < k {
        kappa * (n_deg + 1) + l
    } else {
        k * (n_deg + 1) + (kappa - k) * n_deg + l
    }
}

impl AnsatzSolution {
    /// Wraps `coeffs` (length `n (mN + k)`).
    pub fn new(problem: &DaeProblem, partition: &Partition, basis: &BasisSpec, coeffs: Vec<f64>) -> Result<Self> {
        let want = partition.n() * block_len(problem.m(), problem.k(), basis.degree());
        if coeffs.len() != want {
            return Err(Error::DimensionMismatch(alloc::format!(
                "expected {want} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(Self { problem: problem.clone(), partition: partition.clone(), basis: basis.clone(), coeffs })
    }

    /// All coefficients.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// The partition.
    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// The basis.
    pub fn basis(&self) -> &BasisSpec {
        &self.basis
    }

    /// The problem.
    pub fn problem(&self) -> &DaeProblem {
        &self.problem
    }

    /// Coefficient block of interval `j`.
    pub fn block(&self, j: usize) -> &[f64] {
        let len = block_len(self.problem.m(), self.problem.k(), self.basis.degree());
        &self.coeffs[j * len..(j + 1) * len]
    }

    /// `(x, (Dx)')` of interval `j`'s polynomial at local coordinate `ρ`.
    pub fn evaluate_on(&self, j: usize, rho: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        if j >= self.partition.n() {
            return Err(Error::InvalidArgument(alloc::format!("no interval {j}")));
        }
        let (m, k, nd) = (self.problem.m(), self.problem.k(), self.basis.degree());
        let s = scaled(&self.basis, rho, self.partition.step(j))?;
        let c = self.block(j);
        let mut x = vec![0.0; m];
        let mut dx = vec![0.0; k];
        for kappa in 0..k {
            let cb = &c[coeff_offset(k, nd, kappa, 0)..][..nd + 1];
            x[kappa] = crate::dense::dot(cb, &s.diff);
            dx[kappa] = crate::dense::dot(cb, &s.diff_deriv);
        }
        for kappa in k..m {
            let cb = &c[coeff_offset(k, nd, kappa, 0)..][..nd];
            x[kappa] = crate::dense::dot(cb, &s.alg);
        }
        Ok((x, dx))
    }

    /// `(x(t), (Dx)'(t))`; interior breakpoints use the left interval.
    pub fn evaluate(&self, t: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        let (j, rho) = self.partition.locate(t)?;
        self.evaluate_on(j, rho)
    }

    /// Largest jump of a differentiated component over the interior breakpoints.
    pub fn max_jump(&self) -> Result<f64> {
        let mut worst = 0.0f64;
        for j in 0..self.partition.n().saturating_sub(1) {
            let (left, _) = self.evaluate_on(j, 1.0)?;
            let (right, _) = self.evaluate_on(j + 1, 0.0)?;
            for kappa in 0..self.problem.k() {
                worst = worst.max((left[kappa] - right[kappa]).abs());
            }
        }
        Ok(worst)
    }
}

/// A function that error norms can be measured against.
pub trait Reference {
    /// `(x, (Dx)')` at `t`, taken as the limit from inside `[lo, hi]`
    /// (relevant only for piecewise functions).
    fn eval_within(&self, t: f64, lo: f64, hi: f64) -> Result<(Vec<f64>, Vec<f64>)>;
}

impl Reference for ExactSolution {
    fn eval_within(&self, t: f64, _lo: f64, _hi: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        Ok(((self.x)(t), (self.dx)(t)))
    }
}

impl Reference for AnsatzSolution {
    fn eval_within(&self, t: f64, lo: f64, hi: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        let (j, _) = self.partition.locate(0.5 * (lo + hi))?;
        let rho = ((t - self.partition.left(j)) / self.partition.step(j)).clamp(0.0, 1.0);
        self.evaluate_on(j, rho)
    }
}

/// The zero function with `m` components and `k` derivatives.
#[derive(Clone, Copy, Debug)]
pub struct Zero {
    /// State dimension.
    pub m: usize,
    /// Differentiated components.
    pub k: usize,
}

impl Reference for Zero {
    fn eval_within(&self, _t: f64, _lo: f64, _hi: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        Ok((vec![0.0; self.m], vec![0.0; self.k]))
    }
}

/// `L²`, `L∞` and `H¹_D` norms of a difference.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Norms {
    /// `‖u − v‖_{L²}`.
    pub l2: f64,
    /// Max-abs difference over the quadrature nodes and interval endpoints.
    pub linf: f64,
    /// `(‖u − v‖²_{L²} + ‖(D(u − v))'‖²_{L²})^{1/2}`.
    pub h1d: f64,
}

/// Norms of `u − v` by a composite Gauss-Legendre rule with `n_quad` nodes
/// on each subinterval of `partition`.
pub fn norms_between(
    u: &dyn Reference,
    v: &dyn Reference,
    partition: &Partition,
    n_quad: usize,
) -> Result<Norms> {
    let rule = make_nodes(NodeKind::GaussLegendre, n_quad)?;
    let w = rule.weights().expect("Gauss-Legendre rules carry weights");
    let (mut l2, mut d2, mut linf) = (0.0, 0.0, 0.0f64);
    for j in 0..partition.n() {
        let (lo, hi, h) = (partition.left(j), partition.right(j), partition.step(j));
        for (&tau, &g) in rule.nodes().iter().zip(w) {
            let t = lo + tau * h;
            let ((ux, ud), (vx, vd)) = (u.eval_within(t, lo, hi)?, v.eval_within(t, lo, hi)?);
            l2 += h * g * ux.iter().zip(&vx).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
            d2 += h * g * ud.iter().zip(&vd).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
            linf = linf.max(ux.iter().zip(&vx).fold(0.0, |m, (a, b)| m.max((a - b).abs())));
        }
        for t in [lo, hi] {
            let ((ux, _), (vx, _)) = (u.eval_within(t, lo, hi)?, v.eval_within(t, lo, hi)?);
            linf = linf.max(ux.iter().zip(&vx).fold(0.0, |m, (a, b)| m.max((a - b).abs())));
        }
    }
    Ok(Norms { l2: libm::sqrt(l2), linf, h1d: libm::sqrt(l2 + d2) })
}

/// Error norms of `solution` against `exact` on the solution's own partition.
pub fn error_norms(solution: &AnsatzSolution, exact: &dyn Reference, n_quad: usize) -> Result<Norms> {
    norms_between(solution, exact, &solution.partition, n_quad)
}

/// Error norms against the problem's exact solution with `N + 2` nodes per interval.
pub fn error_norms_exact(solution: &AnsatzSolution) -> Result<Norms> {
    let exact = solution.problem.exact().ok_or(Error::MissingExact)?;
    error_norms(solution, exact, solution.basis.degree() + 2)
}

/// Norms of the exact solution itself.
pub fn exact_norms(problem: &DaeProblem, partition: &Partition, n_quad: usize) -> Result<Norms> {
    let exact = problem.exact().ok_or(Error::MissingExact)?;
    norms_between(exact, &Zero { m: problem.m(), k: problem.k() }, partition, n_quad)
}

/// Least-squares slope of `log(error)` against `log(h)`.
pub fn convergence_order(errors: &[f64], hs: &[f64]) -> Result<f64> {
    if errors.len() != hs.len() {
        return Err(Error::DimensionMismatch("one step size per error".into()));
    }
    if errors.len() < 2 {
        return Err(Error::InvalidArgument("need at least two data points".into()));
    }
    if errors.iter().chain(hs).any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidArgument("errors and step sizes must be positive".into()));
    }
    let x: Vec<f64> = hs.iter().map(|h| libm::log(*h)).collect();
    let y: Vec<f64> = errors.iter().map(|e| libm::log(*e)).collect();
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("step sizes must not all be equal".into()));
    }
    let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    Ok(sxy / sxx)
}
