//! Linear DAE boundary-value problems
//! `A(t)(Dx)'(t) + B(t)x(t) = q(t)`, `G_a x(a) + G_b x(b) = d` with `D = [I 0]`,
//! mesh partitions and the built-in benchmark problems.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::dense::Mat;
use crate::{Error, Result};

/// Matrix-valued coefficient `t ↦ M(t)`.
pub type MatFn = Arc<dyn Fn(f64) -> Mat + Send + Sync>;
/// Vector-valued function `t ↦ v(t)`.
pub type VecFn = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

/// Exact solution `x*` together with `(Dx*)'`.
#[derive(Clone)]
pub struct ExactSolution {
    /// `t ↦ x*(t)` (length `m`).
    pub x: VecFn,
    /// `t ↦ (Dx*)'(t)` (length `k`).
    pub dx: VecFn,
}

/// A linear DAE with boundary conditions on `[a, b]`.
///
/// The first `k` state components are the differentiated ones.
#[derive(Clone)]
pub struct DaeProblem {
    name: String,
    m: usize,
    k: usize,
    interval: (f64, f64),
    a_fn: MatFn,
    b_fn: MatFn,
    q_fn: VecFn,
    ga: Mat,
    gb: Mat,
    d: Vec<f64>,
    index_mu: Option<usize>,
    exact: Option<ExactSolution>,
    labels: Vec<String>,
    original_index: Vec<usize>,
}

impl fmt::Debug for DaeProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DaeProblem")
            .field("name", &self.name)
            .field("m", &self.m)
            .field("k", &self.k)
            .field("l", &self.l())
            .field("interval", &self.interval)
            .field("index_mu", &self.index_mu)
            .field("labels", &self.labels)
            .finish_non_exhaustive()
    }
}

impl DaeProblem {
    /// Problem without boundary conditions (`l = 0`).
    ///
    /// `a(t)` must be `m × k`, `b(t)` `m × m` and `q(t)` of length `m`; the
    /// shapes are checked at `t = a`.
    pub fn new(
        name: impl Into<String>,
        m: usize,
        k: usize,
        interval: (f64, f64),
        a: MatFn,
        b: MatFn,
        q: VecFn,
    ) -> Result<Self> {
        if k >= m {
            return Err(Error::InvalidArgument(alloc::format!("need k < m, got k = {k}, m = {m}")));
        }
        let (lo, hi) = interval;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidArgument(alloc::format!("invalid interval [{lo}, {hi}]")));
        }
        let (a0, b0, q0) = (a(lo), b(lo), q(lo));
        if a0.rows() != m || a0.cols() != k {
            return Err(Error::DimensionMismatch(alloc::format!(
                "A(t) is {}x{}, expected {m}x{k}",
                a0.rows(),
                a0.cols()
            )));
        }
        if b0.rows() != m || b0.cols() != m {
            return Err(Error::DimensionMismatch(alloc::format!(
                "B(t) is {}x{}, expected {m}x{m}",
                b0.rows(),
                b0.cols()
            )));
        }
        if q0.len() != m {
            return Err(Error::DimensionMismatch(alloc::format!(
                "q(t) has length {}, expected {m}",
                q0.len()
            )));
        }
        Ok(Self {
            name: name.into(),
            m,
            k,
            interval,
            a_fn: a,
            b_fn: b,
            q_fn: q,
            ga: Mat::zeros(0, m),
            gb: Mat::zeros(0, m),
            d: Vec::new(),
            index_mu: None,
            exact: None,
            labels: (1..=m).map(|i| alloc::format!("x{i}")).collect(),
            original_index: (0..m).collect(),
        })
    }

    /// Sets `G_a x(a) + G_b x(b) = d`; requires `l ≤ k`.
    pub fn with_boundary(mut self, ga: Mat, gb: Mat, d: Vec<f64>) -> Result<Self> {
        let l = d.len();
        if ga.rows() != l || gb.rows() != l || ga.cols() != self.m || gb.cols() != self.m {
            return Err(Error::DimensionMismatch(alloc::format!(
                "boundary matrices {}x{} and {}x{} do not fit l = {l}, m = {}",
                ga.rows(),
                ga.cols(),
                gb.rows(),
                gb.cols(),
                self.m
            )));
        }
        if l > self.k {
            return Err(Error::InvalidArgument(alloc::format!(
                "need l <= k, got l = {l}, k = {}",
                self.k
            )));
        }
        self.ga = ga;
        self.gb = gb;
        self.d = d;
        Ok(self)
    }

    /// Same coefficients on another interval `[lo, hi]`; boundary conditions
    /// then act at `lo` and `hi`.
    pub fn with_interval(mut self, lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::InvalidArgument(alloc::format!("invalid interval [{lo}, {hi}]")));
        }
        self.interval = (lo, hi);
        Ok(self)
    }

    /// Attaches an exact solution.
    pub fn with_exact(mut self, x: VecFn, dx: VecFn) -> Self {
        self.exact = Some(ExactSolution { x, dx });
        self
    }

    /// Records the tractability index.
    pub fn with_index(mut self, mu: usize) -> Self {
        self.index_mu = Some(mu);
        self
    }

    /// Component labels in internal order and, for each internal component,
    /// its position in the user's original ordering.
    pub fn with_labels(mut self, labels: Vec<String>, original_index: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; self.m];
        if labels.len() != self.m || original_index.len() != self.m {
            return Err(Error::DimensionMismatch("one label and index per component".into()));
        }
        for &i in &original_index {
            if i >= self.m || seen[i] {
                return Err(Error::InvalidArgument("original_index must be a permutation".into()));
            }
            seen[i] = true;
        }
        self.labels = labels;
        self.original_index = original_index;
        Ok(self)
    }

    /// Problem name.
    pub fn name(&self) -> &str {
        &self.name
    }
    /// State dimension `m`.
    pub fn m(&self) -> usize {
        self.m
    }
    /// Number of differentiated components `k`.
    pub fn k(&self) -> usize {
        self.k
    }
    /// Number of boundary conditions `l`.
    pub fn l(&self) -> usize {
        self.d.len()
    }
    /// `[a, b]`.
    pub fn interval(&self) -> (f64, f64) {
        self.interval
    }
    /// `A(t)`, `m × k`.
    pub fn a(&self, t: f64) -> Mat {
        (self.a_fn)(t)
    }
    /// `B(t)`, `m × m`.
    pub fn b(&self, t: f64) -> Mat {
        (self.b_fn)(t)
    }
    /// `q(t)`.
    pub fn q(&self, t: f64) -> Vec<f64> {
        (self.q_fn)(t)
    }
    /// `G_a`.
    pub fn ga(&self) -> &Mat {
        &self.ga
    }
    /// `G_b`.
    pub fn gb(&self) -> &Mat {
        &self.gb
    }
    /// `d`.
    pub fn d(&self) -> &[f64] {
        &self.d
    }
    /// Declared tractability index, if known.
    pub fn index_mu(&self) -> Option<usize> {
        self.index_mu
    }
    /// Exact solution, if known.
    pub fn exact(&self) -> Option<&ExactSolution> {
        self.exact.as_ref()
    }
    /// Component labels in internal order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Reorders an internal state vector into the user's original component order.
    pub fn to_original(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.m];
        for (i, &j) in self.original_index.iter().enumerate() {
            out[j] = x[i];
        }
        out
    }

    /// `A(t) dx + B(t) x − q(t)`.
    pub fn residual(&self, t: f64, x: &[f64], dx: &[f64]) -> Vec<f64> {
        let mut r = self.a(t).matvec(dx);
        let bx = self.b(t).matvec(x);
        let q = self.q(t);
        for i in 0..self.m {
            r[i] += bx[i] - q[i];
        }
        r
    }

    /// `G_a x(a) + G_b x(b) − d`.
    pub fn boundary_residual(&self, xa: &[f64], xb: &[f64]) -> Vec<f64> {
        let mut r = self.ga.matvec(xa);
        let gb = self.gb.matvec(xb);
        for i in 0..self.l() {
            r[i] += gb[i] - self.d[i];
        }
        r
    }
}

/// Mesh `a = t_0 < t_1 < … < t_n = b`; interval `j` (0-based) is `[t_j, t_{j+1}]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Partition {
    t: Vec<f64>,
}

impl Partition {
    /// Partition from strictly increasing breakpoints (at least two).
    pub fn new(breakpoints: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(Error::InvalidArgument("a partition needs at least two breakpoints".into()));
        }
        if breakpoints.iter().any(|t| !t.is_finite()) || breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument("breakpoints must be finite and strictly increasing".into()));
        }
        Ok(Self { t: breakpoints })
    }

    /// `n` equal subintervals of `[a, b]`.
    pub fn uniform(a: f64, b: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("need at least one subinterval".into()));
        }
        let mut t: Vec<f64> = (0..=n).map(|j| a + (b - a) * j as f64 / n as f64).collect();
        t[n] = b;
        Self::new(t)
    }

    /// Breakpoints `t_0..t_n`.
    pub fn breakpoints(&self) -> &[f64] {
        &self.t
    }
    /// Number of subintervals `n`.
    pub fn n(&self) -> usize {
        self.t.len() - 1
    }
    /// Left end of interval `j`.
    pub fn left(&self, j: usize) -> f64 {
        self.t[j]
    }
    /// Right end of interval `j`.
    pub fn right(&self, j: usize) -> f64 {
        self.t[j + 1]
    }
    /// `h_j = t_{j+1} − t_j`.
    pub fn step(&self, j: usize) -> f64 {
        self.t[j + 1] - self.t[j]
    }
    /// `h = max h_j`.
    pub fn h(&self) -> f64 {
        (0..self.n()).map(|j| self.step(j)).fold(0.0, f64::max)
    }
    /// `min h_j`.
    pub fn h_min(&self) -> f64 {
        (0..self.n()).map(|j| self.step(j)).fold(f64::INFINITY, f64::min)
    }
    /// Mesh ratio `h / h_min`.
    pub fn ratio(&self) -> f64 {
        self.h() / self.h_min()
    }

    /// Interval index and local coordinate `ρ ∈ [0, 1]` of `t`.
    ///
    /// Interior breakpoints belong to the interval on their left; `a` belongs
    /// to the first one.
    pub fn locate(&self, t: f64) -> Result<(usize, f64)> {
        let (a, b) = (self.t[0], self.t[self.n()]);
        if !(a..=b).contains(&t) {
            return Err(Error::OutOfDomain { value: t, lo: a, hi: b });
        }
        // first j with t <= t_{j+1}
        let j = self.t[1..].partition_point(|&x| x < t).min(self.n() - 1);
        let rho = ((t - self.t[j]) / self.step(j)).clamp(0.0, 1.0);
        Ok((j, rho))
    }
}

/// Uniform partition of the problem interval into `n` pieces.
pub fn uniform_partition(problem: &DaeProblem, n: usize) -> Result<Partition> {
    let (a, b) = problem.interval();
    Partition::uniform(a, b, n)
}

fn mat_fn(f: impl Fn(f64) -> Mat + Send + Sync + 'static) -> MatFn {
    Arc::new(f)
}

fn vec_fn(f: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static) -> VecFn {
    Arc::new(f)
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

/// Index-3 problem on `[0, 1]` with `l = 0` and default `η = 1`.
pub fn example_index3_l0() -> DaeProblem {
    example_index3_l0_eta(1.0)
}

/// Index-3 problem on `[0, 1]` with `l = 0`:
///
/// ```text
/// x2' + x1 = q1,   tη x2' + x3' + (η+1) x2 = q2,   tη x2 + x3 = q3,
/// x1* = e^{−t} sin t,  x2* = e^{−2t} sin t,  x3* = e^{−t} cos t.
/// ```
///
/// Internally the components are ordered `(x2, x3, x1)` so that the two
/// differentiated components come first.
pub fn example_index3_l0_eta(eta: f64) -> DaeProblem {
    use libm::{cos, exp, sin};
    let a = mat_fn(move |t| Mat::from_rows(&[&[1.0, 0.0], &[t * eta, 1.0], &[0.0, 0.0]]));
    let b = mat_fn(move |t| {
        Mat::from_rows(&[&[0.0, 0.0, 1.0], &[eta + 1.0, 0.0, 0.0], &[t * eta, 1.0, 0.0]])
    });
    let q = vec_fn(move |t| {
        let (s, c, e1, e2) = (sin(t), cos(t), exp(-t), exp(-2.0 * t));
        let dx2 = e2 * (c - 2.0 * s);
        let dx3 = -e1 * (c + s);
        vec![
            dx2 + e1 * s,
            t * eta * dx2 + dx3 + (eta + 1.0) * e2 * s,
            t * eta * e2 * s + e1 * c,
        ]
    });
    let x = vec_fn(|t| vec![exp(-2.0 * t) * sin(t), exp(-t) * cos(t), exp(-t) * sin(t)]);
    let dx = vec_fn(|t| {
        vec![exp(-2.0 * t) * (cos(t) - 2.0 * sin(t)), -exp(-t) * (cos(t) + sin(t))]
    });
    DaeProblem::new("index3_l0", 3, 2, (0.0, 1.0), a, b, q)
        .and_then(|p| p.with_labels(labels(&["x2", "x3", "x1"]), vec![1, 2, 0]))
        .expect("built-in problem is consistent")
        .with_index(3)
        .with_exact(x, dx)
}

/// Linearized Campbell–Moore problem on `[0, 5]` (`m = 7`, `k = 6`, `l = 4`,
/// index 3, `ρ = 5`) with initial values `x2(0) = 1, x3(0) = 2, x5(0) = x6(0) = 0`.
pub fn example_campbell_moore() -> DaeProblem {
    use libm::{cos, sin};
    const R: f64 = 5.0;
    let a = mat_fn(|_| Mat::from_fn(7, 6, |i, j| if i == j { 1.0 } else { 0.0 }));
    let b = mat_fn(|t| {
        let (s, c) = (sin(t), cos(t));
        Mat::from_rows(&[
            &[0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0],
            &[0.0, 0.0, s, 0.0, 1.0, -c, -2.0 * R * c * c],
            &[0.0, 0.0, -c, -1.0, 0.0, -s, -2.0 * R * s * c],
            &[0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 2.0 * R * s],
            &[2.0 * R * c * c, 2.0 * R * s * c, -2.0 * R * s, 0.0, 0.0, 0.0, 0.0],
        ])
    });
    let q = vec_fn(|t| {
        let (s, c) = (sin(t), cos(t));
        vec![
            0.0,
            0.0,
            0.0,
            -2.0 * s + 8.0 * s * c * c,
            -2.0 * c - 2.0 * c * c * c + 6.0 * s * s * c,
            -2.0 * cos(2.0 * t),
            0.0,
        ]
    });
    let x = vec_fn(|t| {
        let (s, c) = (sin(t), cos(t));
        vec![s, c, 2.0 * c * c, c, -s, -2.0 * sin(2.0 * t), -s / R]
    });
    let dx = vec_fn(|t| {
        let (s, c) = (sin(t), cos(t));
        vec![c, -s, -2.0 * sin(2.0 * t), -s, -c, -4.0 * cos(2.0 * t)]
    });
    let mut ga = Mat::zeros(4, 7);
    for (row, col) in [(0, 1), (1, 2), (2, 4), (3, 5)] {
        ga[(row, col)] = 1.0;
    }
    DaeProblem::new("campbell_moore", 7, 6, (0.0, 5.0), a, b, q)
        .and_then(|p| p.with_boundary(ga, Mat::zeros(4, 7), vec![1.0, 2.0, 0.0, 0.0]))
        .expect("built-in problem is consistent")
        .with_index(3)
        .with_exact(x, dx)
}

/// Index-4 boundary-value problem on `[0, 1]` (`m = 6`, `k = 5`, `l = 2`) with
/// `x1(0) = x1(1) = 1`; components `(x1, x2, y1, y2, y3, y4)`:
///
/// ```text
/// x1' = λ x2,  x2' = λ x1,  y1 = x1,  y1' = y2,  y2' = y3,  y3' = y4.
/// ```
pub fn example_index4_bvp(lambda: f64) -> Result<DaeProblem> {
    use libm::exp;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(alloc::format!("lambda must be positive, got {lambda}")));
    }
    let l = lambda;
    let a = mat_fn(|_| {
        let mut a = Mat::zeros(6, 5);
        for (row, col) in [(0, 0), (1, 1), (3, 2), (4, 3), (5, 4)] {
            a[(row, col)] = 1.0;
        }
        a
    });
    let b = mat_fn(move |_| {
        Mat::from_rows(&[
            &[0.0, -l, 0.0, 0.0, 0.0, 0.0],
            &[-l, 0.0, 0.0, 0.0, 0.0, 0.0],
            &[-1.0, 0.0, 1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, -1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0, -1.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0, 0.0, -1.0],
        ])
    });
    let q = vec_fn(|_| vec![0.0; 6]);
    // e^{−λt}(e^λ ± e^{2λt})/(1+e^λ), written without overflow for large λ
    let den = 1.0 + exp(-l);
    let even = move |t: f64| (exp(-l * t) + exp(l * (t - 1.0))) / den;
    let odd = move |t: f64| (exp(l * (t - 1.0)) - exp(-l * t)) / den;
    let x = vec_fn(move |t| {
        let (e, o) = (even(t), odd(t));
        vec![e, o, e, l * o, l * l * e, l * l * l * o]
    });
    let dx = vec_fn(move |t| {
        let (e, o) = (even(t), odd(t));
        vec![l * o, l * e, l * o, l * l * e, l * l * l * o]
    });
    let mut ga = Mat::zeros(2, 6);
    let mut gb = Mat::zeros(2, 6);
    ga[(0, 0)] = 1.0;
    gb[(1, 0)] = 1.0;
    let p = DaeProblem::new("index4_bvp", 6, 5, (0.0, 1.0), a, b, q)?
        .with_boundary(ga, gb, vec![1.0, 1.0])?
        .with_labels(labels(&["x1", "x2", "y1", "y2", "y3", "y4"]), (0..6).collect())?
        .with_index(4)
        .with_exact(x, dx);
    Ok(p)
}
