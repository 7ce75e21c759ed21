//! The discrete constrained least-squares problem
//! `min ‖𝒜c − r‖²  subject to  𝒞c = 0`.
//!
//! Rows of `𝒜` come in one block of `mM` rows per interval (node-major:
//! row `i·m + e` is equation `e` at node `τ_i`), each premultiplied by
//! `h_j^{1/2} (L̂ ⊗ I_m)`, followed by the `l` boundary rows scaled by `√α`.
//! `𝒞` holds `k` continuity rows per interior breakpoint.

use alloc::vec;
use alloc::vec::Vec;

use crate::analysis::{block_len, coeff_offset, AnsatzSolution};
use crate::basis::{scaled, BasisSpec, Scaled};
use crate::dense::Mat;
use crate::model::{DaeProblem, Partition};
use crate::nodes::{make_nodes, NodeKind, NodeSet};
use crate::sparse::{CsrMatrix, Triplets};
use crate::vandermonde::{mass_factor, Functional};
use crate::{Error, Result};

/// Collocation nodes, functional and boundary weight.
#[derive(Clone, Debug, PartialEq)]
pub struct CollocationConfig {
    /// Number of nodes `M` per interval.
    pub m_nodes: usize,
    /// Node family.
    pub node_kind: NodeKind,
    /// Discrete functional.
    pub functional: Functional,
    /// Weight `α > 0` of the boundary term.
    pub alpha: f64,
}

impl CollocationConfig {
    /// `M = N + 1` Gauss-Legendre nodes, functional `R`, `α = 1`.
    pub fn for_degree(n_deg: usize) -> Self {
        Self { m_nodes: n_deg + 1, node_kind: NodeKind::GaussLegendre, functional: Functional::R, alpha: 1.0 }
    }

    /// Checks `M ≥ N + 1` and `α > 0`.
    pub fn validate(&self, n_deg: usize) -> Result<()> {
        if self.m_nodes < n_deg + 1 {
            return Err(Error::InvalidArgument(alloc::format!(
                "need M >= N + 1 collocation nodes, got M = {}, N = {n_deg}",
                self.m_nodes
            )));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidArgument(alloc::format!("alpha must be positive, got {}", self.alpha)));
        }
        Ok(())
    }
}

/// Sizes of a discrete system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SystemShape {
    /// Number of intervals `n`.
    pub n: usize,
    /// State dimension `m`.
    pub m: usize,
    /// Differentiated components `k`.
    pub k: usize,
    /// Boundary conditions `l`.
    pub l: usize,
    /// Degree `N`.
    pub n_deg: usize,
    /// Collocation nodes `M`.
    pub m_nodes: usize,
}

impl SystemShape {
    /// Coefficients per interval, `mN + k`.
    pub fn block_len(&self) -> usize {
        block_len(self.m, self.k, self.n_deg)
    }
    /// Unknowns `n(mN + k)`.
    pub fn unknowns(&self) -> usize {
        self.n * self.block_len()
    }
    /// Collocation rows per interval, `mM`.
    pub fn rows_per_interval(&self) -> usize {
        self.m * self.m_nodes
    }
    /// Rows of `𝒜`, `n m M + l`.
    pub fn rows(&self) -> usize {
        self.n * self.rows_per_interval() + self.l
    }
    /// Rows of `𝒞`, `(n − 1) k`.
    pub fn constraints(&self) -> usize {
        (self.n - 1) * self.k
    }
    /// Dimension of the null space of `𝒞`, `n m N + k`.
    pub fn null_space_dim(&self) -> usize {
        self.n * self.m * self.n_deg + self.k
    }
}

/// Assembled `(𝒜, 𝒞, r)`.
#[derive(Clone, Debug)]
pub struct DiscreteSystem {
    /// `𝒜`.
    pub a_mat: CsrMatrix,
    /// `𝒞`.
    pub c_mat: CsrMatrix,
    /// `r`, including `√α d` in the last `l` entries.
    pub rhs: Vec<f64>,
    /// Sizes.
    pub shape: SystemShape,
}

/// Everything shared by the per-interval assembly steps.
pub struct AssemblyContext<'a> {
    problem: &'a DaeProblem,
    partition: &'a Partition,
    basis: &'a BasisSpec,
    config: &'a CollocationConfig,
    nodes: NodeSet,
    factor: Mat,
    /// Basis at the nodes on an interval of unit length.
    at_nodes: Vec<Scaled>,
    shape: SystemShape,
}

/// Rows and right-hand side of one interval, in local numbering.
#[derive(Clone, Debug)]
pub struct IntervalBlock {
    /// Interval index.
    pub j: usize,
    /// `(local row, local column, value)`.
    pub entries: Vec<(usize, usize, f64)>,
    /// Local right-hand side (length `mM`).
    pub rhs: Vec<f64>,
}

impl<'a> AssemblyContext<'a> {
    /// Validates the inputs and precomputes nodes, mass factor and basis values.
    pub fn new(
        problem: &'a DaeProblem,
        partition: &'a Partition,
        basis: &'a BasisSpec,
        config: &'a CollocationConfig,
    ) -> Result<Self> {
        config.validate(basis.degree())?;
        let (a, b) = problem.interval();
        let bp = partition.breakpoints();
        let tol = 1e-12 * (b - a).abs().max(1.0);
        if (bp[0] - a).abs() > tol || (bp[bp.len() - 1] - b).abs() > tol {
            return Err(Error::DimensionMismatch(alloc::format!(
                "partition [{}, {}] does not cover the problem interval [{a}, {b}]",
                bp[0],
                bp[bp.len() - 1]
            )));
        }
        let nodes = make_nodes(config.node_kind, config.m_nodes)?;
        let factor = mass_factor(&nodes, config.functional)?.factor;
        let at_nodes = nodes.nodes().iter().map(|&r| scaled(basis, r, 1.0)).collect::<Result<Vec<_>>>()?;
        let shape = SystemShape {
            n: partition.n(),
            m: problem.m(),
            k: problem.k(),
            l: problem.l(),
            n_deg: basis.degree(),
            m_nodes: config.m_nodes,
        };
        Ok(Self { problem, partition, basis, config, nodes, factor, at_nodes, shape })
    }

    /// Sizes of the system being assembled.
    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    /// Collocation nodes on [0, 1].
    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    /// The `m × (mN + k)` matrix `a_j(t)` with `x(t) = a_j(t) c_j`.
    fn a_row_matrix(&self, s: &Scaled) -> Mat {
        let SystemShape { m, k, n_deg, .. } = self.shape;
        let mut a = Mat::zeros(m, self.shape.block_len());
        for kappa in 0..m {
            let vals: &[f64] = if kappa < k { &s.diff } else { &s.alg };
            for (l, &v) in vals.iter().enumerate() {
                a[(kappa, coeff_offset(k, n_deg, kappa, l))] = v;
            }
        }
        a
    }

    /// Weighted collocation rows of interval `j`.
    pub fn assemble_interval(&self, j: usize) -> Result<IntervalBlock> {
        let SystemShape { m, k, n_deg, m_nodes, .. } = self.shape;
        let h = self.partition.step(j);
        let t0 = self.partition.left(j);
        let cols = self.shape.block_len();
        // unweighted rows W (mM × cols) and q values
        let mut w = Mat::zeros(m * m_nodes, cols);
        let mut q = vec![0.0; m * m_nodes];
        for (i, (&tau, s)) in self.nodes.nodes().iter().zip(&self.at_nodes).enumerate() {
            let t = t0 + tau * h;
            let (ea, eb, qt) = (self.problem.a(t), self.problem.b(t), self.problem.q(t));
            for e in 0..m {
                let row = i * m + e;
                q[row] = qt[e];
                for kappa in 0..m {
                    let bv = eb[(e, kappa)];
                    if kappa < k {
                        let av = ea[(e, kappa)];
                        for l in 0..=n_deg {
                            // d/dt p̄_jl = p̄_l'(ρ); p̄_jl = h p̄_l(ρ)
                            let v = av * s.diff_deriv[l] + bv * h * s.diff[l];
                            w[(row, coeff_offset(k, n_deg, kappa, l))] = v;
                        }
                    } else if bv != 0.0 {
                        for l in 0..n_deg {
                            w[(row, coeff_offset(k, n_deg, kappa, l))] = bv * s.alg[l];
                        }
                    }
                }
            }
        }
        // premultiply by √h (L̂ ⊗ I_m)
        let sh = libm::sqrt(h);
        let mut entries = Vec::new();
        let mut rhs = vec![0.0; m * m_nodes];
        for i in 0..m_nodes {
            for e in 0..m {
                let row = i * m + e;
                let mut acc = vec![0.0; cols];
                // positions hit by a nonzero product stay stored even if they cancel
                let mut hit = vec![false; cols];
                let mut r = 0.0;
                for iota in 0..m_nodes {
                    let f = self.factor[(i, iota)];
                    if f == 0.0 {
                        continue;
                    }
                    let src = iota * m + e;
                    for c in 0..cols {
                        let wv = w[(src, c)];
                        if wv != 0.0 {
                            acc[c] += f * wv;
                            hit[c] = true;
                        }
                    }
                    r += f * q[src];
                }
                for c in 0..cols {
                    if hit[c] {
                        entries.push((row, c, sh * acc[c]));
                    }
                }
                rhs[row] = sh * r;
            }
        }
        Ok(IntervalBlock { j, entries, rhs })
    }

    /// Boundary rows `√α [G_a a_1(a) … G_b a_n(b)]` and `√α d`.
    fn boundary_rows(&self, t: &mut Triplets, rhs: &mut [f64]) -> Result<()> {
        let SystemShape { n, l, .. } = self.shape;
        if l == 0 {
            return Ok(());
        }
        let sa = libm::sqrt(self.config.alpha);
        let row0 = n * self.shape.rows_per_interval();
        let cols = self.shape.block_len();
        let first = self.a_row_matrix(&scaled(self.basis, 0.0, self.partition.step(0))?);
        let last = self.a_row_matrix(&scaled(self.basis, 1.0, self.partition.step(n - 1))?);
        let ga = self.problem.ga().matmul(&first);
        let gb = self.problem.gb().matmul(&last);
        for r in 0..l {
            for c in 0..cols {
                // with n = 1 both terms land in the same block and the triplets sum
                t.push(row0 + r, c, sa * ga[(r, c)]);
                t.push(row0 + r, (n - 1) * cols + c, sa * gb[(r, c)]);
            }
            rhs[row0 + r] = sa * self.problem.d()[r];
        }
        Ok(())
    }

    /// Continuity rows `h_j p̄_l(1) c_{jκl} − h_{j+1} p̄_l(0) c_{j+1,κ,l}`.
    fn constraint_matrix(&self) -> Result<CsrMatrix> {
        let SystemShape { n, k, n_deg, .. } = self.shape;
        let cols = self.shape.block_len();
        let mut t = Triplets::new(self.shape.constraints(), self.shape.unknowns());
        for j in 0..n.saturating_sub(1) {
            let left = scaled(self.basis, 1.0, self.partition.step(j))?;
            let right = scaled(self.basis, 0.0, self.partition.step(j + 1))?;
            for kappa in 0..k {
                let row = j * k + kappa;
                for l in 0..=n_deg {
                    let off = coeff_offset(k, n_deg, kappa, l);
                    t.push(row, j * cols + off, left.diff[l]);
                    t.push(row, (j + 1) * cols + off, -right.diff[l]);
                }
            }
        }
        Ok(t.to_csr())
    }

    /// Combines interval blocks (any order) with boundary and constraint rows.
    pub fn merge(&self, blocks: Vec<IntervalBlock>) -> Result<DiscreteSystem> {
        let shape = self.shape;
        let mut seen = vec![false; shape.n];
        let mut t = Triplets::new(shape.rows(), shape.unknowns());
        let mut rhs = vec![0.0; shape.rows()];
        let (rpi, cols) = (shape.rows_per_interval(), shape.block_len());
        for b in blocks {
            if b.j >= shape.n || seen[b.j] {
                return Err(Error::InvalidArgument(alloc::format!("unexpected block for interval {}", b.j)));
            }
            seen[b.j] = true;
            t.extend_shifted(&b.entries, b.j * rpi, b.j * cols);
            rhs[b.j * rpi..(b.j + 1) * rpi].copy_from_slice(&b.rhs);
        }
        if let Some(j) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidArgument(alloc::format!("missing block for interval {j}")));
        }
        self.boundary_rows(&mut t, &mut rhs)?;
        Ok(DiscreteSystem { a_mat: t.to_csr(), c_mat: self.constraint_matrix()?, rhs, shape })
    }
}

/// Assembles the discrete system interval by interval.
pub fn assemble(
    problem: &DaeProblem,
    partition: &Partition,
    basis: &BasisSpec,
    config: &CollocationConfig,
) -> Result<DiscreteSystem> {
    let ctx = AssemblyContext::new(problem, partition, basis, config)?;
    let blocks = (0..partition.n()).map(|j| ctx.assemble_interval(j)).collect::<Result<Vec<_>>>()?;
    ctx.merge(blocks)
}

fn barycentric_weights(x: &[f64]) -> Vec<f64> {
    (0..x.len())
        .map(|i| 1.0 / (0..x.len()).filter(|&j| j != i).map(|j| x[i] - x[j]).product::<f64>())
        .collect()
}

/// Value of the interpolant of `(x_i, y_i)` at `t` (barycentric formula).
fn interpolate(x: &[f64], bw: &[f64], y: &[f64], t: f64) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..x.len() {
        let d = t - x[i];
        if d == 0.0 {
            return y[i];
        }
        let w = bw[i] / d;
        num += w * y[i];
        den += w;
    }
    num / den
}

/// Direct evaluation of the discrete functional `Φ̃` at `coeffs`.
///
/// The residual is evaluated pointwise from the ansatz functions; `C`
/// averages its squares, `I` applies the quadrature weights and `R`
/// integrates the square of its interpolating polynomial with a Gauss rule.
/// The boundary term `α |G_a x(a) + G_b x(b) − d|²` is included.
pub fn functional_value(
    problem: &DaeProblem,
    partition: &Partition,
    basis: &BasisSpec,
    config: &CollocationConfig,
    coeffs: &[f64],
) -> Result<f64> {
    config.validate(basis.degree())?;
    let sol = AnsatzSolution::new(problem, partition, basis, coeffs.to_vec())?;
    let nodes = make_nodes(config.node_kind, config.m_nodes)?;
    let tau = nodes.nodes();
    let mm = tau.len();
    let weights = match config.functional {
        Functional::C => vec![1.0 / mm as f64; mm],
        Functional::I => {
            let w = nodes.weights().ok_or_else(|| Error::InvalidArgument("node set has no weights".into()))?;
            if let Some((index, &weight)) = w.iter().enumerate().find(|(_, &g)| g <= 0.0) {
                return Err(Error::NonPositiveWeight { index, weight });
            }
            w.to_vec()
        }
        Functional::R => Vec::new(),
    };
    let gauss = make_nodes(NodeKind::GaussLegendre, mm)?;
    let bw = barycentric_weights(tau);
    let mut total = 0.0;
    for j in 0..partition.n() {
        let h = partition.step(j);
        let res: Vec<Vec<f64>> = tau
            .iter()
            .map(|&r| {
                let (x, dx) = sol.evaluate_on(j, r)?;
                Ok(problem.residual(partition.left(j) + r * h, &x, &dx))
            })
            .collect::<Result<_>>()?;
        let part: f64 = match config.functional {
            Functional::C | Functional::I => {
                res.iter().zip(&weights).map(|(w, g)| g * w.iter().map(|v| v * v).sum::<f64>()).sum()
            }
            Functional::R => (0..problem.m())
                .map(|e| {
                    let y: Vec<f64> = res.iter().map(|w| w[e]).collect();
                    gauss
                        .nodes()
                        .iter()
                        .zip(gauss.weights().unwrap())
                        .map(|(&s, &g)| {
                            let v = interpolate(tau, &bw, &y, s);
                            g * v * v
                        })
                        .sum::<f64>()
                })
                .sum(),
        };
        total += h * part;
    }
    if problem.l() > 0 {
        let xa = sol.evaluate_on(0, 0.0)?.0;
        let xb = sol.evaluate_on(partition.n() - 1, 1.0)?.0;
        let r = problem.boundary_residual(&xa, &xb);
        total += config.alpha * r.iter().map(|v| v * v).sum::<f64>();
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::BasisKind;
    use crate::model::{example_campbell_moore, example_index3_l0, example_index4_bvp, uniform_partition};
    use alloc::sync::Arc;

    fn lcg(seed: &mut u64) -> f64 {
        *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((*seed >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    }

    fn residual_sq(sys: &DiscreteSystem, c: &[f64]) -> f64 {
        let ac = sys.a_mat.matvec(c);
        ac.iter().zip(&sys.rhs).map(|(a, r)| (a - r) * (a - r)).sum()
    }

    #[test]
    fn shapes_of_table_cases() {
        let p = example_campbell_moore();
        let basis = BasisSpec::new(BasisKind::Legendre, 5).unwrap();
        let cfg = CollocationConfig { m_nodes: 6, ..CollocationConfig::for_degree(5) };
        let sys = assemble(&p, &uniform_partition(&p, 80).unwrap(), &basis, &cfg).unwrap();
        assert_eq!((sys.a_mat.nrows(), sys.a_mat.ncols(), sys.c_mat.nrows()), (3364, 3280, 474));
        assert_eq!(sys.rhs.len(), 3364);
        assert_eq!(sys.shape.null_space_dim(), 3280 - 474);
        // 3 nonzeros per continuity row with the Legendre basis
        assert_eq!(sys.c_mat.nnz(), 3 * 474);
    }

    #[test]
    fn nonzero_counts_of_table_cases() {
        let p = example_campbell_moore();
        // (N, n, nnzC, nnzA for R, nnzA for C)
        let cases = [
            (3, 320, 5742, 101124, 101124),
            (5, 80, 1422, 58964, 59044),
            (10, 5, 72, 12749, 12334),
            (20, 5, 72, 47509, 46534),
        ];
        for (nd, n, nnz_c, nnz_r, nnz_cf) in cases {
            let basis = BasisSpec::new(BasisKind::Legendre, nd).unwrap();
            let part = uniform_partition(&p, n).unwrap();
            for (f, want) in [(Functional::R, nnz_r), (Functional::C, nnz_cf)] {
                let cfg = CollocationConfig { functional: f, ..CollocationConfig::for_degree(nd) };
                let sys = assemble(&p, &part, &basis, &cfg).unwrap();
                assert_eq!(sys.c_mat.nnz(), nnz_c);
                let rel = (sys.a_mat.nnz() as f64 - want as f64).abs() / want as f64;
                assert!(rel <= 0.02, "N={nd} n={n} {f:?}: {} vs {want}", sys.a_mat.nnz());
            }
        }
    }

    #[test]
    fn single_interval_has_no_constraints() {
        let p = example_index3_l0();
        let basis = BasisSpec::new(BasisKind::Legendre, 4).unwrap();
        let sys = assemble(&p, &uniform_partition(&p, 1).unwrap(), &basis, &CollocationConfig::for_degree(4)).unwrap();
        assert_eq!(sys.c_mat.nrows(), 0);
        assert_eq!(sys.a_mat.nrows(), 15);
        assert!(sys.a_mat.nrows() > sys.a_mat.ncols());
    }

    #[test]
    fn config_checks() {
        let p = example_index3_l0();
        let part = uniform_partition(&p, 2).unwrap();
        let basis = BasisSpec::new(BasisKind::Legendre, 4).unwrap();
        let few = CollocationConfig { m_nodes: 4, ..CollocationConfig::for_degree(4) };
        assert!(assemble(&p, &part, &basis, &few).is_err());
        let bad_alpha = CollocationConfig { alpha: 0.0, ..CollocationConfig::for_degree(4) };
        assert!(assemble(&p, &part, &basis, &bad_alpha).is_err());
        let nc = CollocationConfig {
            m_nodes: 9,
            node_kind: NodeKind::UniformClosed,
            functional: Functional::I,
            alpha: 1.0,
        };
        assert!(matches!(assemble(&p, &part, &basis, &nc), Err(Error::NonPositiveWeight { .. })));
        let wrong = Partition::uniform(0.0, 2.0, 2).unwrap();
        assert!(assemble(&p, &wrong, &basis, &CollocationConfig::for_degree(4)).is_err());
    }

    #[test]
    fn functional_matches_assembled_residual() {
        let problems = [example_index3_l0(), example_campbell_moore(), example_index4_bvp(5.0).unwrap()];
        let mut seed = 7u64;
        for p in &problems {
            for (kind, func) in [
                (NodeKind::GaussLegendre, Functional::R),
                (NodeKind::GaussLobatto, Functional::I),
                (NodeKind::Chebyshev, Functional::C),
                (NodeKind::UniformOpen, Functional::R),
            ] {
                let basis = BasisSpec::new(BasisKind::Chebyshev, 3).unwrap();
                let part = uniform_partition(p, 3).unwrap();
                let cfg = CollocationConfig { m_nodes: 5, node_kind: kind, functional: func, alpha: 2.5 };
                let sys = assemble(p, &part, &basis, &cfg).unwrap();
                let c: Vec<f64> = (0..sys.shape.unknowns()).map(|_| lcg(&mut seed)).collect();
                let direct = functional_value(p, &part, &basis, &cfg, &c).unwrap();
                let lsq = residual_sq(&sys, &c);
                assert!((direct - lsq).abs() <= 1e-12 * lsq, "{} {kind:?} {func:?}: {direct} vs {lsq}", p.name());
            }
        }
    }

    #[test]
    fn zero_problem_zero_functional() {
        let a = Arc::new(|_t: f64| Mat::from_rows(&[&[1.0], &[0.0]])) as crate::model::MatFn;
        let b = Arc::new(|_t: f64| Mat::from_rows(&[&[0.0, 1.0], &[1.0, 1.0]])) as crate::model::MatFn;
        let q = Arc::new(|_t: f64| vec![0.0, 0.0]) as crate::model::VecFn;
        let p = DaeProblem::new("zero", 2, 1, (0.0, 1.0), a, b, q).unwrap();
        let part = uniform_partition(&p, 3).unwrap();
        let basis = BasisSpec::new(BasisKind::Legendre, 2).unwrap();
        let cfg = CollocationConfig::for_degree(2);
        let sys = assemble(&p, &part, &basis, &cfg).unwrap();
        assert_eq!(functional_value(&p, &part, &basis, &cfg, &vec![0.0; sys.shape.unknowns()]).unwrap(), 0.0);
    }

    #[test]
    fn three_functionals_agree_for_two_gauss_nodes() {
        let p = example_index4_bvp(5.0).unwrap();
        let basis = BasisSpec::new(BasisKind::Legendre, 1).unwrap();
        let part = uniform_partition(&p, 4).unwrap();
        let mut seed = 99u64;
        let cfgs = [Functional::C, Functional::I, Functional::R].map(|f| CollocationConfig {
            m_nodes: 2,
            node_kind: NodeKind::GaussLegendre,
            functional: f,
            alpha: 1.0,
        });
        for _ in 0..20 {
            let c: Vec<f64> = (0..part.n() * 11).map(|_| lcg(&mut seed)).collect();
            let v: Vec<f64> = cfgs.iter().map(|cfg| functional_value(&p, &part, &basis, cfg, &c).unwrap()).collect();
            assert!((v[0] - v[1]).abs() <= 1e-13 * v[1] && (v[2] - v[1]).abs() <= 1e-13 * v[1], "{v:?}");
        }
    }

    #[test]
    fn continuity_rows_vanish_on_continuous_functions() {
        // interpolate the exact solution's differentiated part by a global polynomial
        let p = example_index3_l0();
        let part = uniform_partition(&p, 4).unwrap();
        let basis = BasisSpec::new(BasisKind::Monomial, 2).unwrap();
        let sys = assemble(&p, &part, &basis, &CollocationConfig::for_degree(2)).unwrap();
        // x_κ(t) = 1 + t + t² on every interval: in local terms c0 h = x(t_j), p̄_1 = ρ, p̄_2 = ρ²/2
        let cols = sys.shape.block_len();
        let mut c = vec![0.0; sys.shape.unknowns()];
        for j in 0..4 {
            let (t0, h) = (part.left(j), part.step(j));
            for kappa in 0..2 {
                let o = j * cols + coeff_offset(2, 2, kappa, 0);
                c[o] = (1.0 + t0 + t0 * t0) / h;
                c[o + 1] = 1.0 + 2.0 * t0;
                c[o + 2] = 2.0 * h;
            }
        }
        assert!(sys.c_mat.matvec(&c).iter().all(|v| v.abs() < 1e-14));
    }

    #[test]
    fn interval_blocks_merge_in_any_order() {
        let p = example_campbell_moore();
        let part = uniform_partition(&p, 5).unwrap();
        let basis = BasisSpec::new(BasisKind::Legendre, 3).unwrap();
        let cfg = CollocationConfig::for_degree(3);
        let ctx = AssemblyContext::new(&p, &part, &basis, &cfg).unwrap();
        let blocks: Vec<_> = (0..5).rev().map(|j| ctx.assemble_interval(j).unwrap()).collect();
        let merged = ctx.merge(blocks).unwrap();
        let seq = assemble(&p, &part, &basis, &cfg).unwrap();
        assert_eq!(merged.a_mat, seq.a_mat);
        assert_eq!(merged.rhs, seq.rhs);
        assert!(ctx.merge(vec![ctx.assemble_interval(0).unwrap()]).is_err());
    }

    #[test]
    fn block_structure() {
        let p = example_index4_bvp(5.0).unwrap();
        let part = uniform_partition(&p, 3).unwrap();
        let basis = BasisSpec::new(BasisKind::Legendre, 3).unwrap();
        let sys = assemble(&p, &part, &basis, &CollocationConfig::for_degree(3)).unwrap();
        let (rpi, cols) = (sys.shape.rows_per_interval(), sys.shape.block_len());
        for (i, j, _) in sys.a_mat.iter() {
            if i < 3 * rpi {
                assert_eq!(i / rpi, j / cols);
            } else {
                assert!(j / cols == 0 || j / cols == 2);
            }
        }
        for (i, j, _) in sys.c_mat.iter() {
            let b = j / cols;
            assert!(b == i / 5 || b == i / 5 + 1);
        }
    }

    fn normal_matrix(sys: &DiscreteSystem) -> Mat {
        let a = sys.a_mat.to_dense();
        a.transpose().matmul(&a)
    }

    #[test]
    fn functionals_i_and_r_share_normal_equations() {
        let mut seed = 3u64;
        for m in 2..=3 {
            for nd in 1..=4 {
                for n in 1..=3 {
                    // random smooth coefficients, last component algebraic
                    let s: Vec<f64> = (0..2 * m * m).map(|_| lcg(&mut seed)).collect();
                    let s2 = s.clone();
                    let k = m - 1;
                    let a = Arc::new(move |t: f64| {
                        Mat::from_fn(m, k, |i, j| if i == j { 1.0 + 0.3 * t } else { 0.1 * s2[i * m + j] })
                    }) as crate::model::MatFn;
                    let b = Arc::new(move |t: f64| Mat::from_fn(m, m, |i, j| s[m * m + i * m + j] * (1.0 + t * t)))
                        as crate::model::MatFn;
                    let q = Arc::new(move |t: f64| (0..m).map(|i| libm::sin(t + i as f64)).collect()) as crate::model::VecFn;
                    let p = DaeProblem::new("rand", m, k, (0.0, 1.0), a, b, q).unwrap();
                    let part = uniform_partition(&p, n).unwrap();
                    let basis = BasisSpec::new(BasisKind::Legendre, nd).unwrap();
                    for kind in [NodeKind::GaussLegendre, NodeKind::GaussRadauRight] {
                        let mk = |f| CollocationConfig { m_nodes: nd + 1, node_kind: kind, functional: f, alpha: 1.0 };
                        let ni = normal_matrix(&assemble(&p, &part, &basis, &mk(Functional::I)).unwrap());
                        let nr = normal_matrix(&assemble(&p, &part, &basis, &mk(Functional::R)).unwrap());
                        let diff = Mat::from_fn(ni.rows(), ni.cols(), |i, j| ni[(i, j)] - nr[(i, j)]);
                        assert!(diff.frobenius_norm() <= 1e-10 * nr.frobenius_norm(), "m={m} N={nd} n={n} {kind:?}");
                    }
                }
            }
        }
    }
}
