//! Local ansatz functions on the reference interval [0, 1].
//!
//! Algebraic components use `p_0..p_{N−1}` (degree `N − 1`), differentiated
//! components the antiderivative basis `p̄_0 ≡ 1`, `p̄_i(ρ) = ∫_0^ρ p_{i−1}`.
//! On interval `j` of a partition the functions are scaled as
//! `p_{ji}(t) = p_i(ρ)` and `p̄_{ji}(t) = h_j p̄_i(ρ)` with `ρ = (t − t_j)/h_j`.

use alloc::vec;
use alloc::vec::Vec;

use crate::dense::{self, Mat, PivotedQr};
use crate::model::Partition;
use crate::nodes::{make_nodes, NodeKind};
use crate::orthopoly::{antiderivative_coeffs, eval_all, eval_all_derivatives, Family, PolySeries};
use crate::vandermonde::lagrange_to_legendre;
use crate::{Error, Result};

/// Polynomial system in which basis functions are stored and evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Representation {
    /// Powers `ρ^ν`, evaluated by Horner's scheme.
    Monomial,
    /// Shifted Legendre polynomials `P_ν(2ρ − 1)`.
    #[default]
    Legendre,
    /// Shifted Chebyshev polynomials `T_ν(2ρ − 1)`.
    Chebyshev,
}

/// Choice of `p_0..p_{N−1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisKind {
    /// `p_i = ρ^i`.
    Monomial,
    /// `p_i = P̂_i` (orthonormal shifted Legendre).
    Legendre,
    /// `p_i = T_i(2ρ − 1)`.
    Chebyshev,
    /// Lagrange polynomials on `N` interpolation nodes of the given family.
    RungeKutta {
        /// Interpolation node family.
        nodes: NodeKind,
        /// Expansion used to store the Lagrange polynomials.
        repr: Representation,
    },
}

impl Default for BasisKind {
    fn default() -> Self {
        BasisKind::Legendre
    }
}

impl BasisKind {
    /// Runge-Kutta basis on Gauss-Legendre nodes stored in Legendre form.
    pub fn runge_kutta(nodes: NodeKind) -> Self {
        BasisKind::RungeKutta { nodes, repr: Representation::Legendre }
    }
}

/// Values and `ρ`-derivatives of a family of functions at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluated {
    /// Function values.
    pub values: Vec<f64>,
    /// First derivatives.
    pub derivatives: Vec<f64>,
}

/// Basis values on a physical interval (see [`scale_to_interval`]).
#[derive(Clone, Debug, PartialEq)]
pub struct Scaled {
    /// `p_{ji}(t)`, `i < N`.
    pub alg: Vec<f64>,
    /// `d/dt p_{ji}(t)`.
    pub alg_deriv: Vec<f64>,
    /// `p̄_{ji}(t)`, `i ≤ N`.
    pub diff: Vec<f64>,
    /// `d/dt p̄_{ji}(t)`.
    pub diff_deriv: Vec<f64>,
}

/// An immutable basis of degree `N` with precomputed expansion coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisSpec {
    kind: BasisKind,
    n: usize,
    repr: Representation,
    /// `alg[i]`: coefficients of `p_i` (length `N`).
    alg: Vec<Vec<f64>>,
    /// `anti[i]`: coefficients of `p̄_i` (length `N + 1`).
    anti: Vec<Vec<f64>>,
    /// `∫_0^1 p_i`, i.e. `p̄_{i+1}(1)`, from closed-form moments.
    integrals: Vec<f64>,
}

fn legendre_scale(nu: usize) -> f64 {
    libm::sqrt((2 * nu + 1) as f64)
}

/// Lagrange polynomials on `nodes` as columns of coefficients in `repr`.
fn lagrange_coeffs(nodes: &[f64], repr: Representation) -> Result<Vec<Vec<f64>>> {
    let n = nodes.len();
    let inv = match repr {
        Representation::Legendre => {
            // P̂ coefficients → P̃ coefficients
            let mut a = lagrange_to_legendre(nodes)?;
            for i in 0..n {
                for nu in 0..n {
                    a[(nu, i)] *= legendre_scale(nu);
                }
            }
            a
        }
        Representation::Chebyshev => {
            let mut v = Mat::zeros(n, n);
            for (i, &t) in nodes.iter().enumerate() {
                for (nu, p) in eval_all(Family::Chebyshev, n, 2.0 * t - 1.0)?.into_iter().enumerate() {
                    v[(i, nu)] = p;
                }
            }
            untruncated_inverse(v)
        }
        Representation::Monomial => {
            untruncated_inverse(Mat::from_fn(n, n, |i, nu| libm::pow(nodes[i], nu as f64)))
        }
    };
    Ok((0..n).map(|i| inv.col(i).to_vec()).collect())
}

/// Inverse by pivoted QR without rank truncation: ill-conditioned
/// representations lose accuracy instead of being rejected.
fn untruncated_inverse(v: Mat) -> Mat {
    let n = v.rows();
    let qr = PivotedQr::new(v, 0.0);
    let mut inv = Mat::zeros(n, n);
    let mut e = vec![0.0; n];
    for j in 0..n {
        e.iter_mut().for_each(|x| *x = 0.0);
        e[j] = 1.0;
        inv.col_mut(j).copy_from_slice(&qr.solve_basic(&e));
    }
    inv
}

/// Coefficients of `∫_0^ρ f` for `f` given in `repr`.
fn antiderivative(repr: Representation, c: &[f64]) -> Result<Vec<f64>> {
    Ok(match repr {
        Representation::Monomial => {
            let mut out = vec![0.0; c.len() + 1];
            for (nu, &v) in c.iter().enumerate() {
                out[nu + 1] = v / (nu + 1) as f64;
            }
            out
        }
        Representation::Legendre | Representation::Chebyshev => {
            let family = if repr == Representation::Legendre { Family::Legendre } else { Family::Chebyshev };
            // ∫_0^ρ f(2σ−1)dσ = ½ ∫_{−1}^{2ρ−1} f
            let big = antiderivative_coeffs(&PolySeries::new(family, c.to_vec())?)?;
            big.coeffs().iter().map(|v| 0.5 * v).collect()
        }
    })
}

/// `∫_0^1` of the function with coefficients `c`.
fn integral(repr: Representation, c: &[f64]) -> f64 {
    c.iter()
        .enumerate()
        .map(|(nu, &v)| {
            let moment = match repr {
                Representation::Monomial => 1.0 / (nu + 1) as f64,
                Representation::Legendre => {
                    if nu == 0 {
                        1.0
                    } else {
                        0.0
                    }
                }
                Representation::Chebyshev => {
                    if nu % 2 == 1 {
                        0.0
                    } else {
                        let f = nu as f64;
                        1.0 / (1.0 - f * f)
                    }
                }
            };
            v * moment
        })
        .filter(|v| *v != 0.0)
        .sum()
}

fn pad(mut c: Vec<f64>, len: usize) -> Vec<f64> {
    c.resize(len, 0.0);
    c
}

impl BasisSpec {
    /// Builds the basis of degree `N ≥ 1`.
    pub fn new(kind: BasisKind, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("basis degree N must be positive".into()));
        }
        let (repr, alg) = match kind {
            BasisKind::Monomial => (
                Representation::Monomial,
                (0..n).map(|i| unit(n, i, 1.0)).collect::<Vec<_>>(),
            ),
            BasisKind::Legendre => {
                (Representation::Legendre, (0..n).map(|i| unit(n, i, legendre_scale(i))).collect())
            }
            BasisKind::Chebyshev => (Representation::Chebyshev, (0..n).map(|i| unit(n, i, 1.0)).collect()),
            BasisKind::RungeKutta { nodes, repr } => {
                let set = make_nodes(nodes, n)?;
                (repr, lagrange_coeffs(set.nodes(), repr)?)
            }
        };
        let mut anti = Vec::with_capacity(n + 1);
        anti.push(unit(n + 1, 0, 1.0));
        for c in &alg {
            anti.push(pad(antiderivative(repr, c)?, n + 1));
        }
        let integrals = alg.iter().map(|c| integral(repr, c)).collect();
        Ok(Self { kind, n, repr, alg, anti, integrals })
    }

    /// Basis kind.
    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    /// Degree `N`.
    pub fn degree(&self) -> usize {
        self.n
    }

    /// Expansion used internally.
    pub fn representation(&self) -> Representation {
        self.repr
    }

    /// Coefficients of `p_i` in [`representation`](Self::representation).
    pub fn alg_coeffs(&self, i: usize) -> &[f64] {
        &self.alg[i]
    }

    /// Coefficients of `p̄_i`.
    pub fn antiderivative_coeffs(&self, i: usize) -> &[f64] {
        &self.anti[i]
    }

    /// Values and derivatives of the representation functions `Q_0..Q_{len−1}` at `ρ`.
    fn system(&self, len: usize, rho: f64) -> Result<(Vec<f64>, Vec<f64>)> {
        Ok(match self.repr {
            Representation::Legendre => (
                eval_all(Family::LegendreShifted, len, rho)?,
                eval_all_derivatives(Family::LegendreShifted, len, rho)?,
            ),
            Representation::Chebyshev => {
                let x = 2.0 * rho - 1.0;
                let d = eval_all_derivatives(Family::Chebyshev, len, x)?;
                (eval_all(Family::Chebyshev, len, x)?, d.into_iter().map(|v| 2.0 * v).collect())
            }
            Representation::Monomial => unreachable!("monomials use Horner"),
        })
    }

    fn eval_set(&self, set: &[Vec<f64>], len: usize, rho: f64) -> Result<Evaluated> {
        check_rho(rho)?;
        if self.repr == Representation::Monomial {
            let (values, derivatives) = set.iter().map(|c| horner(c, rho)).unzip();
            return Ok(Evaluated { values, derivatives });
        }
        let (q, dq) = self.system(len, rho)?;
        let values = set.iter().map(|c| dense::dot(c, &q[..c.len()])).collect();
        let derivatives = set.iter().map(|c| dense::dot(c, &dq[..c.len()])).collect();
        Ok(Evaluated { values, derivatives })
    }
}

fn unit(len: usize, i: usize, v: f64) -> Vec<f64> {
    let mut c = vec![0.0; len];
    c[i] = v;
    c
}

fn horner(c: &[f64], x: f64) -> (f64, f64) {
    let (mut p, mut dp) = (0.0, 0.0);
    for &v in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + v;
    }
    (p, dp)
}

fn check_rho(rho: f64) -> Result<()> {
    if (0.0..=1.0).contains(&rho) {
        Ok(())
    } else {
        Err(Error::OutOfDomain { value: rho, lo: 0.0, hi: 1.0 })
    }
}

/// Values and derivatives of `p_0..p_{N−1}` at `ρ ∈ [0, 1]`.
pub fn eval_basis(spec: &BasisSpec, rho: f64) -> Result<Evaluated> {
    spec.eval_set(&spec.alg, spec.n, rho)
}

/// Values and derivatives of `p̄_0..p̄_N` at `ρ ∈ [0, 1]`.
///
/// The derivatives are `p̄_0' = 0` and `p̄_i' = p_{i−1}`. At `ρ = 0` and
/// `ρ = 1` the values are the exact endpoint values `p̄_i(0) = δ_{i0}` and
/// `p̄_i(1) = ∫_0^1 p_{i−1}` (closed-form moments), so continuity conditions
/// carry no rounding noise.
pub fn eval_antiderivative_basis(spec: &BasisSpec, rho: f64) -> Result<Evaluated> {
    let base = eval_basis(spec, rho)?;
    let mut derivatives = Vec::with_capacity(spec.n + 1);
    derivatives.push(0.0);
    derivatives.extend_from_slice(&base.values);
    let values = if rho == 0.0 {
        unit(spec.n + 1, 0, 1.0)
    } else if rho == 1.0 {
        let mut v = Vec::with_capacity(spec.n + 1);
        v.push(1.0);
        v.extend_from_slice(&spec.integrals);
        v
    } else {
        spec.eval_set(&spec.anti, spec.n + 1, rho)?.values
    };
    Ok(Evaluated { values, derivatives })
}

/// Both families at local coordinate `ρ` on an interval of length `h`.
pub fn scaled(spec: &BasisSpec, rho: f64, h: f64) -> Result<Scaled> {
    let p = eval_basis(spec, rho)?;
    let pb = eval_antiderivative_basis(spec, rho)?;
    Ok(Scaled {
        alg: p.values,
        alg_deriv: p.derivatives.into_iter().map(|v| v / h).collect(),
        diff: pb.values.into_iter().map(|v| h * v).collect(),
        diff_deriv: pb.derivatives,
    })
}

/// Scaled basis on interval `j` (0-based) of `partition` at `t ∈ [t_j, t_{j+1}]`.
pub fn scale_to_interval(spec: &BasisSpec, j: usize, partition: &Partition, t: f64) -> Result<Scaled> {
    if j >= partition.n() {
        return Err(Error::InvalidArgument(alloc::format!(
            "interval {j} does not exist in a partition with {} intervals",
            partition.n()
        )));
    }
    let (lo, hi) = (partition.left(j), partition.right(j));
    if !(lo..=hi).contains(&t) {
        return Err(Error::OutOfDomain { value: t, lo, hi });
    }
    let h = partition.step(j);
    let rho = ((t - lo) / h).clamp(0.0, 1.0);
    scaled(spec, rho, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nodes::make_nodes;
    use proptest::prelude::*;

    fn all_kinds() -> Vec<BasisKind> {
        let mut v = vec![BasisKind::Monomial, BasisKind::Legendre, BasisKind::Chebyshev];
        for nodes in [NodeKind::GaussLegendre, NodeKind::Chebyshev, NodeKind::UniformOpen] {
            for repr in [Representation::Legendre, Representation::Chebyshev, Representation::Monomial] {
                v.push(BasisKind::RungeKutta { nodes, repr });
            }
        }
        v
    }

    /// `(Σ|c_ν Q_ν(ρ)|, Σ|c_ν Q_ν'(ρ)|)`, the scale of rounding errors in an expansion.
    fn abs_bound(spec: &BasisSpec, c: &[f64], rho: f64) -> (f64, f64) {
        let len = c.len();
        let (q, dq) = match spec.repr {
            Representation::Monomial => (
                (0..len).map(|nu| libm::pow(rho, nu as f64)).collect::<Vec<_>>(),
                (0..len).map(|nu| if nu == 0 { 0.0 } else { nu as f64 * libm::pow(rho, nu as f64 - 1.0) }).collect(),
            ),
            _ => spec.system(len, rho).unwrap(),
        };
        let v = c.iter().zip(&q).map(|(a, b)| (a * b).abs()).sum();
        let d = c.iter().zip(&dq).map(|(a, b)| (a * b).abs()).sum();
        (v, d)
    }

    #[test]
    fn small_examples() {
        let l1 = BasisSpec::new(BasisKind::Legendre, 1).unwrap();
        let e = eval_basis(&l1, 0.37).unwrap();
        assert_eq!((e.values, e.derivatives), (vec![1.0], vec![0.0]));

        let rk = BasisSpec::new(BasisKind::runge_kutta(NodeKind::GaussLegendre), 2).unwrap();
        let r1 = make_nodes(NodeKind::GaussLegendre, 2).unwrap().nodes()[0];
        let e = eval_basis(&rk, r1).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-15 && e.values[1].abs() < 1e-15);

        let mono = BasisSpec::new(BasisKind::Monomial, 3).unwrap();
        let e = eval_basis(&mono, 0.5).unwrap();
        assert_eq!(e.values, vec![1.0, 0.5, 0.25]);
        assert_eq!(e.derivatives, vec![0.0, 1.0, 1.0]);

        let mono2 = BasisSpec::new(BasisKind::Monomial, 2).unwrap();
        assert_eq!(eval_antiderivative_basis(&mono2, 1.0).unwrap().values, vec![1.0, 1.0, 0.5]);

        assert!(BasisSpec::new(BasisKind::Legendre, 0).is_err());
        assert!(eval_basis(&mono, 1.5).is_err());
        assert!(eval_antiderivative_basis(&mono, -0.1).is_err());
    }

    #[test]
    fn antiderivative_basis_vanishes_at_zero() {
        for kind in all_kinds() {
            let spec = BasisSpec::new(kind, 6).unwrap();
            let v = eval_antiderivative_basis(&spec, 0.0).unwrap().values;
            assert_eq!(v[0], 1.0);
            assert!(v[1..].iter().all(|&x| x == 0.0), "{kind:?}");
            // the stored expansions agree with the exact endpoint values
            let tiny = eval_antiderivative_basis(&spec, 1e-300).unwrap().values;
            assert!(tiny[1..].iter().all(|x| x.abs() < 1e-12), "{kind:?}: {tiny:?}");
        }
    }

    #[test]
    fn endpoint_one_matches_expansion() {
        for kind in all_kinds() {
            for n in [1, 4, 9] {
                let spec = BasisSpec::new(kind, n).unwrap();
                let exact = eval_antiderivative_basis(&spec, 1.0).unwrap().values;
                let near = spec.eval_set(&spec.anti, n + 1, 1.0).unwrap().values;
                for (i, (a, b)) in exact.iter().zip(&near).enumerate() {
                    let tol = 1e-14 + 64.0 * crate::EPS * abs_bound(&spec, &spec.anti[i], 1.0).0;
                    assert!((a - b).abs() <= tol, "{kind:?} N={n}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn legendre_endpoint_values_are_sparse() {
        let spec = BasisSpec::new(BasisKind::Legendre, 5).unwrap();
        let v = eval_antiderivative_basis(&spec, 1.0).unwrap().values;
        assert_eq!(v, vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn cardinality() {
        for n in 1..=20 {
            let spec = BasisSpec::new(BasisKind::runge_kutta(NodeKind::GaussLegendre), n).unwrap();
            let nodes = make_nodes(NodeKind::GaussLegendre, n).unwrap();
            for (kappa, &r) in nodes.nodes().iter().enumerate() {
                let v = eval_basis(&spec, r).unwrap().values;
                for (i, x) in v.iter().enumerate() {
                    let want = if i == kappa { 1.0 } else { 0.0 };
                    assert!((x - want).abs() <= 1e-12, "N={n} i={i} node {kappa}: {x}");
                }
            }
        }
    }

    /// Least-squares fit of samples of `f` in the basis, residual at the samples.
    fn fit_error(spec: &BasisSpec, f: &[f64], pts: &[f64]) -> f64 {
        let n = spec.degree();
        let rows: Vec<Vec<f64>> = pts.iter().map(|&r| eval_basis(spec, r).unwrap().values).collect();
        let a = Mat::from_fn(pts.len(), n, |i, j| rows[i][j]);
        let qr = PivotedQr::new(a.clone(), 1e-15 * a.max_col_norm());
        let c = qr.solve_basic(f);
        let g = a.matvec(&c);
        g.iter().zip(f).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
    }

    #[test]
    fn exact_representation() {
        let pts: Vec<f64> = (0..100).map(|i| (i as f64 + 0.5) / 100.0).collect();
        let mut seed = 12345u64;
        let mut rnd = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        for n in 1..=20 {
            // random polynomial of degree n−1 in Legendre form
            let c: Vec<f64> = (0..n).map(|_| rnd()).collect();
            let series = PolySeries::new(Family::LegendreShifted, c).unwrap();
            let f: Vec<f64> = pts.iter().map(|&r| crate::orthopoly::clenshaw(&series, r).unwrap()).collect();
            let norm = f.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            for kind in all_kinds() {
                let poor = matches!(kind, BasisKind::Monomial | BasisKind::RungeKutta { repr: Representation::Monomial, .. })
                    || matches!(kind, BasisKind::RungeKutta { nodes: NodeKind::UniformOpen, .. });
                if poor && n > 10 {
                    continue;
                }
                let spec = BasisSpec::new(kind, n).unwrap();
                let err = fit_error(&spec, &f, &pts);
                assert!(err <= 1e-10 * norm, "{kind:?} N={n}: {err:e}");
            }
        }
    }

    /// Gauss-Legendre quadrature of `p_{i−1}` on [0, ρ].
    fn quad_antiderivative(spec: &BasisSpec, i: usize, rho: f64) -> f64 {
        let g = make_nodes(NodeKind::GaussLegendre, spec.degree() + 2).unwrap();
        g.nodes()
            .iter()
            .zip(g.weights().unwrap())
            .map(|(&s, &w)| w * rho * eval_basis(spec, s * rho).unwrap().values[i - 1])
            .sum()
    }

    #[test]
    fn antiderivative_matches_quadrature() {
        for kind in all_kinds() {
            for n in [1, 3, 8, 15, 20] {
                if n > 10 && matches!(kind, BasisKind::RungeKutta { repr: Representation::Monomial, .. }) {
                    continue;
                }
                let spec = BasisSpec::new(kind, n).unwrap();
                let scale = (1..=n)
                    .map(|i| eval_basis(&spec, 0.5).unwrap().values[i - 1].abs())
                    .fold(1.0f64, f64::max);
                for rho in [0.1, 0.33, 0.5, 0.9] {
                    let v = eval_antiderivative_basis(&spec, rho).unwrap().values;
                    for i in 1..=n {
                        let q = quad_antiderivative(&spec, i, rho);
                        assert!((v[i] - q).abs() <= 1e-12 * scale * n as f64, "{kind:?} N={n} i={i} ρ={rho}");
                    }
                }
            }
        }
    }

    #[test]
    fn antiderivative_expansion_differentiates_back() {
        // derivative of the stored p̄_i expansion against p_{i−1}
        for kind in all_kinds() {
            for n in 1..=20 {
                let spec = BasisSpec::new(kind, n).unwrap();
                for s in 0..10 {
                    let rho = (s as f64 + 0.3) / 10.0;
                    let d = spec.eval_set(&spec.anti, n + 1, rho).unwrap().derivatives;
                    let p = eval_basis(&spec, rho).unwrap().values;
                    assert_eq!(d[0], 0.0);
                    for i in 1..=n {
                        let bound = abs_bound(&spec, &spec.anti[i], rho).1 + abs_bound(&spec, &spec.alg[i - 1], rho).0;
                        let tol = 1e-15 + 16.0 * (n + 1) as f64 * crate::EPS * bound;
                        assert!((d[i] - p[i - 1]).abs() <= tol, "{kind:?} N={n} i={i}: {} vs {}", d[i], p[i - 1]);
                    }
                }
            }
        }
    }

    #[test]
    fn scaling() {
        let spec = BasisSpec::new(BasisKind::Legendre, 4).unwrap();
        let unit_part = Partition::uniform(0.0, 1.0, 1).unwrap();
        let s = scale_to_interval(&spec, 0, &unit_part, 0.3).unwrap();
        assert_eq!(s.alg, eval_basis(&spec, 0.3).unwrap().values);
        assert_eq!(s.diff, eval_antiderivative_basis(&spec, 0.3).unwrap().values);

        let part = Partition::uniform(0.0, 1.0, 4).unwrap();
        let at_end = scale_to_interval(&spec, 2, &part, 0.75).unwrap();
        let reference = eval_antiderivative_basis(&spec, 1.0).unwrap().values;
        assert!((at_end.diff[2] - 0.25 * reference[2]).abs() < 1e-15);
        for t in [0.5, 0.6, 0.7] {
            let s = scale_to_interval(&spec, 2, &part, t).unwrap();
            let p0 = eval_basis(&spec, (t - 0.5) / 0.25).unwrap().values[0];
            assert!((s.diff_deriv[1] - p0).abs() < 1e-15);
            let r = eval_basis(&spec, (t - 0.5) / 0.25).unwrap();
            for i in 0..4 {
                assert!((s.alg_deriv[i] - r.derivatives[i] / 0.25).abs() < 1e-12);
            }
        }
        assert!(scale_to_interval(&spec, 2, &part, 0.9).is_err());
        assert!(scale_to_interval(&spec, 4, &part, 0.9).is_err());
    }

    proptest! {
        #[test]
        fn derivative_slot_matches_basis(rho in 0.0f64..=1.0, n in 1usize..=20, which in 0usize..3) {
            let kind = [BasisKind::Legendre, BasisKind::Chebyshev, BasisKind::runge_kutta(NodeKind::GaussLegendre)][which];
            let spec = BasisSpec::new(kind, n).unwrap();
            let p = eval_basis(&spec, rho).unwrap();
            let pb = eval_antiderivative_basis(&spec, rho).unwrap();
            for i in 1..=n {
                prop_assert!((pb.derivatives[i] - p.values[i - 1]).abs() <= 1e-13);
            }
        }

        #[test]
        fn scaled_derivative_independent_of_h(rho in 0.0f64..=1.0, h in 1e-3f64..10.0) {
            let spec = BasisSpec::new(BasisKind::Chebyshev, 5).unwrap();
            let a = scaled(&spec, rho, h).unwrap();
            let b = scaled(&spec, rho, 1.0).unwrap();
            prop_assert_eq!(a.diff_deriv, b.diff_deriv);
            prop_assert!((a.diff[3] - h * b.diff[3]).abs() <= 1e-14 * h);
        }
    }
}
