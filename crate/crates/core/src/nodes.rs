//! Node families on [0, 1], interpolatory quadrature weights, Lebesgue
//! constants and the L² norm of the nodal polynomial.
//!
//! Gauss-type nodes are computed on the fly by Newton's method on [−1, 1],
//! started from Chebyshev-type guesses, and mapped to [0, 1]. Symmetric
//! families are computed on one half and mirrored so that
//! `τ_i + τ_{M+1−i} = 1` holds to rounding.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::dense::{Mat, PivotedQr};
use crate::orthopoly::{eval_all, Family};
use crate::{Error, Result, EPS};

/// Node family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    /// Gauss-Legendre nodes (zeros of `P̃_M`).
    GaussLegendre,
    /// Gauss-Radau nodes including the right endpoint (Radau IIA).
    GaussRadauRight,
    /// Gauss-Lobatto nodes including both endpoints.
    GaussLobatto,
    /// Gauss-Chebyshev nodes `(1 − cos((2i−1)π/(2M)))/2`.
    Chebyshev,
    /// Equispaced nodes including both endpoints, `(i−1)/(M−1)`.
    UniformClosed,
    /// Equispaced nodes without the endpoints, `(i−½)/M`.
    UniformOpen,
    /// User-supplied nodes.
    Custom,
}

impl NodeKind {
    /// Short name used in messages and tables.
    pub fn name(self) -> &'static str {
        match self {
            NodeKind::GaussLegendre => "gauss-legendre",
            NodeKind::GaussRadauRight => "gauss-radau",
            NodeKind::GaussLobatto => "gauss-lobatto",
            NodeKind::Chebyshev => "chebyshev",
            NodeKind::UniformClosed => "uniform-closed",
            NodeKind::UniformOpen => "uniform-open",
            NodeKind::Custom => "custom",
        }
    }
}

/// Nodes `0 ≤ τ_1 < … < τ_M ≤ 1` with optional quadrature weights for `∫_0^1`.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeSet {
    kind: NodeKind,
    nodes: Vec<f64>,
    weights: Option<Vec<f64>>,
}

impl NodeSet {
    /// Wraps user nodes; weights of the interpolatory rule are attached when
    /// they can be computed.
    pub fn custom(nodes: Vec<f64>) -> Result<Self> {
        check_nodes(&nodes)?;
        let weights = interpolatory_weights(&nodes).ok();
        Ok(Self { kind: NodeKind::Custom, nodes, weights })
    }

    /// Node family.
    pub fn kind(&self) -> NodeKind {
        self.kind
    }

    /// Nodes.
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Quadrature weights, if known.
    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    /// Number of nodes.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    /// Always false; a node set has at least one node.
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn check_nodes(nodes: &[f64]) -> Result<()> {
    if nodes.is_empty() {
        return Err(Error::InvalidArgument("at least one node is required".into()));
    }
    if let Some(&bad) = nodes.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(Error::OutOfDomain { value: bad, lo: 0.0, hi: 1.0 });
    }
    if nodes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::DuplicateNodes);
    }
    Ok(())
}

/// `(P_n(x), P_n'(x), P_{n−1}(x))` by the stabilized recurrence.
fn legendre_triplet(n: usize, x: f64) -> (f64, f64, f64) {
    if n == 0 {
        return (1.0, 0.0, 0.0);
    }
    let (mut pm, mut p) = (1.0, x);
    let (mut dm, mut d) = (0.0, 1.0);
    for nu in 1..n {
        let r = nu as f64 / (nu + 1) as f64;
        let pn = r * (x * p - pm) + x * p;
        let dn = ((2 * nu + 1) as f64 * (p + x * d) - nu as f64 * dm) / (nu + 1) as f64;
        pm = p;
        p = pn;
        dm = d;
        d = dn;
    }
    (p, d, pm)
}

const MAX_NEWTON: usize = 100;

/// Newton iteration `x ← x − f/f'` with stopping rule `|Δx| ≤ 4ε`.
fn newton(kind: NodeKind, m: usize, mut x: f64, step: impl Fn(f64) -> f64) -> Result<f64> {
    for _ in 0..MAX_NEWTON {
        let dx = step(x);
        if !dx.is_finite() {
            break;
        }
        x -= dx;
        if dx.abs() <= 4.0 * EPS {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence { kind: kind.name(), m })
}

/// Mirrors the non-negative half `xs` (descending, on [−1, 1]) into ascending
/// nodes on [0, 1]; `mid` adds the exact centre for odd counts.
fn mirror(half: &[f64], mid: bool) -> Vec<f64> {
    let mut out: Vec<f64> = half.iter().map(|&x| (1.0 - x) / 2.0).collect();
    if mid {
        out.push(0.5);
    }
    out.extend(half.iter().rev().map(|&x| (1.0 + x) / 2.0));
    out
}

fn gauss_legendre(m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let kind = NodeKind::GaussLegendre;
    let mut half = Vec::new();
    let mut whalf = Vec::new();
    for i in 1..=m / 2 {
        let guess = libm::cos((2 * i - 1) as f64 * PI / (2 * m) as f64);
        let x = newton(kind, m, guess, |x| {
            let (p, d, _) = legendre_triplet(m, x);
            p / d
        })?;
        let (_, d, _) = legendre_triplet(m, x);
        half.push(x);
        whalf.push(1.0 / ((1.0 - x * x) * d * d));
    }
    let mid = m % 2 == 1;
    let nodes = mirror(&half, mid);
    let mut w: Vec<f64> = whalf.clone();
    if mid {
        let (_, d, _) = legendre_triplet(m, 0.0);
        w.push(1.0 / (d * d));
    }
    w.extend(whalf.iter().rev());
    Ok((nodes, w))
}

fn gauss_lobatto(m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let kind = NodeKind::GaussLobatto;
    let n = m - 1;
    let nf = n as f64;
    let wend = 1.0 / (m * n) as f64;
    let mut half = vec![1.0];
    let mut whalf = vec![wend];
    // interior nodes: zeros of P'_n; (1−x²)P''_n = 2xP'_n − n(n+1)P_n
    for i in 1..=(m - 2) / 2 {
        let guess = libm::cos(i as f64 * PI / nf);
        let x = newton(kind, m, guess, |x| {
            let (p, d, _) = legendre_triplet(n, x);
            let dd = (2.0 * x * d - nf * (nf + 1.0) * p) / (1.0 - x * x);
            d / dd
        })?;
        let (p, _, _) = legendre_triplet(n, x);
        half.push(x);
        whalf.push(wend / (p * p));
    }
    let mid = m % 2 == 1;
    let mut nodes = mirror(&half, mid);
    nodes[0] = 0.0;
    nodes[m - 1] = 1.0;
    let mut w = whalf.clone();
    if mid {
        let (p, _, _) = legendre_triplet(n, 0.0);
        w.push(wend / (p * p));
    }
    w.extend(whalf.iter().rev());
    Ok((nodes, w))
}

fn gauss_radau_right(m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let kind = NodeKind::GaussRadauRight;
    let mf = m as f64;
    // left-Radau on [−1, 1]: −1 and the zeros of (P_{M−1} + P_M)/(1 + x); mirrored afterwards
    let mut xs = Vec::with_capacity(m);
    let mut ws = Vec::with_capacity(m);
    for i in 1..m {
        let guess = -libm::cos(2.0 * PI * i as f64 / (2 * m - 1) as f64);
        let x = newton(kind, m, guess, |x| {
            let (pm, dm, pm1) = legendre_triplet(m, x);
            let (_, dm1, _) = legendre_triplet(m - 1, x);
            let f = pm + pm1;
            let df = dm + dm1;
            f * (1.0 + x) / (df * (1.0 + x) - f)
        })?;
        let (_, _, pm1) = legendre_triplet(m, x);
        xs.push(x);
        ws.push((1.0 - x) / (mf * mf * pm1 * pm1) / 2.0);
    }
    // nodes ascending on [0, 1] after τ = (1 − x)/2 : reverse order
    let mut nodes: Vec<f64> = xs.iter().rev().map(|&x| (1.0 - x) / 2.0).collect();
    let mut w: Vec<f64> = ws.iter().rev().copied().collect();
    nodes.push(1.0);
    w.push(1.0 / (mf * mf));
    Ok((nodes, w))
}

fn chebyshev(m: usize) -> Vec<f64> {
    let half: Vec<f64> =
        (1..=m / 2).map(|i| libm::cos((2 * i - 1) as f64 * PI / (2 * m) as f64)).collect();
    mirror(&half, m % 2 == 1)
}

/// Builds `M` nodes of the given family on [0, 1] with weights.
///
/// Gauss-type weights come from the classical closed forms; all other
/// families carry the weights of their interpolatory rule.
pub fn make_nodes(kind: NodeKind, m: usize) -> Result<NodeSet> {
    let need = match kind {
        NodeKind::GaussRadauRight | NodeKind::GaussLobatto | NodeKind::UniformClosed => 2,
        _ => 1,
    };
    if m < need {
        return Err(Error::InvalidArgument(alloc::format!(
            "{} nodes need M >= {need}, got {m}",
            kind.name()
        )));
    }
    let (nodes, weights) = match kind {
        NodeKind::GaussLegendre => {
            let (n, w) = gauss_legendre(m)?;
            (n, Some(w))
        }
        NodeKind::GaussLobatto => {
            let (n, w) = gauss_lobatto(m)?;
            (n, Some(w))
        }
        NodeKind::GaussRadauRight => {
            let (n, w) = gauss_radau_right(m)?;
            (n, Some(w))
        }
        NodeKind::Chebyshev => (chebyshev(m), None),
        NodeKind::UniformClosed => {
            let d = (m - 1) as f64;
            ((0..m).map(|i| i as f64 / d).collect(), None)
        }
        NodeKind::UniformOpen => ((0..m).map(|i| (i as f64 + 0.5) / m as f64).collect(), None),
        NodeKind::Custom => {
            return Err(Error::InvalidArgument("custom nodes are built with NodeSet::custom".into()))
        }
    };
    check_nodes(&nodes)?;
    let weights = match weights {
        Some(w) => Some(w),
        None => interpolatory_weights(&nodes).ok(),
    };
    Ok(NodeSet { kind, nodes, weights })
}

/// Weights of the interpolatory rule on `nodes`, exact for degree `M − 1`.
///
/// Solves `Ṽᵀ γ = e¹` with the normalized shifted Legendre
/// Vandermonde-like matrix `Ṽ[i][ν] = P̂_ν(τ_i)`.
pub fn interpolatory_weights(nodes: &[f64]) -> Result<Vec<f64>> {
    check_nodes(nodes)?;
    let m = nodes.len();
    let mut vt = Mat::zeros(m, m);
    for (i, &t) in nodes.iter().enumerate() {
        let p = eval_all(Family::LegendreShiftedNormalized, m, t)?;
        for (nu, v) in p.into_iter().enumerate() {
            vt[(nu, i)] = v;
        }
    }
    let tol = m as f64 * EPS * vt.max_col_norm();
    let qr = PivotedQr::new(vt, tol);
    if qr.rank < m {
        return Err(Error::Singular);
    }
    let mut e1 = vec![0.0; m];
    e1[0] = 1.0;
    Ok(qr.solve_basic(&e1))
}

/// Barycentric weights `1/Π_{k≠i}(τ_i − τ_k)`.
fn barycentric(nodes: &[f64]) -> Vec<f64> {
    (0..nodes.len())
        .map(|i| {
            1.0 / nodes
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, &tk)| nodes[i] - tk)
                .product::<f64>()
        })
        .collect()
}

/// Lebesgue function `Σ|l_i(x)|` via the barycentric formula.
fn lebesgue_fn(nodes: &[f64], bw: &[f64], x: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (&t, &w) in nodes.iter().zip(bw) {
        let d = x - t;
        if d == 0.0 {
            return 1.0;
        }
        num += (w / d).abs();
        den += w / d;
    }
    num / den.abs()
}

/// Samples per segment between consecutive nodes (and the end segments).
const SAMPLES: usize = 64;

/// Lebesgue constant `Λ_M = max_{τ∈[0,1]} Σ|l_i(τ)|`.
///
/// Each gap between nodes (plus the end segments) is sampled at 64 points and
/// the best sample refined by golden-section search on its bracket.
pub fn lebesgue_constant(nodes: &[f64]) -> Result<f64> {
    check_nodes(nodes)?;
    if nodes.len() == 1 {
        return Ok(1.0);
    }
    let bw = barycentric(nodes);
    let f = |x: f64| lebesgue_fn(nodes, &bw, x);
    let mut edges = Vec::with_capacity(nodes.len() + 2);
    if nodes[0] > 0.0 {
        edges.push(0.0);
    }
    edges.extend_from_slice(nodes);
    if nodes[nodes.len() - 1] < 1.0 {
        edges.push(1.0);
    }
    let mut best = f(0.0).max(f(1.0));
    for w in edges.windows(2) {
        let (u, v) = (w[0], w[1]);
        let h = (v - u) / (SAMPLES - 1) as f64;
        let samples: Vec<f64> = (0..SAMPLES).map(|s| f(u + s as f64 * h)).collect();
        let (k, &fk) = samples
            .iter()
            .enumerate()
            .fold((0, &f64::NEG_INFINITY), |acc, x| if *x.1 > *acc.1 { x } else { acc });
        best = best.max(fk);
        let lo = u + k.saturating_sub(1) as f64 * h;
        let hi = (u + (k + 1) as f64 * h).min(v);
        best = best.max(golden_max(&f, lo, hi));
    }
    Ok(best)
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let g = (libm::sqrt(5.0) - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if (b - a).abs() <= 1e-14 * (1.0 + a.abs()) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    fc.max(fd)
}

/// `‖ω̃‖_{L²(0,1)}` for `ω̃(ρ) = Π(ρ − ρ_i)`, integrated exactly by an
/// `(M+1)`-point Gauss rule.
pub fn nodal_poly_l2norm(nodes: &[f64]) -> Result<f64> {
    check_nodes(nodes)?;
    let (x, w) = gauss_legendre(nodes.len() + 1)?;
    let s: f64 = x
        .iter()
        .zip(&w)
        .map(|(&r, &wi)| {
            let p: f64 = nodes.iter().map(|&t| r - t).product();
            wi * p * p
        })
        .sum();
    Ok(libm::sqrt(s))
}
