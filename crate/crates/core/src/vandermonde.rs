//! The Vandermonde-like matrix `Ṽ[i][ν] = P̂_ν(τ_i)`, the Lagrange→Legendre
//! change of basis `Ṽ⁻¹`, the Lagrange mass matrix and the square-root factors
//! used by the three discrete functionals.

use alloc::vec::Vec;

use crate::dense::{self, Mat};
use crate::nodes::NodeSet;
use crate::orthopoly::{eval_all, Family};
use crate::{Error, Result};

pub use crate::dense::cond2;

/// Discretization of the residual integral.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Functional {
    /// Equal weights `1/M`.
    C,
    /// Quadrature weights `γ_i` (all must be positive).
    I,
    /// Exact integral of the interpolating polynomial (mass matrix `L^R`).
    R,
}

/// A factor `L̂` with `L = L̂ᵀL̂` for one functional and node set.
#[derive(Clone, Debug)]
pub struct MassFactor {
    /// Functional the factor belongs to.
    pub functional: Functional,
    /// `M × M` factor.
    pub factor: Mat,
    /// Nodes it was built from.
    pub nodes: NodeSet,
}

fn check_distinct(nodes: &[f64]) -> Result<()> {
    if nodes.is_empty() {
        return Err(Error::InvalidArgument("at least one node is required".into()));
    }
    if nodes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::DuplicateNodes);
    }
    Ok(())
}

/// `Ṽ` with rows indexed by nodes and columns by `P̂_0..P̂_{M−1}`.
pub fn build_vandermonde(nodes: &[f64]) -> Result<Mat> {
    check_distinct(nodes)?;
    let m = nodes.len();
    let mut v = Mat::zeros(m, m);
    for (i, &t) in nodes.iter().enumerate() {
        for (nu, p) in eval_all(Family::LegendreShiftedNormalized, m, t)?.into_iter().enumerate() {
            v[(i, nu)] = p;
        }
    }
    Ok(v)
}

/// `A = Ṽ⁻¹`: column `i` holds the `P̂` coefficients of the Lagrange polynomial `l_i`.
pub fn lagrange_to_legendre(nodes: &[f64]) -> Result<Mat> {
    dense::inverse(&build_vandermonde(nodes)?)
}

/// Mass matrix `L^R_{iκ} = ∫_0^1 l_i l_κ = (AᵀA)_{iκ}`.
pub fn mass_matrix(nodes: &[f64]) -> Result<Mat> {
    let a = lagrange_to_legendre(nodes)?;
    Ok(a.transpose().matmul(&a))
}

/// Square-root factor of the weight matrix of `functional`.
///
/// `C`: `M^{−1/2} I`; `I`: `diag(√γ_i)`, rejecting non-positive weights;
/// `R`: `Ṽ⁻¹`.
pub fn mass_factor(nodes: &NodeSet, functional: Functional) -> Result<MassFactor> {
    let m = nodes.len();
    let factor = match functional {
        Functional::C => {
            let s = 1.0 / libm::sqrt(m as f64);
            Mat::diag(&alloc::vec![s; m])
        }
        Functional::I => {
            let w = nodes.weights().ok_or_else(|| {
                Error::InvalidArgument("functional I needs quadrature weights".into())
            })?;
            if let Some((index, &weight)) = w.iter().enumerate().find(|(_, &g)| g <= 0.0) {
                return Err(Error::NonPositiveWeight { index, weight });
            }
            Mat::diag(&w.iter().map(|&g| libm::sqrt(g)).collect::<Vec<_>>())
        }
        Functional::R => lagrange_to_legendre(nodes.nodes())?,
    };
    Ok(MassFactor { functional, factor, nodes: nodes.clone() })
}
