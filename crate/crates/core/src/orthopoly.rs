//! Legendre and Chebyshev polynomials: evaluation by three-term recurrence,
//! derivative recurrences, Clenshaw summation and exact antiderivatives.
//!
//! Symbols: `P_ν` Legendre on [−1, 1], `P̃_ν(ρ) = P_ν(2ρ − 1)` shifted to
//! [0, 1], `P̂_ν = √(2ν+1) P̃_ν` (orthonormal on [0, 1]), `T_ν` Chebyshev on
//! [−1, 1] and `T̄_ν` its normalization (`√(1/π)` for ν = 0, `√(2/π)` otherwise).

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::{Error, Result};

/// Polynomial family of a [`PolySeries`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `P_ν` on [−1, 1].
    Legendre,
    /// `P̃_ν(ρ) = P_ν(2ρ − 1)` on [0, 1].
    LegendreShifted,
    /// `P̂_ν(ρ) = √(2ν+1) P_ν(2ρ − 1)` on [0, 1].
    LegendreShiftedNormalized,
    /// `T_ν` on [−1, 1].
    Chebyshev,
    /// `T̄_ν` on [−1, 1].
    ChebyshevNormalized,
}

impl Family {
    /// Native interval of the family.
    pub fn domain(self) -> (f64, f64) {
        match self {
            Family::LegendreShifted | Family::LegendreShiftedNormalized => (0.0, 1.0),
            _ => (-1.0, 1.0),
        }
    }

    fn is_shifted(self) -> bool {
        matches!(self, Family::LegendreShifted | Family::LegendreShiftedNormalized)
    }

    fn is_legendre(self) -> bool {
        !matches!(self, Family::Chebyshev | Family::ChebyshevNormalized)
    }

    /// Factor turning the base member (`P_ν` or `T_ν`) into member ν of this family.
    fn scale(self, nu: usize) -> f64 {
        match self {
            Family::LegendreShiftedNormalized => libm::sqrt((2 * nu + 1) as f64),
            Family::ChebyshevNormalized if nu == 0 => libm::sqrt(1.0 / PI),
            Family::ChebyshevNormalized => libm::sqrt(2.0 / PI),
            _ => 1.0,
        }
    }

    /// Maps `t` to the [−1, 1] argument of the base recurrence, checking the domain.
    fn argument(self, t: f64) -> Result<f64> {
        let (lo, hi) = self.domain();
        if !(lo..=hi).contains(&t) {
            return Err(Error::OutOfDomain { value: t, lo, hi });
        }
        Ok(if self.is_shifted() { 2.0 * t - 1.0 } else { t })
    }

    /// d(argument)/dt.
    fn chain(self) -> f64 {
        if self.is_shifted() {
            2.0
        } else {
            1.0
        }
    }
}

/// A finite expansion `Σ c_ν φ_ν` in one of the [`Family`] members.
#[derive(Clone, Debug, PartialEq)]
pub struct PolySeries {
    family: Family,
    coeffs: Vec<f64>,
}

impl PolySeries {
    /// Builds a series; coefficients must be non-empty and finite.
    pub fn new(family: Family, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("series needs at least one coefficient".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("series coefficients must be finite".into()));
        }
        Ok(Self { family, coeffs })
    }

    /// The family.
    pub fn family(&self) -> Family {
        self.family
    }

    /// Coefficients `c_0..c_K`.
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Degree `K`.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

fn check_count(count: usize) -> Result<()> {
    if count == 0 {
        Err(Error::InvalidArgument("count must be positive".into()))
    } else {
        Ok(())
    }
}

/// Base values `P_0..P_{count-1}` (or `T_ν`) at `x ∈ [−1, 1]`.
fn base_values(legendre: bool, count: usize, x: f64, out: &mut Vec<f64>) {
    out.clear();
    out.push(1.0);
    if count > 1 {
        out.push(x);
    }
    for nu in 1..count.saturating_sub(1) {
        let (p, pm) = (out[nu], out[nu - 1]);
        let next = if legendre {
            let r = nu as f64 / (nu + 1) as f64;
            r * (x * p - pm) + x * p
        } else {
            2.0 * x * p - pm
        };
        out.push(next);
    }
}

/// Values of the first `count` members of `family` at `t`.
///
/// Legendre members use `P_{ν+1} = ν/(ν+1)(τP_ν − P_{ν−1}) + τP_ν`, which has
/// smaller rounding error than the textbook form.
pub fn eval_all(family: Family, count: usize, t: f64) -> Result<Vec<f64>> {
    check_count(count)?;
    let x = family.argument(t)?;
    let mut v = Vec::with_capacity(count);
    base_values(family.is_legendre(), count, x, &mut v);
    for (nu, val) in v.iter_mut().enumerate() {
        *val *= family.scale(nu);
    }
    Ok(v)
}

/// First derivatives (with respect to `t`) of the first `count` members.
pub fn eval_all_derivatives(family: Family, count: usize, t: f64) -> Result<Vec<f64>> {
    check_count(count)?;
    let x = family.argument(t)?;
    let mut p = Vec::with_capacity(count);
    base_values(family.is_legendre(), count, x, &mut p);
    let mut d = vec![0.0; count];
    if count > 1 {
        d[1] = 1.0;
    }
    for nu in 1..count.saturating_sub(1) {
        d[nu + 1] = if family.is_legendre() {
            // (ν+1) P'_{ν+1} = (2ν+1)(P_ν + τ P'_ν) − ν P'_{ν−1}
            ((2 * nu + 1) as f64 * (p[nu] + x * d[nu]) - nu as f64 * d[nu - 1]) / (nu + 1) as f64
        } else {
            2.0 * p[nu] + 2.0 * x * d[nu] - d[nu - 1]
        };
    }
    let c = family.chain();
    for (nu, val) in d.iter_mut().enumerate() {
        *val *= c * family.scale(nu);
    }
    Ok(d)
}

/// Evaluates `series` at `t` by the backward Clenshaw recurrence.
pub fn clenshaw(series: &PolySeries, t: f64) -> Result<f64> {
    let fam = series.family;
    let x = fam.argument(t)?;
    let c = |k: usize| series.coeffs[k] * fam.scale(k);
    let kmax = series.degree();
    let (mut b1, mut b2) = (0.0, 0.0);
    if fam.is_legendre() {
        // P_{k+1} = α_k P_k + β_k P_{k−1}, α_k = (2k+1)x/(k+1), β_k = −k/(k+1)
        for k in (0..=kmax).rev() {
            let alpha = (2 * k + 1) as f64 * x / (k + 1) as f64;
            let beta = -((k + 1) as f64) / (k + 2) as f64;
            let b0 = c(k) + alpha * b1 + beta * b2;
            b2 = b1;
            b1 = b0;
        }
        Ok(b1)
    } else {
        for k in (1..=kmax).rev() {
            let b0 = c(k) + 2.0 * x * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        Ok(c(0) + x * b1 - b2)
    }
}

/// Coefficients of `F(τ) = ∫_{−1}^{τ} s(σ) dσ` in the same family (degree K+1).
///
/// Only the unnormalized `Legendre` and `Chebyshev` families are supported.
/// Every column of the map vanishes at τ = −1, so `F(−1) = 0` by construction.
pub fn antiderivative_coeffs(series: &PolySeries) -> Result<PolySeries> {
    let k = series.degree();
    let mut out = vec![0.0; k + 2];
    match series.family {
        Family::Legendre => {
            for (nu, &c) in series.coeffs.iter().enumerate() {
                if nu == 0 {
                    out[0] += c;
                    out[1] += c;
                } else {
                    let s = c / (2 * nu + 1) as f64;
                    out[nu + 1] += s;
                    out[nu - 1] -= s;
                }
            }
        }
        Family::Chebyshev => {
            for (nu, &c) in series.coeffs.iter().enumerate() {
                match nu {
                    0 => {
                        out[0] += c;
                        out[1] += c;
                    }
                    1 => {
                        out[2] += c / 4.0;
                        out[0] -= c / 4.0;
                    }
                    _ => {
                        let nf = nu as f64;
                        out[nu + 1] += c / (2.0 * (nf + 1.0));
                        out[nu - 1] -= c / (2.0 * (nf - 1.0));
                        let sign = if nu % 2 == 0 { -1.0 } else { 1.0 };
                        out[0] += c * sign / (nf * nf - 1.0);
                    }
                }
            }
        }
        other => {
            return Err(Error::Unsupported(alloc::format!(
                "antiderivative map for family {other:?}"
            )))
        }
    }
    PolySeries::new(series.family, out)
}
