//! TOML description of constant-coefficient problems with a polynomial
//! right-hand side.
//!
//! ```toml
//! name = "oscillator"
//! m = 3
//! k = 2
//! interval = [0.0, 1.0]
//! A = [[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]       # m x k
//! B = [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [1.0, 0.0, -1.0]]  # m x m
//! q = [[0.0], [0.0], [0.0, 1.0]]                  # ascending coefficients per row
//!
//! [boundary]                                      # optional
//! Ga = [[1.0, 0.0, 0.0]]                          # l x m
//! Gb = [[0.0, 0.0, 0.0]]                          # l x m
//! d = [1.0]
//! ```
//!
//! Unknown keys are rejected.

use std::path::Path;
use std::sync::Arc;

use lsqdae_core::dense::Mat;
use lsqdae_core::model::DaeProblem;
use serde::Deserialize;

use crate::error::{Error, Result};

/// Raw contents of a problem file.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    /// Display name.
    #[serde(default = "default_name")]
    pub name: String,
    /// State dimension.
    pub m: usize,
    /// Number of differentiated components.
    pub k: usize,
    /// `[a, b]`.
    pub interval: [f64; 2],
    /// Leading matrix, `m × k`.
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    /// `m × m`.
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
    /// Row `i` holds the coefficients of `q_i(t) = Σ_j q[i][j] t^j`.
    pub q: Vec<Vec<f64>>,
    /// Boundary conditions.
    pub boundary: Option<Boundary>,
    /// Tractability index, if known.
    pub index: Option<usize>,
}

/// `G_a x(a) + G_b x(b) = d`.
#[derive(Clone, Debug, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct Boundary {
    /// `l × m`.
    #[serde(rename = "Ga")]
    pub ga: Vec<Vec<f64>>,
    /// `l × m`.
    #[serde(rename = "Gb")]
    pub gb: Vec<Vec<f64>>,
    /// Length `l`.
    pub d: Vec<f64>,
}

fn default_name() -> String {
    "problem-file".into()
}

fn matrix(name: &str, rows: &[Vec<f64>], nrows: usize, ncols: usize) -> std::result::Result<Mat, String> {
    if rows.len() != nrows || rows.iter().any(|r| r.len() != ncols) {
        return Err(format!("{name} must be {nrows} x {ncols}"));
    }
    if rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(format!("{name} has non-finite entries"));
    }
    Ok(Mat::from_fn(nrows, ncols, |i, j| rows[i][j]))
}

fn horner(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * t + v)
}

impl ProblemFile {
    /// Parses TOML text.
    pub fn parse(text: &str) -> std::result::Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    /// Converts to a problem; shape errors name the offending key.
    pub fn to_problem(&self) -> std::result::Result<DaeProblem, String> {
        let (m, k) = (self.m, self.k);
        let a = matrix("A", &self.a, m, k)?;
        let b = matrix("B", &self.b, m, m)?;
        if self.q.len() != m || self.q.iter().flatten().any(|v| !v.is_finite()) {
            return Err(format!("q must have {m} rows of finite coefficients"));
        }
        let q = self.q.clone();
        let mut p = DaeProblem::new(
            self.name.clone(),
            m,
            k,
            (self.interval[0], self.interval[1]),
            Arc::new(move |_: f64| a.clone()),
            Arc::new(move |_: f64| b.clone()),
            Arc::new(move |t: f64| q.iter().map(|c| horner(c, t)).collect()),
        )
        .map_err(|e| e.to_string())?;
        if let Some(bc) = &self.boundary {
            let l = bc.d.len();
            let ga = matrix("Ga", &bc.ga, l, m)?;
            let gb = matrix("Gb", &bc.gb, l, m)?;
            p = p.with_boundary(ga, gb, bc.d.clone()).map_err(|e| e.to_string())?;
        }
        if let Some(mu) = self.index {
            p = p.with_index(mu);
        }
        Ok(p)
    }
}

/// Reads and converts a problem file.
pub fn load(path: &Path) -> Result<DaeProblem> {
    let err = |msg: String| Error::ProblemFile { path: path.to_path_buf(), msg };
    let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
    ProblemFile::parse(&text).and_then(|f| f.to_problem()).map_err(err)
}
