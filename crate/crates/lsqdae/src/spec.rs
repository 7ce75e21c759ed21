use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use lsqdae_core::assembly::CollocationConfig;
use lsqdae_core::basis::{BasisKind, BasisSpec, Representation};
use lsqdae_core::lsq::default_deferred_omega;
use lsqdae_core::model::{example_campbell_moore, example_index3_l0_eta, example_index4_bvp, DaeProblem};
use lsqdae_core::nodes::{make_nodes, NodeKind};
use lsqdae_core::vandermonde::{mass_factor, Functional};

use crate::error::{spec_err, Error, Result};
use crate::problem_file;

/// Built-in example problems.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExampleId {
    /// Index-3 problem on `[0, 1]` without boundary conditions (parameter `η`).
    Index3L0,
    /// Linearized Campbell-Moore problem, index 3, four initial conditions, `[0, 5]`.
    CampbellMoore,
    /// Index-4 boundary-value problem on `[0, 1]` (parameter `λ`).
    Index4Bvp,
}

impl ExampleId {
    /// Identifier accepted by `--example`.
    pub fn name(self) -> &'static str {
        match self {
            ExampleId::Index3L0 => "index3_l0",
            ExampleId::CampbellMoore => "campbell_moore",
            ExampleId::Index4Bvp => "index4_bvp",
        }
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "index3_l0" | "4.1" => ExampleId::Index3L0,
            "campbell_moore" | "4.2" => ExampleId::CampbellMoore,
            "index4_bvp" | "5.2" => ExampleId::Index4Bvp,
            _ => {
                return spec_err(format!(
                    "unknown example '{s}' (expected index3_l0, campbell_moore or index4_bvp)"
                ))
            }
        })
    }
}

/// Where the problem comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum ProblemSource {
    /// A built-in example.
    Example(ExampleId),
    /// A TOML problem file (see [`crate::problem_file`]).
    File(PathBuf),
}

impl fmt::Display for ProblemSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemSource::Example(id) => f.write_str(id.name()),
            ProblemSource::File(p) => write!(f, "{}", p.display()),
        }
    }
}

/// Least-squares solver.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Solver {
    /// Exact constraints.
    #[default]
    Direct,
    /// Constraints appended with weight `ω`.
    Weighted,
    /// Weighted solve followed by deferred corrections.
    Deferred,
}

impl Solver {
    /// Lower-case name.
    pub fn name(self) -> &'static str {
        match self {
            Solver::Direct => "direct",
            Solver::Weighted => "weighted",
            Solver::Deferred => "deferred",
        }
    }
}

impl FromStr for Solver {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "direct" => Ok(Solver::Direct),
            "weighted" => Ok(Solver::Weighted),
            "deferred" => Ok(Solver::Deferred),
            _ => spec_err(format!("unknown solver '{s}' (expected direct, weighted or deferred)")),
        }
    }
}

/// Output format of result tables.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum OutputFormat {
    /// Comma-separated values with a header line.
    #[default]
    Csv,
    /// A JSON array of objects.
    Json,
}

/// Parses a node family: `gle`, `radau`, `lobatto`, `chebyshev`,
/// `uniform-closed` or `uniform-open` (long names are accepted too).
pub fn parse_nodes(s: &str) -> Result<NodeKind> {
    Ok(match s.to_ascii_lowercase().replace('_', "-").as_str() {
        "gle" | "gauss-legendre" | "legendre" => NodeKind::GaussLegendre,
        "radau" | "gauss-radau" => NodeKind::GaussRadauRight,
        "lobatto" | "gauss-lobatto" => NodeKind::GaussLobatto,
        "chebyshev" => NodeKind::Chebyshev,
        "uniform-closed" => NodeKind::UniformClosed,
        "uniform-open" => NodeKind::UniformOpen,
        _ => {
            return spec_err(format!(
                "unknown node family '{s}' (expected gle, radau, lobatto, chebyshev, uniform-closed, uniform-open)"
            ))
        }
    })
}

/// Short flag spelling of a node family.
pub fn nodes_flag(kind: NodeKind) -> &'static str {
    match kind {
        NodeKind::GaussLegendre => "gle",
        NodeKind::GaussRadauRight => "radau",
        NodeKind::GaussLobatto => "lobatto",
        other => other.name(),
    }
}

fn parse_repr(s: &str) -> Result<Representation> {
    match s.to_ascii_lowercase().as_str() {
        "monomial" => Ok(Representation::Monomial),
        "legendre" => Ok(Representation::Legendre),
        "chebyshev" => Ok(Representation::Chebyshev),
        _ => spec_err(format!("unknown representation '{s}' (expected monomial, legendre or chebyshev)")),
    }
}

fn repr_flag(r: Representation) -> &'static str {
    match r {
        Representation::Monomial => "monomial",
        Representation::Legendre => "legendre",
        Representation::Chebyshev => "chebyshev",
    }
}

/// Parses a basis: `monomial`, `legendre`, `chebyshev`, or `rk:<nodes>` /
/// `rk:<nodes>:<representation>` for the Lagrange (Runge-Kutta) basis.
pub fn parse_basis(s: &str) -> Result<BasisKind> {
    let lower = s.to_ascii_lowercase();
    let parts: Vec<&str> = lower.split(':').collect();
    match parts.as_slice() {
        ["monomial"] => Ok(BasisKind::Monomial),
        ["legendre"] => Ok(BasisKind::Legendre),
        ["chebyshev"] => Ok(BasisKind::Chebyshev),
        ["rk", nodes] => Ok(BasisKind::runge_kutta(parse_nodes(nodes)?)),
        ["rk", nodes, repr] => Ok(BasisKind::RungeKutta { nodes: parse_nodes(nodes)?, repr: parse_repr(repr)? }),
        _ => spec_err(format!(
            "unknown basis '{s}' (expected monomial, legendre, chebyshev or rk:<nodes>[:<representation>])"
        )),
    }
}

/// Flag spelling of a basis, the inverse of [`parse_basis`].
pub fn basis_flag(kind: BasisKind) -> String {
    match kind {
        BasisKind::Monomial => "monomial".into(),
        BasisKind::Legendre => "legendre".into(),
        BasisKind::Chebyshev => "chebyshev".into(),
        BasisKind::RungeKutta { nodes, repr } => format!("rk:{}:{}", nodes_flag(nodes), repr_flag(repr)),
    }
}

/// Parses `C`, `I` or `R`.
pub fn parse_functional(s: &str) -> Result<Functional> {
    match s {
        "C" | "c" => Ok(Functional::C),
        "I" | "i" => Ok(Functional::I),
        "R" | "r" => Ok(Functional::R),
        _ => spec_err(format!("unknown functional '{s}' (expected C, I or R)")),
    }
}

pub(crate) fn functional_flag(f: Functional) -> &'static str {
    match f {
        Functional::C => "C",
        Functional::I => "I",
        Functional::R => "R",
    }
}

/// Parses a positive real; `eps^-1/3` stands for the deferred-correction default.
pub(crate) fn parse_real(name: &str, s: &str) -> Result<f64> {
    if matches!(s, "eps^-1/3" | "eps^(-1/3)") {
        return Ok(default_deferred_omega());
    }
    s.trim().parse::<f64>().map_err(|_| Error::Spec(format!("{name}: cannot parse '{s}' as a number")))
}

fn parse_count(name: &str, s: &str) -> Result<usize> {
    s.trim().parse::<usize>().map_err(|_| Error::Spec(format!("{name}: cannot parse '{s}' as a count")))
}

/// Parses `lo,hi`.
pub fn parse_interval(s: &str) -> Result<(f64, f64)> {
    let (lo, hi) =
        s.split_once(',').ok_or_else(|| Error::Spec(format!("interval: expected 'lo,hi', got '{s}'")))?;
    Ok((parse_real("interval", lo)?, parse_real("interval", hi)?))
}

/// One configuration of problem, discretization, solver and output.
#[derive(Clone, Debug, PartialEq)]
pub struct RunSpec {
    /// Problem.
    pub problem: ProblemSource,
    /// Degree `N`.
    pub n_deg: usize,
    /// Number of subintervals `n`.
    pub n: usize,
    /// Collocation nodes per interval; `None` means `N + 1`.
    pub m_nodes: Option<usize>,
    /// Collocation node family.
    pub nodes: NodeKind,
    /// Ansatz basis.
    pub basis: BasisKind,
    /// Discrete functional.
    pub functional: Functional,
    /// Solver.
    pub solver: Solver,
    /// Constraint weight `ω` (weighted: required; deferred: default `ε^{-1/3}`).
    pub omega: Option<f64>,
    /// Boundary weight `α`.
    pub alpha: f64,
    /// Deferred-correction tolerance (default `1e-15`).
    pub tol: Option<f64>,
    /// Deferred-correction iteration cap (default 2).
    pub max_iter: Option<usize>,
    /// `λ` of `index4_bvp` (default 5).
    pub lambda: Option<f64>,
    /// `η` of `index3_l0` (default 1).
    pub eta: Option<f64>,
    /// Re-posed interval; `None` keeps the problem's own.
    pub interval: Option<(f64, f64)>,
    /// Measure errors against the exact solution when one is known.
    pub norms: bool,
    /// Also measure the distance to the direct solver's solution.
    pub reference: bool,
    /// Output format.
    pub format: OutputFormat,
    /// If set, write `𝒜`, `𝒞`, `r` as Matrix Market files with this path prefix.
    pub dump: Option<PathBuf>,
    /// Free-form label copied into the result row.
    pub label: String,
}

/// Parameters accepted by [`RunSpec::set`] and hence by sweeps.
pub const SWEEPABLE: &[&str] =
    &["N", "n", "M", "nodes", "basis", "functional", "solver", "omega", "alpha", "tol", "max_iter", "lambda", "eta"];

impl RunSpec {
    /// Defaults: `M = N + 1` Gauss-Legendre nodes, Legendre basis, functional
    /// `R`, direct solver, `α = 1`, norms on, CSV.
    pub fn new(problem: ProblemSource, n_deg: usize, n: usize) -> Self {
        Self {
            problem,
            n_deg,
            n,
            m_nodes: None,
            nodes: NodeKind::GaussLegendre,
            basis: BasisKind::Legendre,
            functional: Functional::R,
            solver: Solver::Direct,
            omega: None,
            alpha: 1.0,
            tol: None,
            max_iter: None,
            lambda: None,
            eta: None,
            interval: None,
            norms: true,
            reference: false,
            format: OutputFormat::Csv,
            dump: None,
            label: String::new(),
        }
    }

    /// Shorthand for a built-in example.
    pub fn example(id: ExampleId, n_deg: usize, n: usize) -> Self {
        Self::new(ProblemSource::Example(id), n_deg, n)
    }

    /// Number of collocation nodes actually used.
    pub fn m(&self) -> usize {
        self.m_nodes.unwrap_or(self.n_deg + 1)
    }

    /// The collocation configuration.
    pub fn collocation(&self) -> CollocationConfig {
        CollocationConfig { m_nodes: self.m(), node_kind: self.nodes, functional: self.functional, alpha: self.alpha }
    }

    /// The ansatz basis of degree `N`.
    pub fn basis_spec(&self) -> Result<BasisSpec> {
        Ok(BasisSpec::new(self.basis, self.n_deg)?)
    }

    /// Builds the problem, applying parameters and the interval override.
    pub fn build_problem(&self) -> Result<DaeProblem> {
        let p = match &self.problem {
            ProblemSource::Example(id) => {
                if self.lambda.is_some() && *id != ExampleId::Index4Bvp {
                    return spec_err(format!("lambda only applies to index4_bvp, not {}", id.name()));
                }
                if self.eta.is_some() && *id != ExampleId::Index3L0 {
                    return spec_err(format!("eta only applies to index3_l0, not {}", id.name()));
                }
                match id {
                    ExampleId::Index3L0 => {
                        let eta = self.eta.unwrap_or(1.0);
                        if !eta.is_finite() {
                            return spec_err(format!("eta must be finite, got {eta}"));
                        }
                        example_index3_l0_eta(eta)
                    }
                    ExampleId::CampbellMoore => example_campbell_moore(),
                    ExampleId::Index4Bvp => example_index4_bvp(self.lambda.unwrap_or(5.0))?,
                }
            }
            ProblemSource::File(path) => {
                if self.lambda.is_some() || self.eta.is_some() {
                    return spec_err("lambda and eta only apply to built-in examples");
                }
                problem_file::load(path)?
            }
        };
        match self.interval {
            Some((lo, hi)) => Ok(p.with_interval(lo, hi)?),
            None => Ok(p),
        }
    }

    /// Checks every constraint of the kernels before any work is done.
    pub fn validate(&self) -> Result<()> {
        if self.n_deg == 0 {
            return spec_err("N must be at least 1");
        }
        if self.n == 0 {
            return spec_err("n must be at least 1");
        }
        self.collocation().validate(self.n_deg)?;
        self.basis_spec()?;
        mass_factor(&make_nodes(self.nodes, self.m())?, self.functional)?;
        if let Some(w) = self.omega {
            if !(w > 0.0 && w.is_finite()) {
                return spec_err(format!("omega must be positive and finite, got {w}"));
            }
        }
        if self.solver == Solver::Weighted && self.omega.is_none() {
            return spec_err("the weighted solver needs omega (--omega)");
        }
        if let Some(t) = self.tol {
            if !(t > 0.0 && t.is_finite()) {
                return spec_err(format!("tol must be positive, got {t}"));
            }
        }
        if self.max_iter == Some(0) {
            return spec_err("max_iter must be at least 1");
        }
        self.build_problem()?;
        Ok(())
    }

    /// Sets one parameter from its textual value (names as in [`SWEEPABLE`]).
    pub fn set(&mut self, param: &str, value: &str) -> Result<()> {
        match param {
            "N" => self.n_deg = parse_count("N", value)?,
            "n" => self.n = parse_count("n", value)?,
            "M" => self.m_nodes = Some(parse_count("M", value)?),
            "nodes" => self.nodes = parse_nodes(value)?,
            "basis" => self.basis = parse_basis(value)?,
            "functional" => self.functional = parse_functional(value)?,
            "solver" => self.solver = value.parse()?,
            "omega" => self.omega = Some(parse_real("omega", value)?),
            "alpha" => self.alpha = parse_real("alpha", value)?,
            "tol" => self.tol = Some(parse_real("tol", value)?),
            "max_iter" | "max-iter" => self.max_iter = Some(parse_count("max_iter", value)?),
            "lambda" => self.lambda = Some(parse_real("lambda", value)?),
            "eta" => self.eta = Some(parse_real("eta", value)?),
            _ => {
                return spec_err(format!("'{param}' cannot be swept (sweepable: {})", SWEEPABLE.join(", ")))
            }
        }
        Ok(())
    }
}
