//! The standard experiments `exp1`..`exp13` at desk scale (`n ≤ 320`, `N ≤ 25`).
//!
//! | preset | problem | varies |
//! |---|---|---|
//! | exp1 | index3_l0, n = 1 | N = 1..25, Lagrange basis on GLe nodes stored as monomial / Legendre / Chebyshev series |
//! | exp2 | index3_l0, n = 1 | N = 1..25, Lagrange basis on uniform-open / GLe / Chebyshev nodes |
//! | exp3 | index3_l0, n = 1 | N = 1..25, monomial / Lagrange(GLe) / Legendre / Chebyshev bases |
//! | exp4..exp6 | campbell_moore, n = 1 | as exp1..exp3 |
//! | exp7 | campbell_moore on [0, 1] | n = 5..320 for N ∈ {3, 5, 10, 20}, nodes GLe / Radau / Lobatto, functionals R and C |
//! | exp8 | campbell_moore, (N, n) ∈ {(5, 160), (20, 20)} | α = 1e-10..1e9 |
//! | exp9 | index4_bvp, (N, n) ∈ {(5, 20), (20, 5)} | α = 1e-10..1e9 |
//! | exp10 | campbell_moore, (N, n) ∈ {(5, 160), (20, 20)}, weighted | ω = 1e-9..1e10, with distance to the direct solution |
//! | exp11 | campbell_moore (as exp10) and index4_bvp (as exp9), deferred | ω ∈ {0.01, 10, ε^{-1/3}} |
//! | exp12 | campbell_moore, four performance cases | basis, functional and solver |
//! | exp13 | index4_bvp, four performance cases | basis, functional and solver |
//!
//! Unless listed, parameters are the [`RunSpec`] defaults. In exp12 and
//! exp13 the weighted solver uses `ω = 1` and the deferred one `ω = ε^{-1/3}`;
//! their rows run one after another so that the timings are comparable.

use crate::error::{spec_err, Result};
use crate::run::{run, sweep, RunRow};
use crate::spec::{parse_basis, parse_functional, parse_nodes, ExampleId, RunSpec, Solver};

/// A run or a sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct Job {
    /// Base configuration (its `label` names the series).
    pub spec: RunSpec,
    /// Parameter name and values, if this job is a sweep.
    pub sweep: Option<(String, Vec<String>)>,
}

/// A named bundle of jobs.
#[derive(Clone, Debug, PartialEq)]
pub struct Preset {
    /// `exp1`..`exp13`.
    pub name: String,
    /// One-line description.
    pub description: &'static str,
    /// Jobs in output order.
    pub jobs: Vec<Job>,
}

/// Preset names and descriptions.
pub const PRESETS: [(&str, &str); 13] = [
    ("exp1", "index3_l0: representation of the Lagrange basis"),
    ("exp2", "index3_l0: interpolation nodes of the Lagrange basis"),
    ("exp3", "index3_l0: choice of basis"),
    ("exp4", "campbell_moore: representation of the Lagrange basis"),
    ("exp5", "campbell_moore: interpolation nodes of the Lagrange basis"),
    ("exp6", "campbell_moore: choice of basis"),
    ("exp7", "campbell_moore on [0,1]: collocation nodes, N and n"),
    ("exp8", "campbell_moore: boundary weight alpha"),
    ("exp9", "index4_bvp: boundary weight alpha"),
    ("exp10", "campbell_moore: constraint weight omega"),
    ("exp11", "deferred correction for three values of omega"),
    ("exp12", "campbell_moore: solver performance cases"),
    ("exp13", "index4_bvp: solver performance cases"),
];

fn strings<T: ToString>(v: impl IntoIterator<Item = T>) -> Vec<String> {
    v.into_iter().map(|x| x.to_string()).collect()
}

fn powers(lo: i32, hi: i32) -> Vec<String> {
    (lo..=hi).map(|e| format!("1e{e}")).collect()
}

fn labeled(mut spec: RunSpec, label: impl Into<String>) -> RunSpec {
    spec.label = label.into();
    spec
}

fn sweep_job(spec: RunSpec, param: &str, values: Vec<String>) -> Job {
    Job { spec, sweep: Some((param.into(), values)) }
}

fn basis_n_sweep(id: ExampleId, bases: &[&str]) -> Result<Vec<Job>> {
    bases
        .iter()
        .map(|b| {
            let mut s = RunSpec::example(id, 1, 1);
            s.basis = parse_basis(b)?;
            Ok(sweep_job(labeled(s, *b), "N", strings(1..=25)))
        })
        .collect()
}

const BASIS_REPR: [&str; 3] = ["rk:gle:monomial", "rk:gle:legendre", "rk:gle:chebyshev"];
const BASIS_NODES: [&str; 3] = ["rk:uniform-open:legendre", "rk:gle:legendre", "rk:chebyshev:legendre"];
const BASIS_KINDS: [&str; 4] = ["monomial", "rk:gle:legendre", "legendre", "chebyshev"];

fn performance(id: ExampleId, cases: [(usize, usize); 4]) -> Result<Vec<Job>> {
    let mut jobs = Vec::new();
    for basis in ["legendre", "chebyshev"] {
        for functional in ["R", "C"] {
            for (i, &(nd, n)) in cases.iter().enumerate() {
                for (solver, omega) in [(Solver::Direct, None), (Solver::Weighted, Some(1.0)), (Solver::Deferred, None)] {
                    let mut s = RunSpec::example(id, nd, n);
                    s.basis = parse_basis(basis)?;
                    s.functional = parse_functional(functional)?;
                    s.solver = solver;
                    s.omega = omega;
                    jobs.push(Job { spec: labeled(s, format!("case{}", i + 1)), sweep: None });
                }
            }
        }
    }
    Ok(jobs)
}

/// Looks up a preset by name.
pub fn preset(name: &str) -> Result<Preset> {
    use ExampleId::{CampbellMoore as Cm, Index3L0 as I3, Index4Bvp as I4};
    let pairs_cm = [(5, 160), (20, 20)];
    let pairs_i4 = [(5, 20), (20, 5)];
    let jobs = match name {
        "exp1" => basis_n_sweep(I3, &BASIS_REPR)?,
        "exp2" => basis_n_sweep(I3, &BASIS_NODES)?,
        "exp3" => basis_n_sweep(I3, &BASIS_KINDS)?,
        "exp4" => basis_n_sweep(Cm, &BASIS_REPR)?,
        "exp5" => basis_n_sweep(Cm, &BASIS_NODES)?,
        "exp6" => basis_n_sweep(Cm, &BASIS_KINDS)?,
        "exp7" => {
            let mut jobs = Vec::new();
            for functional in ["R", "C"] {
                for nodes in ["gle", "radau", "lobatto"] {
                    for nd in [3, 5, 10, 20] {
                        let mut s = RunSpec::example(Cm, nd, 5);
                        s.interval = Some((0.0, 1.0));
                        s.nodes = parse_nodes(nodes)?;
                        s.functional = parse_functional(functional)?;
                        let s = labeled(s, format!("{functional}/{nodes}/N={nd}"));
                        jobs.push(sweep_job(s, "n", strings([5, 10, 20, 40, 80, 160, 320])));
                    }
                }
            }
            jobs
        }
        "exp8" | "exp9" => {
            let (id, pairs) = if name == "exp8" { (Cm, pairs_cm) } else { (I4, pairs_i4) };
            pairs
                .iter()
                .map(|&(nd, n)| {
                    let s = labeled(RunSpec::example(id, nd, n), format!("N={nd},n={n}"));
                    sweep_job(s, "alpha", powers(-10, 9))
                })
                .collect()
        }
        "exp10" => pairs_cm
            .iter()
            .map(|&(nd, n)| {
                let mut s = RunSpec::example(Cm, nd, n);
                s.solver = Solver::Weighted;
                s.reference = true;
                sweep_job(labeled(s, format!("N={nd},n={n}")), "omega", powers(-9, 10))
            })
            .collect(),
        "exp11" => pairs_cm
            .iter()
            .map(|&p| (Cm, p))
            .chain(pairs_i4.iter().map(|&p| (I4, p)))
            .map(|(id, (nd, n))| {
                let mut s = RunSpec::example(id, nd, n);
                s.solver = Solver::Deferred;
                s.reference = true;
                let values = strings(["0.01", "10", "eps^-1/3"]);
                sweep_job(labeled(s, format!("{}:N={nd},n={n}", id.name())), "omega", values)
            })
            .collect(),
        "exp12" => performance(Cm, [(3, 320), (5, 80), (10, 5), (20, 5)])?,
        "exp13" => performance(I4, [(4, 320), (5, 160), (10, 5), (20, 5)])?,
        _ => {
            let names: Vec<&str> = PRESETS.iter().map(|p| p.0).collect();
            return spec_err(format!("unknown preset '{name}' (expected one of {})", names.join(", ")));
        }
    };
    let description = PRESETS.iter().find(|p| p.0 == name).map(|p| p.1).unwrap_or_default();
    Ok(Preset { name: name.into(), description, jobs })
}

/// Runs every job of a preset; sweeps run their rows concurrently, jobs
/// run one after another.
pub fn run_preset(p: &Preset) -> Result<Vec<RunRow>> {
    let mut rows = Vec::new();
    for job in &p.jobs {
        match &job.sweep {
            Some((param, values)) => rows.extend(sweep(&job.spec, param, values)?),
            None => rows.push(run(&job.spec)?),
        }
    }
    Ok(rows)
}
