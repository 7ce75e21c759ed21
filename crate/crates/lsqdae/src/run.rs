use std::time::Instant;

use lsqdae_core::analysis::{error_norms_exact, norms_between, AnsatzSolution, Norms};
use lsqdae_core::assembly::{AssemblyContext, CollocationConfig, DiscreteSystem};
use lsqdae_core::basis::BasisSpec;
use lsqdae_core::lsq::{
    solve_deferred, solve_direct, solve_weighted, DeferredOptions, LsqProblem, LsqSolution, Ordering, Route,
};
use lsqdae_core::model::{uniform_partition, DaeProblem, Partition};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{spec_err, Result};
use crate::output;
use crate::spec::{basis_flag, functional_flag, nodes_flag, ExampleId, ProblemSource, RunSpec, Solver};

/// One result row. Column names are those of the serialized fields;
/// `assemble_ms`, `solve_ms` and `wall_ms` are informational timings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunRow {
    /// Free-form label (preset case name).
    pub label: String,
    /// Example id or problem-file path.
    pub example: String,
    /// Left end of the interval.
    pub a: f64,
    /// Right end of the interval.
    pub b: f64,
    /// `λ` actually used (`index4_bvp` only).
    pub lambda: Option<f64>,
    /// `η` actually used (`index3_l0` only).
    pub eta: Option<f64>,
    /// Degree `N`.
    #[serde(rename = "N")]
    pub n_deg: usize,
    /// Subintervals `n`.
    pub n: usize,
    /// Collocation nodes `M`.
    #[serde(rename = "M")]
    pub m_nodes: usize,
    /// Node family.
    pub nodes: String,
    /// Basis.
    pub basis: String,
    /// Functional.
    pub functional: String,
    /// Solver.
    pub solver: String,
    /// Factorization route actually taken.
    pub route: String,
    /// `ω` (weighted and deferred solvers).
    pub omega: Option<f64>,
    /// `α`.
    pub alpha: f64,
    /// Step size.
    pub h: f64,
    /// Rows of `𝒜`.
    pub rows: usize,
    /// Rows of `𝒞`.
    pub constraints: usize,
    /// Unknowns.
    pub unknowns: usize,
    /// Stored entries of `𝒜`.
    pub nnz_a: usize,
    /// Stored entries of `𝒞`.
    pub nnz_c: usize,
    /// Numerical rank of the least-squares part.
    pub ls_rank: usize,
    /// Whether a rank deficiency was detected.
    pub rank_deficient: bool,
    /// `L²` error against the exact solution.
    pub l2: Option<f64>,
    /// `L∞` error against the exact solution.
    pub linf: Option<f64>,
    /// `H¹_D` error against the exact solution.
    pub h1d: Option<f64>,
    /// `L²` distance to the direct solution.
    pub ref_l2: Option<f64>,
    /// `L∞` distance to the direct solution.
    pub ref_linf: Option<f64>,
    /// `H¹_D` distance to the direct solution.
    pub ref_h1d: Option<f64>,
    /// `‖𝒜c − r‖`.
    pub residual: f64,
    /// `‖𝒞c‖`.
    pub constraint_residual: f64,
    /// Deferred-correction iterations.
    pub iterations: usize,
    /// Deferred-correction convergence flag.
    pub converged: Option<bool>,
    /// Assembly time in milliseconds.
    pub assemble_ms: f64,
    /// Solver time in milliseconds.
    pub solve_ms: f64,
    /// Total time in milliseconds.
    pub wall_ms: f64,
}

/// [`lsqdae_core::assembly::assemble`] with the intervals processed in
/// parallel; the result is identical to the sequential one.
pub fn assemble_parallel(
    problem: &DaeProblem,
    partition: &Partition,
    basis: &BasisSpec,
    config: &CollocationConfig,
) -> Result<DiscreteSystem> {
    let ctx = AssemblyContext::new(problem, partition, basis, config)?;
    let blocks = (0..partition.n())
        .into_par_iter()
        .map(|j| ctx.assemble_interval(j))
        .collect::<lsqdae_core::Result<Vec<_>>>()?;
    Ok(ctx.merge(blocks)?)
}

fn solve(lp: &LsqProblem<'_>, spec: &RunSpec) -> Result<LsqSolution> {
    Ok(match spec.solver {
        Solver::Direct => solve_direct(lp)?,
        Solver::Weighted => match spec.omega {
            Some(w) => solve_weighted(lp, w, Ordering::ConstraintsFirst)?,
            None => return spec_err("the weighted solver needs omega (--omega)"),
        },
        Solver::Deferred => {
            let mut opts = DeferredOptions::default();
            opts.omega = spec.omega.unwrap_or(opts.omega);
            opts.tol = spec.tol.unwrap_or(opts.tol);
            opts.max_iter = spec.max_iter.unwrap_or(opts.max_iter);
            solve_deferred(lp, &opts)?
        }
    })
}

fn ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn split(n: Option<Norms>) -> (Option<f64>, Option<f64>, Option<f64>) {
    n.map_or((None, None, None), |n| (Some(n.l2), Some(n.linf), Some(n.h1d)))
}

/// Assembles, solves and measures one configuration.
pub fn run(spec: &RunSpec) -> Result<RunRow> {
    spec.validate()?;
    let start = Instant::now();
    let problem = spec.build_problem()?;
    let partition = uniform_partition(&problem, spec.n)?;
    let basis = spec.basis_spec()?;
    let sys = assemble_parallel(&problem, &partition, &basis, &spec.collocation())?;
    let assemble_ms = ms(start);
    if let Some(prefix) = &spec.dump {
        output::dump_system(&sys, prefix)?;
    }
    let lp = LsqProblem::from(&sys);
    let t_solve = Instant::now();
    let sol = solve(&lp, spec)?;
    let solve_ms = ms(t_solve);

    let report = &sol.report;
    let ans = AnsatzSolution::new(&problem, &partition, &basis, sol.coeffs.clone())?;
    let exact = match (spec.norms, problem.exact()) {
        (true, Some(_)) => Some(error_norms_exact(&ans)?),
        _ => None,
    };
    let reference = if spec.reference {
        let direct = match spec.solver {
            Solver::Direct => ans.clone(),
            _ => AnsatzSolution::new(&problem, &partition, &basis, solve_direct(&lp)?.coeffs)?,
        };
        Some(norms_between(&ans, &direct, &partition, spec.n_deg + 2)?)
    } else {
        None
    };
    let (l2, linf, h1d) = split(exact);
    let (ref_l2, ref_linf, ref_h1d) = split(reference);
    let (a, b) = problem.interval();
    let (lambda, eta) = match spec.problem {
        ProblemSource::Example(ExampleId::Index4Bvp) => (Some(spec.lambda.unwrap_or(5.0)), None),
        ProblemSource::Example(ExampleId::Index3L0) => (None, Some(spec.eta.unwrap_or(1.0))),
        _ => (None, None),
    };
    Ok(RunRow {
        label: spec.label.clone(),
        example: spec.problem.to_string(),
        a,
        b,
        lambda,
        eta,
        n_deg: spec.n_deg,
        n: spec.n,
        m_nodes: spec.m(),
        nodes: nodes_flag(spec.nodes).into(),
        basis: basis_flag(spec.basis),
        functional: functional_flag(spec.functional).into(),
        solver: spec.solver.name().into(),
        route: match report.route {
            Route::Dense => "dense",
            Route::Frontal => "frontal",
            Route::Auto => "auto",
        }
        .into(),
        omega: report.omega,
        alpha: spec.alpha,
        h: partition.h(),
        rows: sys.a_mat.nrows(),
        constraints: sys.c_mat.nrows(),
        unknowns: sys.a_mat.ncols(),
        nnz_a: sys.a_mat.nnz(),
        nnz_c: sys.c_mat.nnz(),
        ls_rank: report.ls_rank,
        rank_deficient: report.rank_deficient || report.constraint_rank_deficient,
        l2,
        linf,
        h1d,
        ref_l2,
        ref_linf,
        ref_h1d,
        residual: report.residual,
        constraint_residual: report.constraint_residual,
        iterations: report.iterations,
        converged: report.converged,
        assemble_ms,
        solve_ms,
        wall_ms: ms(start),
    })
}

/// Runs `spec` once per value of `param`; rows come back in the order of
/// `values` although they are computed concurrently.
pub fn sweep(spec: &RunSpec, param: &str, values: &[String]) -> Result<Vec<RunRow>> {
    if values.is_empty() {
        return spec_err(format!("sweep over '{param}' has no values"));
    }
    let specs = values
        .iter()
        .map(|v| {
            let mut s = spec.clone();
            s.set(param, v)?;
            s.validate()?;
            Ok(s)
        })
        .collect::<Result<Vec<_>>>()?;
    specs.par_iter().map(run).collect()
}
