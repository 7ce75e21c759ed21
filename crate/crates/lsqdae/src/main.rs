use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use lsqdae::{
    output, parse_interval, preset, run, run_preset, sweep, tables, Error, OutputFormat, ProblemSource, Result, RunSpec, TableKind,
};

/// Least-squares collocation for linear higher-index DAEs.
///
/// Runs one configuration (`--example`/`--problem-file` with `--N` and
/// `--n`), a sweep over one parameter (`--sweep`), a preset experiment
/// (`--preset`) or regenerates a node-quality table (`--table`). Results
/// go to standard output (or `--out`) as CSV, or as JSON with `--json`.
#[derive(Debug, Parser)]
#[command(name = "lsqdae", version)]
struct Cli {
    /// Built-in example: index3_l0, campbell_moore or index4_bvp.
    #[arg(long, conflicts_with = "problem_file")]
    example: Option<String>,
    /// TOML problem file.
    #[arg(long)]
    problem_file: Option<PathBuf>,
    /// Polynomial degree N.
    #[arg(long = "N")]
    n_deg: Option<String>,
    /// Number of subintervals n.
    #[arg(long = "n")]
    n: Option<String>,
    /// Collocation nodes per subinterval (default N+1).
    #[arg(long = "M")]
    m_nodes: Option<String>,
    /// Node family: gle, radau, lobatto, chebyshev, uniform-closed, uniform-open.
    #[arg(long)]
    nodes: Option<String>,
    /// Basis: monomial, legendre, chebyshev, rk:<nodes>[:<representation>].
    #[arg(long)]
    basis: Option<String>,
    /// Functional: C, I or R.
    #[arg(long)]
    functional: Option<String>,
    /// Solver: direct, weighted or deferred.
    #[arg(long)]
    solver: Option<String>,
    /// Constraint weight (a number or eps^-1/3).
    #[arg(long, allow_hyphen_values = true)]
    omega: Option<String>,
    /// Boundary-condition weight.
    #[arg(long)]
    alpha: Option<String>,
    /// Deferred-correction tolerance.
    #[arg(long)]
    tol: Option<String>,
    /// Deferred-correction iteration cap.
    #[arg(long)]
    max_iter: Option<String>,
    /// Parameter lambda of index4_bvp.
    #[arg(long)]
    lambda: Option<String>,
    /// Parameter eta of index3_l0.
    #[arg(long)]
    eta: Option<String>,
    /// Re-pose the problem on lo,hi.
    #[arg(long, allow_hyphen_values = true)]
    interval: Option<String>,
    /// Also report the distance to the direct solver's solution.
    #[arg(long)]
    reference: bool,
    /// Skip the error norms against the exact solution.
    #[arg(long)]
    no_norms: bool,
    /// Write the assembled system as <prefix>_A.mtx, <prefix>_C.mtx, <prefix>_r.mtx.
    #[arg(long)]
    dump: Option<PathBuf>,
    /// Vary one parameter: <param>=<v1,v2,...>.
    #[arg(long)]
    sweep: Option<String>,
    /// Run a preset experiment exp1..exp13.
    #[arg(long, conflicts_with_all = ["table", "sweep", "example", "problem_file"])]
    preset: Option<String>,
    /// Regenerate a table: lebesgue or vcond.
    #[arg(long, conflicts_with_all = ["sweep", "example", "problem_file"])]
    table: Option<String>,
    /// Emit JSON instead of CSV.
    #[arg(long)]
    json: bool,
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn spec_from(cli: &Cli) -> Result<RunSpec> {
    let problem = match (&cli.example, &cli.problem_file) {
        (Some(e), None) => ProblemSource::Example(e.parse()?),
        (None, Some(p)) => ProblemSource::File(p.clone()),
        _ => return Err(Error::Spec("give --example or --problem-file".into())),
    };
    let mut spec = RunSpec::new(problem, 0, 0);
    let need = |v: &Option<String>, flag: &str| v.clone().ok_or_else(|| Error::Spec(format!("{flag} is required")));
    spec.set("N", &need(&cli.n_deg, "--N")?)?;
    spec.set("n", &need(&cli.n, "--n")?)?;
    let optional = [
        ("M", &cli.m_nodes),
        ("nodes", &cli.nodes),
        ("basis", &cli.basis),
        ("functional", &cli.functional),
        ("solver", &cli.solver),
        ("omega", &cli.omega),
        ("alpha", &cli.alpha),
        ("tol", &cli.tol),
        ("max_iter", &cli.max_iter),
        ("lambda", &cli.lambda),
        ("eta", &cli.eta),
    ];
    for (param, value) in optional {
        if let Some(v) = value {
            spec.set(param, v)?;
        }
    }
    if let Some(iv) = &cli.interval {
        spec.interval = Some(parse_interval(iv)?);
    }
    spec.reference = cli.reference;
    spec.norms = !cli.no_norms;
    spec.dump = cli.dump.clone();
    spec.format = if cli.json { OutputFormat::Json } else { OutputFormat::Csv };
    spec.validate()?;
    Ok(spec)
}

fn execute(cli: &Cli) -> Result<()> {
    let format = if cli.json { OutputFormat::Json } else { OutputFormat::Csv };
    let out: Box<dyn Write> = match &cli.out {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    if let Some(t) = &cli.table {
        return output::write_table(&tables(t.parse::<TableKind>()?)?, format, out);
    }
    if let Some(name) = &cli.preset {
        return output::write_rows(&run_preset(&preset(name)?)?, format, out);
    }
    let spec = spec_from(cli)?;
    let rows = match &cli.sweep {
        Some(s) => {
            let (param, values) =
                s.split_once('=').ok_or_else(|| Error::Spec(format!("--sweep: expected <param>=<v1,...>, got '{s}'")))?;
            let values: Vec<String> = values.split(',').map(|v| v.trim().to_string()).collect();
            sweep(&spec, param.trim(), &values)?
        }
        None => vec![run(&spec)?],
    };
    output::write_rows(&rows, format, out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
