//! Experiment driver on top of [`lsqdae_core`].
//!
//! A [`RunSpec`] names a problem (a built-in example or a TOML problem
//! file) and the discretization and solver parameters. [`run`] assembles,
//! solves and measures one configuration, [`sweep`] varies one parameter,
//! [`tables`] regenerates the node-quality tables and [`preset`] bundles
//! the standard experiments. Rows serialize to CSV or JSON with fixed
//! columns (see [`RunRow`]).

#![forbid(unsafe_code)]
#![warn(missing_docs)]

mod error;
pub mod output;
pub mod presets;
pub mod problem_file;
mod run;
mod spec;
pub mod tables;

pub use error::{Error, Result};
pub use presets::{preset, run_preset, Job, Preset, PRESETS};
pub use run::{assemble_parallel, run, sweep, RunRow};
pub use spec::{parse_basis, parse_functional, parse_interval, parse_nodes, ExampleId, OutputFormat, ProblemSource, RunSpec, Solver};
pub use tables::{tables, Table, TableKind};

pub use lsqdae_core as core;
