//! Node-quality tables: Lebesgue constants and condition numbers of the
//! Vandermonde-like matrix `Ṽ`.

use std::str::FromStr;

use lsqdae_core::nodes::{lebesgue_constant, make_nodes, NodeKind};
use lsqdae_core::vandermonde::{build_vandermonde, cond2};
use serde::Serialize;

use crate::error::{spec_err, Error, Result};

/// Which table to regenerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableKind {
    /// `Λ_M` for `M ∈ {5, 10, 15, 20}`.
    Lebesgue,
    /// `cond₂(Ṽ)` for `M ∈ {5, 10, 15, 20, 50, 100}`.
    VandermondeCond,
}

impl FromStr for TableKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lebesgue" => Ok(TableKind::Lebesgue),
            "vcond" | "vandermonde_cond" => Ok(TableKind::VandermondeCond),
            _ => spec_err(format!("unknown table '{s}' (expected lebesgue or vcond)")),
        }
    }
}

/// One line of a table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    /// Number of nodes.
    #[serde(rename = "M")]
    pub m: usize,
    /// One value per column; `+∞` marks numerical singularity.
    pub values: Vec<f64>,
}

/// A table with one column per node family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Table {
    /// Column headings.
    pub columns: Vec<String>,
    /// Rows in increasing `M`.
    pub rows: Vec<TableRow>,
}

impl Table {
    /// Entry for node count `m` in column `col`.
    pub fn get(&self, m: usize, col: &str) -> Option<f64> {
        let c = self.columns.iter().position(|h| h == col)?;
        self.rows.iter().find(|r| r.m == m).map(|r| r.values[c])
    }
}

const LEBESGUE: [(&str, NodeKind); 6] = [
    ("C", NodeKind::Chebyshev),
    ("L", NodeKind::GaussLegendre),
    ("Lo", NodeKind::GaussLobatto),
    ("R", NodeKind::GaussRadauRight),
    ("U", NodeKind::UniformClosed),
    ("O", NodeKind::UniformOpen),
];

const VCOND: [(&str, NodeKind); 6] = [
    ("GLe", NodeKind::GaussLegendre),
    ("GR", NodeKind::GaussRadauRight),
    ("GLo", NodeKind::GaussLobatto),
    ("Ch", NodeKind::Chebyshev),
    ("cNC", NodeKind::UniformClosed),
    ("oNC", NodeKind::UniformOpen),
];

/// Regenerates a table.
pub fn tables(which: TableKind) -> Result<Table> {
    let (cols, ms): (&[(&str, NodeKind)], &[usize]) = match which {
        TableKind::Lebesgue => (&LEBESGUE, &[5, 10, 15, 20]),
        TableKind::VandermondeCond => (&VCOND, &[5, 10, 15, 20, 50, 100]),
    };
    let rows = ms
        .iter()
        .map(|&m| {
            let values = cols
                .iter()
                .map(|&(_, kind)| {
                    let nodes = make_nodes(kind, m)?;
                    Ok(match which {
                        TableKind::Lebesgue => lebesgue_constant(nodes.nodes())?,
                        TableKind::VandermondeCond => cond2(&build_vandermonde(nodes.nodes())?),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(TableRow { m, values })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table { columns: cols.iter().map(|(c, _)| c.to_string()).collect(), rows })
}
