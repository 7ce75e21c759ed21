//! CSV / JSON emission and Matrix Market dumps.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use lsqdae_core::assembly::DiscreteSystem;
use lsqdae_core::sparse::CsrMatrix;
use serde::Serialize;

use crate::error::Result;
use crate::spec::OutputFormat;
use crate::tables::Table;

/// Writes serializable rows as CSV (header from the field names) or as a JSON array.
pub fn write_rows<T: Serialize, W: Write>(rows: &[T], format: OutputFormat, out: W) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            for r in rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, rows)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Writes a node-quality table in its printed layout (one row per `M`).
/// Infinite entries appear as `inf` in CSV and `null` in JSON.
pub fn write_table<W: Write>(table: &Table, format: OutputFormat, out: W) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(std::iter::once("M").chain(table.columns.iter().map(String::as_str)))?;
            for row in &table.rows {
                w.write_record(
                    std::iter::once(row.m.to_string()).chain(row.values.iter().map(|v| format!("{v:.6e}"))),
                )?;
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, table)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

/// Writes `a` in Matrix Market coordinate format (1-based indices).
pub fn write_matrix_market<W: Write>(a: &CsrMatrix, out: W) -> Result<()> {
    let mut w = BufWriter::new(out);
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "{} {} {}", a.nrows(), a.ncols(), a.nnz())?;
    for (i, j, v) in a.iter() {
        writeln!(w, "{} {} {:e}", i + 1, j + 1, v)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes a vector in Matrix Market array format.
pub fn write_matrix_market_vector<W: Write>(v: &[f64], out: W) -> Result<()> {
    let mut w = BufWriter::new(out);
    writeln!(w, "%%MatrixMarket matrix array real general")?;
    writeln!(w, "{} 1", v.len())?;
    for x in v {
        writeln!(w, "{x:e}")?;
    }
    w.flush()?;
    Ok(())
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Writes `<prefix>_A.mtx`, `<prefix>_C.mtx` and `<prefix>_r.mtx`.
pub fn dump_system(sys: &DiscreteSystem, prefix: &Path) -> Result<()> {
    write_matrix_market(&sys.a_mat, File::create(with_suffix(prefix, "_A.mtx"))?)?;
    write_matrix_market(&sys.c_mat, File::create(with_suffix(prefix, "_C.mtx"))?)?;
    write_matrix_market_vector(&sys.rhs, File::create(with_suffix(prefix, "_r.mtx"))?)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use lsqdae_core::dense::Mat;

    #[derive(Serialize)]
    struct Row {
        n: usize,
        err: Option<f64>,
    }

    #[test]
    fn csv_and_json_rows() {
        let rows = [Row { n: 5, err: Some(1.5e-3) }, Row { n: 10, err: None }];
        let mut buf = Vec::new();
        write_rows(&rows, OutputFormat::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "n,err\n5,0.0015\n10,\n");
        let mut buf = Vec::new();
        write_rows(&rows, OutputFormat::Json, &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v[1]["err"], serde_json::Value::Null);
        assert_eq!(v[0]["n"], 5);
    }

    #[test]
    fn matrix_market_layout() {
        let a = CsrMatrix::from_dense(&Mat::from_rows(&[&[1.0, 0.0], &[0.0, -2.5]]));
        let mut buf = Vec::new();
        write_matrix_market(&a, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[1], "2 2 2");
        assert_eq!(lines[3], "2 2 -2.5e0");
        let mut buf = Vec::new();
        write_matrix_market_vector(&[0.5], &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().ends_with("1 1\n5e-1\n"));
    }
}
