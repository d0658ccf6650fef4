//! CSV export and human-readable tables.
//!
//! The library computes with full precision and rounds only here, at the
//! presentation boundary. CSV schemas:
//!   indices:    m,T,T_plus,T_plus_plus      (empty cell where undefined)
//!   matches:    ngram,pos_a,pos_b,distance
//!   census:     divisor,count
//!   results:    N,k,method,m_lo,m_hi,trials,successes,rate
//!   histogram:  N,k,method,predicted_m,count
//!   figure:     `k,<one column per method>`  (success percent, one file per N)

use std::collections::BTreeSet;
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::error::Result as LibResult;
use crate::experiments::{failure_breakdown, ExperimentGridResult};
use crate::kasiski::{DivisorCensus, KasiskiReport};
use crate::metrics::IndexRow;

/// Presentation rounding for index values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Rounding {
    /// Shortest round-trip decimal of the full-precision value.
    #[default]
    None,
    /// Nearest integer.
    Int,
    /// Three decimal places.
    ThreeDp,
}

impl Rounding {
    fn format(self, v: f64) -> String {
        match self {
            Rounding::None => format!("{v}"),
            Rounding::Int => format!("{:.0}", v.round()),
            Rounding::ThreeDp => format!("{v:.3}"),
        }
    }
}

impl std::str::FromStr for Rounding {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "none" => Ok(Rounding::None),
            "int" => Ok(Rounding::Int),
            "3dp" => Ok(Rounding::ThreeDp),
            other => Err(format!(
                "unknown rounding '{other}' (expected none, int, or 3dp)"
            )),
        }
    }
}

/// m,T,T_plus,T_plus_plus rows; undefined cells stay empty.
pub fn write_indices_csv<W: Write>(w: W, rows: &[IndexRow], rounding: Rounding) -> LibResult<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["m", "T", "T_plus", "T_plus_plus"])?;
    for row in rows {
        out.write_record([
            row.m.to_string(),
            rounding.format(row.t),
            row.t_plus.map(|v| rounding.format(v)).unwrap_or_default(),
            row.t_plus_plus
                .map(|v| rounding.format(v))
                .unwrap_or_default(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Fixed-width index table for the terminal.
pub fn render_indices_table(rows: &[IndexRow], rounding: Rounding) -> String {
    let mut s = String::new();
    let width = match rounding {
        Rounding::Int => 6,
        _ => 10,
    };
    s.push_str(&format!(
        "{:>4} {:>width$} {:>width$} {:>width$}\n",
        "m", "T", "T+", "T++"
    ));
    for row in rows {
        let blank = String::new();
        s.push_str(&format!(
            "{:>4} {:>width$} {:>width$} {:>width$}\n",
            row.m,
            rounding.format(row.t),
            row.t_plus
                .map(|v| rounding.format(v))
                .unwrap_or(blank.clone()),
            row.t_plus_plus.map(|v| rounding.format(v)).unwrap_or(blank),
        ));
    }
    s
}

/// ngram,pos_a,pos_b,distance rows for every repeated occurrence pair.
pub fn write_kasiski_csv<W: Write>(w: W, report: &KasiskiReport) -> LibResult<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["ngram", "pos_a", "pos_b", "distance"])?;
    for m in &report.matches {
        out.write_record([
            m.ngram.clone(),
            m.pos_a.to_string(),
            m.pos_b.to_string(),
            m.distance.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// divisor,count rows.
pub fn write_census_csv<W: Write>(w: W, census: &DivisorCensus) -> LibResult<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["divisor", "count"])?;
    for &(d, count) in &census.counts {
        out.write_record([d.to_string(), count.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

/// N,k,method,m_lo,m_hi,trials,successes,rate rows, one per grid cell.
pub fn write_grid_results_csv<W: Write>(w: W, grid: &ExperimentGridResult) -> LibResult<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "N",
        "k",
        "method",
        "m_lo",
        "m_hi",
        "trials",
        "successes",
        "rate",
    ])?;
    for c in &grid.cells {
        out.write_record([
            c.n.to_string(),
            c.k.to_string(),
            c.method.name().to_string(),
            c.domain.lo.to_string(),
            c.domain.hi.to_string(),
            c.trials.to_string(),
            c.successes.to_string(),
            format!("{}", c.rate()),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// N,k,method,predicted_m,count rows; predicted_m 0 counts trials with no
/// estimate.
pub fn write_histogram_csv<W: Write>(w: W, grid: &ExperimentGridResult) -> LibResult<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["N", "k", "method", "predicted_m", "count"])?;
    for c in &grid.cells {
        for (&predicted, &count) in &c.histogram {
            out.write_record([
                c.n.to_string(),
                c.k.to_string(),
                c.method.name().to_string(),
                predicted.to_string(),
                count.to_string(),
            ])?;
        }
    }
    out.flush()?;
    Ok(())
}

/// One plot-ready CSV per text length N: column k plus one success-percent
/// column per method. Returns the paths written.
pub fn write_figure_csvs(dir: &Path, grid: &ExperimentGridResult) -> LibResult<Vec<PathBuf>> {
    let ns: BTreeSet<usize> = grid.cells.iter().map(|c| c.n).collect();
    let ks: BTreeSet<usize> = grid.cells.iter().map(|c| c.k).collect();
    let mut methods = Vec::new();
    for c in &grid.cells {
        if !methods.contains(&c.method) {
            methods.push(c.method);
        }
    }

    let mut paths = Vec::new();
    for n in ns {
        let path = dir.join(format!("figure_n{n}.csv"));
        let mut out = csv::Writer::from_writer(std::fs::File::create(&path)?);
        let mut header = vec!["k".to_string()];
        header.extend(methods.iter().map(|m| m.name().to_string()));
        out.write_record(&header)?;
        for &k in &ks {
            let mut record = vec![k.to_string()];
            for &method in &methods {
                let cell = grid.cell(n, k, method);
                record.push(match cell {
                    Some(c) => format!("{}", 100.0 * c.rate()),
                    None => String::new(),
                });
            }
            out.write_record(&record)?;
        }
        out.flush()?;
        paths.push(path);
    }
    Ok(paths)
}

/// N,k,method,trials,incorrect,divisor,divisor_predictions,percentage rows
/// for every cell whose k has a nontrivial divisor or not (divisor empty for
/// primes); percentage empty when a cell had no failures.
pub fn write_breakdown_csv<W: Write>(w: W, grid: &ExperimentGridResult) -> LibResult<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "N",
        "k",
        "method",
        "trials",
        "incorrect",
        "divisor",
        "divisor_predictions",
        "percentage",
    ])?;
    for c in &grid.cells {
        if c.k < 2 {
            continue;
        }
        let b = failure_breakdown(grid, c.method, c.n, c.k)?;
        out.write_record([
            b.n.to_string(),
            b.k.to_string(),
            b.method.name().to_string(),
            b.trials.to_string(),
            b.incorrect.to_string(),
            b.divisor.map(|d| d.to_string()).unwrap_or_default(),
            b.divisor_predictions.to_string(),
            b.percentage.map(|p| format!("{p:.2}")).unwrap_or_default(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// Success-percent matrix per N for the terminal.
pub fn render_grid_summary(grid: &ExperimentGridResult) -> String {
    let ns: BTreeSet<usize> = grid.cells.iter().map(|c| c.n).collect();
    let ks: BTreeSet<usize> = grid.cells.iter().map(|c| c.k).collect();
    let mut methods = Vec::new();
    for c in &grid.cells {
        if !methods.contains(&c.method) {
            methods.push(c.method);
        }
    }

    let mut s = String::new();
    for &n in &ns {
        s.push_str(&format!(
            "N = {n} (success %, m searched in {})\n",
            grid.domain
        ));
        s.push_str(&format!("{:>4}", "k"));
        for m in &methods {
            s.push_str(&format!(" {:>15}", m.name()));
        }
        s.push('\n');
        for &k in &ks {
            s.push_str(&format!("{k:>4}"));
            for &method in &methods {
                match grid.cell(n, k, method) {
                    Some(c) => s.push_str(&format!(" {:>15.1}", 100.0 * c.rate())),
                    None => s.push_str(&format!(" {:>15}", "-")),
                }
            }
            s.push('\n');
        }
        s.push('\n');
    }
    s
}
