//! Long-format CSV of the result tables: `metric,eps,N,value`.

use std::fmt::Write as _;
use std::path::Path;

use super::RunReport;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "metric,eps,N,value";

/// One table entry.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub metric: String,
    pub eps: f64,
    pub n: usize,
    pub value: f64,
}

/// Table entries in metric-major order: time, iterations, max, energy, sd.
/// Failed cells contribute only the entries that were measured.
pub fn rows(report: &RunReport) -> Vec<CsvRow> {
    let metrics: [(&str, fn(&super::CellReport) -> Option<f64>); 6] = [
        ("time", |c| (c.failure.is_none() || c.errors.is_some()).then_some(c.setup_seconds + c.solve_seconds)),
        ("iterations", |c| c.errors.map(|_| c.iterations as f64)),
        ("dofs", |c| (c.dofs > 0).then_some(c.dofs as f64)),
        ("max", |c| c.errors.map(|e| e.max)),
        ("energy", |c| c.errors.map(|e| e.energy)),
        ("sd", |c| c.errors.map(|e| e.sd)),
    ];
    let mut out = Vec::new();
    for (name, get) in metrics {
        for c in &report.cells {
            if let Some(value) = get(c) {
                out.push(CsvRow { metric: name.to_string(), eps: c.eps, n: c.n, value });
            }
        }
    }
    out
}

/// Six significant digits for every float.
pub fn csv_string(report: &RunReport) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in rows(report) {
        let _ = writeln!(s, "{},{:.5e},{},{:.5e}", r.metric, r.eps, r.n, r.value);
    }
    s
}

pub fn emit_csv(report: &RunReport, path: &Path) -> Result<()> {
    std::fs::write(path, csv_string(report))?;
    Ok(())
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(Error::Parse(format!("CSV must start with '{CSV_HEADER}'")));
    }
    lines
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let bad = || Error::Parse(format!("CSV line {}: '{l}'", i + 2));
            let f: Vec<&str> = l.split(',').collect();
            if f.len() != 4 {
                return Err(bad());
            }
            Ok(CsvRow {
                metric: f[0].to_string(),
                eps: f[1].parse().map_err(|_| bad())?,
                n: f[2].parse().map_err(|_| bad())?,
                value: f[3].parse().map_err(|_| bad())?,
            })
        })
        .collect()
}

pub fn read_csv(path: &Path) -> Result<Vec<CsvRow>> {
    parse_csv(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::{Case, ErrorNorms};
    use crate::driver::{CellReport, Environment, RunConfig};

    fn report(cells: Vec<CellReport>) -> RunReport {
        RunReport {
            config: RunConfig::for_case(Case::SquareExp),
            environment: Environment::current(),
            cells,
        }
    }

    fn cell() -> CellReport {
        CellReport {
            eps: 1e-6,
            n: 64,
            converged: true,
            failure: None,
            dofs: 4225,
            levels: 4,
            tolerance: 1.0 / 4096.0,
            iterations: 3,
            setup_seconds: 0.25,
            solve_seconds: 0.0123456789,
            errors: Some(ErrorNorms { max: 1.8123456e-2, energy: 6.6412345e-2, sd: 6.6512345e-2 }),
            residual_history: vec![1.0, 0.1],
        }
    }

    #[test]
    fn empty_report_is_header_only() {
        assert_eq!(csv_string(&report(vec![])), "metric,eps,N,value\n");
    }

    #[test]
    fn round_trip_to_printed_precision() {
        let r = report(vec![cell()]);
        let text = csv_string(&r);
        let parsed = parse_csv(&text).unwrap();
        assert_eq!(parsed.len(), 6);
        let energy = parsed.iter().find(|p| p.metric == "energy").unwrap();
        assert_eq!((energy.eps, energy.n), (1e-6, 64));
        assert!((energy.value - 6.6412345e-2).abs() <= 5e-6 * 6.6412345e-2);
        assert!(text.contains("energy,1.00000e-6,64,6.64123e-2\n"));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        emit_csv(&r, &path).unwrap();
        assert_eq!(read_csv(&path).unwrap(), parsed);
    }

    #[test]
    fn failed_cell_rows() {
        let mut c = cell();
        c.errors = None;
        c.dofs = 0;
        c.failure = Some("setup".into());
        assert_eq!(rows(&report(vec![c])).len(), 0);
        assert!(parse_csv("a,b\n").is_err());
        assert!(parse_csv("metric,eps,N,value\nmax,1,2\n").is_err());
    }
}
