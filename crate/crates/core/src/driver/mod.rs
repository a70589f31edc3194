//! Benchmark sweeps over `(eps, N)` with CSV and JSON output.

pub mod config;
pub mod csv;

use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::benchmarks::{hemker_reference, square_errors, Case, ErrorNorms};
use crate::error::Result;
use crate::mesh::vtk::write_vtk;
use crate::multigrid::{discretize_hierarchy, MgSolver};

pub use config::{parse_kv, Levels, RunConfig, TolForm};
pub use csv::{csv_string, emit_csv, parse_csv, read_csv, CsvRow};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellReport {
    pub eps: f64,
    pub n: usize,
    pub converged: bool,
    /// Why the cell has no result, if it failed before or during the solve.
    pub failure: Option<String>,
    pub dofs: usize,
    pub levels: usize,
    pub tolerance: f64,
    pub iterations: usize,
    /// Mesh hierarchy, assembly and multigrid setup.
    pub setup_seconds: f64,
    /// FGMRES phase only.
    pub solve_seconds: f64,
    pub errors: Option<ErrorNorms>,
    pub residual_history: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub crate_version: String,
    pub os: String,
    pub arch: String,
    pub threads: usize,
}

impl Environment {
    pub fn current() -> Self {
        Self {
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            os: std::env::consts::OS.to_string(),
            arch: std::env::consts::ARCH.to_string(),
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: RunConfig,
    pub environment: Environment,
    pub cells: Vec<CellReport>,
}

impl RunReport {
    pub fn all_converged(&self) -> bool {
        self.cells.iter().all(|c| c.converged)
    }

    pub fn cell(&self, eps: f64, n: usize) -> Option<&CellReport> {
        self.cells.iter().find(|c| c.eps == eps && c.n == n)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }
}

/// Solution of one cell together with its report.
pub struct CellOutcome {
    pub report: CellReport,
    pub solution: Vec<f64>,
}

fn failed(eps: f64, n: usize, reason: String) -> CellReport {
    CellReport {
        eps,
        n,
        converged: false,
        failure: Some(reason),
        dofs: 0,
        levels: 0,
        tolerance: 0.0,
        iterations: 0,
        setup_seconds: 0.0,
        solve_seconds: 0.0,
        errors: None,
        residual_history: Vec::new(),
    }
}

/// Sets up, solves and measures one `(eps, N)` cell.
pub fn run_cell(config: &RunConfig, eps: f64, n: usize) -> Result<CellOutcome> {
    let case = config.case;
    let levels = config.levels.resolve(case, n);
    let start = Instant::now();
    let h = case.hierarchy(n, eps, levels)?;
    let spec = case.problem(eps);
    let systems = discretize_hierarchy(&h, &spec)?;
    let mg = MgSolver::from_hierarchy(&h, &systems, case.line_scheme(), config.mg.clone())?;
    let setup_seconds = start.elapsed().as_secs_f64();

    let tolerance = config.tol_form.tolerance(n, eps);
    let start = Instant::now();
    let res = mg.solve(&systems[0].rhs, tolerance, config.max_iterations)?;
    let solve_seconds = start.elapsed().as_secs_f64();

    let mesh = h.finest();
    let errors = if case.has_exact() {
        square_errors(&res.x, case, eps, mesh, &systems[0].taus)?
    } else {
        hemker_reference(n, eps)?.errors(&res.x, &systems[0].taus)?
    };
    log::info!(
        "{case} eps = {eps:e} N = {n}: {} iterations, max {:.3e}, energy {:.3e}, sd {:.3e}",
        res.iterations,
        errors.max,
        errors.energy,
        errors.sd
    );
    let failure = (!res.converged).then(|| {
        format!(
            "residual {:.3e} above tolerance {tolerance:.3e} after {} iterations",
            res.residual_history.last().copied().unwrap_or(f64::NAN),
            res.iterations
        )
    });
    Ok(CellOutcome {
        report: CellReport {
            eps,
            n,
            converged: res.converged,
            failure,
            dofs: mesh.num_nodes(),
            levels,
            tolerance,
            iterations: res.iterations,
            setup_seconds,
            solve_seconds,
            errors: Some(errors),
            residual_history: res.residual_history,
        },
        solution: res.x,
    })
}

/// Runs every `(eps, N)` cell. Cell failures are recorded and do not stop
/// the sweep; configuration errors abort before any solve.
pub fn run_benchmark(config: &RunConfig) -> Result<RunReport> {
    config.validate()?;
    let mut cells = Vec::with_capacity(config.eps.len() * config.n.len());
    for &eps in &config.eps {
        for &n in &config.n {
            let report = match run_cell(config, eps, n) {
                Ok(out) => {
                    if let Some(dir) = &config.export_mesh {
                        export_cell(config.case, dir, eps, n, &out.solution)?;
                    }
                    out.report
                }
                Err(e) => {
                    log::warn!("{} eps = {eps:e} N = {n} failed: {e}", config.case);
                    failed(eps, n, e.to_string())
                }
            };
            cells.push(report);
        }
    }
    let report = RunReport {
        config: config.clone(),
        environment: Environment::current(),
        cells,
    };
    if let Some(path) = &config.out {
        emit_csv(&report, path)?;
    }
    if let Some(path) = &config.report {
        report.write_json(path)?;
    }
    Ok(report)
}

fn export_cell(case: Case, dir: &Path, eps: f64, n: usize, u: &[f64]) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let h = case.hierarchy(n, eps, 1)?;
    let path = dir.join(format!("{case}_eps{eps:e}_n{n}.vtk"));
    write_vtk(&path, h.finest(), &[("u_h", u)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(case: Case) -> RunConfig {
        let mut c = RunConfig::for_case(case);
        c.eps = vec![1e-4];
        c.n = vec![16];
        c
    }

    #[test]
    fn single_cell_runs_and_is_reproducible() {
        let c = small(Case::SquareExp);
        let a = run_benchmark(&c).unwrap();
        let b = run_benchmark(&c).unwrap();
        assert_eq!(a.cells.len(), 1);
        assert!(a.all_converged());
        let (x, y) = (&a.cells[0], &b.cells[0]);
        assert_eq!((x.iterations, x.errors, &x.residual_history), (y.iterations, y.errors, &y.residual_history));
        assert_eq!(x.dofs, 17 * 17);
        assert_eq!(x.levels, 2);
    }

    #[test]
    fn failures_are_isolated() {
        let mut c = small(Case::SquareParab);
        c.n = vec![16, 32];
        c.max_iterations = 1;
        c.mg.nu1 = 0;
        c.mg.nu2 = 0;
        let r = run_benchmark(&c).unwrap();
        assert_eq!(r.cells.len(), 2);
        assert!(!r.all_converged());
        assert!(r.cells.iter().all(|c| c.failure.is_some() && c.errors.is_some()));
    }

    #[test]
    fn empty_eps_is_rejected_before_solving() {
        let mut c = small(Case::SquareExp);
        c.eps.clear();
        assert!(run_benchmark(&c).is_err());
    }

    #[test]
    fn vtk_export_writes_one_file_per_cell() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = small(Case::SquareExp);
        c.export_mesh = Some(dir.path().to_path_buf());
        run_benchmark(&c).unwrap();
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
