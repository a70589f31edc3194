//! Runs benchmark sweeps over `(eps, N)` and writes the result tables.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use shishkin_mg::driver::parse_kv;
use shishkin_mg::{run_benchmark, RunConfig, RunReport};

#[derive(Debug, Parser)]
#[command(name = "shishkin-mg", version, about = "Multigrid benchmark sweeps for singularly perturbed convection-diffusion")]
struct Args {
    /// `key = value` configuration file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// square-exp, square-parab or hemker.
    #[arg(long)]
    case: Option<String>,
    /// Comma-separated diffusion coefficients.
    #[arg(long)]
    eps: Option<String>,
    /// Comma-separated mesh resolutions.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    nu1: Option<usize>,
    #[arg(long)]
    nu2: Option<usize>,
    #[arg(long)]
    gamma1: Option<usize>,
    #[arg(long)]
    gamma2: Option<usize>,
    /// chebyshev or gmres.
    #[arg(long)]
    relax: Option<String>,
    /// abs-inv-n2 or abs-sqrt-eps-inv-n2.
    #[arg(long)]
    tol_form: Option<String>,
    /// Number of levels, or "max" to coarsen down to N = 8.
    #[arg(long)]
    levels: Option<String>,
    #[arg(long)]
    max_iterations: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV output (`metric,eps,N,value`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Directory for one VTK file per cell.
    #[arg(long)]
    export_mesh: Option<PathBuf>,
    /// JSON run report.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Repeat for more log output.
    #[arg(short, long, action = clap::ArgAction::Count)]
    verbose: u8,
}

impl Args {
    fn flag_pairs(&self) -> Vec<(String, String)> {
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        let flags = [
            ("case", self.case.clone()),
            ("eps", self.eps.clone()),
            ("n", self.n.clone()),
            ("nu1", self.nu1.map(|v| v.to_string())),
            ("nu2", self.nu2.map(|v| v.to_string())),
            ("gamma1", self.gamma1.map(|v| v.to_string())),
            ("gamma2", self.gamma2.map(|v| v.to_string())),
            ("relax", self.relax.clone()),
            ("tol-form", self.tol_form.clone()),
            ("levels", self.levels.clone()),
            ("max-iterations", self.max_iterations.map(|v| v.to_string())),
            ("seed", self.seed.map(|v| v.to_string())),
            ("out", path(&self.out)),
            ("export-mesh", path(&self.export_mesh)),
            ("report", path(&self.report)),
        ];
        flags
            .into_iter()
            .filter_map(|(k, v)| v.map(|v| (k.to_string(), v)))
            .collect()
    }
}

fn load_config(args: &Args) -> shishkin_mg::Result<RunConfig> {
    let mut pairs = match &args.config {
        Some(path) => parse_kv(&std::fs::read_to_string(path)?)?,
        None => Vec::new(),
    };
    pairs.extend(args.flag_pairs());
    RunConfig::from_pairs(&pairs)
}

fn print_summary(report: &RunReport) {
    println!(
        "{:<10} {:>5} {:>7} {:>6} {:>10} {:>11} {:>11} {:>11}  status",
        "eps", "N", "dofs", "its", "time [s]", "max", "energy", "sd"
    );
    for c in &report.cells {
        let (max, energy, sd) = c
            .errors
            .map(|e| (format!("{:.3e}", e.max), format!("{:.3e}", e.energy), format!("{:.3e}", e.sd)))
            .unwrap_or_else(|| ("-".into(), "-".into(), "-".into()));
        let status = c.failure.as_deref().unwrap_or("converged");
        println!(
            "{:<10.1e} {:>5} {:>7} {:>6} {:>10.3} {:>11} {:>11} {:>11}  {status}",
            c.eps,
            c.n,
            c.dofs,
            c.iterations,
            c.setup_seconds + c.solve_seconds,
            max,
            energy,
            sd
        );
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    let level = match args.verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let config = match load_config(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    log::info!("running {} over eps {:?}, N {:?}", config.case, config.eps, config.n);
    let report = match run_benchmark(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    print_summary(&report);
    if report.all_converged() {
        ExitCode::SUCCESS
    } else {
        eprintln!("some cells did not converge");
        ExitCode::FAILURE
    }
}
