//! Sweep configuration and its `key = value` text form.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::benchmarks::Case;
use crate::error::{Error, Result};
use crate::multigrid::{MgConfig, RelaxMode};

/// Absolute FGMRES stopping tolerance as a function of `(N, eps)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TolForm {
    /// `1 / N^2`
    AbsInvN2,
    /// `sqrt(eps) / N^2`
    AbsSqrtEpsInvN2,
}

impl TolForm {
    pub fn tolerance(self, n: usize, eps: f64) -> f64 {
        let inv = 1.0 / (n as f64 * n as f64);
        match self {
            TolForm::AbsInvN2 => inv,
            TolForm::AbsSqrtEpsInvN2 => eps.sqrt() * inv,
        }
    }

    fn id(self) -> &'static str {
        match self {
            TolForm::AbsInvN2 => "abs-inv-n2",
            TolForm::AbsSqrtEpsInvN2 => "abs-sqrt-eps-inv-n2",
        }
    }
}

impl fmt::Display for TolForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for TolForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [TolForm::AbsInvN2, TolForm::AbsSqrtEpsInvN2]
            .into_iter()
            .find(|t| t.id() == s)
            .ok_or_else(|| Error::Parse(format!("unknown tolerance form '{s}'")))
    }
}

/// Number of multigrid levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Levels {
    /// Coarsen until the coarsest mesh has resolution 8.
    Max,
    Fixed(usize),
}

impl Levels {
    pub fn resolve(self, case: Case, n: usize) -> usize {
        match self {
            Levels::Max => case.max_levels(n),
            Levels::Fixed(l) => l,
        }
    }
}

impl fmt::Display for Levels {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Levels::Max => f.write_str("max"),
            Levels::Fixed(l) => write!(f, "{l}"),
        }
    }
}

impl FromStr for Levels {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "max" {
            return Ok(Levels::Max);
        }
        match s.parse::<usize>() {
            Ok(l) if l > 0 => Ok(Levels::Fixed(l)),
            _ => Err(Error::Parse(format!("levels must be 'max' or a positive integer, got '{s}'"))),
        }
    }
}

pub fn parse_relax(s: &str) -> Result<RelaxMode> {
    match s {
        "chebyshev" => Ok(RelaxMode::Chebyshev),
        "gmres" => Ok(RelaxMode::Gmres),
        _ => Err(Error::Parse(format!("unknown relaxation '{s}' (chebyshev, gmres)"))),
    }
}

pub fn relax_id(mode: RelaxMode) -> &'static str {
    match mode {
        RelaxMode::Chebyshev => "chebyshev",
        RelaxMode::Gmres => "gmres",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub case: Case,
    pub eps: Vec<f64>,
    pub n: Vec<usize>,
    pub mg: MgConfig,
    pub tol_form: TolForm,
    pub levels: Levels,
    pub max_iterations: usize,
    /// CSV destination.
    pub out: Option<PathBuf>,
    /// Directory receiving one VTK file per cell.
    pub export_mesh: Option<PathBuf>,
    /// JSON report destination.
    pub report: Option<PathBuf>,
}

impl RunConfig {
    /// Defaults for a case: V(2,2) with Chebyshev relaxation on the unit
    /// square, V(3,3) with GMRES relaxation on the Hemker domain.
    pub fn for_case(case: Case) -> Self {
        let (eps, n) = match case {
            Case::SquareExp | Case::SquareParab => (vec![1e-4, 1e-6, 1e-8, 1e-10], vec![64, 128]),
            Case::Hemker => (vec![1.0, 1e-1, 1e-2], vec![32, 64]),
        };
        let mut mg = MgConfig::default();
        if case == Case::Hemker {
            mg.relax = RelaxMode::Gmres;
            mg.nu1 = 3;
            mg.nu2 = 3;
        }
        Self {
            case,
            eps,
            n,
            mg,
            tol_form: match case {
                Case::SquareParab => TolForm::AbsSqrtEpsInvN2,
                _ => TolForm::AbsInvN2,
            },
            levels: Levels::Max,
            max_iterations: 200,
            out: None,
            export_mesh: None,
            report: None,
        }
    }

    /// Builds a configuration from ordered `(key, value)` pairs; later pairs
    /// override earlier ones. The case (key `case`) selects the defaults.
    pub fn from_pairs(pairs: &[(String, String)]) -> Result<Self> {
        let case = pairs
            .iter()
            .rev()
            .find(|(k, _)| k == "case")
            .ok_or_else(|| Error::InvalidArgument("no case given".into()))?
            .1
            .parse()?;
        let mut cfg = Self::for_case(case);
        for (k, v) in pairs {
            cfg.set(k, v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::Parse(format!("invalid {what} '{value}' for key '{key}'"));
        let int = || value.parse::<usize>().map_err(|_| bad("integer"));
        match key {
            "case" => self.case = value.parse()?,
            "eps" => {
                self.eps = list(value)
                    .map(|s| s.parse::<f64>().map_err(|_| bad("number")))
                    .collect::<Result<_>>()?
            }
            "n" => {
                self.n = list(value)
                    .map(|s| s.parse::<usize>().map_err(|_| bad("integer")))
                    .collect::<Result<_>>()?
            }
            "nu1" => self.mg.nu1 = int()?,
            "nu2" => self.mg.nu2 = int()?,
            "gamma1" => self.mg.gamma1 = int()?,
            "gamma2" => self.mg.gamma2 = int()?,
            "relax" => self.mg.relax = parse_relax(value)?,
            "arnoldi-steps" => self.mg.arnoldi_steps = int()?,
            "multiplicative" => self.mg.multiplicative = value.parse().map_err(|_| bad("boolean"))?,
            "seed" => self.mg.seed = value.parse().map_err(|_| bad("integer"))?,
            "tol-form" => self.tol_form = value.parse()?,
            "levels" => self.levels = value.parse()?,
            "max-iterations" => self.max_iterations = int()?,
            "out" => self.out = Some(value.into()),
            "export-mesh" => self.export_mesh = Some(value.into()),
            "report" => self.report = Some(value.into()),
            _ => return Err(Error::Parse(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.eps.is_empty() {
            return Err(Error::InvalidArgument("eps list is empty".into()));
        }
        if self.n.is_empty() {
            return Err(Error::InvalidArgument("N list is empty".into()));
        }
        if let Some(e) = self.eps.iter().find(|e| !(**e > 0.0 && **e <= 1.0)) {
            return Err(Error::InvalidArgument(format!("eps = {e} outside (0, 1]")));
        }
        for &n in &self.n {
            if n < 8 || n % 4 != 0 {
                return Err(Error::InvalidArgument(format!("N = {n} must be a multiple of 4 and at least 8")));
            }
            let levels = self.levels.resolve(self.case, n);
            if levels == 0 || levels > usize::BITS as usize {
                return Err(Error::InvalidArgument(format!("{levels} levels requested")));
            }
            let coarse = n >> (levels - 1);
            if coarse < 8 || coarse % 4 != 0 || coarse << (levels - 1) != n {
                return Err(Error::InvalidArgument(format!("N = {n} does not support {levels} levels")));
            }
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidArgument("max-iterations must be positive".into()));
        }
        self.mg.validate()
    }
}

fn list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

/// Parses `key = value` lines; blank lines and `#` comments are skipped.
pub fn parse_kv(text: &str) -> Result<Vec<(String, String)>> {
    let mut pairs = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("line {}: expected 'key = value'", no + 1)))?;
        pairs.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(pairs)
}
