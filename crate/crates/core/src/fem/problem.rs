use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::mesh::RegionTag;

pub type ScalarFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type VectorFn = Arc<dyn Fn(f64, f64) -> [f64; 2] + Send + Sync>;
/// Boundary value for a Dirichlet id at a point.
pub type DirichletFn = Arc<dyn Fn(u32, f64, f64) -> f64 + Send + Sync>;
/// `(region, h_T, Pe_T) -> tau_T`, `None` for regions the rule does not cover.
pub type TauFn = Arc<dyn Fn(RegionTag, f64, f64) -> Option<f64> + Send + Sync>;

/// Per-cell SUPG parameter.
#[derive(Clone)]
pub enum TauRule {
    /// Plain Galerkin.
    Zero,
    /// `h_T tau0` if `Pe_T > 1`, else `h_T^2 tau1 / eps`.
    Peclet { tau0: f64, tau1: f64 },
    /// 0 in the exponential layer (and its corners), `h_T / 2` elsewhere.
    SquareExp,
    /// `h_T^(4/3)` in the parabolic layers, `h_T` elsewhere.
    SquareParab,
    /// 0 in the radial layer pieces around the cylinder, `0.55 h_T` elsewhere.
    Hemker,
    Custom { name: &'static str, f: TauFn },
}

impl fmt::Debug for TauRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TauRule::Zero => write!(f, "Zero"),
            TauRule::Peclet { tau0, tau1 } => write!(f, "Peclet {{ tau0: {tau0}, tau1: {tau1} }}"),
            TauRule::SquareExp => write!(f, "SquareExp"),
            TauRule::SquareParab => write!(f, "SquareParab"),
            TauRule::Hemker => write!(f, "Hemker"),
            TauRule::Custom { name, .. } => write!(f, "Custom({name})"),
        }
    }
}

impl TauRule {
    pub fn name(&self) -> &'static str {
        match self {
            TauRule::Zero => "zero",
            TauRule::Peclet { .. } => "peclet",
            TauRule::SquareExp => "square-exp",
            TauRule::SquareParab => "square-parab",
            TauRule::Hemker => "hemker",
            TauRule::Custom { name, .. } => name,
        }
    }

    pub fn tau(&self, region: RegionTag, h: f64, peclet: f64, eps: f64) -> Result<f64> {
        use RegionTag::*;
        let unknown = || Error::UnknownRegion {
            rule: self.name(),
            region: region.to_string(),
        };
        let tau = match self {
            TauRule::Zero => 0.0,
            TauRule::Peclet { tau0, tau1 } => {
                if peclet > 1.0 {
                    h * tau0
                } else {
                    h * h * tau1 / eps
                }
            }
            TauRule::SquareExp => match region {
                ExpLayer | Corner(_) => 0.0,
                Interior | ParabLayer(_) => 0.5 * h,
                _ => return Err(unknown()),
            },
            TauRule::SquareParab => match region {
                ParabLayer(_) | Corner(_) => h.powf(4.0 / 3.0),
                Interior | ExpLayer => h,
                _ => return Err(unknown()),
            },
            TauRule::Hemker => match region {
                HemkerRadialLayer(_) => 0.0,
                HemkerPolarOuter | HemkerWake | HemkerChannel => 0.55 * h,
                _ => return Err(unknown()),
            },
            TauRule::Custom { f, .. } => f(region, h, peclet).ok_or_else(unknown)?,
        };
        if !(tau >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "rule {} produced tau = {tau}",
                self.name()
            )));
        }
        Ok(tau)
    }
}

/// Coefficients of `-eps Lap u + beta . grad u + c u = f` with boundary data.
#[derive(Clone)]
pub struct ProblemSpec {
    pub eps: f64,
    pub convection: VectorFn,
    pub reaction: ScalarFn,
    pub rhs: ScalarFn,
    pub dirichlet: DirichletFn,
    pub neumann_tags: BTreeSet<u32>,
    pub tau_rule: TauRule,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("eps", &self.eps)
            .field("neumann_tags", &self.neumann_tags)
            .field("tau_rule", &self.tau_rule)
            .finish_non_exhaustive()
    }
}

impl ProblemSpec {
    /// Constant-coefficient problem with homogeneous Dirichlet data.
    pub fn constant(eps: f64, beta: [f64; 2], c: f64, f: f64, tau_rule: TauRule) -> Self {
        Self {
            eps,
            convection: Arc::new(move |_, _| beta),
            reaction: Arc::new(move |_, _| c),
            rhs: Arc::new(move |_, _| f),
            dirichlet: Arc::new(|_, _, _| 0.0),
            neumann_tags: BTreeSet::new(),
            tau_rule,
        }
    }

    pub fn with_dirichlet(mut self, g: DirichletFn) -> Self {
        self.dirichlet = g;
        self
    }

    pub fn with_rhs(mut self, f: ScalarFn) -> Self {
        self.rhs = f;
        self
    }

    pub fn with_tau(mut self, rule: TauRule) -> Self {
        self.tau_rule = rule;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.eps >= 0.0 && self.eps <= 1.0) {
            return Err(Error::InvalidArgument(format!("eps = {} outside [0, 1]", self.eps)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::Side;

    #[test]
    fn region_rules() {
        let t = TauRule::SquareExp;
        assert_eq!(t.tau(RegionTag::ExpLayer, 0.05, 10.0, 1e-4).unwrap(), 0.0);
        assert_eq!(t.tau(RegionTag::Corner(Side::Low), 0.05, 10.0, 1e-4).unwrap(), 0.0);
        assert!((t.tau(RegionTag::Interior, 0.05, 10.0, 1e-4).unwrap() - 0.025).abs() < 1e-15);
        let h = TauRule::Hemker;
        assert!((h.tau(RegionTag::HemkerWake, 0.1, 10.0, 1e-2).unwrap() - 0.055).abs() < 1e-15);
        assert_eq!(h.tau(RegionTag::HemkerRadialLayer(2), 0.1, 10.0, 1e-2).unwrap(), 0.0);
        let p = TauRule::SquareParab;
        let v = p.tau(RegionTag::ParabLayer(Side::High), 0.008, 10.0, 1e-4).unwrap();
        assert!((v - 0.008f64.powf(4.0 / 3.0)).abs() < 1e-15);
        assert_eq!(p.tau(RegionTag::Interior, 0.1, 10.0, 1e-4).unwrap(), 0.1);
    }

    #[test]
    fn unknown_region_is_an_error() {
        assert!(matches!(
            TauRule::Hemker.tau(RegionTag::Interior, 0.1, 1.0, 1.0),
            Err(Error::UnknownRegion { .. })
        ));
        assert!(TauRule::SquareExp.tau(RegionTag::HemkerWake, 0.1, 1.0, 1.0).is_err());
        let custom = TauRule::Custom {
            name: "interior-only",
            f: Arc::new(|r, h, _| (r == RegionTag::Interior).then_some(h)),
        };
        assert!(custom.tau(RegionTag::ExpLayer, 0.1, 1.0, 1.0).is_err());
    }

    #[test]
    fn peclet_switch() {
        let t = TauRule::Peclet { tau0: 0.5, tau1: 0.25 };
        assert_eq!(t.tau(RegionTag::Interior, 0.1, 2.0, 1e-2).unwrap(), 0.05);
        assert!((t.tau(RegionTag::Interior, 0.1, 0.5, 1e-2).unwrap() - 0.25).abs() < 1e-14);
    }
}
