//! The three benchmark problems and their error measures.

pub mod exact;
pub mod reference;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fem::q1;
use crate::fem::{ProblemSpec, TauRule};
use crate::mesh::hemker::{max_hemker_levels, CYLINDER, OUTFLOW};
use crate::mesh::square::max_square_levels;
use crate::mesh::{hemker_hierarchy, square_hierarchy, MeshHierarchy, QuadMesh, SquareLayout};
use crate::relax::LineScheme;
use exact::{exponential_factor, parabolic_factor, product, sine_factor};

pub use reference::{hemker_reference, HemkerReference};

/// Gauss points per direction used for error integrals.
pub const ERROR_QUADRATURE: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Case {
    /// `-eps Lap u - (2 - x) u_x + 3/2 u = f` with exponential and parabolic layers.
    SquareExp,
    /// `-eps Lap u - u_x + u = f` with parabolic layers only.
    SquareParab,
    /// `-eps Lap u + u_x = 0` outside the unit circle in a channel.
    Hemker,
}

impl Case {
    pub const ALL: [Case; 3] = [Case::SquareExp, Case::SquareParab, Case::Hemker];

    pub fn id(self) -> &'static str {
        match self {
            Case::SquareExp => "square-exp",
            Case::SquareParab => "square-parab",
            Case::Hemker => "hemker",
        }
    }

    pub fn has_exact(self) -> bool {
        self != Case::Hemker
    }

    /// Convection field `beta` of `beta . grad u`.
    pub fn beta(self, x: f64, _y: f64) -> [f64; 2] {
        match self {
            Case::SquareExp => [-(2.0 - x), 0.0],
            Case::SquareParab => [-1.0, 0.0],
            Case::Hemker => [1.0, 0.0],
        }
    }

    pub fn reaction(self) -> f64 {
        match self {
            Case::SquareExp => 1.5,
            Case::SquareParab => 1.0,
            Case::Hemker => 0.0,
        }
    }

    pub fn tau_rule(self) -> TauRule {
        match self {
            Case::SquareExp => TauRule::SquareExp,
            Case::SquareParab => TauRule::SquareParab,
            Case::Hemker => TauRule::Hemker,
        }
    }

    pub fn line_scheme(self) -> LineScheme {
        match self {
            Case::SquareExp => LineScheme::BothDirections,
            Case::SquareParab => LineScheme::XLines,
            Case::Hemker => LineScheme::RadialVertical,
        }
    }

    pub fn max_levels(self, n: usize) -> usize {
        match self {
            Case::Hemker => max_hemker_levels(n),
            _ => max_square_levels(n),
        }
    }

    pub fn hierarchy(self, n: usize, eps: f64, levels: usize) -> Result<MeshHierarchy> {
        match self {
            Case::SquareExp => square_hierarchy(n, eps, SquareLayout::ExpAndParab, levels),
            Case::SquareParab => square_hierarchy(n, eps, SquareLayout::ParabOnly, levels),
            Case::Hemker => hemker_hierarchy(n, eps, levels),
        }
    }

    /// Full problem definition for one `eps`.
    pub fn problem(self, eps: f64) -> ProblemSpec {
        let mut spec = ProblemSpec::constant(eps, [0.0, 0.0], self.reaction(), 0.0, self.tau_rule());
        spec.convection = Arc::new(move |x, y| self.beta(x, y));
        if self.has_exact() {
            spec.rhs = Arc::new(move |x, y| rhs_f(self, eps, x, y));
        } else {
            spec.dirichlet = Arc::new(|id, _, _| if id == CYLINDER { 1.0 } else { 0.0 });
            spec.neumann_tags = BTreeSet::from([OUTFLOW]);
        }
        spec
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Case::ALL
            .into_iter()
            .find(|c| c.id() == s)
            .ok_or_else(|| Error::Parse(format!("unknown case '{s}' (square-exp, square-parab, hemker)")))
    }
}

/// Value, gradient and Laplacian of the exact solution.
fn exact_jet(case: Case, eps: f64, x: f64, y: f64) -> Result<(f64, [f64; 2], f64)> {
    let xf = match case {
        Case::SquareExp => exponential_factor(eps, x),
        Case::SquareParab => sine_factor(x),
        Case::Hemker => return Err(Error::NoAnalyticSolution("hemker")),
    };
    Ok(product(xf, parabolic_factor(eps, y)))
}

pub fn exact_solution(case: Case, eps: f64, x: f64, y: f64) -> Result<f64> {
    exact_jet(case, eps, x, y).map(|j| j.0)
}

pub fn exact_gradient(case: Case, eps: f64, x: f64, y: f64) -> Result<[f64; 2]> {
    exact_jet(case, eps, x, y).map(|j| j.1)
}

/// Right-hand side `-eps Lap u + beta . grad u + c u` of the exact solution
/// (zero for the Hemker problem).
pub fn rhs_f(case: Case, eps: f64, x: f64, y: f64) -> f64 {
    let Ok((u, g, lap)) = exact_jet(case, eps, x, y) else {
        return 0.0;
    };
    let b = case.beta(x, y);
    -eps * lap + b[0] * g[0] + b[1] * g[1] + case.reaction() * u
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorNorms {
    pub max: f64,
    pub energy: f64,
    pub sd: f64,
}

/// `max_i |u(x_i) - u_h,i|` over all nodes.
pub fn max_nodal_error(u_h: &[f64], case: Case, eps: f64, mesh: &QuadMesh) -> Result<f64> {
    check_len(u_h, mesh)?;
    let mut m: f64 = 0.0;
    for (p, uh) in mesh.nodes.iter().zip(u_h) {
        m = m.max((exact_solution(case, eps, p[0], p[1])? - uh).abs());
    }
    Ok(m)
}

fn check_len(u_h: &[f64], mesh: &QuadMesh) -> Result<()> {
    if u_h.len() != mesh.num_nodes() {
        return Err(Error::DimensionMismatch { expected: mesh.num_nodes(), got: u_h.len() });
    }
    Ok(())
}

/// Squared energy and SD integrals of `v = u - u_h` on `mesh`, with `u`
/// given as value and gradient. The SD term uses `taus[cell]`.
pub fn error_integrals(
    mesh: &QuadMesh,
    u_h: &[f64],
    eps: f64,
    beta: impl Fn(f64, f64) -> [f64; 2],
    taus: &[f64],
    exact: impl Fn(f64, f64) -> Result<(f64, [f64; 2])>,
) -> Result<(f64, f64)> {
    check_len(u_h, mesh)?;
    if taus.len() != mesh.num_cells() {
        return Err(Error::DimensionMismatch { expected: mesh.num_cells(), got: taus.len() });
    }
    let rule = q1::gauss_2d(ERROR_QUADRATURE);
    let (mut energy, mut streamline) = (0.0, 0.0);
    for (t, cell) in mesh.cells.iter().enumerate() {
        let corners = mesh.corners(t);
        let mut st = 0.0;
        for &(xi, eta, w) in &rule {
            let g = q1::point_geometry(&corners, xi, eta);
            if !(g.det > 0.0) {
                return Err(Error::DegenerateCell { cell: t, det: g.det });
            }
            let (mut vh, mut gh) = (0.0, [0.0; 2]);
            for a in 0..4 {
                let ua = u_h[cell[a]];
                vh += ua * g.values[a];
                gh[0] += ua * g.grads[a][0];
                gh[1] += ua * g.grads[a][1];
            }
            let (u, gu) = exact(g.x[0], g.x[1])?;
            let v = u - vh;
            let gv = [gu[0] - gh[0], gu[1] - gh[1]];
            let dw = w * g.det;
            energy += dw * (eps * (gv[0] * gv[0] + gv[1] * gv[1]) + v * v);
            let b = beta(g.x[0], g.x[1]);
            let bv = b[0] * gv[0] + b[1] * gv[1];
            st += dw * bv * bv;
        }
        streamline += taus[t] * st;
    }
    Ok((energy, energy + streamline))
}

/// `(eps |v|_1^2 + ||v||^2)^(1/2)` for `v = u - u_h`.
pub fn energy_error(u_h: &[f64], case: Case, eps: f64, mesh: &QuadMesh) -> Result<f64> {
    let zeros = vec![0.0; mesh.num_cells()];
    let (e, _) = error_integrals(mesh, u_h, eps, |x, y| case.beta(x, y), &zeros, |x, y| {
        exact_jet(case, eps, x, y).map(|j| (j.0, j.1))
    })?;
    Ok(e.sqrt())
}

/// Energy error plus `sum_T tau_T ||beta . grad v||_T^2` under the root.
pub fn sd_error(u_h: &[f64], case: Case, eps: f64, mesh: &QuadMesh, taus: &[f64]) -> Result<f64> {
    let (_, s) = error_integrals(mesh, u_h, eps, |x, y| case.beta(x, y), taus, |x, y| {
        exact_jet(case, eps, x, y).map(|j| (j.0, j.1))
    })?;
    Ok(s.sqrt())
}

/// All three measures for a unit-square case in one pass.
pub fn square_errors(u_h: &[f64], case: Case, eps: f64, mesh: &QuadMesh, taus: &[f64]) -> Result<ErrorNorms> {
    let (e, s) = error_integrals(mesh, u_h, eps, |x, y| case.beta(x, y), taus, |x, y| {
        exact_jet(case, eps, x, y).map(|j| (j.0, j.1))
    })?;
    Ok(ErrorNorms {
        max: max_nodal_error(u_h, case, eps, mesh)?,
        energy: e.sqrt(),
        sd: s.sqrt(),
    })
}
