//! SUPG assembly for Q1 elements.
//!
//! For trial `phi_j` and test `phi_i` on cell `T` the element entry is
//!
//! ```text
//! eps (grad phi_j, grad phi_i) + (beta . grad phi_j + c phi_j, phi_i)
//!   + tau_T (c phi_j + beta . grad phi_j, beta . grad phi_i)
//! ```
//!
//! and the load is `(f, phi_i) + tau_T (f, beta . grad phi_i)`. The
//! second-order residual term vanishes on rectangles and is dropped.

use super::problem::ProblemSpec;
use super::q1::{self, Corners};
use crate::error::{Error, Result};
use crate::linalg::CsrMatrix;
use crate::mesh::{BoundaryTag, QuadMesh};

pub const DEFAULT_QUADRATURE: usize = 2;

/// `||beta|| h_T / (2 eps)` with `h_T` the largest corner distance.
pub fn cell_peclet(corners: &Corners, beta_center: [f64; 2], eps: f64) -> f64 {
    let norm = beta_center[0].hypot(beta_center[1]);
    if norm == 0.0 {
        return 0.0;
    }
    norm * q1::diameter(corners) / (2.0 * eps)
}

fn center(c: &Corners) -> [f64; 2] {
    q1::map_point(c, 0.5, 0.5)
}

/// `tau_T` of one cell under the problem's rule.
pub fn stabilization_tau(mesh: &QuadMesh, cell: usize, spec: &ProblemSpec) -> Result<f64> {
    let c = mesh.corners(cell);
    let [x, y] = center(&c);
    let pe = cell_peclet(&c, (spec.convection)(x, y), spec.eps);
    spec.tau_rule.tau(mesh.region_tags[cell], q1::diameter(&c), pe, spec.eps)
}

pub fn cell_taus(mesh: &QuadMesh, spec: &ProblemSpec) -> Result<Vec<f64>> {
    (0..mesh.num_cells()).map(|t| stabilization_tau(mesh, t, spec)).collect()
}

/// Element matrix `K[i][j] = a_S(phi_j, phi_i)` and load vector.
pub fn element_system(
    corners: &Corners,
    spec: &ProblemSpec,
    tau: f64,
    qorder: usize,
) -> Result<([[f64; 4]; 4], [f64; 4])> {
    let mut k = [[0.0; 4]; 4];
    let mut f = [0.0; 4];
    for (xi, eta, w) in q1::gauss_2d(qorder) {
        let g = q1::point_geometry(corners, xi, eta);
        if !(g.det > 0.0) {
            return Err(Error::DegenerateCell { cell: usize::MAX, det: g.det });
        }
        let dw = w * g.det;
        let [x, y] = g.x;
        let beta = (spec.convection)(x, y);
        let c = (spec.reaction)(x, y);
        let rhs = (spec.rhs)(x, y);
        let conv: [f64; 4] =
            std::array::from_fn(|a| beta[0] * g.grads[a][0] + beta[1] * g.grads[a][1]);
        for i in 0..4 {
            let test = g.values[i] + tau * conv[i];
            for j in 0..4 {
                let diff = spec.eps
                    * (g.grads[j][0] * g.grads[i][0] + g.grads[j][1] * g.grads[i][1]);
                let lower = conv[j] + c * g.values[j];
                k[i][j] += dw * (diff + lower * test);
            }
            f[i] += dw * rhs * test;
        }
    }
    Ok((k, f))
}

/// Assembles with the default 2x2 Gauss rule.
pub fn assemble_supg(mesh: &QuadMesh, spec: &ProblemSpec) -> Result<(CsrMatrix, Vec<f64>)> {
    assemble_supg_with(mesh, spec, DEFAULT_QUADRATURE)
}

/// Assembles `A` and `b` without boundary conditions.
pub fn assemble_supg_with(
    mesh: &QuadMesh,
    spec: &ProblemSpec,
    qorder: usize,
) -> Result<(CsrMatrix, Vec<f64>)> {
    spec.validate()?;
    let n = mesh.num_nodes();
    let mut triplets = Vec::with_capacity(16 * mesh.num_cells());
    let mut b = vec![0.0; n];
    for (t, cell) in mesh.cells.iter().enumerate() {
        let tau = stabilization_tau(mesh, t, spec)?;
        let (k, f) = element_system(&mesh.corners(t), spec, tau, qorder).map_err(|e| match e {
            Error::DegenerateCell { det, .. } => Error::DegenerateCell { cell: t, det },
            other => other,
        })?;
        for i in 0..4 {
            b[cell[i]] += f[i];
            for j in 0..4 {
                triplets.push((cell[i], cell[j], k[i][j]));
            }
        }
    }
    Ok((CsrMatrix::from_triplets(n, n, &triplets)?, b))
}

/// Dirichlet value per node (`None` for free nodes); conflicting values on
/// one node are an error.
pub fn dirichlet_values(mesh: &QuadMesh, spec: &ProblemSpec) -> Result<Vec<Option<f64>>> {
    let mut vals: Vec<Option<f64>> = vec![None; mesh.num_nodes()];
    for e in &mesh.boundary_edges {
        let BoundaryTag::Dirichlet(id) = e.tag else { continue };
        for &node in &e.nodes {
            let [x, y] = mesh.nodes[node];
            let g = (spec.dirichlet)(id, x, y);
            match vals[node] {
                Some(first) if first != g => {
                    return Err(Error::ConflictingDirichlet { node, first, second: g })
                }
                _ => vals[node] = Some(g),
            }
        }
    }
    Ok(vals)
}

/// Replaces Dirichlet rows by identity rows and sets the boundary values in
/// `b`; columns are left untouched. Returns the constrained-node mask.
pub fn apply_dirichlet(
    a: &mut CsrMatrix,
    b: &mut [f64],
    mesh: &QuadMesh,
    spec: &ProblemSpec,
) -> Result<Vec<bool>> {
    if a.nrows() != mesh.num_nodes() || b.len() != mesh.num_nodes() {
        return Err(Error::DimensionMismatch { expected: mesh.num_nodes(), got: b.len() });
    }
    let vals = dirichlet_values(mesh, spec)?;
    let mut mask = vec![false; vals.len()];
    for (i, v) in vals.iter().enumerate() {
        if let Some(g) = v {
            a.set_identity_row(i);
            b[i] = *g;
            mask[i] = true;
        }
    }
    Ok(mask)
}

/// Assembled and constrained system of one mesh.
#[derive(Debug, Clone)]
pub struct DiscreteSystem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    pub dirichlet: Vec<bool>,
    pub taus: Vec<f64>,
}

pub fn discretize(mesh: &QuadMesh, spec: &ProblemSpec, qorder: usize) -> Result<DiscreteSystem> {
    let (mut matrix, mut rhs) = assemble_supg_with(mesh, spec, qorder)?;
    let dirichlet = apply_dirichlet(&mut matrix, &mut rhs, mesh, spec)?;
    Ok(DiscreteSystem {
        matrix,
        rhs,
        dirichlet,
        taus: cell_taus(mesh, spec)?,
    })
}
