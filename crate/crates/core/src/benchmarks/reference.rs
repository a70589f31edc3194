//! Double-mesh reference for the Hemker problem: the same discretization
//! solved directly on the once-refined mesh.

use super::{error_integrals, Case, ErrorNorms};
use crate::error::{Error, Result};
use crate::fem::{dirichlet_values, discretize, DEFAULT_QUADRATURE};
use crate::linalg::operator::norm2;
use crate::linalg::{CsrMatrix, SparseLu};
use crate::mesh::hemker::hemker_hierarchy_with_sigmas;
use crate::mesh::{hemker_sigmas, QuadMesh};
use crate::multigrid::build_prolongation;

#[derive(Debug)]
pub struct HemkerReference {
    pub n: usize,
    pub eps: f64,
    /// Resolution-`n` mesh the reference is compared against.
    pub coarse: QuadMesh,
    /// Resolution-`2n` mesh built with the transition offsets of `n`.
    pub fine: QuadMesh,
    pub solution: Vec<f64>,
    /// Fine-mesh index of every coarse node.
    pub shared: Vec<usize>,
    /// Coarse cell containing every fine cell.
    pub parent_cell: Vec<usize>,
    prolongation: CsrMatrix,
    /// `||b - A u||` of the fine direct solve.
    pub residual: f64,
}

pub fn hemker_reference(n: usize, eps: f64) -> Result<HemkerReference> {
    let sigmas = hemker_sigmas(n, eps);
    let mut h = hemker_hierarchy_with_sigmas(2 * n, sigmas, eps, 2)?;
    let coarse = h.levels.pop().unwrap();
    let fine = h.levels.pop().unwrap();
    let spec = Case::Hemker.problem(eps);
    let sys = discretize(&fine, &spec, DEFAULT_QUADRATURE)?;
    let mut solution = sys.rhs.clone();
    SparseLu::factor(&sys.matrix)?.solve_in_place(&mut solution);
    // boundary rows are identities; store their data without rounding
    for (u, g) in solution.iter_mut().zip(dirichlet_values(&fine, &spec)?) {
        if let Some(g) = g {
            *u = g;
        }
    }
    let residual = norm2(&sys.matrix.residual(&sys.rhs, &solution)?);
    log::debug!("hemker reference N = {}: {} DoFs, residual {residual:.3e}", 2 * n, fine.num_nodes());

    let mut shared = vec![usize::MAX; coarse.num_nodes()];
    let mut parent_cell = vec![usize::MAX; fine.num_cells()];
    for (cb, fb) in coarse.blocks.iter().zip(&fine.blocks) {
        for j in 0..=cb.nj {
            for i in 0..=cb.ni {
                shared[cb.node(i, j)] = fb.node(2 * i, 2 * j);
            }
        }
        for jj in 0..fb.nj {
            for ii in 0..fb.ni {
                parent_cell[fb.cell(ii, jj)] = cb.cell(ii / 2, jj / 2);
            }
        }
    }
    if shared.contains(&usize::MAX) || parent_cell.contains(&usize::MAX) {
        return Err(Error::Factorization("reference mesh does not cover the coarse mesh".into()));
    }
    let prolongation = build_prolongation(&coarse, &fine, &h.parents[0])?;
    Ok(HemkerReference {
        n,
        eps,
        coarse,
        fine,
        solution,
        shared,
        parent_cell,
        prolongation,
        residual,
    })
}

impl HemkerReference {
    /// Reference values at the nodes of the resolution-`n` mesh.
    pub fn at_coarse_nodes(&self) -> Vec<f64> {
        self.shared.iter().map(|&k| self.solution[k]).collect()
    }

    /// Errors of a solution on the resolution-`n` mesh. Energy and SD
    /// norms integrate the difference between the reference and the
    /// interpolated `u_h` on the fine mesh; `taus` are the coarse cell
    /// parameters.
    pub fn errors(&self, u_h: &[f64], taus: &[f64]) -> Result<ErrorNorms> {
        if u_h.len() != self.coarse.num_nodes() {
            return Err(Error::DimensionMismatch { expected: self.coarse.num_nodes(), got: u_h.len() });
        }
        if taus.len() != self.coarse.num_cells() {
            return Err(Error::DimensionMismatch { expected: self.coarse.num_cells(), got: taus.len() });
        }
        let max = self
            .at_coarse_nodes()
            .iter()
            .zip(u_h)
            .map(|(r, u)| (r - u).abs())
            .fold(0.0, f64::max);
        let interp = self.prolongation.spmv(u_h)?;
        let diff: Vec<f64> = self.solution.iter().zip(&interp).map(|(r, u)| r - u).collect();
        let fine_taus: Vec<f64> = self.parent_cell.iter().map(|&c| taus[c]).collect();
        let (e, s) = error_integrals(
            &self.fine,
            &diff,
            self.eps,
            |x, y| Case::Hemker.beta(x, y),
            &fine_taus,
            |_, _| Ok((0.0, [0.0; 2])),
        )?;
        Ok(ErrorNorms { max, energy: e.sqrt(), sd: s.sqrt() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fem::cell_taus;
    use crate::mesh::hemker::CYLINDER;
    use crate::mesh::BoundaryTag;

    #[test]
    fn reference_contract() {
        let r = hemker_reference(8, 1.0).unwrap();
        assert_eq!(r.fine.num_nodes(), crate::mesh::HemkerLayout::new(16).unwrap().num_nodes());
        assert!(r.residual < 1e-10, "{}", r.residual);
        let vals = r.at_coarse_nodes();
        for (node, tag) in r.coarse.boundary_node_tags() {
            if let BoundaryTag::Dirichlet(id) = tag {
                assert_eq!(vals[node], if id == CYLINDER { 1.0 } else { 0.0 });
            }
        }
        for (c, &f) in r.shared.iter().enumerate() {
            let (p, q) = (r.coarse.nodes[c], r.fine.nodes[f]);
            assert!((p[0] - q[0]).abs() < 1e-12 && (p[1] - q[1]).abs() < 1e-12);
        }
        // the reference compared with its own restriction: only the max
        // error at shared nodes vanishes
        let taus = cell_taus(&r.coarse, &Case::Hemker.problem(1.0)).unwrap();
        let e = r.errors(&vals, &taus).unwrap();
        assert_eq!(e.max, 0.0);
        assert!(e.sd >= e.energy && e.energy > 0.0);
    }
}
