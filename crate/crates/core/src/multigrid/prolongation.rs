use crate::error::{invalid, Result};
use crate::fem::q1;
use crate::linalg::CsrMatrix;
use crate::mesh::{Parent, QuadMesh};

/// Q1 interpolation from `coarse` to `fine`: row `i` holds the coarse shape
/// values of node `i`'s parent cell at its reference coordinates.
pub fn build_prolongation(coarse: &QuadMesh, fine: &QuadMesh, parents: &[Parent]) -> Result<CsrMatrix> {
    if parents.len() != fine.num_nodes() {
        return invalid(format!(
            "parent map has {} entries for {} fine nodes",
            parents.len(),
            fine.num_nodes()
        ));
    }
    let mut t = Vec::with_capacity(4 * parents.len());
    for (i, p) in parents.iter().enumerate() {
        if p.cell >= coarse.num_cells() {
            return Err(crate::error::Error::MissingParent(i));
        }
        let cell = coarse.cells[p.cell];
        let phi = q1::shape(p.xi[0], p.xi[1]);
        for (a, &v) in phi.iter().enumerate() {
            if v != 0.0 {
                t.push((i, cell[a], v));
            }
        }
    }
    CsrMatrix::from_triplets(fine.num_nodes(), coarse.num_nodes(), &t)
}

/// Zeroes rows of constrained fine nodes and columns of constrained coarse
/// nodes, then drops the zeros.
pub fn mask_prolongation(p: &CsrMatrix, fine_dirichlet: &[bool], coarse_dirichlet: &[bool]) -> CsrMatrix {
    let t: Vec<(usize, usize, f64)> = p
        .triplets()
        .filter(|&(i, j, _)| !fine_dirichlet[i] && !coarse_dirichlet[j])
        .collect();
    CsrMatrix::from_triplets(p.nrows(), p.ncols(), &t).expect("indices come from a valid matrix")
}
