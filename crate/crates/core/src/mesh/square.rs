//! Tensor-product Shishkin meshes of the unit square.

use serde::{Deserialize, Serialize};

use super::partition::{exp_transition, parab_transition, Partition1D, DEFAULT_SIGMA};
use super::quad::{BoundaryEdge, BoundaryTag, LogicalBlock, QuadMesh, RegionTag, Side};
use super::{Geometry, MeshHierarchy};
use crate::error::{invalid, Result};

/// Which layers the unit-square mesh resolves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SquareLayout {
    /// Exponential layer at `x = 0`, parabolic layers at `y = 0, 1`.
    ExpAndParab,
    /// Uniform in `x`, parabolic layers at `y = 0, 1`.
    ParabOnly,
}

/// Lexicographic tensor-product mesh: node `(i, j)` is `j (Nx + 1) + i`.
///
/// Cells are tagged by the layer pieces of the two partitions they fall in;
/// all four sides carry `Dirichlet(0)`.
pub fn tensor_product_mesh(px: &Partition1D, py: &Partition1D) -> QuadMesh {
    let (xs, ys) = (px.breakpoints(), py.breakpoints());
    let (nx, ny) = (xs.len() - 1, ys.len() - 1);
    let node = |i: usize, j: usize| j * (nx + 1) + i;

    let mut nodes = Vec::with_capacity((nx + 1) * (ny + 1));
    for &y in ys {
        for &x in xs {
            nodes.push([x, y]);
        }
    }

    let mut cells = Vec::with_capacity(nx * ny);
    let mut region_tags = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        let ypiece = py.piece_of_cell(j);
        let y_side = if py.is_layer_piece(ypiece) {
            Some(if 2 * j < ny { Side::Low } else { Side::High })
        } else {
            None
        };
        for i in 0..nx {
            cells.push([node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)]);
            let x_layer = px.is_layer_piece(px.piece_of_cell(i));
            region_tags.push(match (x_layer, y_side) {
                (false, None) => RegionTag::Interior,
                (true, None) => RegionTag::ExpLayer,
                (false, Some(s)) => RegionTag::ParabLayer(s),
                (true, Some(s)) => RegionTag::Corner(s),
            });
        }
    }

    let tag = BoundaryTag::Dirichlet(0);
    let mut boundary_edges = Vec::with_capacity(2 * (nx + ny));
    for i in 0..nx {
        boundary_edges.push(BoundaryEdge { nodes: [node(i, 0), node(i + 1, 0)], tag });
        boundary_edges.push(BoundaryEdge { nodes: [node(i, ny), node(i + 1, ny)], tag });
    }
    for j in 0..ny {
        boundary_edges.push(BoundaryEdge { nodes: [node(0, j), node(0, j + 1)], tag });
        boundary_edges.push(BoundaryEdge { nodes: [node(nx, j), node(nx, j + 1)], tag });
    }

    let block = LogicalBlock {
        ni: nx,
        nj: ny,
        nodes: (0..nodes.len()).collect(),
        cells: (0..cells.len()).collect(),
    };
    QuadMesh {
        nodes,
        cells,
        boundary_edges,
        region_tags,
        blocks: vec![block],
    }
}

/// Partitions of a unit-square level with `n` cells per direction whose
/// transition points were fixed on the finest level.
pub fn square_partitions(
    layout: SquareLayout,
    n: usize,
    lambda_exp: f64,
    lambda_parab: f64,
) -> Result<(Partition1D, Partition1D)> {
    let py = Partition1D::parabolic_with_transition(n, lambda_parab)?;
    let px = match layout {
        SquareLayout::ExpAndParab => Partition1D::exponential_with_transition(n, lambda_exp)?,
        SquareLayout::ParabOnly => Partition1D::uniform(n, 0.0, 1.0)?,
    };
    Ok((px, py))
}

/// Unit-square hierarchy with `levels` meshes, coarsest `N_fine / 2^(levels-1)`.
///
/// Transition points are computed once with `N = n_fine` and shared by
/// every level, so each level bisects the next coarser one.
pub fn square_hierarchy(
    n_fine: usize,
    eps: f64,
    layout: SquareLayout,
    levels: usize,
) -> Result<MeshHierarchy> {
    square_hierarchy_with_sigma(n_fine, eps, DEFAULT_SIGMA, layout, levels)
}

pub fn square_hierarchy_with_sigma(
    n_fine: usize,
    eps: f64,
    sigma: f64,
    layout: SquareLayout,
    levels: usize,
) -> Result<MeshHierarchy> {
    super::partition::check_eps_sigma(eps, sigma)?;
    if levels == 0 {
        return invalid("hierarchy needs at least one level");
    }
    let coarse = n_fine >> (levels - 1);
    if coarse < 8 || coarse % 4 != 0 || coarse << (levels - 1) != n_fine {
        return invalid(format!(
            "N_fine = {n_fine} is not 8 * 2^k compatible with {levels} levels"
        ));
    }
    let lambda_exp = exp_transition(n_fine, eps, sigma);
    let lambda_parab = parab_transition(n_fine, eps, sigma);

    let mut meshes = Vec::with_capacity(levels);
    let mut partitions = Vec::with_capacity(levels);
    for l in 0..levels {
        let n = n_fine >> l;
        let (px, py) = square_partitions(layout, n, lambda_exp, lambda_parab)?;
        meshes.push(tensor_product_mesh(&px, &py));
        partitions.push((px, py));
    }
    MeshHierarchy::new(
        meshes,
        Geometry::UnitSquare {
            layout,
            eps,
            sigma,
            partitions,
        },
    )
}

/// Largest level count whose coarsest mesh still has `N >= 8`.
pub fn max_square_levels(n_fine: usize) -> usize {
    let mut levels = 1;
    let mut n = n_fine;
    while n % 2 == 0 && n / 2 >= 8 && (n / 2) % 4 == 0 {
        n /= 2;
        levels += 1;
    }
    levels
}
