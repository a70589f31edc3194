//! Layer-adapted meshes and nested mesh hierarchies.

pub mod hemker;
pub mod partition;
pub mod quad;
pub mod square;
pub mod vtk;

pub use hemker::{hemker_hierarchy, hemker_mesh, hemker_sigmas, HemkerLayout};
pub use partition::{Partition1D, DEFAULT_SIGMA};
pub use quad::{BoundaryEdge, BoundaryTag, LogicalBlock, QuadMesh, RegionTag, Side};
pub use square::{square_hierarchy, tensor_product_mesh, SquareLayout};

use crate::error::{invalid, Error, Result};
use crate::fem::q1;

/// Location of a fine node inside a coarse cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parent {
    pub cell: usize,
    /// Reference coordinates; may leave `[0,1]^2` where the fine node lies
    /// outside the coarse cell (curved boundaries).
    pub xi: [f64; 2],
}

/// Construction data shared by every level.
#[derive(Debug, Clone)]
pub enum Geometry {
    UnitSquare {
        layout: SquareLayout,
        eps: f64,
        sigma: f64,
        /// `(x, y)` partitions per level, finest first.
        partitions: Vec<(Partition1D, Partition1D)>,
    },
    Hemker {
        eps: f64,
        sigmas: [f64; 3],
        /// Resolution parameter `N` per level, finest first.
        resolutions: Vec<usize>,
    },
}

/// Nested meshes, finest first: `levels[0]` is level 1 and the last entry
/// is the coarsest level `C`. `parents[l]` locates every node of
/// `levels[l]` in a cell of `levels[l + 1]`.
#[derive(Debug, Clone)]
pub struct MeshHierarchy {
    pub levels: Vec<QuadMesh>,
    pub parents: Vec<Vec<Parent>>,
    pub geometry: Geometry,
}

impl MeshHierarchy {
    /// Builds parent maps from the logical block structure: fine node
    /// `(I, J)` of block `b` belongs to coarse cell `(I/2, J/2)` of block `b`
    /// (clamped at the far edges).
    pub fn new(levels: Vec<QuadMesh>, geometry: Geometry) -> Result<Self> {
        if levels.is_empty() {
            return invalid("empty hierarchy");
        }
        let mut parents = Vec::with_capacity(levels.len() - 1);
        for l in 0..levels.len() - 1 {
            parents.push(parent_map(&levels[l], &levels[l + 1])?);
        }
        Ok(Self {
            levels,
            parents,
            geometry,
        })
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn finest(&self) -> &QuadMesh {
        &self.levels[0]
    }
}

pub fn parent_map(fine: &QuadMesh, coarse: &QuadMesh) -> Result<Vec<Parent>> {
    if fine.blocks.len() != coarse.blocks.len() {
        return invalid("fine and coarse meshes have different block structure");
    }
    let mut parents: Vec<Option<Parent>> = vec![None; fine.num_nodes()];
    for (fb, cb) in fine.blocks.iter().zip(&coarse.blocks) {
        if fb.ni != 2 * cb.ni || fb.nj != 2 * cb.nj {
            return invalid("fine block is not a bisection of the coarse block");
        }
        for jj in 0..=fb.nj {
            for ii in 0..=fb.ni {
                let node = fb.node(ii, jj);
                if parents[node].is_some() {
                    continue;
                }
                let (ci, cj) = ((ii / 2).min(cb.ni - 1), (jj / 2).min(cb.nj - 1));
                let cell = cb.cell(ci, cj);
                let guess = [
                    ii as f64 / 2.0 - ci as f64,
                    jj as f64 / 2.0 - cj as f64,
                ];
                let corners = coarse.corners(cell);
                let p = fine.nodes[node];
                let at_guess = q1::map_point(&corners, guess[0], guess[1]);
                let miss = (p[0] - at_guess[0]).hypot(p[1] - at_guess[1]);
                // affine cells reproduce the logical position to rounding
                let xi = if miss <= 1e-13 * q1::diameter(&corners) {
                    guess
                } else {
                    q1::inverse_map(&corners, p, guess)
                };
                parents[node] = Some(Parent { cell, xi });
            }
        }
    }
    parents
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or(Error::MissingParent(i)))
        .collect()
}
