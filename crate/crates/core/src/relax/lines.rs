//! Line block sets for the benchmark meshes.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::blocks::{blocks_from_key_clusters, build_line_blocks, divisions_from_breakpoints, BlockSet, Divisions};
use crate::error::Result;
use crate::mesh::{Partition1D, QuadMesh};

/// Offset separating the right-half keys from the polar angles in `[pi/2, 3pi/2]`.
const RIGHT_HALF_OFFSET: f64 = 10.0;
/// Relative tolerance for grouping equal key values.
pub const KEY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LineScheme {
    /// Lines parallel to the x-axis followed by lines parallel to the y-axis.
    BothDirections,
    /// Lines parallel to the x-axis only.
    XLines,
    /// Radial lines for `x <= 0`, mapped vertical lines for `x > 0`.
    RadialVertical,
}

/// x-parallel lines: key `y`, one bin per interior `y` breakpoint.
pub fn x_lines(mesh: &QuadMesh, py: &Partition1D, free: &[bool]) -> Result<BlockSet> {
    let cuts = divisions_from_breakpoints(py.breakpoints());
    build_line_blocks(&mesh.nodes, Some(free), |_, y| y, &Divisions::Explicit(cuts), "key=y")
}

/// y-parallel lines: key `x`, one bin per interior `x` breakpoint.
pub fn y_lines(mesh: &QuadMesh, px: &Partition1D, free: &[bool]) -> Result<BlockSet> {
    let cuts = divisions_from_breakpoints(px.breakpoints());
    build_line_blocks(&mesh.nodes, Some(free), |x, _| x, &Divisions::Explicit(cuts), "key=x")
}

pub fn square_line_blocks(
    mesh: &QuadMesh,
    px: &Partition1D,
    py: &Partition1D,
    free: &[bool],
    scheme: LineScheme,
) -> Result<BlockSet> {
    match scheme {
        LineScheme::BothDirections => Ok(x_lines(mesh, py, free)?.concat(y_lines(mesh, px, free)?)),
        LineScheme::XLines => x_lines(mesh, py, free),
        LineScheme::RadialVertical => hemker_line_blocks(mesh, free),
    }
}

/// Key of the Hemker line through `(x, y)`: the polar angle on the left,
/// `10 + s` on the right where `s` is the relative position between the
/// cylinder (or `x = 0` above and below it) and `x = 4`.
pub fn hemker_key(x: f64, y: f64) -> f64 {
    if x <= 0.0 {
        y.atan2(x).rem_euclid(TAU)
    } else {
        let xa = (1.0 - y * y).max(0.0).sqrt();
        RIGHT_HALF_OFFSET + (x - xa) / (4.0 - xa)
    }
}

pub fn hemker_line_blocks(mesh: &QuadMesh, free: &[bool]) -> Result<BlockSet> {
    blocks_from_key_clusters(&mesh.nodes, free, hemker_key, KEY_TOL, "radial+vertical")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{hemker_mesh, hemker_sigmas, tensor_product_mesh};

    fn free(mesh: &QuadMesh) -> Vec<bool> {
        mesh.dirichlet_mask().iter().map(|d| !d).collect()
    }

    #[test]
    fn square_lines_have_interior_length() {
        let px = Partition1D::exponential(16, 1e-6, 2.5).unwrap();
        let py = Partition1D::parabolic(16, 1e-6, 2.5).unwrap();
        let m = tensor_product_mesh(&px, &py);
        let f = free(&m);
        let xl = x_lines(&m, &py, &f).unwrap();
        assert_eq!(xl.len(), 15);
        assert!(xl.blocks.iter().all(|b| b.len() == 15));
        let both = square_line_blocks(&m, &px, &py, &f, LineScheme::BothDirections).unwrap();
        assert_eq!(both.len(), 30);
        let covered: usize = both.blocks.iter().map(Vec::len).sum();
        assert_eq!(covered, 2 * 15 * 15);
    }

    #[test]
    fn hemker_lines_cover_free_nodes_once() {
        let n = 16;
        let m = hemker_mesh(n, hemker_sigmas(n, 1e-2)).unwrap();
        let f = free(&m);
        let bs = hemker_line_blocks(&m, &f).unwrap();
        // N + 1 radial lines and N/2 vertical lines
        assert_eq!(bs.len(), n + 1 + n / 2);
        let mut seen = vec![0; m.num_nodes()];
        for b in &bs.blocks {
            for &i in b {
                seen[i] += 1;
            }
        }
        for i in 0..m.num_nodes() {
            assert_eq!(seen[i], usize::from(f[i]), "node {i}");
        }
        let radial = 5 * n / 4 - 1;
        assert!(bs.blocks[..n + 1].iter().all(|b| b.len() == radial));
    }
}
