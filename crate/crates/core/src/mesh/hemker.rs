//! Multi-block layer-adapted mesh for flow past the unit cylinder in the
//! channel `[-4, 4]` (left half-annulus `1 <= r <= 4`, right half `0 <= x <= 4`).
//!
//! Block layout for resolution `N`:
//!
//! * polar block, `x <= 0`: `N` angular intervals on `[pi/2, 3pi/2]`, radial
//!   pieces `[1, 1+s1], [1+s1, 1+s2], [1+s2, 1+s3]` with `N/4` intervals each
//!   and `[1+s3, 4]` with `N/2`;
//! * two channel blocks, `x >= 0, |y| >= 1`: `N/2` uniform intervals in `x`,
//!   the radial distribution continued in `|y|`;
//! * wake block, `x >= 0, |y| <= 1`: `N/2` intervals from the cylinder to
//!   `x = 4` along straight horizontal lines, `3N/2` intervals in `y` split
//!   at `y = +-(1 - s3)` into three uniform bands.

use std::f64::consts::PI;

use super::partition::Partition1D;
use super::quad::{BoundaryEdge, BoundaryTag, LogicalBlock, QuadMesh, RegionTag};
use super::{Geometry, MeshHierarchy};
use crate::error::{invalid, Result};

/// Dirichlet id of the outer walls (`u = 0`).
pub const OUTER_WALL: u32 = 0;
/// Dirichlet id of the cylinder (`u = 1`).
pub const CYLINDER: u32 = 1;
/// Neumann id of the outflow boundary `x = 4`.
pub const OUTFLOW: u32 = 2;

pub const CHANNEL_HALF_WIDTH: f64 = 4.0;

/// Interval counts of the block layout for resolution `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HemkerLayout {
    pub n: usize,
}

impl HemkerLayout {
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 || n % 4 != 0 {
            return invalid(format!("Hemker mesh needs N >= 8 divisible by 4, got {n}"));
        }
        Ok(Self { n })
    }

    pub fn horizontal(&self) -> usize {
        self.n / 2
    }

    pub fn radial(&self) -> usize {
        5 * self.n / 4
    }

    pub fn vertical(&self) -> usize {
        3 * self.n / 2
    }

    pub fn num_nodes(&self) -> usize {
        let (n, m, r, v) = (self.n, self.horizontal(), self.radial(), self.vertical());
        (n + 1) * (r + 1) + 2 * m * (r + 1) + (m + 1) * (v - 1)
    }
}

/// `(min{0.25, eps ln N}, min{0.3, eps^(2/3) ln N}, min{0.35, eps^(1/2) ln N})`.
pub fn hemker_sigmas(n: usize, eps: f64) -> [f64; 3] {
    let ln_n = (n as f64).ln();
    [
        (eps * ln_n).min(0.25),
        (eps.powf(2.0 / 3.0) * ln_n).min(0.3),
        (eps.sqrt() * ln_n).min(0.35),
    ]
}

fn radial_partition(n: usize, s: [f64; 3]) -> Result<Partition1D> {
    Partition1D::piecewise_uniform(
        0.0,
        CHANNEL_HALF_WIDTH - 1.0,
        &s,
        &[n / 4, n / 4, n / 4, n / 2],
        &[true, true, true, false],
    )
}

fn vertical_partition(n: usize, s3: f64) -> Result<Partition1D> {
    Partition1D::piecewise_uniform(
        -1.0,
        1.0,
        &[-(1.0 - s3), 1.0 - s3],
        &[n / 2, n / 2, n / 2],
        &[false, false, false],
    )
}

struct Builder {
    nodes: Vec<[f64; 2]>,
    cells: Vec<[usize; 4]>,
    tags: Vec<RegionTag>,
    edges: Vec<BoundaryEdge>,
    blocks: Vec<LogicalBlock>,
}

impl Builder {
    /// Adds a block; `shared(i, j)` returns an existing node id or `None`.
    fn block(
        &mut self,
        ni: usize,
        nj: usize,
        shared: impl Fn(usize, usize) -> Option<usize>,
        position: impl Fn(usize, usize) -> [f64; 2],
        tag: impl Fn(usize, usize) -> RegionTag,
    ) -> usize {
        let mut ids = Vec::with_capacity((ni + 1) * (nj + 1));
        for j in 0..=nj {
            for i in 0..=ni {
                ids.push(shared(i, j).unwrap_or_else(|| {
                    self.nodes.push(position(i, j));
                    self.nodes.len() - 1
                }));
            }
        }
        let mut cells = Vec::with_capacity(ni * nj);
        for j in 0..nj {
            for i in 0..ni {
                let n = |a: usize, b: usize| ids[a + b * (ni + 1)];
                self.cells.push([n(i, j), n(i + 1, j), n(i + 1, j + 1), n(i, j + 1)]);
                self.tags.push(tag(i, j));
                cells.push(self.cells.len() - 1);
            }
        }
        self.blocks.push(LogicalBlock { ni, nj, nodes: ids, cells });
        self.blocks.len() - 1
    }

    /// Tags the edges of block `b` along logical side `i = fixed` or `j = fixed`.
    fn tag_side(&mut self, b: usize, along_j: bool, fixed: usize, tag: BoundaryTag) {
        let blk = &self.blocks[b];
        let count = if along_j { blk.nj } else { blk.ni };
        for t in 0..count {
            let (a, c) = if along_j {
                (blk.node(fixed, t), blk.node(fixed, t + 1))
            } else {
                (blk.node(t, fixed), blk.node(t + 1, fixed))
            };
            self.edges.push(BoundaryEdge { nodes: [a, c], tag });
        }
    }
}

/// Mesh for resolution `n` with the given transition offsets.
pub fn hemker_mesh(n: usize, sigmas: [f64; 3]) -> Result<QuadMesh> {
    let layout = HemkerLayout::new(n)?;
    let (m, r, v) = (layout.horizontal(), layout.radial(), layout.vertical());
    let rho = radial_partition(n, sigmas)?;
    let yv = vertical_partition(n, sigmas[2])?;
    let rho = rho.breakpoints().to_vec();
    let yv = yv.breakpoints().to_vec();
    let radial_piece = |k: usize| -> usize {
        let q = n / 4;
        (k / q).min(3)
    };
    let w = CHANNEL_HALF_WIDTH;

    let mut b = Builder {
        nodes: Vec::with_capacity(layout.num_nodes()),
        cells: Vec::new(),
        tags: Vec::new(),
        edges: Vec::new(),
        blocks: Vec::new(),
    };

    // polar block: i = radial index k, j = angular index a
    let polar = b.block(
        r,
        n,
        |_, _| None,
        |k, a| {
            let rad = 1.0 + rho[k];
            if a == 0 {
                [0.0, rad]
            } else if a == n {
                [0.0, -rad]
            } else if 2 * a == n {
                [-rad, 0.0]
            } else {
                let theta = PI / 2.0 + (PI * a as f64) / n as f64;
                [rad * theta.cos(), rad * theta.sin()]
            }
        },
        |k, _| match radial_piece(k) {
            p @ 0..=2 => RegionTag::HemkerRadialLayer(p as u8 + 1),
            _ => RegionTag::HemkerPolarOuter,
        },
    );
    let polar_node = |blocks: &[LogicalBlock], k: usize, a: usize| blocks[polar].node(k, a);

    // top channel: i = horizontal index h, j = radial index k
    let polar_top: Vec<usize> = (0..=r).map(|k| polar_node(&b.blocks, k, 0)).collect();
    let top = b.block(
        m,
        r,
        |h, k| (h == 0).then(|| polar_top[k]),
        |h, k| [(w * h as f64) / m as f64, 1.0 + rho[k]],
        |_, _| RegionTag::HemkerChannel,
    );

    // bottom channel: i = radial index k (downwards), j = horizontal index h
    let polar_bottom: Vec<usize> = (0..=r).map(|k| polar_node(&b.blocks, k, n)).collect();
    let bottom = b.block(
        r,
        m,
        |k, h| (h == 0).then(|| polar_bottom[k]),
        |k, h| [(w * h as f64) / m as f64, -(1.0 + rho[k])],
        |_, _| RegionTag::HemkerChannel,
    );

    // wake block: i = horizontal index h, j = vertical index
    let top_row: Vec<usize> = (0..=m).map(|h| b.blocks[top].node(h, 0)).collect();
    let bottom_row: Vec<usize> = (0..=m).map(|h| b.blocks[bottom].node(0, h)).collect();
    let wake = b.block(
        m,
        v,
        |h, j| {
            if j == 0 {
                Some(bottom_row[h])
            } else if j == v {
                Some(top_row[h])
            } else {
                None
            }
        },
        |h, j| {
            let y = yv[j];
            let xa = (1.0 - y * y).max(0.0).sqrt();
            [xa + ((w - xa) * h as f64) / m as f64, y]
        },
        |_, _| RegionTag::HemkerWake,
    );

    b.tag_side(polar, true, 0, BoundaryTag::Dirichlet(CYLINDER));
    b.tag_side(polar, true, r, BoundaryTag::Dirichlet(OUTER_WALL));
    b.tag_side(top, false, r, BoundaryTag::Dirichlet(OUTER_WALL));
    b.tag_side(top, true, m, BoundaryTag::Neumann(OUTFLOW));
    b.tag_side(bottom, true, r, BoundaryTag::Dirichlet(OUTER_WALL));
    b.tag_side(bottom, false, m, BoundaryTag::Neumann(OUTFLOW));
    b.tag_side(wake, true, 0, BoundaryTag::Dirichlet(CYLINDER));
    b.tag_side(wake, true, m, BoundaryTag::Neumann(OUTFLOW));

    debug_assert_eq!(b.nodes.len(), layout.num_nodes());
    Ok(QuadMesh {
        nodes: b.nodes,
        cells: b.cells,
        boundary_edges: b.edges,
        region_tags: b.tags,
        blocks: b.blocks,
    })
}

/// Hierarchy with transition offsets computed from `n_fine` on every level.
pub fn hemker_hierarchy(n_fine: usize, eps: f64, levels: usize) -> Result<MeshHierarchy> {
    hemker_hierarchy_with_sigmas(n_fine, hemker_sigmas(n_fine, eps), eps, levels)
}

pub fn hemker_hierarchy_with_sigmas(
    n_fine: usize,
    sigmas: [f64; 3],
    eps: f64,
    levels: usize,
) -> Result<MeshHierarchy> {
    if !(eps > 0.0 && eps <= 1.0) {
        return invalid(format!("eps = {eps} outside (0, 1]"));
    }
    if levels == 0 {
        return invalid("hierarchy needs at least one level");
    }
    let coarse = n_fine >> (levels - 1);
    if n_fine % 4 != 0 || coarse < 8 || coarse % 4 != 0 || coarse << (levels - 1) != n_fine {
        return invalid(format!(
            "N_fine = {n_fine} incompatible with {levels} levels (coarsest N must be >= 8, divisible by 4)"
        ));
    }
    let resolutions: Vec<usize> = (0..levels).map(|l| n_fine >> l).collect();
    let meshes = resolutions
        .iter()
        .map(|&n| hemker_mesh(n, sigmas))
        .collect::<Result<Vec<_>>>()?;
    MeshHierarchy::new(
        meshes,
        Geometry::Hemker {
            eps,
            sigmas,
            resolutions,
        },
    )
}

/// Largest level count whose coarsest mesh keeps `N >= 8`.
pub fn max_hemker_levels(n_fine: usize) -> usize {
    super::square::max_square_levels(n_fine)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_clamps() {
        assert_eq!(hemker_sigmas(32, 1.0), [0.25, 0.3, 0.35]);
        let s = hemker_sigmas(64, 1e-2);
        let ln = 64f64.ln();
        assert!((s[0] - 4.159e-2).abs() < 1e-5 && (s[0] - 1e-2 * ln).abs() < 1e-15);
        assert!((s[1] - 1.931e-1).abs() < 1e-4);
        assert_eq!(s[2], 0.35);
    }

    #[test]
    fn dof_counts_match_block_layout() {
        for (n, dofs) in [(32, 3464), (64, 13584)] {
            let m = hemker_mesh(n, hemker_sigmas(n, 1e-2)).unwrap();
            assert_eq!(m.num_nodes(), dofs);
            assert_eq!(HemkerLayout::new(n).unwrap().num_nodes(), dofs);
        }
    }

    #[test]
    fn valid_on_all_levels() {
        for eps in [1.0, 1e-1, 1e-2, 1e-3] {
            let h = hemker_hierarchy(32, eps, 3).unwrap();
            for m in &h.levels {
                m.validate().unwrap();
            }
        }
    }

    #[test]
    fn boundary_nodes_lie_on_their_curves() {
        let m = hemker_mesh(16, hemker_sigmas(16, 0.1)).unwrap();
        for e in &m.boundary_edges {
            for &n in &e.nodes {
                let [x, y] = m.nodes[n];
                match e.tag {
                    BoundaryTag::Dirichlet(CYLINDER) => assert!((x.hypot(y) - 1.0).abs() < 1e-14),
                    BoundaryTag::Dirichlet(_) => {
                        assert!((x.hypot(y) - 4.0).abs() < 1e-14 && x <= 0.0 || (y.abs() - 4.0).abs() < 1e-14)
                    }
                    BoundaryTag::Neumann(_) => assert_eq!(x, 4.0),
                }
            }
        }
    }

    #[test]
    fn coarse_nodes_coincide_with_fine_nodes() {
        let h = hemker_hierarchy(32, 1e-2, 3).unwrap();
        for l in 0..2 {
            let (f, c) = (&h.levels[l], &h.levels[l + 1]);
            for (fb, cb) in f.blocks.iter().zip(&c.blocks) {
                for j in 0..=cb.nj {
                    for i in 0..=cb.ni {
                        let p = c.nodes[cb.node(i, j)];
                        let q = f.nodes[fb.node(2 * i, 2 * j)];
                        assert!((p[0] - q[0]).abs() < 1e-12 && (p[1] - q[1]).abs() < 1e-12);
                    }
                }
            }
            for p in &h.parents[l] {
                assert!(p.cell < c.num_cells());
            }
        }
    }

    #[test]
    fn layer_tags_cover_polar_pieces() {
        let m = hemker_mesh(16, hemker_sigmas(16, 0.1)).unwrap();
        let hist = m.region_histogram();
        for k in 1..=3 {
            assert_eq!(hist[&RegionTag::HemkerRadialLayer(k)], 16 * 4);
        }
        assert_eq!(hist[&RegionTag::HemkerPolarOuter], 16 * 8);
    }

    #[test]
    fn rejects_bad_levels() {
        assert!(hemker_hierarchy(32, 1e-2, 3).is_ok());
        assert!(hemker_hierarchy(32, 1e-2, 4).is_err());
        assert!(hemker_hierarchy(30, 1e-2, 1).is_err());
        assert!(hemker_hierarchy(32, 0.0, 1).is_err());
    }
}
