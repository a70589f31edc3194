use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fem::q1::{self, Corners};

/// Layer region of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RegionTag {
    /// Away from every layer.
    Interior,
    /// Exponential layer only.
    ExpLayer,
    /// Parabolic layer only.
    ParabLayer(Side),
    /// Intersection of the exponential and a parabolic layer.
    Corner(Side),
    /// Polar block, radial piece `k` in `1..=3` counted from the cylinder.
    HemkerRadialLayer(u8),
    /// Polar block beyond `r = 1 + sigma_3`.
    HemkerPolarOuter,
    /// Right-half block between the cylinder and the outflow boundary.
    HemkerWake,
    /// Right-half channel blocks above and below the cylinder.
    HemkerChannel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Low,
    High,
}

impl fmt::Display for RegionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionTag::Interior => write!(f, "interior"),
            RegionTag::ExpLayer => write!(f, "exp-layer"),
            RegionTag::ParabLayer(Side::Low) => write!(f, "parab-layer-low"),
            RegionTag::ParabLayer(Side::High) => write!(f, "parab-layer-high"),
            RegionTag::Corner(Side::Low) => write!(f, "exp-parab-corner-low"),
            RegionTag::Corner(Side::High) => write!(f, "exp-parab-corner-high"),
            RegionTag::HemkerRadialLayer(k) => write!(f, "hemker-radial-layer-{k}"),
            RegionTag::HemkerPolarOuter => write!(f, "hemker-polar-outer"),
            RegionTag::HemkerWake => write!(f, "hemker-wake"),
            RegionTag::HemkerChannel => write!(f, "hemker-channel"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryTag {
    Dirichlet(u32),
    Neumann(u32),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryEdge {
    pub nodes: [usize; 2],
    pub tag: BoundaryTag,
}

/// Logically structured patch of a mesh: `ni x nj` cells whose node
/// `(i, j)` is `nodes[i + j (ni + 1)]`. Cells are `(i,j), (i+1,j),
/// (i+1,j+1), (i,j+1)` and positively oriented.
#[derive(Debug, Clone, PartialEq)]
pub struct LogicalBlock {
    pub ni: usize,
    pub nj: usize,
    pub nodes: Vec<usize>,
    pub cells: Vec<usize>,
}

impl LogicalBlock {
    pub fn node(&self, i: usize, j: usize) -> usize {
        self.nodes[i + j * (self.ni + 1)]
    }

    pub fn cell(&self, i: usize, j: usize) -> usize {
        self.cells[i + j * self.ni]
    }
}

#[derive(Debug, Clone)]
pub struct QuadMesh {
    pub nodes: Vec<[f64; 2]>,
    pub cells: Vec<[usize; 4]>,
    pub boundary_edges: Vec<BoundaryEdge>,
    pub region_tags: Vec<RegionTag>,
    pub blocks: Vec<LogicalBlock>,
}

impl QuadMesh {
    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn corners(&self, cell: usize) -> Corners {
        let c = &self.cells[cell];
        [
            self.nodes[c[0]],
            self.nodes[c[1]],
            self.nodes[c[2]],
            self.nodes[c[3]],
        ]
    }

    /// Boundary tag per boundary node; a Dirichlet tag wins over a Neumann tag.
    pub fn boundary_node_tags(&self) -> BTreeMap<usize, BoundaryTag> {
        let mut tags = BTreeMap::new();
        for e in &self.boundary_edges {
            for &n in &e.nodes {
                tags.entry(n)
                    .and_modify(|t| {
                        if matches!(*t, BoundaryTag::Neumann(_)) {
                            *t = e.tag;
                        }
                    })
                    .or_insert(e.tag);
            }
        }
        tags
    }

    /// Nodes lying on at least one Dirichlet edge.
    pub fn dirichlet_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.nodes.len()];
        for e in &self.boundary_edges {
            if let BoundaryTag::Dirichlet(_) = e.tag {
                mask[e.nodes[0]] = true;
                mask[e.nodes[1]] = true;
            }
        }
        mask
    }

    /// Smallest Jacobian determinant over the corners and 2x2 Gauss points.
    pub fn min_jacobian(&self, cell: usize) -> f64 {
        let c = self.corners(cell);
        let mut pts = vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
        pts.extend(q1::gauss_2d(2).into_iter().map(|(a, b, _)| (a, b)));
        pts.into_iter()
            .map(|(xi, eta)| q1::det2(&q1::jacobian(&c, xi, eta)))
            .fold(f64::INFINITY, f64::min)
    }

    /// Checks orientation, edge tagging and array sizes.
    pub fn validate(&self) -> Result<()> {
        if self.region_tags.len() != self.cells.len() {
            return Err(Error::InvalidArgument("one region tag per cell required".into()));
        }
        for cell in 0..self.cells.len() {
            let det = self.min_jacobian(cell);
            if !(det > 0.0) {
                return Err(Error::DegenerateCell { cell, det });
            }
        }
        // An edge is on the boundary iff exactly one cell uses it.
        let mut edge_count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for c in &self.cells {
            for k in 0..4 {
                let (a, b) = (c[k], c[(k + 1) % 4]);
                *edge_count.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        let mut tagged: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for e in &self.boundary_edges {
            let (a, b) = (e.nodes[0], e.nodes[1]);
            *tagged.entry((a.min(b), a.max(b))).or_default() += 1;
        }
        for (edge, &count) in &edge_count {
            let t = tagged.get(edge).copied().unwrap_or(0);
            let expected = usize::from(count == 1);
            if t != expected {
                return Err(Error::InvalidArgument(format!(
                    "edge {edge:?} used by {count} cells carries {t} boundary tags"
                )));
            }
        }
        if tagged.len() != self.boundary_edges.len() {
            return Err(Error::InvalidArgument("duplicate boundary edge".into()));
        }
        Ok(())
    }

    /// Number of cells per region tag.
    pub fn region_histogram(&self) -> BTreeMap<RegionTag, usize> {
        let mut h = BTreeMap::new();
        for t in &self.region_tags {
            *h.entry(*t).or_default() += 1;
        }
        h
    }
}
