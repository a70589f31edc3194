//! Geometric multigrid on nested quadrilateral meshes.

pub mod prolongation;
pub mod solver;

pub use prolongation::{build_prolongation, mask_prolongation};
pub use solver::{
    discretize_hierarchy, level_blocks, mg_setup, CycleCall, MgConfig, MgLevel, MgSolver, RelaxMode,
};
