//! Q1 finite elements with SUPG stabilization.

pub mod assembly;
pub mod problem;
pub mod q1;

pub use assembly::{
    apply_dirichlet, assemble_supg, assemble_supg_with, cell_peclet, cell_taus, dirichlet_values, discretize,
    stabilization_tau, DiscreteSystem, DEFAULT_QUADRATURE,
};
pub use problem::{ProblemSpec, TauRule};
