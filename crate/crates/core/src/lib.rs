//! Geometric multigrid with line relaxation for SUPG discretizations of
//! singularly perturbed convection-diffusion problems on layer-adapted
//! (Shishkin) meshes.

pub mod benchmarks;
pub mod driver;
pub mod error;
pub mod fem;
pub mod linalg;
pub mod mesh;
pub mod multigrid;
pub mod relax;

pub use benchmarks::{Case, ErrorNorms};
pub use driver::{run_benchmark, RunConfig, RunReport};
pub use error::{Error, Result};
pub use fem::{ProblemSpec, TauRule};
pub use linalg::{CsrMatrix, KrylovResult, LinearOperator, LuFactorization};
pub use mesh::{MeshHierarchy, Partition1D, QuadMesh, RegionTag};
pub use multigrid::{mg_setup, MgConfig, MgSolver, RelaxMode};
pub use relax::{BlockRelaxer, BlockSet, Divisions, LineScheme};
