//! Sparse storage, direct factorizations and Krylov/Chebyshev iterations.

pub mod chebyshev;
pub mod csr;
pub mod eig;
pub mod krylov;
pub mod lu;
pub mod mtx;
pub mod operator;

pub use chebyshev::{chebyshev_apply, chebyshev_interval};
pub use csr::CsrMatrix;
pub use eig::{estimate_max_eig, DEFAULT_ARNOLDI_STEPS};
pub use krylov::{fgmres, gmres_steps, KrylovResult};
pub use lu::{lu_solve, BandedLu, DenseLu, LuFactorization, SparseLu};
pub use operator::{FnOperator, Identity, LinearOperator};
