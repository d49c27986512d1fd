//! Two-dimensional baselines: finite-element Poisson with direct and
//! iterative solvers, and pseudo-spectral Navier–Stokes.

pub mod direct;
pub mod iterative;
pub mod poisson;
pub mod sparse;
pub mod spectral;

pub use direct::{lu_solve, LuFactor};
pub use iterative::{cg_solve, cg_solve_from, jacobi_solve, jacobi_solve_from, IterativeReport};
pub use poisson::{assemble_poisson, poisson_field, PoissonBoundary};
pub use sparse::SparseSystem;
pub use spectral::{ps_ns_solve, to_physical, Forcing, SpectralState};
