//! Classical PDE baselines and a fair cost–accuracy comparison harness.

pub mod bench;
pub mod cli;
pub mod error;
pub mod exact;
pub mod field;
pub mod grid;
pub mod ic;
pub mod io;
pub mod norms;
pub mod quadrature;
pub mod solvers1d;
pub mod solvers2d;

pub use error::{Error, Result};
pub use field::{Dof, Field, Layout};
pub use grid::{build_grid, Grid, Grid1D, Grid2D, GridSpec};
pub use ic::{sample_ic, InitialCondition, SampledIc};
pub use norms::{compute_all, compute_error, restrict_field, ErrorMetrics, Metric, Reference};
