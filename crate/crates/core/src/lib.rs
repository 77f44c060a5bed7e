//! Semi-discrete Active Flux on Cartesian grids: a time-stepping solver for
//! linear acoustics (2-d, 3-d) and linear advection (1-d), together with the
//! discrete Fourier analysis of the same scheme.

pub mod cases;
pub mod error;
pub mod expr;
pub mod grid;
pub mod laurent;
pub mod linalg;
pub mod poly;
pub mod reconstruction;
pub mod scheme;
pub mod spectral;

pub use error::{Error, Result};
pub use grid::{accessible_dofs, total_average, Boundary, DofField, GridSpec, Kind, State};
pub use scheme::{Model, Scheme, Splitting, Stepper};
