pub mod continuity;
pub mod diagnostics;
pub mod error;
pub mod harness;
pub mod hydrostatic;
pub mod io;
pub mod momentum;
pub mod random;
pub mod spectral;

pub use error::SolverError;
