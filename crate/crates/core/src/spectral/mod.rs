//! Discrete function spaces on `T² × (0, h)`: grids, transforms, spectral
//! derivatives, dealiasing and quadrature.

mod basis;
mod ops;
mod domain;
mod field;

pub use basis::{make_basis, Basis, DiffOp};
pub use domain::DomainSpec;
pub use field::{Field2, Field3, Parity, Spec2, Spec3, VectorField2, VectorField3};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("invalid domain: {0}")]
    InvalidSpec(String),
    #[error("shape mismatch: expected {expected} samples, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("vertical derivative requested on a horizontal field")]
    UnsupportedAxis,
    #[error("field has no single vertical expansion")]
    NotRepresentable,
}

#[cfg(test)]
mod tests;
