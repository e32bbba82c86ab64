use thiserror::Error;

use crate::spectrum::DegeneracyClass;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range {min}..={max}")]
    IndexOutOfRange { index: usize, min: usize, max: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not traceless (trace {trace:e})")]
    NotTraceless { trace: f64 },

    #[error("tensor is not antisymmetric (max deviation {deviation:e})")]
    NotAntisymmetric { deviation: f64 },

    #[error("tensor is not fully symmetric (max deviation {deviation:e})")]
    NotSymmetric { deviation: f64 },

    #[error("matrix is not special unitary (unitarity residual {unitarity:e}, |det - 1| = {det:e})")]
    NotSpecialUnitary { unitarity: f64, det: f64 },

    #[error("degenerate input: spectrum is {class}")]
    DegenerateInput { class: DegeneracyClass },

    #[error("point is not near a double-degeneracy surface (phi = {phi})")]
    NotNearDegeneracy { phi: f64 },

    #[error("path under-resolved: overlap {overlap:e} at step {step} is below the guard")]
    UnderResolved { step: usize, overlap: f64 },

    #[error("quadrature did not converge (order {order}, last change {change:e})")]
    NotConverged { order: usize, change: f64 },

    #[error("imaginary residue {residue:e} in real conversion")]
    ImaginaryResidue { residue: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}
