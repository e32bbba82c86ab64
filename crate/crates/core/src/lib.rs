//! Spectra, adjoint-orbit geometry, Berry curvature and geometric phases of
//! three-level Hamiltonians `H = xi_0 I + 1/2 xi·lambda`.

pub mod cli;
pub mod curvature;
pub mod degeneracy;
pub mod error;
pub mod holonomy;
pub mod orbit;
pub mod selfcheck;
pub mod spectrum;
pub mod su3;
pub mod tensor;
pub mod un_kinematics;

pub use curvature::{CurvatureTwoForm, Level};
pub use error::{Error, Result};
pub use spectrum::{DegeneracyClass, SpectralData};
pub use su3::{AdjointImage, GroupElement, OctetVector};
pub use un_kinematics::HermitianMatrix;
