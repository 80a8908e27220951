//! Quadrature observables of a single bosonic mode in a truncated
//! Hermite-function (Fock) basis.

pub mod error;
pub mod fock;
pub mod grid;
pub mod linalg;
pub mod moments;
pub mod phase_space;
pub mod quadrature;
pub mod sets;
pub mod special;
pub mod tomography;
pub mod wigner_radon;

pub use error::{Error, Result};
