//! Jacobi spectral collocation for 1D weakly singular nonlocal diffusion
//! problems with Dirichlet-type volume constraints.

#![allow(clippy::excessive_precision)]

pub mod cli;
pub mod collocation;
pub mod error;
pub mod jacobi;
pub mod linalg;
pub mod nonlocal;
pub mod oracle;
pub mod special;

pub use error::{Error, Result};
