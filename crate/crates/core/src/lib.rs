//! Numerics for a one-dimensional gas of charge-1 and charge-2 particles in a
//! Gaussian confining potential: Pfaffian partition functions, skew-orthogonal
//! polynomial kernels, correlation functions, population statistics and a
//! Monte Carlo sampler.

pub mod ensemble;
pub mod error;
pub mod kernel;
pub mod linalg;
pub mod psi;
pub mod quadrature;
pub mod sampler;
pub mod skewpoly;
pub mod specfun;

pub use error::{Error, Result};
