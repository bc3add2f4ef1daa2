//! Exactly solvable coupled-channel scattering models built by coupling
//! transformations of uncoupled one-channel potentials, with analytic Jost
//! and S-matrices and an independent radial-equation oracle.

pub mod coupling;
pub mod error;
pub mod onechannel;
pub mod oracle;
pub mod scattering;
pub mod scenario;
pub mod specfun;

pub use error::{Error, Result};
pub use num_complex::Complex64;
