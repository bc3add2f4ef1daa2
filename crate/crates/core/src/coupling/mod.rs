//! Coupling transformation of a pair of uncoupled channels.

mod model;
mod params;

pub use model::{Transformation, TransformedJost, TransformedModel};
pub use params::{CouplingParams, GeneralCoupling};

#[cfg(test)]
mod tests;
