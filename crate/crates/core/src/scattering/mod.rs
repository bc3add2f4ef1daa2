//! Jost and S-matrices of transformed models, eigenphases, mixing angles,
//! spectra and low-energy diagnostics.

mod diagnostics;
mod jost;
mod mixing;
mod smatrix;
mod spectrum;

pub use diagnostics::{
    diagnostics, fitted_scattering_lengths, jost_rotation_residual, mixing_exponent, CouplingRatioStatistics, Diagnostics,
    MixingStatistics, ScatteringLengths,
};
pub use jost::{determinant_factor, transformed_jost, AlgebraicModel};
pub use mixing::{
    kappa_for_scattering_lengths, mixing_closed_form, mixing_cosech_pair, mixing_even_simplified, mixing_odd_simplified,
    mixing_sd_pair, MixingCase, MixingInputs, TanTwoEpsilon,
};
pub use smatrix::{
    eigenphases, levinson_drop, s_matrix, s_matrix_from_diagonal, s_matrix_general, sweep, symmetry_defect, track,
    unitarity_defect, ScatteringPoint,
};
pub use spectrum::{spectrum, SearchBox, SpectralCatalog, SpectralZero};
