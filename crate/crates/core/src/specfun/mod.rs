//! Closed-form special functions and Wronskian machinery.

mod exppoly;
mod hankel;
mod seed;
mod series;
mod wronskian;

pub use exppoly::{Aux, ExpPoly, ExpTerm};
pub use hankel::{hankel_coefficients, riccati_hankel};
pub use seed::SeedSolution;
pub use series::Series;
pub use wronskian::{
    echelon, series_wronskian, wronskian, wronskian_derivatives, ExpPolyTower, Scaled, ScaledTower,
    TowerProvider,
};

/// (2n-1)!! with (-1)!! = 1.
pub fn double_factorial_odd(n: u32) -> f64 {
    (1..=n).map(|j| f64::from(2 * j - 1)).product()
}
