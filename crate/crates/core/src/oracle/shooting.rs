use super::integrator::{integrate, regular_start_with, Potential, State, Stats};
use super::OracleOptions;
use crate::error::Result;
use crate::specfun::riccati_hankel;
use nalgebra::{Matrix2, Matrix4};
use num_complex::Complex64;
use serde::Serialize;

const MATCH_RADIUS: f64 = 1.5;
const OUTER_RADIUS: f64 = 20.0;
pub const BOUND_RATIO: f64 = 1e-6;
pub const CONTROL_RATIO: f64 = 1e-4;

/// Shooting test for a square-integrable solution at E = -kappa^2.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundStateCheck {
    pub kappa: f64,
    /// sigma_min / sigma_max of the matching matrix at kappa.
    pub ratio: f64,
    /// Same ratio at 0.8 kappa and 1.2 kappa.
    pub control_ratios: [f64; 2],
    pub found: bool,
    pub error: Option<String>,
}

/// Decaying solution at large r, diag h_l(i kappa r).
fn decaying_start(l_tilde: [u32; 2], kappa: f64, r: f64) -> Result<State> {
    let mut psi = Matrix2::zeros();
    let mut dpsi = Matrix2::zeros();
    for j in 0..2 {
        let (h, dh) = riccati_hankel(l_tilde[j], Complex64::new(0.0, kappa * r))?;
        // normalize away e^{-kappa r}
        let s = (kappa * r).exp();
        psi[(j, j)] = (h * s).re;
        dpsi[(j, j)] = (Complex64::new(0.0, kappa) * dh * s).re;
    }
    Ok(State { r, psi, dpsi })
}

fn column_normalized_ratio(out: &State, inn: &State) -> f64 {
    let mut m = Matrix4::zeros();
    for j in 0..2 {
        for i in 0..2 {
            m[(i, j)] = out.psi[(i, j)];
            m[(i + 2, j)] = out.dpsi[(i, j)];
            m[(i, j + 2)] = inn.psi[(i, j)];
            m[(i + 2, j + 2)] = inn.dpsi[(i, j)];
        }
    }
    for j in 0..4 {
        let n = m.column(j).norm();
        if n > 0.0 {
            m.column_mut(j).scale_mut(1.0 / n);
        }
    }
    let s = m.svd(false, false).singular_values;
    s.min() / s.max()
}

fn matching_ratio(v: &Potential, nu_tilde: [u32; 2], l_tilde: [u32; 2], kappa: f64, opts: &OracleOptions) -> Result<f64> {
    let e = -kappa * kappa;
    let mut stats = Stats::default();
    let out = integrate(v, e, regular_start_with(v, nu_tilde, e, opts.r0)?, &[MATCH_RADIUS], opts.rtol, &mut stats)?;
    let inn = integrate(v, e, decaying_start(l_tilde, kappa, OUTER_RADIUS)?, &[MATCH_RADIUS], opts.rtol, &mut stats)?;
    Ok(column_normalized_ratio(&out[0], &inn[0]))
}

/// The regular and decaying solution spaces at E = -kappa^2 intersect
/// iff the matching matrix is singular.
pub fn bound_state_check(v: &Potential, nu_tilde: [u32; 2], l_tilde: [u32; 2], kappa: f64, opts: &OracleOptions) -> BoundStateCheck {
    let run = || -> Result<(f64, [f64; 2])> {
        let at = matching_ratio(v, nu_tilde, l_tilde, kappa, opts)?;
        let lo = matching_ratio(v, nu_tilde, l_tilde, 0.8 * kappa, opts)?;
        let hi = matching_ratio(v, nu_tilde, l_tilde, 1.2 * kappa, opts)?;
        Ok((at, [lo, hi]))
    };
    match run() {
        Ok((ratio, control_ratios)) => BoundStateCheck {
            kappa,
            ratio,
            control_ratios,
            found: ratio < BOUND_RATIO && control_ratios.iter().all(|&c| c > CONTROL_RATIO),
            error: None,
        },
        Err(e) => BoundStateCheck { kappa, ratio: f64::NAN, control_ratios: [f64::NAN; 2], found: false, error: Some(e.to_string()) },
    }
}
