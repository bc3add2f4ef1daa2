//! Independent numerical check: integrate the matrix radial equation from
//! the origin and read off the S-matrix by matching at several radii.

// negated comparisons below are deliberate: NaN must fail every check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod integrator;
mod matching;
mod shooting;
mod tail;

pub use integrator::{integrate, integrate_block, integrate_regular, regular_start, regular_start_with, Potential, State, Stats};
pub use matching::{extract_jost, extract_jost_with, extract_smatrix, extrapolate, max_abs, smatrix_from_jost};
pub use tail::{outer_jost, TailFit};
pub use shooting::{bound_state_check, BoundStateCheck};

use crate::coupling::TransformedModel;
use crate::error::Result;
use crate::scattering::{s_matrix, unitarity_defect, AlgebraicModel};
use crate::scenario::OracleSettings;
use nalgebra::Matrix2;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};


/// Reference solutions used at the matching radius.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Matching {
    /// diag h_l(+-kR): exact only once the potential is purely centrifugal.
    FreeWaves,
    /// Jost solution integrated in from a far radius, started there from the
    /// large-r expansion of a fitted inverse-power tail.
    TailCorrected,
}

/// Integration and matching settings.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleOptions {
    pub radii: Vec<f64>,
    pub r0: f64,
    pub rtol: f64,
    /// Allowed max-norm deviation from the analytic S-matrix.
    pub tolerance: f64,
    pub matching: Matching,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { radii: vec![30.0, 45.0, 60.0], r0: 1e-4, rtol: 1e-11, tolerance: 1e-6, matching: Matching::TailCorrected }
    }
}

impl From<&OracleSettings> for OracleOptions {
    fn from(s: &OracleSettings) -> Self {
        OracleOptions { radii: s.radii.clone(), rtol: s.rtol, tolerance: s.tolerance, matching: s.matching, ..OracleOptions::default() }
    }
}

/// Start of the inward integration for tail-corrected matching.
pub fn far_radius(radii: &[f64], k: f64) -> f64 {
    let r_max = radii.iter().copied().fold(0.0, f64::max);
    r_max.max(40.0 / k)
}

/// S-matrix at each matching radius and its 1/R extrapolation.
#[derive(Clone, Debug)]
pub struct NumericalS {
    pub per_radius: Vec<Matrix2<Complex64>>,
    pub extrapolated: Matrix2<Complex64>,
}

/// Integrate once per k and match at every radius.
pub fn numerical_smatrix(v: &Potential, nu_tilde: [u32; 2], l_tilde: [u32; 2], k: f64, opts: &OracleOptions) -> Result<NumericalS> {
    let states = integrate_regular(v, nu_tilde, k, opts.r0, &opts.radii, opts.rtol)?;
    let per_radius = match opts.matching {
        Matching::FreeWaves => states.iter().map(|s| extract_smatrix(s, l_tilde, k)).collect::<Result<Vec<_>>>()?,
        Matching::TailCorrected => {
            let r_far = far_radius(&opts.radii, k);
            let fit = TailFit::fit(v, l_tilde, r_far)?;
            let jost = outer_jost(v, &fit, k, r_far, &opts.radii, opts.rtol)?;
            states
                .iter()
                .zip(&jost)
                .map(|(s, (f, df))| {
                    let (fk, fmk) = extract_jost_with(s, f, df, k)?;
                    smatrix_from_jost(&fk, &fmk, l_tilde, s.r)
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    let extrapolated = if per_radius.len() >= 2 { extrapolate(&opts.radii, &per_radius) } else { per_radius[0] };
    Ok(NumericalS { per_radius, extrapolated })
}

fn to_array(m: &Matrix2<Complex64>) -> [[Complex64; 2]; 2] {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

/// Oracle result at one wavenumber.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OracleReport {
    pub k: f64,
    pub matching_radii: Vec<f64>,
    pub s_num: [[Complex64; 2]; 2],
    pub s_analytic: [[Complex64; 2]; 2],
    pub deviation: f64,
    /// Deviation at each matching radius before extrapolation.
    pub radius_deviations: Vec<f64>,
    pub unitarity_defect: f64,
    pub converged: bool,
    pub failures: Vec<String>,
}

/// Largest allowed rise of the deviation along the radius sequence.
pub const NOISE_FLOOR: f64 = 1e-9;
pub const UNITARITY_TOLERANCE: f64 = 1e-6;

/// Compare the numerical S-matrix with a reference value; every failed check is listed.
pub fn oracle_report(v: &Potential, nu_tilde: [u32; 2], l_tilde: [u32; 2], k: f64, analytic: Matrix2<Complex64>, opts: &OracleOptions) -> OracleReport {
    let mut failures = Vec::new();
    let nan = Complex64::new(f64::NAN, f64::NAN);
    let mut report = OracleReport {
        k,
        matching_radii: opts.radii.clone(),
        s_num: [[nan; 2]; 2],
        s_analytic: to_array(&analytic),
        deviation: f64::NAN,
        radius_deviations: Vec::new(),
        unitarity_defect: f64::NAN,
        converged: false,
        failures: Vec::new(),
    };
    match numerical_smatrix(v, nu_tilde, l_tilde, k, opts) {
        Err(e) => failures.push(format!("{}: {e}", e.kind())),
        Ok(num) => {
            report.s_num = to_array(&num.extrapolated);
            report.deviation = max_abs(&(num.extrapolated - analytic));
            report.radius_deviations = num.per_radius.iter().map(|s| max_abs(&(s - analytic))).collect();
            report.unitarity_defect = unitarity_defect(&num.extrapolated);
            let mut seq = report.radius_deviations.clone();
            seq.push(report.deviation);
            if seq.windows(2).any(|w| w[1] > w[0] + NOISE_FLOOR) {
                failures.push(format!("extrapolation: deviation not monotone over radii {seq:?}"));
            }
            if !(report.unitarity_defect <= UNITARITY_TOLERANCE) {
                failures.push(format!("unitarity: defect {:.3e}", report.unitarity_defect));
            }
            if !(report.deviation <= opts.tolerance) {
                failures.push(format!("deviation: {:.3e} exceeds {:.1e}", report.deviation, opts.tolerance));
            }
        }
    }
    report.converged = failures.is_empty();
    report.failures = failures;
    report
}

/// Invariants of the transformation checked alongside the oracle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SideChecks {
    /// max |r w(r) + diag(nu)| at r = 1e-3.
    pub origin_residual: f64,
    /// Max relative residual of the transformed Jost solution in the radial equation.
    pub intertwining_residual: f64,
    /// Decay rate of the bound-state column of Phi over r in [20, 30], relative to kappa.
    pub bound_column_rate: f64,
    pub bound_column_vanishes: bool,
    pub bound_state: BoundStateCheck,
}

pub const ORIGIN_TOLERANCE: f64 = 1e-2;
pub const INTERTWINING_TOLERANCE: f64 = 1e-5;

/// Full verification of a transformed model.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub reports: Vec<OracleReport>,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub side_checks: Option<SideChecks>,
    pub passed: bool,
    pub failures: Vec<String>,
}

/// Finite-difference residual of the transformed Jost solution in the
/// transformed equation, relative to 1 + |k^2 f|.
pub fn intertwining_residual(m: &TransformedModel, k: f64, r: f64) -> Result<f64> {
    let k = Complex64::new(k, 0.0);
    let j = m.jost_at(k)?;
    let (f, _) = j.eval(r)?;
    let d = |h: f64| -> Result<Matrix2<Complex64>> { Ok((j.eval(r + h)?.1 - j.eval(r - h)?.1) / Complex64::new(2.0 * h, 0.0)) };
    let h = 1e-3;
    let f2 = (d(h / 2.0)? * Complex64::new(4.0, 0.0) - d(h)?) / Complex64::new(3.0, 0.0);
    let v = m.transformed_potential(r)?.map(|x| Complex64::new(x, 0.0));
    let res = -f2 + v * f - f * (k * k);
    Ok(max_abs(&res) / (1.0 + max_abs(&(f * (k * k)))))
}

/// Origin behaviour, intertwining, the decaying column of the opposite
/// solution and the bound state at E = -kappa^2.
pub fn side_checks(m: &TransformedModel, opts: &OracleOptions) -> Result<SideChecks> {
    let r = 1e-3;
    let (w, _) = m.superpotential(r)?;
    let nu = m.nu();
    let origin = (w * r + Matrix2::new(f64::from(nu[0]), 0.0, 0.0, f64::from(nu[1]))).amax();
    let mut inter: f64 = 0.0;
    for i in 0..5 {
        inter = inter.max(intertwining_residual(m, 0.3 + 0.6 * i as f64, 0.7 + 0.9 * i as f64)?);
    }
    let kappa = m.params().kappa;
    let col = |r: f64| -> Result<f64> {
        let p = m.opposite_solution(r)?;
        Ok(p.u.column(0).norm().ln() + p.log_scale[0])
    };
    let rate = (col(30.0)? - col(20.0)?) / 10.0 / kappa;
    let vanishes = col(1e-3)? < col(0.1)?;
    let v = |r: f64| m.transformed_potential(r);
    let bound = bound_state_check(&v, m.nu_tilde(), m.l_tilde(), kappa, opts);
    Ok(SideChecks { origin_residual: origin, intertwining_residual: inter, bound_column_rate: rate, bound_column_vanishes: vanishes, bound_state: bound })
}

/// One oracle report per k, plus the side checks. Never fails: problems
/// are collected in the reports.
pub fn verify_model(model: &TransformedModel, ks: &[f64], opts: &OracleOptions) -> VerifyReport {
    let v = |r: f64| model.transformed_potential(r);
    let mut failures = Vec::new();
    let alg = AlgebraicModel::from_model(model);
    let reports: Vec<OracleReport> = ks
        .par_iter()
        .map(|&k| {
            let analytic = s_matrix(&alg, k);
            match analytic {
                Ok(s) => oracle_report(&v, model.nu_tilde(), model.l_tilde(), k, s, opts),
                Err(e) => {
                    let nan = Complex64::new(f64::NAN, f64::NAN);
                    OracleReport {
                        k,
                        matching_radii: opts.radii.clone(),
                        s_num: [[nan; 2]; 2],
                        s_analytic: [[nan; 2]; 2],
                        deviation: f64::NAN,
                        radius_deviations: Vec::new(),
                        unitarity_defect: f64::NAN,
                        converged: false,
                        failures: vec![format!("analytic: {e}")],
                    }
                }
            }
        })
        .collect();
    for r in &reports {
        for f in &r.failures {
            failures.push(format!("k={}: {f}", r.k));
        }
    }
    let side = match side_checks(model, opts) {
        Ok(s) => {
            if !(s.origin_residual <= ORIGIN_TOLERANCE) {
                failures.push(format!("origin: |r w + nu| = {:.3e}", s.origin_residual));
            }
            if !(s.intertwining_residual <= INTERTWINING_TOLERANCE) {
                failures.push(format!("intertwining: residual {:.3e}", s.intertwining_residual));
            }
            if !((s.bound_column_rate + 1.0).abs() <= 0.05) || !s.bound_column_vanishes {
                failures.push(format!("bound column: rate {:.4} kappa, vanishes at origin {}", s.bound_column_rate, s.bound_column_vanishes));
            }
            if !s.bound_state.found {
                failures.push(format!(
                    "bound state: no square-integrable solution at E = -kappa^2 (ratio {:.3e}, controls {:?})",
                    s.bound_state.ratio, s.bound_state.control_ratios
                ));
            }
            Some(s)
        }
        Err(e) => {
            failures.push(format!("side checks: {e}"));
            None
        }
    };
    let max_deviation = if reports.iter().any(|r| r.deviation.is_nan()) {
        f64::NAN
    } else {
        reports.iter().map(|r| r.deviation).fold(0.0, f64::max)
    };
    VerifyReport { reports, max_deviation, tolerance: opts.tolerance, side_checks: side, passed: failures.is_empty(), failures }
}
