use super::jost::AlgebraicModel;
use super::mixing::kappa_for_scattering_lengths;
use super::smatrix::{levinson_drop, s_matrix, s_matrix_from_diagonal, sweep};
use super::spectrum::spectrum;
use crate::coupling::TransformedModel;
use crate::error::{Error, Result};
use nalgebra::Matrix2;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixingStatistics {
    pub epsilon_mean: f64,
    pub epsilon_variance: f64,
    pub degenerate_points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CouplingRatioStatistics {
    pub sigma_min: f64,
    pub sigma_max: f64,
    /// (max - min) / max |sigma|
    pub relative_variation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScatteringLengths {
    /// -lim tan(delta_j)/k of the transformed eigenphases
    pub fitted: [f64; 2],
    /// channel scattering lengths of the uncoupled pair
    pub uncoupled: [f64; 2],
    /// |fitted_j - uncoupled_{other j}| / |uncoupled_{other j}|
    pub swapped_relative_error: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Diagnostics {
    pub mixing: MixingStatistics,
    pub coupling_ratio: CouplingRatioStatistics,
    pub scattering_lengths: Option<ScatteringLengths>,
    /// slope of ln|epsilon| against ln k on [1e-3, 1e-2]
    pub mixing_exponent: f64,
    pub expected_mixing_exponent: u32,
    /// delta_{d;2}(0) - delta_{d;1}(0)
    pub zero_energy_phase_difference: f64,
    /// distance of that difference from (n + 1/2) pi
    pub zero_energy_condition_residual: f64,
    /// kappa fixed by the uncoupled scattering lengths and q (two s waves)
    pub kappa_from_scattering_lengths: Option<f64>,
    /// min over constant rotations of the largest relative off-diagonal
    /// element of the rotated Jost matrix on the k-grid
    pub jost_rotation_residual: f64,
    pub route_difference: f64,
    pub levinson_drop_over_pi: f64,
    pub bound_states: usize,
}

/// Least-squares fit y = c0 + c1 x.
fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let c1 = sxy / sxx;
    (my - c1 * mx, c1)
}

fn low_energy_grid() -> Vec<f64> {
    (0..11).map(|i| 1e-3 * 10f64.powf(i as f64 / 10.0)).collect()
}

/// Scattering lengths from tan(delta_j)/k = -a_j + c k^2 on k in [1e-3, 1e-2].
pub fn fitted_scattering_lengths(model: &AlgebraicModel) -> Result<[f64; 2]> {
    let ks = low_energy_grid();
    let pts = sweep(model, &ks)?;
    let x: Vec<f64> = ks.iter().map(|k| k * k).collect();
    let mut out = [0.0; 2];
    for (j, o) in out.iter_mut().enumerate() {
        let y: Vec<f64> = pts.iter().map(|p| p.delta[j].tan() / p.k).collect();
        *o = -linear_fit(&x, &y).0;
    }
    Ok(out)
}

/// Exponent of epsilon(k) ~ k^n from a log-log fit on [1e-3, 1e-2].
pub fn mixing_exponent(model: &AlgebraicModel) -> Result<f64> {
    let ks = low_energy_grid();
    let pts = sweep(model, &ks)?;
    let x: Vec<f64> = ks.iter().map(|k| k.ln()).collect();
    let y: Vec<f64> = pts.iter().map(|p| p.epsilon.abs().ln()).collect();
    Ok(linear_fit(&x, &y).1)
}

fn rotated_offdiag(theta: f64, fs: &[Matrix2<Complex64>]) -> f64 {
    let (s, c) = theta.sin_cos();
    let r = Matrix2::new(c, s, -s, c).map(|v| Complex64::new(v, 0.0));
    fs.iter()
        .map(|f| {
            let d = r.transpose() * f * r;
            let off = d[(0, 1)].norm().max(d[(1, 0)].norm());
            off / d[(0, 0)].norm().max(d[(1, 1)].norm())
        })
        .fold(0.0, f64::max)
}

/// How far the Jost matrix is from being diagonal in one fixed rotated basis.
pub fn jost_rotation_residual(model: &AlgebraicModel, ks: &[f64]) -> Result<f64> {
    let fs: Vec<Matrix2<Complex64>> = ks
        .iter()
        .map(|&k| {
            let f = model.jost_matrix(Complex64::new(k, 0.0))?;
            Ok(Matrix2::new(f[(0, 0)], f[(0, 1)], f[(1, 0)], f[(1, 1)]))
        })
        .collect::<Result<_>>()?;
    let n = 1800;
    let (mut best, mut arg) = (f64::INFINITY, 0.0);
    for i in 0..n {
        let t = PI * i as f64 / n as f64;
        let v = rotated_offdiag(t, &fs);
        if v < best {
            best = v;
            arg = t;
        }
    }
    // golden-section refinement around the best grid angle
    let h = PI / n as f64;
    let (mut a, mut b) = (arg - h, arg + h);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if rotated_offdiag(c, &fs) < rotated_offdiag(d, &fs) {
            b = d;
        } else {
            a = c;
        }
    }
    Ok(best.min(rotated_offdiag(0.5 * (a + b), &fs)))
}

/// Triviality, low-energy and consistency diagnostics of a two-channel model.
pub fn diagnostics(model: &TransformedModel, ks: &[f64], rs: &[f64]) -> Result<Diagnostics> {
    if ks.is_empty() || rs.is_empty() {
        return Err(Error::Contract("diagnostics need nonempty k and r grids".into()));
    }
    let alg = AlgebraicModel::from_model(model);
    let pts = sweep(&alg, ks)?;
    let eps: Vec<f64> = pts.iter().filter(|p| !p.degenerate).map(|p| p.epsilon).collect();
    let n = eps.len().max(1) as f64;
    let mean = eps.iter().sum::<f64>() / n;
    let var = eps.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / n;
    let mixing = MixingStatistics { epsilon_mean: mean, epsilon_variance: var, degenerate_points: pts.len() - eps.len() };

    let sig: Vec<f64> = rs.iter().map(|&r| model.coupling_ratio(r)).collect::<Result<_>>()?;
    let (lo, hi) = sig.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &s| (a.min(s), b.max(s)));
    let coupling_ratio = CouplingRatioStatistics { sigma_min: lo, sigma_max: hi, relative_variation: (hi - lo) / hi.abs().max(lo.abs()) };

    let ch = model.channels();
    let uncoupled = [ch[0].scattering_length(), ch[1].scattering_length()];
    let scattering_lengths = match (uncoupled, model.l_tilde()) {
        ([Some(a1), Some(a2)], [0, 0]) => {
            let fitted = fitted_scattering_lengths(&alg)?;
            Some(ScatteringLengths {
                fitted,
                uncoupled: [a1, a2],
                swapped_relative_error: [((fitted[0] - a2) / a2).abs(), ((fitted[1] - a1) / a1).abs()],
            })
        }
        _ => None,
    };
    let kappa_from_scattering_lengths = match uncoupled {
        [Some(a1), Some(a2)] if a1 != a2 => Some(kappa_for_scattering_lengths(a1, a2, model.params().q)),
        _ => None,
    };

    let l = model.l();
    let k0 = 1e-9;
    let dd = ch[1].phase_shift(k0) - ch[0].phase_shift(k0);
    let x = (dd / PI - 0.5).rem_euclid(1.0);
    let zero_energy_condition_residual = PI * x.min(1.0 - x);

    let mut route_difference: f64 = 0.0;
    for &k in ks {
        let a = s_matrix(&alg, k)?;
        let b = s_matrix_from_diagonal(&alg, k)?;
        for i in 0..4 {
            route_difference = route_difference.max((a[i] - b[i]).norm());
        }
    }
    let stride = (ks.len() / 50).max(1);
    let sample: Vec<f64> = ks.iter().step_by(stride).copied().collect();
    let cat = spectrum(&alg, None);
    Ok(Diagnostics {
        mixing,
        coupling_ratio,
        scattering_lengths,
        mixing_exponent: mixing_exponent(&alg)?,
        expected_mixing_exponent: l[0].abs_diff(l[1]),
        zero_energy_phase_difference: dd,
        zero_energy_condition_residual,
        kappa_from_scattering_lengths,
        jost_rotation_residual: jost_rotation_residual(&alg, &sample)?,
        route_difference,
        levinson_drop_over_pi: levinson_drop(&alg, 1e-9, 1e9, 40)? / PI,
        bound_states: cat.bound.iter().map(|z| z.degeneracy).sum(),
    })
}
