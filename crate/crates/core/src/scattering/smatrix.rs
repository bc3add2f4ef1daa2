use super::jost::AlgebraicModel;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Below this |S22 - S11| + 2|S12| the mixing angle is undefined.
const DEGENERATE: f64 = 1e-12;
/// Accepted departure from unitarity and symmetry.
const UNITARITY: f64 = 1e-8;

fn phase(l: u32) -> Complex64 {
    Complex64::i().powu(l)
}

fn to_fixed(m: &DMatrix<Complex64>) -> Matrix2<Complex64> {
    Matrix2::new(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)])
}

/// e^{i l pi/2} F_c(-k) F_c(k)^{-1} e^{i l pi/2} with relabeled l.
pub fn s_matrix_general(model: &AlgebraicModel, k: f64) -> Result<DMatrix<Complex64>> {
    let kc = Complex64::new(k, 0.0);
    let fp = model.jost_matrix(kc)?;
    let fm = model.jost_matrix(-kc)?;
    let inv = fp
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Domain(format!("Jost matrix is singular at k = {k}")))?;
    let p: Vec<Complex64> = model.l_tilde().iter().map(|&l| phase(l)).collect();
    let s = fm * inv;
    Ok(DMatrix::from_fn(s.nrows(), s.ncols(), |i, j| p[i] * s[(i, j)] * p[j]))
}

/// S-matrix of a two-channel model from its Jost matrix.
pub fn s_matrix(model: &AlgebraicModel, k: f64) -> Result<Matrix2<Complex64>> {
    if model.n() != 2 {
        return Err(Error::Contract(format!("two-channel S-matrix requested for {} channels", model.n())));
    }
    Ok(to_fixed(&s_matrix_general(model, k)?))
}

/// The same S-matrix from the uncoupled one:
/// e^{i l~ pi/2} (w_inf - ik) (-1)^l S_d (w_inf + ik)^{-1} e^{i l~ pi/2}.
pub fn s_matrix_from_diagonal(model: &AlgebraicModel, k: f64) -> Result<DMatrix<Complex64>> {
    let n = model.n();
    let ik = Complex64::new(0.0, k);
    let w = model.w_infinity().map(|v| Complex64::new(v, 0.0));
    let id = DMatrix::<Complex64>::identity(n, n);
    let mut sd = DMatrix::<Complex64>::zeros(n, n);
    for (j, f) in model.channels().iter().enumerate() {
        let l = model.l()[j];
        let sign = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
        sd[(j, j)] = f.s_matrix(l, k)? * sign;
    }
    let right = (&w + &id * ik)
        .try_inverse()
        .ok_or_else(|| Error::Domain(format!("w_inf + ik is singular at k = {k}")))?;
    let s = (&w - &id * ik) * sd * right;
    let p: Vec<Complex64> = model.l_tilde().iter().map(|&l| phase(l)).collect();
    Ok(DMatrix::from_fn(n, n, |i, j| p[i] * s[(i, j)] * p[j]))
}

/// S at one wavenumber with eigenphases and mixing angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScatteringPoint {
    pub k: f64,
    pub s: Matrix2<Complex64>,
    pub delta: [f64; 2],
    pub epsilon: f64,
    /// Mixing angle undefined here; epsilon interpolated from neighbours.
    pub degenerate: bool,
}

fn rotation(eps: f64) -> Matrix2<f64> {
    let (s, c) = eps.sin_cos();
    Matrix2::new(c, s, -s, c)
}

fn max_abs(m: &Matrix2<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn unitarity_defect(s: &Matrix2<Complex64>) -> f64 {
    max_abs(&(s * s.adjoint() - Matrix2::identity()))
}

pub fn symmetry_defect(s: &Matrix2<Complex64>) -> f64 {
    max_abs(&(s - s.transpose()))
}

/// Eigenphases at fixed epsilon: half-arguments of the diagonal of R^T S R.
fn diagonal_phases(s: &Matrix2<Complex64>, eps: f64) -> [f64; 2] {
    let r = rotation(eps).map(|v| Complex64::new(v, 0.0));
    let d = r.transpose() * s * r;
    [d[(0, 0)].arg() / 2.0, d[(1, 1)].arg() / 2.0]
}

fn nearest(x: f64, target: f64, period: f64) -> f64 {
    x + period * ((target - x) / period).round()
}

/// Eigenphases and mixing angle of a unitary symmetric S with
/// S = R(eps) diag(e^{2i delta1}, e^{2i delta2}) R(eps)^T, R = [[c, s], [-s, c]].
/// Without `prev`, epsilon lies in (-pi/4, pi/4]; with it, every angle is
/// moved to the branch nearest the previous point.
pub fn eigenphases(s: &Matrix2<Complex64>, prev: Option<&ScatteringPoint>) -> Result<([f64; 2], f64, bool)> {
    let (u, y) = (unitarity_defect(s), symmetry_defect(s));
    if u > UNITARITY || y > UNITARITY {
        return Err(Error::Contract(format!("S is not unitary and symmetric (|SS^+ - 1| = {u:.3e}, |S - S^T| = {y:.3e})")));
    }
    let a = s[(1, 1)] - s[(0, 0)];
    let b = s[(0, 1)] + s[(1, 0)];
    if a.norm() + b.norm() < DEGENERATE {
        let eps = prev.map_or(0.0, |p| p.epsilon);
        let mut d = diagonal_phases(s, eps);
        if let Some(p) = prev {
            d = [nearest(d[0], p.delta[0], PI), nearest(d[1], p.delta[1], PI)];
        }
        return Ok((d, eps, true));
    }
    let phi = if a.norm() >= b.norm() { a.arg() } else { b.arg() };
    let rot = Complex64::from_polar(1.0, -phi);
    let two_eps = f64::atan2((b * rot).re, (a * rot).re);
    let raw = 0.5 * two_eps;
    match prev {
        None => {
            let eps = raw - FRAC_PI_2 * ((raw - FRAC_PI_4) / FRAC_PI_2).ceil();
            Ok((diagonal_phases(s, eps), eps, false))
        }
        Some(p) => {
            let base = nearest(raw, p.epsilon, PI);
            let mut best: Option<(f64, [f64; 2], f64)> = None;
            for shift in [-FRAC_PI_2, 0.0, FRAC_PI_2] {
                let eps = base + shift;
                let d = diagonal_phases(s, eps);
                let d = [nearest(d[0], p.delta[0], PI), nearest(d[1], p.delta[1], PI)];
                let cost = (eps - p.epsilon).abs() + (d[0] - p.delta[0]).abs() + (d[1] - p.delta[1]).abs();
                if best.as_ref().is_none_or(|b| cost < b.0) {
                    best = Some((cost, d, eps));
                }
            }
            let (_, d, eps) = best.unwrap();
            Ok((d, eps, false))
        }
    }
}

/// S-matrices over an ordered k-grid with continuous eigenphase and
/// mixing-angle branches. S is computed in parallel; branch tracking is a
/// sequential pass; degenerate points get epsilon by linear interpolation.
pub fn sweep(model: &AlgebraicModel, ks: &[f64]) -> Result<Vec<ScatteringPoint>> {
    let ss: Vec<Matrix2<Complex64>> = ks.par_iter().map(|&k| s_matrix(model, k)).collect::<Result<_>>()?;
    track(ks, &ss)
}

/// Branch tracking over precomputed S-matrices.
pub fn track(ks: &[f64], ss: &[Matrix2<Complex64>]) -> Result<Vec<ScatteringPoint>> {
    let mut out: Vec<ScatteringPoint> = Vec::with_capacity(ks.len());
    for (&k, s) in ks.iter().zip(ss) {
        let (delta, epsilon, degenerate) = eigenphases(s, out.last())?;
        out.push(ScatteringPoint { k, s: *s, delta, epsilon, degenerate });
    }
    interpolate_degenerate(&mut out);
    Ok(out)
}

fn interpolate_degenerate(points: &mut [ScatteringPoint]) {
    let good: Vec<usize> = (0..points.len()).filter(|&i| !points[i].degenerate).collect();
    if good.is_empty() {
        return;
    }
    for i in 0..points.len() {
        if !points[i].degenerate {
            continue;
        }
        let left = good.iter().rev().find(|&&g| g < i).copied();
        let right = good.iter().find(|&&g| g > i).copied();
        let eps = match (left, right) {
            (Some(a), Some(b)) => {
                let t = (points[i].k - points[a].k) / (points[b].k - points[a].k);
                points[a].epsilon + t * (points[b].epsilon - points[a].epsilon)
            }
            (Some(a), None) => points[a].epsilon,
            (None, Some(b)) => points[b].epsilon,
            (None, None) => points[i].epsilon,
        };
        points[i].epsilon = eps;
    }
}

/// Sum over eigenchannels of delta(k_lo) - delta(k_hi) along a dense
/// logarithmic grid.
pub fn levinson_drop(model: &AlgebraicModel, k_lo: f64, k_hi: f64, per_decade: usize) -> Result<f64> {
    let decades = (k_hi / k_lo).log10();
    let n = (decades * per_decade as f64).ceil() as usize + 1;
    let ks: Vec<f64> = (0..n).map(|i| k_lo * (k_hi / k_lo).powf(i as f64 / (n - 1) as f64)).collect();
    let pts = sweep(model, &ks)?;
    let (a, b) = (pts.first().unwrap(), pts.last().unwrap());
    Ok(a.delta[0] + a.delta[1] - b.delta[0] - b.delta[1])
}
