use crate::error::{Error, Result};
use crate::specfun::double_factorial_odd;
use nalgebra::{Matrix2, SMatrix};

/// Opaque matrix potential r -> V(r).
pub type Potential<'a> = dyn Fn(f64) -> Result<Matrix2<f64>> + Sync + 'a;

/// psi and psi' of a 2x2 matrix solution at radius r.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct State {
    pub r: f64,
    pub psi: Matrix2<f64>,
    pub dpsi: Matrix2<f64>,
}

/// Integration statistics.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
}

// Dormand-Prince 5(4) tableau
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const E: [f64; 7] = [
    35.0 / 384.0 - 5179.0 / 57600.0,
    0.0,
    500.0 / 1113.0 - 7571.0 / 16695.0,
    125.0 / 192.0 - 393.0 / 640.0,
    -2187.0 / 6784.0 + 92097.0 / 339200.0,
    11.0 / 84.0 - 187.0 / 2100.0,
    -1.0 / 40.0,
];

type Y<const N: usize> = (SMatrix<f64, 2, N>, SMatrix<f64, 2, N>);

fn rhs<const N: usize>(v: &Potential, energy: f64, r: f64, y: &Y<N>) -> Result<Y<N>> {
    let m = v(r)? - Matrix2::identity() * energy;
    Ok((y.1, m * y.0))
}

fn axpy<const N: usize>(y: &Y<N>, h: f64, ks: &[Y<N>], coef: &[f64]) -> Y<N> {
    let mut a = y.0;
    let mut b = y.1;
    for (k, &c) in ks.iter().zip(coef) {
        if c != 0.0 {
            a += k.0 * (h * c);
            b += k.1 * (h * c);
        }
    }
    (a, b)
}

/// Error norm with psi and psi' measured against their own column sizes.
fn error_norm<const N: usize>(err: &Y<N>, y0: &Y<N>, y1: &Y<N>, rtol: f64) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..N {
        let s0 = y0.0.column(j).amax().max(y1.0.column(j).amax());
        let s1 = y0.1.column(j).amax().max(y1.1.column(j).amax());
        let e0 = err.0.column(j).amax() / (rtol * s0).max(f64::MIN_POSITIVE);
        let e1 = err.1.column(j).amax() / (rtol * s1).max(f64::MIN_POSITIVE);
        worst = worst.max(e0).max(e1);
    }
    worst
}

/// Adaptive Dormand-Prince integration of psi'' = (V - E) psi for a 2 x N
/// solution block, recorded at each radius in `stops` (monotone, in the
/// direction of travel).
pub fn integrate_block<const N: usize>(v: &Potential, energy: f64, r_start: f64, start: Y<N>, stops: &[f64], rtol: f64, stats: &mut Stats) -> Result<Vec<Y<N>>> {
    let mut out = Vec::with_capacity(stops.len());
    let mut r = r_start;
    let mut y = start;
    let Some(&last) = stops.last() else { return Ok(out) };
    let dir = (last - r).signum();
    let mut h_prop = dir * (1e-3 * r.abs()).max(1e-6);
    let mut k1 = rhs(v, energy, r, &y)?;
    for &stop in stops {
        if (stop - r) * dir < 0.0 {
            return Err(Error::Contract(format!("integration stops must be monotone, got {stop} after {r}")));
        }
        while (stop - r) * dir > 0.0 {
            let hit = (r + h_prop - stop) * dir >= 0.0;
            let h = if hit { stop - r } else { h_prop };
            let mut ks: Vec<Y<N>> = Vec::with_capacity(7);
            ks.push(k1);
            for s in 1..7 {
                let ys = axpy(&y, h, &ks, &A[s][..s]);
                ks.push(rhs(v, energy, r + C[s] * h, &ys)?);
            }
            let ynew = axpy(&y, h, &ks, &B);
            let err = axpy(&(SMatrix::zeros(), SMatrix::zeros()), h, &ks, &E);
            let en = error_norm(&err, &y, &ynew, rtol);
            if !en.is_finite() || ynew.0.iter().chain(ynew.1.iter()).any(|x| !x.is_finite()) {
                return Err(Error::Integration { r, detail: "non-finite solution".into() });
            }
            if en <= 1.0 {
                stats.accepted += 1;
                r = if hit { stop } else { r + h };
                y = ynew;
                k1 = ks[6];
                let fac = if en == 0.0 { 5.0 } else { (0.9 * en.powf(-0.2)).clamp(0.2, 5.0) };
                // a step shortened to land on a stop says little about the next one
                if !hit || h.abs() * fac > h_prop.abs() {
                    h_prop = h * fac;
                }
            } else {
                stats.rejected += 1;
                h_prop = h * (0.9 * en.powf(-0.2)).clamp(0.1, 0.9);
            }
            if h_prop.abs() < 1e-14 * r.abs().max(1e-300) {
                return Err(Error::Integration { r, detail: "step size underflow".into() });
            }
        }
        out.push(y);
    }
    Ok(out)
}

/// Integration of a 2 x 2 solution from `start`, recorded at each stop.
pub fn integrate(v: &Potential, energy: f64, start: State, stops: &[f64], rtol: f64, stats: &mut Stats) -> Result<Vec<State>> {
    let ys = integrate_block::<2>(v, energy, start.r, (start.psi, start.dpsi), stops, rtol, stats)?;
    Ok(ys.into_iter().zip(stops).map(|(y, &r)| State { r, psi: y.0, dpsi: y.1 }).collect())
}

/// Frobenius start psi = diag(r0^{nu+1}/(2nu+1)!!) with matching psi'.
pub fn regular_start(nu_tilde: [u32; 2], r0: f64) -> State {
    let val = |n: u32| r0.powi(n as i32 + 1) / double_factorial_odd(n + 1);
    let der = |n: u32| f64::from(n + 1) * r0.powi(n as i32) / double_factorial_odd(n + 1);
    State {
        r: r0,
        psi: Matrix2::new(val(nu_tilde[0]), 0.0, 0.0, val(nu_tilde[1])),
        dpsi: Matrix2::new(der(nu_tilde[0]), 0.0, 0.0, der(nu_tilde[1])),
    }
}

/// Frobenius start carried to second order. The non-centrifugal part of
/// the diagonal of V near the origin is modelled as a/r + b from samples at
/// r0 and 2 r0; off-diagonal terms enter at higher order and are left out.
pub fn regular_start_with(v: &Potential, nu_tilde: [u32; 2], energy: f64, r0: f64) -> Result<State> {
    let mut st = regular_start(nu_tilde, r0);
    let (v1, v2) = (v(r0)?, v(2.0 * r0)?);
    for j in 0..2 {
        let nu = f64::from(nu_tilde[j]);
        let cent = nu * (nu + 1.0);
        let (w1, w2) = (v1[(j, j)] - cent / (r0 * r0), v2[(j, j)] - cent / (4.0 * r0 * r0));
        let a = 2.0 * r0 * (w1 - w2);
        let b = 2.0 * w2 - w1;
        let c1 = a / (2.0 * nu + 2.0);
        let c2 = (a * c1 + b - energy) / (2.0 * (2.0 * nu + 3.0));
        let lead = st.psi[(j, j)];
        st.psi[(j, j)] = lead * (1.0 + c1 * r0 + c2 * r0 * r0);
        st.dpsi[(j, j)] = lead / r0 * ((nu + 1.0) + c1 * (nu + 2.0) * r0 + c2 * (nu + 3.0) * r0 * r0);
    }
    Ok(st)
}

/// Regular solution at energy k^2, sampled at each radius.
pub fn integrate_regular(v: &Potential, nu_tilde: [u32; 2], k: f64, r0: f64, radii: &[f64], rtol: f64) -> Result<Vec<State>> {
    if !(1e-5..=1e-3).contains(&r0) {
        return Err(Error::Contract(format!("starting radius {r0} outside [1e-5, 1e-3]")));
    }
    let mut stats = Stats::default();
    integrate(v, k * k, regular_start_with(v, nu_tilde, k * k, r0)?, radii, rtol, &mut stats)
}
