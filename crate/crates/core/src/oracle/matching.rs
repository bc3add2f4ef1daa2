use super::integrator::State;
use crate::error::{Error, Result};
use crate::specfun::riccati_hankel;
use nalgebra::{Matrix2, Matrix4, Vector2, Vector4};
use num_complex::Complex64;

const MAX_CONDITION: f64 = 1e12;

fn i_pow(l: u32) -> Complex64 {
    Complex64::i().powu(l)
}

fn condition(m: &Matrix2<Complex64>) -> f64 {
    let svd = m.svd(false, false);
    let s = svd.singular_values;
    let (hi, lo) = (s.max(), s.min());
    if lo == 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

/// Jost matrices F(k), F(-k) from psi and psi' at radius R, matching
/// against free outgoing/incoming waves h_l(+-kR) channel by channel.
pub fn extract_jost(state: &State, l_tilde: [u32; 2], k: f64) -> Result<(Matrix2<Complex64>, Matrix2<Complex64>)> {
    let radius = state.r;
    let pref = Complex64::i() / (2.0 * k);
    let mut fk = Matrix2::zeros();
    let mut fmk = Matrix2::zeros();
    for i in 0..2 {
        let (hp, dhp) = riccati_hankel(l_tilde[i], Complex64::new(k * radius, 0.0))?;
        let (hm, dhm) = riccati_hankel(l_tilde[i], Complex64::new(-k * radius, 0.0))?;
        // psi = pref (h(-kr) F(k) - h(kr) F(-k)), d/dr h(+-kr) = +-k h'
        let sys = Matrix2::new(pref * hm, -pref * hp, -pref * k * dhm, -pref * k * dhp);
        let cond = condition(&sys);
        if !(cond <= MAX_CONDITION) {
            return Err(Error::Matching { radius, condition: cond });
        }
        let lu = sys.lu();
        for j in 0..2 {
            let rhs = Vector2::new(Complex64::from(state.psi[(i, j)]), Complex64::from(state.dpsi[(i, j)]));
            let sol = lu
                .solve(&rhs)
                .ok_or(Error::Matching { radius, condition: f64::INFINITY })?;
            fk[(i, j)] = sol[0];
            fmk[(i, j)] = sol[1];
        }
    }
    Ok((fk, fmk))
}

/// Jost matrices from psi and psi' given the full (possibly coupled) Jost
/// solution f(k, R) and f'(k, R); f(-k, R) is its complex conjugate.
pub fn extract_jost_with(state: &State, f: &Matrix2<Complex64>, df: &Matrix2<Complex64>, k: f64) -> Result<(Matrix2<Complex64>, Matrix2<Complex64>)> {
    let radius = state.r;
    let pref = Complex64::i() / (2.0 * k);
    let mut sys = Matrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            sys[(i, j)] = pref * f[(i, j)].conj();
            sys[(i, j + 2)] = -pref * f[(i, j)];
            sys[(i + 2, j)] = pref * df[(i, j)].conj();
            sys[(i + 2, j + 2)] = -pref * df[(i, j)];
        }
    }
    let sv = sys.svd(false, false).singular_values;
    let cond = if sv.min() == 0.0 { f64::INFINITY } else { sv.max() / sv.min() };
    if !(cond <= MAX_CONDITION) {
        return Err(Error::Matching { radius, condition: cond });
    }
    let lu = sys.lu();
    let mut fk = Matrix2::zeros();
    let mut fmk = Matrix2::zeros();
    for j in 0..2 {
        let c = |m: &Matrix2<f64>, i: usize| Complex64::from(m[(i, j)]);
        let rhs = Vector4::new(c(&state.psi, 0), c(&state.psi, 1), c(&state.dpsi, 0), c(&state.dpsi, 1));
        let sol = lu.solve(&rhs).ok_or(Error::Matching { radius, condition: f64::INFINITY })?;
        fk[(0, j)] = sol[0];
        fk[(1, j)] = sol[1];
        fmk[(0, j)] = sol[2];
        fmk[(1, j)] = sol[3];
    }
    Ok((fk, fmk))
}

/// S = P F(-k) F(k)^{-1} P with P = diag(i^l).
pub fn smatrix_from_jost(fk: &Matrix2<Complex64>, fmk: &Matrix2<Complex64>, l_tilde: [u32; 2], radius: f64) -> Result<Matrix2<Complex64>> {
    let cond = condition(fk);
    if !(cond <= MAX_CONDITION) {
        return Err(Error::Matching { radius, condition: cond });
    }
    let inv = fk.try_inverse().ok_or(Error::Matching { radius, condition: f64::INFINITY })?;
    let p = Matrix2::from_diagonal(&Vector2::new(i_pow(l_tilde[0]), i_pow(l_tilde[1])));
    Ok(p * fmk * inv * p)
}

/// S-matrix from matching to free waves h_l(+-kR).
pub fn extract_smatrix(state: &State, l_tilde: [u32; 2], k: f64) -> Result<Matrix2<Complex64>> {
    let (fk, fmk) = extract_jost(state, l_tilde, k)?;
    smatrix_from_jost(&fk, &fmk, l_tilde, state.r)
}

/// Polynomial extrapolation in 1/R to R -> infinity (Neville).
pub fn extrapolate(radii: &[f64], values: &[Matrix2<Complex64>]) -> Matrix2<Complex64> {
    assert_eq!(radii.len(), values.len());
    let x: Vec<f64> = radii.iter().map(|r| 1.0 / r).collect();
    let mut p: Vec<Matrix2<Complex64>> = values.to_vec();
    let n = p.len();
    for m in 1..n {
        for i in 0..n - m {
            let (xi, xj) = (x[i], x[i + m]);
            p[i] = (p[i + 1] * Complex64::from(xi) - p[i] * Complex64::from(xj)) / Complex64::from(xi - xj);
        }
    }
    p[0]
}

pub fn max_abs(m: &Matrix2<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}
