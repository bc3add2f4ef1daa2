use super::integrator::{integrate_block, Potential, Stats};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector, Matrix2, Matrix2x4};
use num_complex::Complex64;

/// Inverse powers r^-3 .. r^-(2 + TAIL_TERMS) fitted beyond the centrifugal term.
const TAIL_TERMS: usize = 3;
const FIT_SAMPLES: usize = 12;
const MAX_ORDER: usize = 200;
/// Largest acceptable smallest term of a divergent expansion.
const SERIES_TOLERANCE: f64 = 1e-10;

/// Large-r expansion V = diag(l(l+1))/r^2 + sum_m C_m r^-m fitted from samples.
#[derive(Clone, Debug, PartialEq)]
pub struct TailFit {
    pub centrifugal: Matrix2<f64>,
    /// C_3, C_4, ...
    pub coeffs: Vec<Matrix2<f64>>,
    /// Max residual of V over the fit range.
    pub residual: f64,
}

impl TailFit {
    /// Least-squares fit of V - centrifugal on [r_lo, 4 r_lo]. A constant
    /// column absorbs the rounding floor of V, which is dropped afterwards.
    pub fn fit(v: &Potential, l_tilde: [u32; 2], r_lo: f64) -> Result<TailFit> {
        let cent = Matrix2::new(f64::from(l_tilde[0] * (l_tilde[0] + 1)), 0.0, 0.0, f64::from(l_tilde[1] * (l_tilde[1] + 1)));
        let rs: Vec<f64> = (0..FIT_SAMPLES).map(|i| r_lo * 4f64.powf(i as f64 / (FIT_SAMPLES - 1) as f64)).collect();
        // columns: 1, (r_lo/r)^3, (r_lo/r)^4, ...
        let a = DMatrix::from_fn(FIT_SAMPLES, TAIL_TERMS + 1, |i, m| if m == 0 { 1.0 } else { (r_lo / rs[i]).powi(m as i32 + 2) });
        let mut ys = Vec::with_capacity(FIT_SAMPLES);
        for &r in &rs {
            ys.push((v(r)? - cent / (r * r)) * r_lo.powi(3));
        }
        let svd = a.clone().svd(true, true);
        let mut coeffs = vec![Matrix2::zeros(); TAIL_TERMS];
        let mut residual: f64 = 0.0;
        for e in 0..4 {
            let b = DVector::from_fn(FIT_SAMPLES, |i, _| ys[i][e]);
            let x = svd.solve(&b, 1e-14).map_err(|m| Error::Contract(m.into()))?;
            residual = residual.max((&a * &x - &b).amax() / r_lo.powi(3));
            for (m, c) in coeffs.iter_mut().enumerate() {
                c[e] = x[m + 1] * r_lo.powi(m as i32);
            }
        }
        Ok(TailFit { centrifugal: cent, coeffs, residual })
    }

    /// Coefficient of r^-m in V, m >= 2.
    fn power(&self, m: usize) -> Matrix2<Complex64> {
        let c = match m {
            2 => self.centrifugal,
            _ => self.coeffs.get(m - 3).copied().unwrap_or_else(Matrix2::zeros),
        };
        c.map(Complex64::from)
    }

    /// Asymptotic solution f(k, r) = e^{ikr} sum_n A_n r^-n and its derivative.
    /// Summation stops at the smallest term, which must stay below 1e-10.
    pub fn asymptotic_jost(&self, k: f64, r: f64) -> Result<(Matrix2<Complex64>, Matrix2<Complex64>)> {
        let ik = Complex64::new(0.0, k);
        let top = 2 + self.coeffs.len();
        let mut a: Vec<Matrix2<Complex64>> = vec![Matrix2::identity()];
        let mut g = Matrix2::identity();
        let mut dg = Matrix2::zeros();
        let mut last = f64::INFINITY;
        let mut converged = false;
        for p in 1..MAX_ORDER {
            let mut next = a[p - 1] * Complex64::from(((p - 1) * p) as f64);
            for m in 2..=(p + 1).min(top) {
                next -= self.power(m) * a[p + 1 - m];
            }
            next /= ik * 2.0 * p as f64;
            let term = next * Complex64::from(r.powi(-(p as i32)));
            let size = term.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if size > last {
                break;
            }
            g += term;
            dg -= term * Complex64::from(p as f64 / r);
            a.push(next);
            last = size;
            if size < 1e-17 {
                converged = true;
                break;
            }
        }
        if !converged && last > SERIES_TOLERANCE {
            return Err(Error::Matching { radius: r, condition: f64::INFINITY });
        }
        let e = (ik * r).exp();
        Ok((g * e, (dg + g * ik) * e))
    }
}

/// Jost solution f(k, r) at each radius, integrated inward from `r_far`
/// where the asymptotic expansion is used. Real and imaginary parts are
/// carried as one 2 x 4 block.
pub fn outer_jost(v: &Potential, fit: &TailFit, k: f64, r_far: f64, radii: &[f64], rtol: f64) -> Result<Vec<(Matrix2<Complex64>, Matrix2<Complex64>)>> {
    let (f, df) = fit.asymptotic_jost(k, r_far)?;
    let mut order: Vec<usize> = (0..radii.len()).collect();
    order.sort_by(|&a, &b| radii[b].total_cmp(&radii[a]));
    let stops: Vec<f64> = order.iter().map(|&i| radii[i]).collect();
    let split = |m: &Matrix2<Complex64>| {
        let mut b = Matrix2x4::zeros();
        b.fixed_view_mut::<2, 2>(0, 0).copy_from(&m.map(|z| z.re));
        b.fixed_view_mut::<2, 2>(0, 2).copy_from(&m.map(|z| z.im));
        b
    };
    let join = |b: &Matrix2x4<f64>| -> Matrix2<Complex64> {
        let re: Matrix2<f64> = b.fixed_view::<2, 2>(0, 0).into();
        let im: Matrix2<f64> = b.fixed_view::<2, 2>(0, 2).into();
        re.zip_map(&im, Complex64::new)
    };
    let mut stats = Stats::default();
    let ys = if stops.first() == Some(&r_far) {
        let mut rest = integrate_block::<4>(v, k * k, r_far, (split(&f), split(&df)), &stops[1..], rtol, &mut stats)?;
        rest.insert(0, (split(&f), split(&df)));
        rest
    } else {
        integrate_block::<4>(v, k * k, r_far, (split(&f), split(&df)), &stops, rtol, &mut stats)?
    };
    let mut out = vec![(Matrix2::zeros(), Matrix2::zeros()); radii.len()];
    for (n, &i) in order.iter().enumerate() {
        out[i] = (join(&ys[n].0), join(&ys[n].1));
    }
    Ok(out)
}
