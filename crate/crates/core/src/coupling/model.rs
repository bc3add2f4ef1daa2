use super::params::CouplingParams;
use crate::error::{Error, Result};
use crate::onechannel::{JostEvaluator, JostValue, OneChannelModel};
use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;
use std::sync::Arc;

/// Relative |det u| below which u counts as singular.
const DET_THRESHOLD: f64 = 1e-12;

/// u and u' with column j carrying the factor e^{log_scale[j]}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transformation {
    pub u: Matrix2<f64>,
    pub du: Matrix2<f64>,
    pub log_scale: [f64; 2],
}

impl Transformation {
    /// |det u| relative to the product of its column norms.
    pub fn relative_det(&self) -> f64 {
        let n0 = self.u.column(0).norm();
        let n1 = self.u.column(1).norm();
        self.u.determinant().abs() / (n0 * n1)
    }

    pub fn unscaled(&self) -> (Matrix2<f64>, Matrix2<f64>) {
        let s = Matrix2::from_diagonal(&Vector2::new(self.log_scale[0].exp(), self.log_scale[1].exp()));
        (self.u * s, self.du * s)
    }
}

struct Factor {
    growing: [JostEvaluator; 2],
    decaying: [JostEvaluator; 2],
}

/// Two-channel model obtained from a diagonal pair by a coupling transformation.
#[derive(Clone)]
pub struct TransformedModel {
    channels: [OneChannelModel; 2],
    params: CouplingParams,
    w_inf: Matrix2<f64>,
    l_tilde: [u32; 2],
    nu_tilde: [u32; 2],
    factor: Arc<Factor>,
}

impl std::fmt::Debug for TransformedModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TransformedModel")
            .field("channels", &[self.channels[0].family(), self.channels[1].family()])
            .field("params", &self.params)
            .field("l_tilde", &self.l_tilde)
            .field("nu_tilde", &self.nu_tilde)
            .finish()
    }
}

fn scaled_entry(v: &JostValue, col_scale: f64) -> (f64, f64) {
    let s = (v.log_scale - col_scale).exp();
    (v.value.re * s, v.deriv.re * s)
}

impl TransformedModel {
    /// Validated construction including the regularity scan on (0, 50].
    pub fn new(channels: [OneChannelModel; 2], params: CouplingParams, override_physics: bool) -> Result<TransformedModel> {
        let model = Self::new_unchecked(channels, params, override_physics)?;
        let bad = model.singularity_scan(50.0, 10_000);
        if let Some(&(a, b)) = bad.first() {
            return Err(Error::Singularity { r: 0.5 * (a + b) });
        }
        Ok(model)
    }

    /// Construction without the regularity scan.
    pub fn new_unchecked(channels: [OneChannelModel; 2], params: CouplingParams, override_physics: bool) -> Result<TransformedModel> {
        let mut errs = params.validation_errors();
        if !errs.is_empty() {
            return Err(Error::Validation(errs));
        }
        let kappa = params.kappa;
        let ik = Complex64::new(0.0, kappa);
        let mut ratios = [0.0; 2];
        for (j, ch) in channels.iter().enumerate() {
            let name = ch.family().name();
            if ch.nu() == 0 {
                errs.push(format!("channel {}: {name} is regular at the origin (nu = 0); the transformation needs nu >= 1", j + 1));
            }
            let f = ch.jost_function();
            match (f.eval(-ik), f.eval(ik)) {
                (Ok(a), Ok(b)) if a.norm() > 0.0 && b.norm() > 0.0 => ratios[j] = (a / b).re,
                _ => errs.push(format!("channel {}: Jost function of {name} vanishes or is singular at k = +-i kappa", j + 1)),
            }
            let chain = ch.chain();
            if chain.normalization(ik).norm() == 0.0 || chain.normalization(-ik).norm() == 0.0 {
                errs.push(format!("channel {}: kappa coincides with a seed wavenumber of {name}", j + 1));
            }
        }
        if errs.is_empty() {
            let nd = params.x + ratios[0] - params.q * params.q * ratios[1];
            let scale = 1.0 + params.x.abs() + ratios[0].abs() + params.q * params.q * ratios[1].abs();
            if nd.abs() <= 1e-12 * scale {
                errs.push("coupling: degenerate parameters, x + F1(-ik)/F1(ik) - q^2 F2(-ik)/F2(ik) = 0".into());
            }
        }
        if !errs.is_empty() {
            return Err(Error::Validation(errs));
        }

        let l = [channels[0].l(), channels[1].l()];
        let q_unit = (params.q.abs() - 1.0).abs() < 1e-12;
        if !override_physics {
            let mut cons = Vec::new();
            if l[0] != l[1] && !q_unit {
                cons.push(format!("l = ({}, {}) differ, so q must be +-1 (got {})", l[0], l[1], params.q));
            }
            let max_pole = channels
                .iter()
                .flat_map(|c| c.jost_function().poles.iter().map(|p| p.im.abs()))
                .fold(0.0, f64::max);
            if kappa <= max_pole {
                cons.push(format!("kappa = {kappa} must exceed the largest |Im| of the Jost-function poles ({max_pole})"));
            }
            if !cons.is_empty() {
                return Err(Error::Constraint(cons.join("; ")));
            }
        }
        let l_tilde = if l[0] != l[1] && q_unit { [l[1], l[0]] } else { l };
        let nu_tilde = [channels[0].nu() - 1, channels[1].nu() - 1];
        let factor = Factor {
            growing: [channels[0].jost_evaluator(-ik)?, channels[1].jost_evaluator(-ik)?],
            decaying: [channels[0].jost_evaluator(ik)?, channels[1].jost_evaluator(ik)?],
        };
        Ok(TransformedModel { w_inf: params.w_infinity(), channels, params, l_tilde, nu_tilde, factor: Arc::new(factor) })
    }

    pub fn channels(&self) -> &[OneChannelModel; 2] {
        &self.channels
    }

    pub fn params(&self) -> &CouplingParams {
        &self.params
    }

    pub fn w_infinity(&self) -> Matrix2<f64> {
        self.w_inf
    }

    pub fn l(&self) -> [u32; 2] {
        [self.channels[0].l(), self.channels[1].l()]
    }

    pub fn nu(&self) -> [u32; 2] {
        [self.channels[0].nu(), self.channels[1].nu()]
    }

    pub fn l_tilde(&self) -> [u32; 2] {
        self.l_tilde
    }

    pub fn nu_tilde(&self) -> [u32; 2] {
        self.nu_tilde
    }

    /// The same diagonal pair with different coupling parameters.
    pub fn with_params(&self, params: CouplingParams, override_physics: bool) -> Result<TransformedModel> {
        TransformedModel::new(self.channels.clone(), params, override_physics)
    }

    pub fn diagonal_potential(&self, r: f64) -> Matrix2<f64> {
        Matrix2::new(self.channels[0].potential(r), 0.0, 0.0, self.channels[1].potential(r))
    }

    /// u = [[f1(-ik) + x f1(ik), -q f1(ik)], [q f2(-ik), f2(ik)]] at imaginary wavenumber.
    pub fn transformation_function(&self, r: f64) -> Result<Transformation> {
        let CouplingParams { q, x, .. } = self.params;
        let g1 = self.factor.growing[0].eval(r)?;
        let d1 = self.factor.decaying[0].eval(r)?;
        let g2 = self.factor.growing[1].eval(r)?;
        let d2 = self.factor.decaying[1].eval(r)?;
        let mut s0 = g1.log_scale;
        if x != 0.0 {
            s0 = s0.max(d1.log_scale);
        }
        if q != 0.0 {
            s0 = s0.max(g2.log_scale);
        }
        let s1 = if q != 0.0 { d2.log_scale.max(d1.log_scale) } else { d2.log_scale };
        let (a, da) = scaled_entry(&g1, s0);
        let (b, db) = scaled_entry(&d1, s0);
        let (c, dc) = scaled_entry(&g2, s0);
        let (e, de) = scaled_entry(&d1, s1);
        let (h, dh) = scaled_entry(&d2, s1);
        Ok(Transformation {
            u: Matrix2::new(a + x * b, -q * e, q * c, h),
            du: Matrix2::new(da + x * db, -q * de, q * dc, dh),
            log_scale: [s0, s1],
        })
    }

    fn inverse_u(&self, r: f64) -> Result<(Transformation, Matrix2<f64>)> {
        let t = self.transformation_function(r)?;
        if t.relative_det() < DET_THRESHOLD || !t.relative_det().is_finite() {
            return Err(Error::Singularity { r });
        }
        let inv = t.u.try_inverse().ok_or(Error::Singularity { r })?;
        Ok((t, inv))
    }

    /// w = u' u^{-1} and w' = V_d + kappa^2 - w^2.
    pub fn superpotential(&self, r: f64) -> Result<(Matrix2<f64>, Matrix2<f64>)> {
        let (t, inv) = self.inverse_u(r)?;
        let w = t.du * inv;
        let k2 = self.params.kappa * self.params.kappa;
        let dw = self.diagonal_potential(r) + Matrix2::identity() * k2 - w * w;
        Ok((w, dw))
    }

    /// V_c = 2w^2 - V_d - 2 kappa^2.
    pub fn transformed_potential(&self, r: f64) -> Result<Matrix2<f64>> {
        let (w, _) = self.superpotential(r)?;
        let w = (w + w.transpose()) * 0.5;
        let k2 = self.params.kappa * self.params.kappa;
        Ok(w * w * 2.0 - self.diagonal_potential(r) - Matrix2::identity() * (2.0 * k2))
    }

    /// V12 / (V22 - V11).
    pub fn coupling_ratio(&self, r: f64) -> Result<f64> {
        let v = self.transformed_potential(r)?;
        Ok(v[(0, 1)] / (v[(1, 1)] - v[(0, 0)]))
    }

    /// Sign changes of det u on a grid over (1e-3, r_max]: log-spaced below
    /// r_max/samples, then `samples` uniform points.
    pub fn singularity_scan(&self, r_max: f64, samples: usize) -> Vec<(f64, f64)> {
        let step = r_max / samples as f64;
        let r_lo = 1e-3_f64.min(step);
        let nlog = 32;
        let mut grid: Vec<f64> = (0..nlog).map(|i| r_lo * (step / r_lo).powf(i as f64 / nlog as f64)).collect();
        grid.extend((1..=samples).map(|i| step * i as f64));
        let mut out = Vec::new();
        let mut prev: Option<(f64, f64)> = None;
        for &r in &grid {
            let d = match self.transformation_function(r) {
                Ok(t) => t.u.determinant(),
                Err(_) => f64::NAN,
            };
            if !d.is_finite() {
                out.push((prev.map_or(r, |p| p.0), r));
                prev = None;
                continue;
            }
            if let Some((rp, dp)) = prev {
                if dp.signum() != d.signum() || d == 0.0 {
                    out.push((rp, r));
                }
            }
            prev = Some((r, d));
        }
        out
    }

    /// Phi = (u^T)^{-1} and Phi' = -w Phi, with column j carrying e^{log_scale[j]}.
    pub fn opposite_solution(&self, r: f64) -> Result<Transformation> {
        let (t, inv) = self.inverse_u(r)?;
        let phi = inv.transpose();
        let w = t.du * inv;
        Ok(Transformation { u: phi, du: -w * phi, log_scale: [-t.log_scale[0], -t.log_scale[1]] })
    }

    /// Transformed Jost solution at wavenumber k.
    pub fn jost_at(&self, k: Complex64) -> Result<TransformedJost<'_>> {
        let i = Complex64::i();
        let m = self.w_inf.map(|v| Complex64::new(v, 0.0)) - Matrix2::identity() * (i * k);
        let right = m.try_inverse().ok_or_else(|| Error::Domain(format!("w_inf - ik is singular at k = {k}")))?;
        Ok(TransformedJost {
            model: self,
            k,
            evals: [self.channels[0].jost_evaluator(k)?, self.channels[1].jost_evaluator(k)?],
            right,
        })
    }
}

/// f_c(k, r) = (w f_d - f_d') (w_inf - ik)^{-1}.
pub struct TransformedJost<'a> {
    model: &'a TransformedModel,
    k: Complex64,
    evals: [JostEvaluator; 2],
    right: Matrix2<Complex64>,
}

impl TransformedJost<'_> {
    pub fn k(&self) -> Complex64 {
        self.k
    }

    /// f_c and its r-derivative.
    pub fn eval(&self, r: f64) -> Result<(Matrix2<Complex64>, Matrix2<Complex64>)> {
        let (f1, d1) = self.evals[0].eval(r)?.unscaled();
        let (f2, d2) = self.evals[1].eval(r)?.unscaled();
        let z = Complex64::new(0.0, 0.0);
        let fd = Matrix2::new(f1, z, z, f2);
        let dfd = Matrix2::new(d1, z, z, d2);
        let (w, _) = self.model.superpotential(r)?;
        let wc = w.map(|v| Complex64::new(v, 0.0));
        let kappa = self.model.params.kappa;
        let e = Complex64::new(kappa * kappa, 0.0) + self.k * self.k;
        let f = (wc * fd - dfd) * self.right;
        // (L f_d)' = w' f_d + w f_d' - f_d'' with f_d'' = (V_d - k^2) f_d and w' = V_d + kappa^2 - w^2
        let df = ((Matrix2::identity() * e - wc * wc) * fd + wc * dfd) * self.right;
        Ok((f, df))
    }
}
