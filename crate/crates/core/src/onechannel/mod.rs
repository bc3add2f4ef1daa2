//! Uncoupled one-channel models: potentials, Jost solutions and Jost functions.

mod chain;
mod rational;

pub use chain::{Base, CrumChain, JostEvaluator, JostValue};
pub use rational::RationalJost;

use crate::error::{Error, Result};
use crate::specfun::{double_factorial_odd, SeedSolution};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// The solvable one-channel families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum Family {
    /// Three-seed chain sinh(k0 r), sinh(k2 r), e^{k1 r} + beta e^{-k1 r}.
    Beta { kappa0: f64, kappa1: f64, kappa2: f64, beta: f64 },
    /// 2 kappa^2 cosech^2(kappa r)
    Cosech { kappa: f64 },
    /// Two sinh seeds on the free s wave.
    SpS { kappa0: f64, kappa1: f64 },
    /// Pure l(l+1)/r^2.
    Centrifugal { l: u32 },
    /// sech^2 well dressed with three odd seeds.
    SdS { kappas: [f64; 4] },
    /// d-wave barrier softened by one decaying seed.
    SdD { kappa: f64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Beta { .. } => "beta",
            Family::Cosech { .. } => "cosech",
            Family::SpS { .. } => "sp_s",
            Family::Centrifugal { .. } => "centrifugal",
            Family::SdS { .. } => "sd_s",
            Family::SdD { .. } => "sd_d",
        }
    }

    /// All parameter problems, not just the first.
    pub fn validation_errors(&self) -> Vec<String> {
        let mut errs = Vec::new();
        let name = self.name();
        let mut positive = |label: &str, v: f64| {
            if !(v.is_finite() && v > 0.0) {
                errs.push(format!("{name}: {label} must be finite and positive, got {v}"));
            }
        };
        match *self {
            Family::Beta { kappa0, kappa1, kappa2, beta } => {
                positive("kappa0", kappa0);
                positive("kappa1", kappa1);
                positive("kappa2", kappa2);
                if !(kappa0 < kappa1 && kappa1 < kappa2) {
                    errs.push(format!("{name}: requires kappa0 < kappa1 < kappa2"));
                }
                if !(beta.is_finite() && beta <= -1.0) {
                    errs.push(format!("{name}: requires beta < -1 or beta = -1, got {beta}"));
                }
            }
            Family::Cosech { kappa } => positive("kappa", kappa),
            Family::SpS { kappa0, kappa1 } => {
                positive("kappa0", kappa0);
                positive("kappa1", kappa1);
                if kappa0 == kappa1 {
                    errs.push(format!("{name}: kappa0 and kappa1 must differ"));
                }
            }
            Family::Centrifugal { .. } => {}
            Family::SdS { kappas } => {
                for (j, k) in kappas.iter().enumerate() {
                    positive(&format!("kappa{j}"), *k);
                }
                for a in 0..4 {
                    for b in a + 1..4 {
                        if kappas[a] == kappas[b] {
                            errs.push(format!("{name}: kappa{a} and kappa{b} must differ"));
                        }
                    }
                }
                if kappas[1..].iter().any(|k| *k <= kappas[0]) {
                    errs.push(format!("{name}: seed wavenumbers kappa1..kappa3 must exceed kappa0"));
                }
            }
            Family::SdD { kappa } => positive("kappa", kappa),
        }
        errs
    }

    pub fn partial_wave(&self) -> u32 {
        match *self {
            Family::Centrifugal { l } => l,
            Family::SdD { .. } => 2,
            _ => 0,
        }
    }

    /// Origin singularity index: V ~ nu(nu+1)/r^2.
    pub fn nu(&self) -> u32 {
        match *self {
            Family::Beta { beta, .. } => {
                if beta == -1.0 {
                    3
                } else {
                    1
                }
            }
            Family::Cosech { .. } => 1,
            Family::SpS { .. } => 2,
            Family::Centrifugal { l } => l,
            Family::SdS { .. } => 3,
            Family::SdD { .. } => 1,
        }
    }

    fn chain(&self) -> CrumChain {
        let sinh = |kappa| SeedSolution::SinhNode { kappa };
        match *self {
            Family::Beta { kappa0, kappa1, kappa2, beta } => CrumChain::new(
                Base::Free,
                vec![sinh(kappa0), sinh(kappa2), SeedSolution::ExpCombo { kappa: kappa1, beta }],
            ),
            Family::Cosech { kappa } => CrumChain::new(Base::Free, vec![sinh(kappa)]),
            Family::SpS { kappa0, kappa1 } => CrumChain::new(Base::Free, vec![sinh(kappa0), sinh(kappa1)]),
            Family::Centrifugal { l } => CrumChain::new(Base::Centrifugal { l }, vec![]),
            Family::SdS { kappas } => CrumChain::new(
                Base::Sech2 { kappa0: kappas[0] },
                kappas[1..]
                    .iter()
                    .map(|&kappa| SeedSolution::TanhShifted { kappa, kappa0: kappas[0] })
                    .collect(),
            ),
            Family::SdD { kappa } => {
                CrumChain::new(Base::Centrifugal { l: 2 }, vec![SeedSolution::HankelDecay { kappa, l: 2 }])
            }
        }
    }

    /// Closed-form Jost function of the family.
    pub fn jost_function(&self) -> Result<RationalJost> {
        let i = Complex64::i();
        let ci = |y: f64| Complex64::new(0.0, y);
        match *self {
            Family::Beta { kappa0, kappa1, kappa2, beta } => {
                if beta == -1.0 {
                    RationalJost::new(-i, vec![], vec![ci(-kappa0), ci(-kappa1), ci(-kappa2)])
                } else {
                    RationalJost::new(i, vec![ci(kappa1)], vec![ci(-kappa0), ci(-kappa2)])
                }
            }
            // 1/(kappa - ik) = i/(k + i kappa)
            Family::Cosech { kappa } => RationalJost::new(i, vec![], vec![ci(-kappa)]),
            Family::SpS { kappa0, kappa1 } => {
                RationalJost::new(Complex64::new(-1.0, 0.0), vec![], vec![ci(-kappa0), ci(-kappa1)])
            }
            Family::Centrifugal { l } => RationalJost::new(i.powu(l), vec![], vec![Complex64::new(0.0, 0.0); l as usize]),
            Family::SdS { kappas } => {
                RationalJost::new(-i, vec![Complex64::new(0.0, 0.0)], kappas.iter().map(|k| ci(-k)).collect())
            }
            // (ik - kappa)/k^2 = i (k + i kappa)/k^2
            Family::SdD { kappa } => {
                RationalJost::new(i, vec![ci(-kappa)], vec![Complex64::new(0.0, 0.0); 2])
            }
        }
    }
}

/// Outcome of the numerical self-checks run at construction.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstructionReport {
    /// V(r) - nu(nu+1)/r^2 at r = 1e-3 and 1e-4.
    pub origin_remainder: [f64; 2],
    /// |f(k,r) e^{-ikr} - 1| at r = 30 and 60 for k = 1.3.
    pub asymptotic_deviation: [f64; 2],
    /// Relative difference between the r -> 0 limit of f r^nu/(2nu-1)!! and F.
    pub limit_relative_error: f64,
}

#[derive(Clone, Debug)]
pub struct OneChannelModel {
    family: Family,
    l: u32,
    nu: u32,
    chain: CrumChain,
    jost: RationalJost,
    report: ConstructionReport,
}

const NODE_SCAN_MAX: f64 = 50.0;
const NODE_SCAN_SAMPLES: usize = 4000;

impl OneChannelModel {
    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn nu(&self) -> u32 {
        self.nu
    }

    pub fn chain(&self) -> &CrumChain {
        &self.chain
    }

    pub fn report(&self) -> &ConstructionReport {
        &self.report
    }

    pub fn jost_function(&self) -> &RationalJost {
        &self.jost
    }

    pub fn potential(&self, r: f64) -> f64 {
        self.chain.potential(r)
    }

    pub fn jost_evaluator(&self, k: Complex64) -> Result<JostEvaluator> {
        self.chain.jost(k)
    }

    /// f(k, r) and df/dr.
    pub fn jost_solution(&self, k: Complex64, r: f64) -> Result<(Complex64, Complex64)> {
        Ok(self.chain.jost(k)?.eval(r)?.unscaled())
    }

    pub fn phase_shift(&self, k: f64) -> f64 {
        self.jost.phase_shift(self.l, k)
    }

    pub fn s_matrix(&self, k: f64) -> Result<Complex64> {
        self.jost.s_matrix(self.l, k)
    }

    /// a with e^{2i delta} = 1 - 2iak + o(k); s waves without threshold zeros or poles only.
    pub fn scattering_length(&self) -> Option<f64> {
        let zero = Complex64::new(0.0, 0.0);
        if self.l != 0 || self.jost.zeros.contains(&zero) || self.jost.poles.contains(&zero) {
            return None;
        }
        Some((-Complex64::i() * self.jost.log_derivative(zero)).re)
    }
}

/// Construct a family model and run its self-checks.
pub fn build_family(family: &Family) -> Result<OneChannelModel> {
    let errs = family.validation_errors();
    if !errs.is_empty() {
        return Err(Error::Validation(errs));
    }
    let chain = family.chain();
    let name = family.name().to_string();
    check_nodes(&chain, &name)?;
    let mut model = OneChannelModel {
        family: family.clone(),
        l: family.partial_wave(),
        nu: family.nu(),
        chain,
        jost: family.jost_function()?,
        report: ConstructionReport {
            origin_remainder: [0.0; 2],
            asymptotic_deviation: [0.0; 2],
            limit_relative_error: 0.0,
        },
    };
    model.report = self_check(&model)?;
    Ok(model)
}

fn check_nodes(chain: &CrumChain, name: &str) -> Result<()> {
    if chain.seeds().is_empty() {
        return Ok(());
    }
    let mut sign = 0.0;
    let rs = chain.r_switch();
    let mut grid: Vec<f64> = (1..=40).map(|j| rs * j as f64 / 40.0).collect();
    grid.extend((1..=NODE_SCAN_SAMPLES).map(|j| rs + (NODE_SCAN_MAX - rs) * j as f64 / NODE_SCAN_SAMPLES as f64));
    for r in grid {
        let (w, _) = chain.seed_wronskian(r);
        if w == 0.0 || !w.is_finite() {
            return Err(Error::SingularPotential { family: name.into(), detail: format!("seed Wronskian vanishes near r = {r}") });
        }
        if sign == 0.0 {
            sign = w.signum();
        } else if w.signum() != sign {
            return Err(Error::SingularPotential { family: name.into(), detail: format!("seed Wronskian changes sign near r = {r}") });
        }
    }
    Ok(())
}

fn self_check(model: &OneChannelModel) -> Result<ConstructionReport> {
    let name = model.family.name().to_string();
    let fail = |detail: String| Error::Inconsistency { family: name.clone(), detail };
    let nn = f64::from(model.nu * (model.nu + 1));
    let rem = |r: f64| model.potential(r) - nn / (r * r);
    let origin_remainder = [rem(1e-3), rem(1e-4)];
    if !origin_remainder.iter().all(|v| v.is_finite())
        || (origin_remainder[1] - origin_remainder[0]).abs() > 0.1 * (1.0 + origin_remainder[0].abs())
    {
        return Err(fail(format!(
            "V - nu(nu+1)/r^2 is not bounded at the origin: {:?}",
            origin_remainder
        )));
    }
    let k = Complex64::new(1.3, 0.0);
    let ev = model.jost_evaluator(k)?;
    let mut asymptotic_deviation = [0.0; 2];
    for (slot, r) in asymptotic_deviation.iter_mut().zip([30.0, 60.0]) {
        let (f, _) = ev.eval(r)?.unscaled();
        *slot = (f * (-Complex64::i() * k * r).exp() - 1.0).norm();
    }
    if !(asymptotic_deviation[1] <= 1e-8 || asymptotic_deviation[1] <= 0.6 * asymptotic_deviation[0]) {
        return Err(fail(format!("Jost solution does not approach e^(ikr): {:?}", asymptotic_deviation)));
    }
    let mut limit_relative_error: f64 = 0.0;
    for kk in [Complex64::new(0.7, 0.3), Complex64::new(1.3, 0.0)] {
        let lim = jost_from_limit(model, kk)?;
        let exact = model.jost.eval(kk)?;
        limit_relative_error = limit_relative_error.max((lim - exact).norm() / exact.norm());
    }
    if limit_relative_error > 1e-6 {
        return Err(fail(format!("r -> 0 limit of the Jost solution differs from F by {limit_relative_error:e}")));
    }
    Ok(ConstructionReport { origin_remainder, asymptotic_deviation, limit_relative_error })
}

/// F(k) as the r -> 0 limit of f(k,r) r^nu/(2nu-1)!!, extrapolated from r = 1e-2, 1e-3, 1e-4.
pub fn jost_from_limit(model: &OneChannelModel, k: Complex64) -> Result<Complex64> {
    if model.jost.is_pole(k) {
        return Err(Error::Domain(format!("k = {k} is a pole of the Jost function")));
    }
    let nu = model.nu;
    let df = double_factorial_odd(nu);
    let ev = model.jost_evaluator(k)?;
    let rs = [1e-2, 1e-3, 1e-4];
    let mut g = [Complex64::new(0.0, 0.0); 3];
    for (slot, &r) in g.iter_mut().zip(&rs) {
        let (f, _) = ev.eval(r)?.unscaled();
        *slot = f * r.powi(nu as i32) / df;
    }
    // Neville to r = 0 through the three points
    let mut p = g;
    for level in 1..3 {
        for i in 0..3 - level {
            let (a, b) = (rs[i], rs[i + level]);
            p[i] = (p[i + 1] * a - p[i] * b) / (a - b);
        }
    }
    let ext = p[0];
    let linear = (g[2] * rs[1] - g[1] * rs[2]) / (rs[1] - rs[2]);
    let scale = ext.norm().max(g[0].norm());
    if (ext - linear).norm() > 1e-6 * scale {
        return Err(Error::Inconsistency {
            family: model.family.name().into(),
            detail: format!("r -> 0 extrapolation of the Jost solution did not converge at k = {k}"),
        });
    }
    Ok(ext)
}

#[cfg(test)]
mod tests;
