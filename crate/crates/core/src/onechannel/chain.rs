//! Potentials and Jost solutions of Wronskian chains built on a solvable base.

use crate::error::{Error, Result};
use crate::specfun::{
    hankel_coefficients, series_wronskian, wronskian_derivatives, Aux, ExpPoly, ExpPolyTower, ExpTerm,
    SeedSolution, Series, TowerProvider,
};
use num_complex::Complex64;
use std::sync::{Arc, OnceLock};

/// Potential the seeds act on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Base {
    Free,
    /// -2 kappa0^2 sech^2(kappa0 r)
    Sech2 { kappa0: f64 },
    /// l(l+1)/r^2
    Centrifugal { l: u32 },
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl Base {
    pub fn potential(&self, r: f64) -> f64 {
        match *self {
            Base::Free => 0.0,
            Base::Sech2 { kappa0 } => -2.0 * kappa0 * kappa0 / (kappa0 * r).cosh().powi(2),
            Base::Centrifugal { l } => f64::from(l * (l + 1)) / (r * r),
        }
    }

    /// Jost solution of the base potential, normalized to e^{ikr} at infinity.
    pub fn jost(&self, k: Complex64) -> Result<ExpPoly> {
        let i = Complex64::i();
        Ok(match *self {
            Base::Free => ExpPoly::new(Aux::Const, vec![ExpTerm { rate: i * k, poly: vec![re(1.0)] }]),
            Base::Sech2 { kappa0 } => {
                let n = k + i * kappa0;
                if n.norm() == 0.0 {
                    return Err(Error::Domain(format!("k = {k} is a pole of the base Jost function")));
                }
                ExpPoly::new(Aux::Tanh(kappa0), vec![ExpTerm { rate: i * k, poly: vec![k / n, i * kappa0 / n] }])
            }
            Base::Centrifugal { l } => {
                if l > 0 && k.norm() == 0.0 {
                    return Err(Error::Domain("centrifugal Jost solution at k = 0".into()));
                }
                let a = if l > 0 { i / (2.0 * k) } else { re(0.0) };
                let poly = hankel_coefficients(l)
                    .into_iter()
                    .enumerate()
                    .map(|(m, c)| c * a.powi(m as i32))
                    .collect();
                ExpPoly::new(Aux::InvR, vec![ExpTerm { rate: i * k, poly }])
            }
        })
    }

    fn max_rate(&self) -> f64 {
        match *self {
            Base::Sech2 { kappa0 } => kappa0,
            _ => 0.0,
        }
    }
}

/// Jost-solution value with its r-derivative, sharing the factor e^{log_scale}.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JostValue {
    pub value: Complex64,
    pub deriv: Complex64,
    pub log_scale: f64,
}

impl JostValue {
    pub fn unscaled(&self) -> (Complex64, Complex64) {
        let s = self.log_scale.exp();
        (self.value * s, self.deriv * s)
    }
}

fn series_len(x: f64) -> usize {
    // smallest n with x^n/n! below 1e-24, plus headroom for reduction
    let mut term = 1.0;
    let mut n = 0usize;
    while term > 1e-24 || n < 24 {
        n += 1;
        term *= x / n as f64;
    }
    n + 16
}

/// W, W', W'' as series about the origin.
#[derive(Clone, Debug)]
struct NearOrigin {
    w: [Series; 3],
}

#[derive(Debug)]
pub struct CrumChain {
    base: Base,
    seeds: Vec<SeedSolution>,
    towers: Arc<Vec<ExpPolyTower>>,
    r_switch: f64,
    rate_sum: f64,
    near_origin: Option<NearOrigin>,
}

impl Clone for CrumChain {
    fn clone(&self) -> Self {
        CrumChain {
            base: self.base,
            seeds: self.seeds.clone(),
            towers: Arc::clone(&self.towers),
            r_switch: self.r_switch,
            rate_sum: self.rate_sum,
            near_origin: self.near_origin.clone(),
        }
    }
}

impl CrumChain {
    pub fn new(base: Base, seeds: Vec<SeedSolution>) -> CrumChain {
        let n = seeds.len();
        let towers: Vec<ExpPolyTower> = seeds.iter().map(|s| ExpPolyTower::new(&s.exppoly(), n + 1)).collect();
        let max_rate = seeds.iter().map(SeedSolution::max_rate).fold(base.max_rate(), f64::max);
        let rate_sum = seeds.iter().map(SeedSolution::max_rate).sum::<f64>() + base.max_rate();
        let r_switch = if n == 0 { 0.0 } else { (1.0 / max_rate).min(1.0) };
        let mut chain = CrumChain { base, seeds, towers: Arc::new(towers), r_switch, rate_sum, near_origin: None };
        if n > 0 {
            let len = series_len(rate_sum * r_switch);
            let w = chain.seed_wronskian_series(len);
            let w1 = w.derivative();
            let w2 = w1.derivative();
            chain.near_origin = Some(NearOrigin { w: [w, w1, w2] });
        }
        chain
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn seeds(&self) -> &[SeedSolution] {
        &self.seeds
    }

    /// Below this radius Wronskians come from Laurent series.
    pub fn r_switch(&self) -> f64 {
        self.r_switch
    }

    fn seed_wronskian_series(&self, len: usize) -> Series {
        let s: Vec<Series> = self.seeds.iter().map(|s| s.exppoly().series(len)).collect();
        series_wronskian(&s, self.r_switch)
    }

    fn seed_refs(&self) -> Vec<&dyn TowerProvider> {
        self.towers.iter().map(|t| t as &dyn TowerProvider).collect()
    }

    /// Seed Wronskian and its first two derivatives (mantissas) with their log-scale.
    fn seed_wronskians(&self, r: f64) -> ([Complex64; 3], f64) {
        self.seed_wronskians_via(r, r < self.r_switch)
    }

    fn seed_wronskians_via(&self, r: f64, series: bool) -> ([Complex64; 3], f64) {
        if series {
            let no = self.near_origin.as_ref().unwrap();
            return ([no.w[0].eval(r), no.w[1].eval(r), no.w[2].eval(r)], 0.0);
        }
        let (w, s) = wronskian_derivatives(&self.seed_refs(), r, 2).expect("towers carry enough orders");
        ([w[0], w[1], w[2]], s)
    }

    /// Seed Wronskian as (mantissa, log_scale); real for all families.
    pub fn seed_wronskian(&self, r: f64) -> (f64, f64) {
        if self.seeds.is_empty() {
            return (1.0, 0.0);
        }
        let (w, s) = self.seed_wronskians(r);
        (w[0].re, s)
    }

    pub fn potential(&self, r: f64) -> f64 {
        self.potential_via(r, r < self.r_switch)
    }

    fn potential_via(&self, r: f64, series: bool) -> f64 {
        if self.seeds.is_empty() {
            return self.base.potential(r);
        }
        let (w, _) = self.seed_wronskians_via(r, series);
        let a = w[1] / w[0];
        let b = w[2] / w[0];
        self.base.potential(r) - 2.0 * (b - a * a).re
    }

    /// Normalization prod_j (ik - lambda_j) making f ~ e^{ikr}.
    pub fn normalization(&self, k: Complex64) -> Complex64 {
        let ik = Complex64::i() * k;
        self.seeds.iter().map(|s| ik - s.asymptotic_rate()).product()
    }

    pub fn jost(&self, k: Complex64) -> Result<JostEvaluator> {
        let norm = self.normalization(k);
        if norm.norm() == 0.0 {
            return Err(Error::Domain(format!("k = {k} coincides with a seed wavenumber")));
        }
        let base = self.base.jost(k)?;
        Ok(JostEvaluator {
            k,
            norm,
            base_tower: ExpPolyTower::new(&base, self.seeds.len() + 1),
            base,
            chain: self.clone(),
            series: OnceLock::new(),
        })
    }
}

/// Jost solution f(k, .) of a chain at fixed k.
#[derive(Debug)]
pub struct JostEvaluator {
    k: Complex64,
    norm: Complex64,
    base: ExpPoly,
    base_tower: ExpPolyTower,
    chain: CrumChain,
    series: OnceLock<ShiftedSeries>,
}

/// Numerator and denominator Wronskians (with derivatives) of the functions
/// multiplied by e^{-shift r}; a decaying e^{ikr} is factored out this way so
/// the power series do not cancel.
#[derive(Debug)]
struct ShiftedSeries {
    shift: f64,
    num: [Series; 2],
    den: [Series; 2],
}

fn shifted(p: &ExpPoly, shift: f64) -> ExpPoly {
    let terms = p.terms.iter().map(|t| ExpTerm { rate: t.rate - shift, poly: t.poly.clone() }).collect();
    ExpPoly::new(p.aux, terms)
}

impl JostEvaluator {
    pub fn k(&self) -> Complex64 {
        self.k
    }

    fn near_origin(&self) -> &ShiftedSeries {
        self.series.get_or_init(|| {
            let shift = (-self.k.im).min(0.0);
            let x = (self.chain.rate_sum + self.k.norm()) * self.chain.r_switch;
            let len = series_len(x);
            let mut fns: Vec<Series> =
                self.chain.seeds.iter().map(|s| shifted(&s.exppoly(), shift).series(len)).collect();
            let den = series_wronskian(&fns, self.chain.r_switch);
            fns.push(shifted(&self.base, shift).series(len));
            let num = series_wronskian(&fns, self.chain.r_switch);
            let (dn, dd) = (num.derivative(), den.derivative());
            ShiftedSeries { shift, num: [num, dn], den: [den, dd] }
        })
    }

    pub fn eval(&self, r: f64) -> Result<JostValue> {
        if r <= 0.0 || !r.is_finite() {
            return Err(Error::Domain(format!("Jost solution evaluated at r = {r}")));
        }
        if self.chain.seeds.is_empty() {
            let t = self.base_tower.scaled_tower(r, 1);
            return Ok(JostValue { value: t.values[0], deriv: t.values[1], log_scale: t.log_scale });
        }
        self.eval_via(r, r < self.chain.r_switch)
    }

    fn eval_via(&self, r: f64, series: bool) -> Result<JostValue> {
        let (wn, sn, wd, sd) = if series {
            let ns = self.near_origin();
            let wn = [ns.num[0].eval(r), ns.num[1].eval(r)];
            let wd = [ns.den[0].eval(r), ns.den[1].eval(r)];
            let g = wn[0] / (self.norm * wd[0]);
            let dg = (wn[1] * wd[0] - wn[0] * wd[1]) / (self.norm * wd[0] * wd[0]);
            return Ok(JostValue { value: g, deriv: dg + ns.shift * g, log_scale: ns.shift * r });
        } else {
            let mut refs = self.chain.seed_refs();
            let (wd, sd) = wronskian_derivatives(&refs, r, 1)?;
            refs.push(&self.base_tower);
            let (wn, sn) = wronskian_derivatives(&refs, r, 1)?;
            ([wn[0], wn[1]], sn, [wd[0], wd[1]], sd)
        };
        let value = wn[0] / (self.norm * wd[0]);
        let deriv = (wn[1] * wd[0] - wn[0] * wd[1]) / (self.norm * wd[0] * wd[0]);
        Ok(JostValue { value, deriv, log_scale: sn - sd })
    }
}
