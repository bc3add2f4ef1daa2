use crate::error::{Error, Result};
use serde::Serialize;
use std::f64::consts::{FRAC_PI_2, PI};

/// Angular-momentum pattern of a two-channel model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum MixingCase {
    /// l2 - l1 odd
    OddDifference,
    /// l2 - l1 even and nonzero
    EvenDifference,
    /// l1 = l2
    EqualWaves,
}

impl MixingCase {
    pub fn of(l: [u32; 2]) -> MixingCase {
        let d = l[1].abs_diff(l[0]);
        if d == 0 {
            MixingCase::EqualWaves
        } else if d % 2 == 1 {
            MixingCase::OddDifference
        } else {
            MixingCase::EvenDifference
        }
    }
}

/// tan 2 epsilon = num / den; the pair fixes 2 epsilon modulo pi.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TanTwoEpsilon {
    pub num: f64,
    pub den: f64,
}

impl TanTwoEpsilon {
    pub fn value(&self) -> f64 {
        self.num / self.den
    }

    /// 2 epsilon reduced to (-pi/2, pi/2].
    pub fn two_epsilon(&self) -> f64 {
        let t = f64::atan2(self.num, self.den);
        t - PI * ((t - FRAC_PI_2) / PI).ceil()
    }

    /// Distance between 2 epsilon and 2 `eps`, modulo pi.
    pub fn distance(&self, eps: f64) -> f64 {
        let d = (2.0 * eps - self.two_epsilon()).rem_euclid(PI);
        d.min(PI - d)
    }
}

/// Data entering the closed-form mixing angles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MixingInputs {
    pub l: [u32; 2],
    pub kappa: f64,
    pub alpha: f64,
    /// delta_{d;2}(k) - delta_{d;1}(k)
    pub delta_diff: f64,
}

fn parity(n: i64) -> f64 {
    if n.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Mixing angle of a transformed model in terms of the uncoupled phase
/// difference. Unequal partial waves need alpha = +-pi/2.
pub fn mixing_closed_form(case: MixingCase, inputs: &MixingInputs, k: f64) -> Result<TanTwoEpsilon> {
    let MixingInputs { l, kappa, alpha, delta_diff } = *inputs;
    if MixingCase::of(l) != case {
        return Err(Error::Contract(format!("l = ({}, {}) is not of type {case:?}", l[0], l[1])));
    }
    let (sa, ca) = alpha.sin_cos();
    if case != MixingCase::EqualWaves && ca.abs() > 1e-12 {
        return Err(Error::Constraint(format!("unequal partial waves require alpha = +-pi/2, got {alpha}")));
    }
    let (sd, cd) = delta_diff.sin_cos();
    let dl = i64::from(l[1]) - i64::from(l[0]);
    Ok(match case {
        MixingCase::OddDifference => TanTwoEpsilon {
            num: 2.0 * parity((dl - 1) / 2) * kappa * sa * (k * sd - kappa * ca * cd),
            den: 2.0 * kappa * k * ca * cd - (k * k - kappa * kappa) * sd,
        },
        _ => TanTwoEpsilon {
            num: 2.0 * parity(dl / 2) * kappa * sa * (kappa * ca * sd + k * cd),
            den: sd * (k * k - kappa * kappa * (2.0 * alpha).cos()) - 2.0 * kappa * k * ca * cd,
        },
    })
}

/// Odd l-difference at alpha = pi/2: epsilon = (-1)^{(l2-l1-1)/2} arctan(k/kappa).
pub fn mixing_odd_simplified(l: [u32; 2], kappa: f64, k: f64) -> f64 {
    let dl = i64::from(l[1]) - i64::from(l[0]);
    parity((dl - 1) / 2) * (k / kappa).atan()
}

/// Even l-difference at alpha = pi/2: (-1)^{(l2-l1)/2} 2 kappa k/(k^2+kappa^2) cot(delta_diff).
pub fn mixing_even_simplified(l: [u32; 2], kappa: f64, delta_diff: f64, k: f64) -> TanTwoEpsilon {
    let dl = i64::from(l[1]) - i64::from(l[0]);
    TanTwoEpsilon { num: parity(dl / 2) * 2.0 * kappa * k * delta_diff.cos(), den: (k * k + kappa * kappa) * delta_diff.sin() }
}

/// Two cosech channels with kappa tied to their scattering lengths.
pub fn mixing_cosech_pair(kappa1: f64, kappa2: f64, alpha: f64, k: f64) -> TanTwoEpsilon {
    let (k1, k2) = (kappa1 * kappa1, kappa2 * kappa2);
    let sec2 = 1.0 / (alpha.cos() * alpha.cos());
    TanTwoEpsilon { num: -2.0 * k * k * kappa1 * kappa2 * alpha.tan(), den: k1 * k2 * sec2 + k * k * (k1 + k2) }
}

/// s-d pair: 2 kappa k/(k^2+kappa^2) tan(sum_j arctan(k/kappa_j)) over the
/// four s-wave and one d-wave seed wavenumbers.
pub fn mixing_sd_pair(kappa: f64, seeds: &[f64; 5], k: f64) -> TanTwoEpsilon {
    let s: f64 = seeds.iter().map(|kj| (k / kj).atan()).sum();
    TanTwoEpsilon { num: 2.0 * kappa * k * s.sin(), den: (k * k + kappa * kappa) * s.cos() }
}

/// kappa making epsilon(0) = 0 for two s-wave channels with scattering
/// lengths a1, a2: cos(alpha) = 1/((a2 - a1) kappa).
pub fn kappa_for_scattering_lengths(a1: f64, a2: f64, q: f64) -> f64 {
    let ca = (1.0 - q * q) / (1.0 + q * q);
    1.0 / ((a2 - a1) * ca)
}
