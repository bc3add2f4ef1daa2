use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// F(k) = prefactor * prod(k - zeros) / prod(k - poles).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalJost {
    pub prefactor: Complex64,
    pub zeros: Vec<Complex64>,
    pub poles: Vec<Complex64>,
}

const COINCIDE: f64 = 1e-12;

fn close(a: Complex64, b: Complex64) -> bool {
    (a - b).norm() <= COINCIDE * (1.0 + a.norm().max(b.norm()))
}

impl RationalJost {
    pub fn new(prefactor: Complex64, zeros: Vec<Complex64>, poles: Vec<Complex64>) -> Result<RationalJost> {
        if prefactor == Complex64::new(0.0, 0.0) {
            return Err(Error::Validation(vec!["Jost function prefactor is zero".into()]));
        }
        for z in &zeros {
            if poles.iter().any(|p| close(*z, *p)) {
                return Err(Error::Validation(vec![format!("Jost function zero {z} coincides with a pole")]));
            }
        }
        Ok(RationalJost { prefactor, zeros, poles })
    }

    pub fn is_pole(&self, k: Complex64) -> bool {
        self.poles.iter().any(|p| close(k, *p))
    }

    pub fn eval(&self, k: Complex64) -> Result<Complex64> {
        if self.is_pole(k) {
            return Err(Error::Domain(format!("k = {k} is a pole of the Jost function")));
        }
        Ok(self.eval_unchecked(k))
    }

    pub fn eval_unchecked(&self, k: Complex64) -> Complex64 {
        let num: Complex64 = self.zeros.iter().map(|z| k - z).product();
        let den: Complex64 = self.poles.iter().map(|p| k - p).product();
        self.prefactor * num / den
    }

    /// d ln F / dk
    pub fn log_derivative(&self, k: Complex64) -> Complex64 {
        let a: Complex64 = self.zeros.iter().map(|z| 1.0 / (k - z)).sum();
        let b: Complex64 = self.poles.iter().map(|p| 1.0 / (k - p)).sum();
        a - b
    }

    /// Product with cancellation of coinciding zeros and poles.
    pub fn product(&self, other: &RationalJost) -> RationalJost {
        let mut zeros: Vec<Complex64> = self.zeros.iter().chain(&other.zeros).copied().collect();
        let mut poles = Vec::new();
        for p in self.poles.iter().chain(&other.poles) {
            if let Some(pos) = zeros.iter().position(|z| close(*z, *p)) {
                zeros.remove(pos);
            } else {
                poles.push(*p);
            }
        }
        RationalJost { prefactor: self.prefactor * other.prefactor, zeros, poles }
    }

    /// Phase shift for partial wave `l`, continuous for k > 0:
    /// l pi/2 - arg F(k), with the k -> infinity value reduced to (-pi/2, pi/2].
    pub fn phase_shift(&self, l: u32, k: f64) -> f64 {
        let kc = Complex64::new(k, 0.0);
        let mut asym = f64::from(l) * PI / 2.0 - self.prefactor.arg();
        asym -= PI * ((asym - PI / 2.0) / PI).ceil();
        let zs: f64 = self.zeros.iter().map(|z| (kc - z).arg()).sum();
        let ps: f64 = self.poles.iter().map(|p| (kc - p).arg()).sum();
        asym - zs + ps
    }

    /// S = e^{i l pi} F(-k)/F(k)
    pub fn s_matrix(&self, l: u32, k: f64) -> Result<Complex64> {
        let kc = Complex64::new(k, 0.0);
        let sign = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
        Ok(sign * self.eval(-kc)? / self.eval(kc)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ci(y: f64) -> Complex64 {
        Complex64::new(0.0, y)
    }

    #[test]
    fn cosech_phase_and_s() {
        // F = 1/(k0 - ik) = i/(k + i k0)
        let k0 = 1.5;
        let f = RationalJost::new(ci(1.0), vec![], vec![ci(-k0)]).unwrap();
        for &k in &[0.1, 1.0, 7.0] {
            let kc = Complex64::new(k, 0.0);
            assert!((f.eval(kc).unwrap() - 1.0 / (k0 - ci(k))).norm() < 1e-15);
            let s = f.s_matrix(0, k).unwrap();
            // repulsive: S = (k0 - ik)/(k0 + ik), delta = -arctan(k/k0) mod pi
            assert!((s - (k0 - ci(k)) / (k0 + ci(k))).norm() < 1e-14);
            let d = f.phase_shift(0, k);
            let diff = d + (k / k0).atan();
            assert!((diff - PI * (diff / PI).round()).abs() < 1e-14);
            assert!((Complex64::new(0.0, 2.0 * d).exp() - s).norm() < 1e-14);
        }
        assert!(matches!(f.eval(ci(-k0)), Err(Error::Domain(_))));
    }

    #[test]
    fn product_cancels() {
        let a = RationalJost::new(ci(1.0), vec![ci(2.0)], vec![ci(-1.0)]).unwrap();
        let b = RationalJost::new(Complex64::new(2.0, 0.0), vec![ci(-1.0)], vec![ci(-3.0)]).unwrap();
        let p = a.product(&b);
        assert_eq!(p.zeros, vec![ci(2.0)]);
        assert_eq!(p.poles, vec![ci(-3.0)]);
        let k = Complex64::new(0.3, 0.2);
        assert!((p.eval(k).unwrap() - a.eval(k).unwrap() * b.eval(k).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn zero_on_pole_rejected() {
        assert!(RationalJost::new(ci(1.0), vec![ci(1.0)], vec![ci(1.0)]).is_err());
    }
}
