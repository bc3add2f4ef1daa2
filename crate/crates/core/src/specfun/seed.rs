use super::exppoly::{Aux, ExpPoly, ExpTerm};
use super::hankel::hankel_coefficients;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Elementary solutions used as transformation seeds in one-channel chains.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SeedSolution {
    /// sinh(kappa r)
    SinhNode { kappa: f64 },
    /// e^{kappa r} + beta e^{-kappa r}
    ExpCombo { kappa: f64, beta: f64 },
    /// kappa sinh(kappa r) - kappa0 cosh(kappa r) tanh(kappa0 r), the odd solution
    /// of the -2 kappa0^2 sech^2(kappa0 r) well at energy -kappa^2
    TanhShifted { kappa: f64, kappa0: f64 },
    /// h_l(i kappa r), decaying and real
    HankelDecay { kappa: f64, l: u32 },
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

impl SeedSolution {
    pub fn exppoly(&self) -> ExpPoly {
        match *self {
            SeedSolution::SinhNode { kappa } => ExpPoly::new(
                Aux::Const,
                vec![
                    ExpTerm { rate: re(kappa), poly: vec![re(0.5)] },
                    ExpTerm { rate: re(-kappa), poly: vec![re(-0.5)] },
                ],
            ),
            SeedSolution::ExpCombo { kappa, beta } => ExpPoly::new(
                Aux::Const,
                vec![
                    ExpTerm { rate: re(kappa), poly: vec![re(1.0)] },
                    ExpTerm { rate: re(-kappa), poly: vec![re(beta)] },
                ],
            ),
            SeedSolution::TanhShifted { kappa, kappa0 } => ExpPoly::new(
                Aux::Tanh(kappa0),
                vec![
                    ExpTerm { rate: re(kappa), poly: vec![re(0.5 * kappa), re(-0.5 * kappa0)] },
                    ExpTerm { rate: re(-kappa), poly: vec![re(-0.5 * kappa), re(-0.5 * kappa0)] },
                ],
            ),
            SeedSolution::HankelDecay { kappa, l } => {
                let poly = hankel_coefficients(l)
                    .into_iter()
                    .enumerate()
                    .map(|(m, c)| re(c / (2.0 * kappa).powi(m as i32)))
                    .collect();
                ExpPoly::new(Aux::InvR, vec![ExpTerm { rate: re(-kappa), poly }])
            }
        }
    }

    /// Exponent of the leading large-r behaviour e^{rate r}.
    pub fn asymptotic_rate(&self) -> f64 {
        match *self {
            SeedSolution::SinhNode { kappa }
            | SeedSolution::ExpCombo { kappa, .. }
            | SeedSolution::TanhShifted { kappa, .. } => kappa,
            SeedSolution::HankelDecay { kappa, .. } => -kappa,
        }
    }

    /// Largest wavenumber appearing in the function, sets the series radius.
    pub fn max_rate(&self) -> f64 {
        match *self {
            SeedSolution::TanhShifted { kappa, kappa0 } => kappa.max(kappa0),
            _ => self.asymptotic_rate().abs(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let r: f64 = 0.73;
        let s = SeedSolution::SinhNode { kappa: 1.4 }.exppoly().eval(r).re;
        assert!((s - (1.4 * r).sinh()).abs() < 1e-15);
        let e = SeedSolution::ExpCombo { kappa: 2.5, beta: -2.0 }.exppoly().eval(r).re;
        assert!((e - ((2.5 * r).exp() - 2.0 * (-2.5 * r).exp())).abs() < 1e-14);
        let (ki, k0) = (1.5, 1.0);
        let t = SeedSolution::TanhShifted { kappa: ki, kappa0: k0 }.exppoly().eval(r).re;
        let want = ki * (ki * r).sinh() - k0 * (ki * r).cosh() * (k0 * r).tanh();
        assert!((t - want).abs() < 1e-14);
        let k4: f64 = 3.0;
        let v = SeedSolution::HankelDecay { kappa: k4, l: 2 }.exppoly().eval(r).re;
        let x = k4 * r;
        let want = (-x).exp() * (1.0 + 3.0 / x + 3.0 / (x * x));
        assert!((v - want).abs() < 1e-14 * want);
    }

    #[test]
    fn sinh_node_vanishes_at_origin_and_grows() {
        let f = SeedSolution::SinhNode { kappa: 2.0 }.exppoly();
        assert_eq!(f.eval(0.0).re, 0.0);
        let r = 20.0;
        assert!(((f.eval(r).re / (2.0f64 * r).exp()) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn seeds_solve_their_equations() {
        // TanhShifted seeds solve -u'' - 2k0^2 sech^2(k0 r) u = -ki^2 u
        let (ki, k0) = (1.75, 1.0);
        let tw = SeedSolution::TanhShifted { kappa: ki, kappa0: k0 }.exppoly().tower(2);
        for &r in &[0.2, 1.0, 3.0] {
            let v = -2.0 * k0 * k0 / (k0 * r).cosh().powi(2);
            let res = -tw[2].eval(r) + (v + ki * ki) * tw[0].eval(r);
            assert!(res.norm() < 1e-12 * tw[0].eval(r).norm());
        }
        // HankelDecay solves the free l = 2 equation at E = -kappa^2
        let k4 = 3.0;
        let tw = SeedSolution::HankelDecay { kappa: k4, l: 2 }.exppoly().tower(2);
        for &r in &[0.2, 1.0, 3.0] {
            let res = -tw[2].eval(r) + (6.0 / (r * r) + k4 * k4) * tw[0].eval(r);
            assert!(res.norm() < 1e-12 * tw[0].eval(r).norm());
        }
    }
}
