use crate::error::{Error, Result};
use nalgebra::{DMatrix, Matrix2};
use serde::{Deserialize, Serialize};

/// Two-channel coupling data: factorization wavenumber and mixing (q, x).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingParams {
    pub kappa: f64,
    pub q: f64,
    pub x: f64,
}

impl CouplingParams {
    pub fn new(kappa: f64, q: f64, x: f64) -> CouplingParams {
        CouplingParams { kappa, q, x }
    }

    pub fn alpha(&self) -> f64 {
        2.0 * self.q.atan()
    }

    pub fn validation_errors(&self) -> Vec<String> {
        let mut errs = Vec::new();
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            errs.push(format!("coupling: kappa must be finite and positive, got {}", self.kappa));
        }
        if !self.q.is_finite() {
            errs.push("coupling: q must be finite".into());
        }
        if !self.x.is_finite() {
            errs.push("coupling: x must be finite".into());
        }
        errs
    }

    /// C = [[1, 0], [q, 0]], D = [[x, -q], [0, 1]].
    pub fn canonical_cd(&self) -> (Matrix2<f64>, Matrix2<f64>) {
        (
            Matrix2::new(1.0, 0.0, self.q, 0.0),
            Matrix2::new(self.x, -self.q, 0.0, 1.0),
        )
    }

    /// kappa [[cos a, sin a], [sin a, -cos a]] with a = 2 arctan q.
    pub fn w_infinity(&self) -> Matrix2<f64> {
        let q = self.q;
        let s = self.kappa / (1.0 + q * q);
        Matrix2::new(s * (1.0 - q * q), s * 2.0 * q, s * 2.0 * q, s * (q * q - 1.0))
    }

    pub fn to_general(&self) -> GeneralCoupling {
        GeneralCoupling {
            kappa: self.kappa,
            m: 1,
            q: DMatrix::from_element(1, 1, self.q),
            x0: DMatrix::from_element(1, 1, self.x),
        }
    }
}

/// N-channel coupling data in canonical form: M growing columns, Q of shape
/// (N-M) x M and symmetric nonsingular X0 of shape M x M.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralCoupling {
    pub kappa: f64,
    pub m: usize,
    pub q: DMatrix<f64>,
    pub x0: DMatrix<f64>,
}

impl GeneralCoupling {
    pub fn n(&self) -> usize {
        self.m + self.q.nrows()
    }

    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        let (n, m) = (self.n(), self.m);
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            errs.push(format!("coupling: kappa must be finite and positive, got {}", self.kappa));
        }
        if m == 0 || m >= n {
            errs.push(format!("coupling: need 0 < M < N, got M = {m}, N = {n}"));
        }
        if self.q.ncols() != m {
            errs.push(format!("coupling: Q must have {m} columns, has {}", self.q.ncols()));
        }
        if self.x0.nrows() != m || self.x0.ncols() != m {
            errs.push(format!("coupling: X0 must be {m}x{m}"));
        } else {
            let asym = (&self.x0 - self.x0.transpose()).amax();
            if asym > 1e-14 * (1.0 + self.x0.amax()) {
                errs.push("coupling: X0 must be symmetric".into());
            }
            let det = self.x0.clone().determinant();
            if det.abs() <= 1e-14 * self.x0.amax().powi(m as i32).max(f64::MIN_POSITIVE) {
                errs.push("coupling: X0 must be nonsingular".into());
            }
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(errs))
        }
    }

    /// C = [[I_M, 0], [Q, 0]], D = [[X0, -Q^T], [0, I]].
    pub fn canonical_cd(&self) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
        self.validate()?;
        let (n, m) = (self.n(), self.m);
        let mut c = DMatrix::zeros(n, n);
        let mut d = DMatrix::zeros(n, n);
        for i in 0..m {
            c[(i, i)] = 1.0;
        }
        c.view_mut((m, 0), (n - m, m)).copy_from(&self.q);
        d.view_mut((0, 0), (m, m)).copy_from(&self.x0);
        d.view_mut((0, m), (m, n - m)).copy_from(&(-self.q.transpose()));
        for i in m..n {
            d[(i, i)] = 1.0;
        }
        Ok((c, d))
    }

    /// kappa A diag(I_M, -I) A^{-1} with A = [[I, -Q^T], [Q, I]].
    pub fn w_infinity(&self) -> Result<DMatrix<f64>> {
        self.validate()?;
        let (n, m) = (self.n(), self.m);
        let mut a = DMatrix::identity(n, n);
        a.view_mut((0, m), (m, n - m)).copy_from(&(-self.q.transpose()));
        a.view_mut((m, 0), (n - m, m)).copy_from(&self.q);
        let mut sig = DMatrix::identity(n, n);
        for i in m..n {
            sig[(i, i)] = -1.0;
        }
        let inv = a.clone().try_inverse().ok_or_else(|| Error::Validation(vec!["coupling: singular mixing matrix".into()]))?;
        let w = (a * sig * inv) * self.kappa;
        Ok((&w + w.transpose()) * 0.5)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn w_infinity_examples() {
        let w = CouplingParams::new(6.0, 0.5, 25.0).w_infinity();
        assert!((w - Matrix2::new(3.6, 4.8, 4.8, -3.6)).amax() < 1e-14);
        let w = CouplingParams::new(2.0, 1.0, 1.0).w_infinity();
        assert!((w - Matrix2::new(0.0, 2.0, 2.0, 0.0)).amax() < 1e-15);
        let w = CouplingParams::new(2.0, 0.0, 1.0).w_infinity();
        assert!((w - Matrix2::new(2.0, 0.0, 0.0, -2.0)).amax() < 1e-15);
        let p = CouplingParams::new(4.0, 0.4, 15.0);
        let a = p.alpha();
        let want = Matrix2::new(a.cos(), a.sin(), a.sin(), -a.cos()) * 4.0;
        assert!((p.w_infinity() - want).amax() < 1e-14);
    }

    #[test]
    fn canonical_forms_agree() {
        let p = CouplingParams::new(3.0, 0.7, -2.0);
        let (c, d) = p.canonical_cd();
        assert_eq!(c, Matrix2::new(1.0, 0.0, 0.7, 0.0));
        assert_eq!(d, Matrix2::new(-2.0, -0.7, 0.0, 1.0));
        assert!((d.transpose() * c - c.transpose() * d).amax() == 0.0);
        let (cg, dg) = p.to_general().canonical_cd().unwrap();
        assert_eq!(cg.as_slice(), c.as_slice());
        assert_eq!(dg.as_slice(), d.as_slice());
        let wg = p.to_general().w_infinity().unwrap();
        assert!((wg.as_slice().iter().zip(p.w_infinity().as_slice()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)) < 1e-14);
    }

    #[test]
    fn decoupled_limit_is_block_diagonal() {
        let (c, d) = CouplingParams::new(1.0, 0.0, 3.0).canonical_cd();
        assert_eq!(c[(1, 0)], 0.0);
        assert_eq!(d[(0, 1)], 0.0);
    }

    #[test]
    fn singular_x0_rejected() {
        let g = GeneralCoupling { kappa: 1.0, m: 1, q: DMatrix::from_element(2, 1, 0.3), x0: DMatrix::zeros(1, 1) };
        assert!(matches!(g.canonical_cd(), Err(Error::Validation(_))));
    }
}
