use crate::coupling::{GeneralCoupling, TransformedModel};
use crate::error::{Error, Result};
use crate::onechannel::RationalJost;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// (-1)^N (ik + kappa)^M (ik - kappa)^{N-M}: det F_c / det F_d.
pub fn determinant_factor(n: usize, m: usize, kappa: f64, k: Complex64) -> Complex64 {
    let ik = Complex64::i() * k;
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    (ik + kappa).powu(m as u32) * (ik - kappa).powu((n - m) as u32) * sign
}

/// F_c = -(ik I + w_inf) diag(F_d).
pub fn transformed_jost(w_inf: &DMatrix<f64>, fd: &[Complex64], k: Complex64) -> DMatrix<Complex64> {
    let n = fd.len();
    let ik = Complex64::i() * k;
    DMatrix::from_fn(n, n, |i, j| {
        let a = Complex64::new(w_inf[(i, j)], 0.0) + if i == j { ik } else { Complex64::new(0.0, 0.0) };
        -a * fd[j]
    })
}

/// Scattering data of a transformed model that depend only on w_inf and the
/// diagonal Jost functions; valid for any number of channels.
#[derive(Clone, Debug)]
pub struct AlgebraicModel {
    kappa: f64,
    m: usize,
    w_inf: DMatrix<f64>,
    channels: Vec<RationalJost>,
    l: Vec<u32>,
    l_tilde: Vec<u32>,
}

impl AlgebraicModel {
    pub fn new(coupling: &GeneralCoupling, channels: Vec<RationalJost>, l: Vec<u32>, l_tilde: Vec<u32>) -> Result<AlgebraicModel> {
        let n = coupling.n();
        if channels.len() != n || l.len() != n || l_tilde.len() != n {
            return Err(Error::Validation(vec![format!(
                "coupling has {n} channels but {} Jost functions, {} l values and {} relabeled l values were given",
                channels.len(),
                l.len(),
                l_tilde.len()
            )]));
        }
        let w_inf = coupling.w_infinity()?;
        Ok(AlgebraicModel { kappa: coupling.kappa, m: coupling.m, w_inf, channels, l, l_tilde })
    }

    pub fn from_model(model: &TransformedModel) -> AlgebraicModel {
        let ch = model.channels();
        AlgebraicModel {
            kappa: model.params().kappa,
            m: 1,
            w_inf: DMatrix::from_column_slice(2, 2, model.w_infinity().as_slice()),
            channels: vec![ch[0].jost_function().clone(), ch[1].jost_function().clone()],
            l: model.l().to_vec(),
            l_tilde: model.l_tilde().to_vec(),
        }
    }

    pub fn n(&self) -> usize {
        self.channels.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn w_infinity(&self) -> &DMatrix<f64> {
        &self.w_inf
    }

    pub fn channels(&self) -> &[RationalJost] {
        &self.channels
    }

    pub fn l(&self) -> &[u32] {
        &self.l
    }

    pub fn l_tilde(&self) -> &[u32] {
        &self.l_tilde
    }

    pub fn diagonal_jost(&self, k: Complex64) -> Result<Vec<Complex64>> {
        self.channels.iter().map(|f| f.eval(k)).collect()
    }

    pub fn jost_matrix(&self, k: Complex64) -> Result<DMatrix<Complex64>> {
        Ok(transformed_jost(&self.w_inf, &self.diagonal_jost(k)?, k))
    }

    /// det F_c from the matrix itself.
    pub fn determinant(&self, k: Complex64) -> Result<Complex64> {
        Ok(self.jost_matrix(k)?.determinant())
    }

    /// det F_d as a rational function, common zeros and poles cancelled.
    pub fn diagonal_determinant(&self) -> RationalJost {
        let mut acc = self.channels[0].clone();
        for f in &self.channels[1..] {
            acc = acc.product(f);
        }
        acc
    }

    pub fn determinant_factor(&self, k: Complex64) -> Complex64 {
        determinant_factor(self.n(), self.m, self.kappa, k)
    }
}
