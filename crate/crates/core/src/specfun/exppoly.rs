//! Functions of the form sum_j e^{rate_j r} P_j(t(r)) with a shared auxiliary
//! variable t; closed under differentiation, so derivative towers are exact.

use super::series::Series;
use num_complex::Complex64;

/// Auxiliary variable t(r) the polynomial parts depend on.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Aux {
    /// No r-dependence besides the exponentials.
    Const,
    /// t = tanh(kappa r), t' = kappa (1 - t^2).
    Tanh(f64),
    /// t = 1/r, t' = -t^2.
    InvR,
}

impl Aux {
    pub fn value(self, r: f64) -> f64 {
        match self {
            Aux::Const => 0.0,
            Aux::Tanh(k) => (k * r).tanh(),
            Aux::InvR => 1.0 / r,
        }
    }

    /// t' as a polynomial in t.
    fn derivative_poly(self) -> Vec<f64> {
        match self {
            Aux::Const => vec![0.0],
            Aux::Tanh(k) => vec![k, 0.0, -k],
            Aux::InvR => vec![0.0, 0.0, -1.0],
        }
    }

    /// Power series of t about r = 0, known through exponent `len - 1`.
    pub fn series(self, len: usize) -> Series {
        match self {
            Aux::Const => Series::constant(Complex64::new(0.0, 0.0), len),
            Aux::Tanh(k) => Series::tanh(k, len),
            Aux::InvR => {
                let mut c = vec![Complex64::new(0.0, 0.0); len + 1];
                c[0] = Complex64::new(1.0, 0.0);
                Series::new(-1, c)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpTerm {
    pub rate: Complex64,
    /// Coefficients of P in ascending powers of t.
    pub poly: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpPoly {
    pub aux: Aux,
    pub terms: Vec<ExpTerm>,
}

fn poly_eval(p: &[Complex64], t: f64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for c in p.iter().rev() {
        acc = acc * t + c;
    }
    acc
}

impl ExpPoly {
    pub fn new(aux: Aux, terms: Vec<ExpTerm>) -> ExpPoly {
        ExpPoly { aux, terms }
    }

    /// Largest real part of the rates; the natural scale exponent.
    pub fn dominant_rate(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.rate.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn derivative(&self) -> ExpPoly {
        let dt = self.aux.derivative_poly();
        let terms = self
            .terms
            .iter()
            .map(|term| {
                let deg = term.poly.len();
                let mut out = vec![Complex64::new(0.0, 0.0); deg + dt.len() - 1];
                for (j, c) in term.poly.iter().enumerate() {
                    out[j] += term.rate * c;
                    if j > 0 {
                        for (m, d) in dt.iter().enumerate() {
                            out[j - 1 + m] += c * (j as f64) * d;
                        }
                    }
                }
                while out.len() > 1 && out[out.len() - 1] == Complex64::new(0.0, 0.0) {
                    out.pop();
                }
                ExpTerm { rate: term.rate, poly: out }
            })
            .collect();
        ExpPoly { aux: self.aux, terms }
    }

    /// [f, f', ..., f^(order)]
    pub fn tower(&self, order: usize) -> Vec<ExpPoly> {
        let mut out = Vec::with_capacity(order + 1);
        out.push(self.clone());
        for _ in 0..order {
            let next = out.last().unwrap().derivative();
            out.push(next);
        }
        out
    }

    /// e^{-shift r} f(r)
    pub fn eval_scaled(&self, r: f64, shift: f64) -> Complex64 {
        let t = self.aux.value(r);
        self.terms
            .iter()
            .map(|term| ((term.rate - shift) * r).exp() * poly_eval(&term.poly, t))
            .sum()
    }

    pub fn eval(&self, r: f64) -> Complex64 {
        self.eval_scaled(r, 0.0)
    }

    /// Laurent series about r = 0 with `len` known orders above the lead.
    pub fn series(&self, len: usize) -> Series {
        let extra = match self.aux {
            Aux::InvR => self.terms.iter().map(|t| t.poly.len()).max().unwrap_or(1),
            _ => 0,
        };
        let n = len + extra;
        let t = self.aux.series(n);
        let mut total: Option<Series> = None;
        for term in &self.terms {
            let mut p = Series::constant(*term.poly.last().unwrap(), n);
            for c in term.poly.iter().rev().skip(1) {
                p = &(&p * &t) + &Series::constant(*c, n);
            }
            let s = &Series::exp(term.rate, n) * &p;
            total = Some(match total {
                None => s,
                Some(acc) => &acc + &s,
            });
        }
        total.expect("empty function").normalized()
    }
}
