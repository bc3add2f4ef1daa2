//! Truncated Laurent series in r, used near the origin where closed-form
//! Wronskians lose all significant digits to cancellation.

use num_complex::Complex64;
use std::ops::{Add, Mul, Neg, Sub};

/// sum_n coeffs[n] r^(lead + n), known through exponent `top()`.
#[derive(Clone, Debug, PartialEq)]
pub struct Series {
    lead: i32,
    coeffs: Vec<Complex64>,
}

fn czero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

impl Series {
    pub fn new(lead: i32, coeffs: Vec<Complex64>) -> Series {
        assert!(!coeffs.is_empty(), "series needs at least one coefficient");
        Series { lead, coeffs }
    }

    /// Zero known through exponent `top`.
    pub fn zero(top: i32) -> Series {
        Series::new(top, vec![czero()])
    }

    pub fn constant(c: Complex64, len: usize) -> Series {
        let mut coeffs = vec![czero(); len];
        coeffs[0] = c;
        Series::new(0, coeffs)
    }

    pub fn lead(&self) -> i32 {
        self.lead
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn top(&self) -> i32 {
        self.lead + self.coeffs.len() as i32 - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of r^e (zero below the lead, panics past the top).
    pub fn coeff(&self, e: i32) -> Complex64 {
        assert!(e <= self.top(), "exponent {e} beyond known order {}", self.top());
        if e < self.lead {
            czero()
        } else {
            self.coeffs[(e - self.lead) as usize]
        }
    }

    /// e^{rate r}
    pub fn exp(rate: Complex64, len: usize) -> Series {
        let mut coeffs = Vec::with_capacity(len);
        let mut c = Complex64::new(1.0, 0.0);
        for n in 0..len {
            coeffs.push(c);
            c = c * rate / (n + 1) as f64;
        }
        Series::new(0, coeffs)
    }

    /// tanh(kappa r)
    pub fn tanh(kappa: f64, len: usize) -> Series {
        let mut sinh = vec![czero(); len];
        let mut cosh = vec![czero(); len];
        let mut c = 1.0;
        for n in 0..len {
            if n % 2 == 0 {
                cosh[n] = Complex64::new(c, 0.0);
            } else {
                sinh[n] = Complex64::new(c, 0.0);
            }
            c *= kappa / (n + 1) as f64;
        }
        Series::new(0, sinh).div(&Series::new(0, cosh))
    }

    /// Drop exactly-zero leading coefficients.
    pub fn normalized(mut self) -> Series {
        let nz = self.coeffs.iter().position(|c| *c != czero());
        match nz {
            Some(0) => self,
            Some(p) => {
                self.coeffs.drain(..p);
                self.lead += p as i32;
                self
            }
            None => Series::zero(self.top()),
        }
    }

    /// Keep terms through exponent `top`.
    pub fn truncated(mut self, top: i32) -> Series {
        if top < self.top() {
            let keep = (top - self.lead + 1).max(1) as usize;
            self.coeffs.truncate(keep);
        }
        self
    }

    pub fn scale(&self, c: Complex64) -> Series {
        Series::new(self.lead, self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Series {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| c * f64::from(self.lead + n as i32))
            .collect();
        Series::new(self.lead - 1, coeffs).normalized()
    }

    /// self / other; `other` must have a nonzero leading coefficient.
    pub fn div(&self, other: &Series) -> Series {
        let b = other.clone().normalized();
        let b0 = b.coeffs[0];
        assert!(b0 != czero(), "division by a series with unknown leading order");
        let len = self.len().min(b.len());
        let mut q = Vec::with_capacity(len);
        for n in 0..len {
            let mut acc = self.coeffs[n];
            for (j, qj) in q.iter().enumerate() {
                acc -= qj * b.coeffs[n - j];
            }
            q.push(acc / b0);
        }
        Series::new(self.lead - b.lead, q)
    }

    /// Evaluate at r by Horner on the regular part, scaled by r^lead.
    pub fn eval(&self, r: f64) -> Complex64 {
        let mut acc = czero();
        for c in self.coeffs.iter().rev() {
            acc = acc * r + c;
        }
        acc * r.powi(self.lead)
    }

    /// Largest |c_n| r^(lead+n) among the last `tail` terms, relative to |value|.
    pub fn tail_estimate(&self, r: f64, tail: usize) -> f64 {
        let n = self.coeffs.len();
        let start = n.saturating_sub(tail);
        let mut t: f64 = 0.0;
        for (j, c) in self.coeffs.iter().enumerate().skip(start) {
            t = t.max(c.norm() * r.powi(self.lead + j as i32));
        }
        t
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, other: &Series) -> Series {
        let lead = self.lead.min(other.lead);
        let top = self.top().min(other.top());
        let len = (top - lead + 1).max(1) as usize;
        let coeffs = (0..len)
            .map(|n| {
                let e = lead + n as i32;
                self.coeff(e) + other.coeff(e)
            })
            .collect();
        Series::new(lead, coeffs)
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, other: &Series) -> Series {
        self + &(-other)
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, other: &Series) -> Series {
        let len = self.len().min(other.len());
        let mut coeffs = vec![czero(); len];
        for (i, a) in self.coeffs.iter().take(len).enumerate() {
            if *a == czero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().take(len - i).enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Series::new(self.lead + other.lead, coeffs)
    }
}
