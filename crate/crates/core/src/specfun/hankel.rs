use crate::error::{Error, Result};
use num_complex::Complex64;

/// Coefficients (l+m)!/(m!(l-m)!) of the Riccati-Hankel polynomial in i/(2z).
pub fn hankel_coefficients(l: u32) -> Vec<f64> {
    let mut c = Vec::with_capacity(l as usize + 1);
    let mut cur = 1.0;
    c.push(cur);
    for m in 0..l {
        // c_{m+1}/c_m = (l+m+1)(l-m)/(m+1)
        cur *= f64::from(l + m + 1) * f64::from(l - m) / f64::from(m + 1);
        c.push(cur);
    }
    c
}

/// Riccati-Hankel function h_l(z) = e^{iz} sum_m c_m (i/(2z))^m and its z-derivative.
pub fn riccati_hankel(l: u32, z: Complex64) -> Result<(Complex64, Complex64)> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::Domain("riccati_hankel evaluated at z = 0".into()));
    }
    let i = Complex64::i();
    let a = i / (2.0 * z);
    let mut poly = Complex64::new(0.0, 0.0);
    let mut dpoly = Complex64::new(0.0, 0.0);
    let mut pw = Complex64::new(1.0, 0.0);
    for (m, c) in hankel_coefficients(l).into_iter().enumerate() {
        poly += c * pw;
        dpoly += c * m as f64 * pw;
        pw *= a;
    }
    let e = (i * z).exp();
    Ok((e * poly, e * (i * poly - dpoly / z)))
}
