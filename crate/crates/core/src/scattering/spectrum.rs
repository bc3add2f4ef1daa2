use super::jost::{transformed_jost, AlgebraicModel};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

/// Rectangle in the complex k-plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SearchBox {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl SearchBox {
    /// A box around every zero and pole of the model, with edges off the axes.
    pub fn around(model: &AlgebraicModel) -> SearchBox {
        let mut r = model.kappa();
        for f in model.channels() {
            for z in f.zeros.iter().chain(&f.poles) {
                r = r.max(z.norm());
            }
        }
        let r = 1.5 * r + 1.0;
        SearchBox { re: (-0.987 * r, 1.013 * r), im: (-1.0071 * r, 0.9929 * r) }
    }

    fn corners(&self) -> [Complex64; 4] {
        [
            Complex64::new(self.re.0, self.im.0),
            Complex64::new(self.re.1, self.im.0),
            Complex64::new(self.re.1, self.im.1),
            Complex64::new(self.re.0, self.im.1),
        ]
    }

    fn size(&self) -> f64 {
        (self.re.1 - self.re.0).max(self.im.1 - self.im.0)
    }

    fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.re.0 + self.re.1), 0.5 * (self.im.0 + self.im.1))
    }

    fn split(&self, fx: f64, fy: f64) -> [SearchBox; 4] {
        let xm = self.re.0 + fx * (self.re.1 - self.re.0);
        let ym = self.im.0 + fy * (self.im.1 - self.im.0);
        [
            SearchBox { re: (self.re.0, xm), im: (self.im.0, ym) },
            SearchBox { re: (xm, self.re.1), im: (self.im.0, ym) },
            SearchBox { re: (self.re.0, xm), im: (ym, self.im.1) },
            SearchBox { re: (xm, self.re.1), im: (ym, self.im.1) },
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralZero {
    pub k: Complex64,
    pub degeneracy: usize,
    /// |det F_c(k)| relative to its maximum on a small surrounding circle.
    pub residual: f64,
}

/// Zeros of det F_c sorted by kind.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralCatalog {
    pub search_box: SearchBox,
    /// k = i kappa_b, kappa_b > 0
    pub bound: Vec<SpectralZero>,
    /// k = -i kappa_v, kappa_v > 0
    pub virtual_states: Vec<SpectralZero>,
    pub threshold: Vec<SpectralZero>,
    /// off the imaginary axis
    pub resonances: Vec<SpectralZero>,
    /// poles of det F_c (net poles of det F_d)
    pub poles: Vec<Complex64>,
    /// boxes where the zero count could not be resolved into polished zeros
    pub unresolved: Vec<(SearchBox, i64)>,
}

impl SpectralCatalog {
    pub fn all_zeros(&self) -> impl Iterator<Item = &SpectralZero> {
        self.bound.iter().chain(&self.virtual_states).chain(&self.threshold).chain(&self.resonances)
    }
}

struct Det<'a> {
    model: &'a AlgebraicModel,
    poles: Vec<Complex64>,
}

impl Det<'_> {
    fn det(&self, k: Complex64) -> Complex64 {
        let fd: Vec<Complex64> = self.model.channels().iter().map(|f| f.eval_unchecked(k)).collect();
        transformed_jost(self.model.w_infinity(), &fd, k).determinant()
    }

    /// det F_c with its poles removed: an entire function.
    fn g(&self, k: Complex64) -> Complex64 {
        let p: Complex64 = self.poles.iter().map(|p| k - p).product();
        let d = self.det(k) * p;
        if d.is_finite() {
            d
        } else {
            // on top of a pole: multiply out analytically through a tiny shift
            let h = Complex64::new(1e-9 * (1.0 + k.norm()), 0.0);
            0.5 * (self.g(k + h) + self.g(k - h))
        }
    }

    fn arg_change(&self, a: Complex64, b: Complex64, ga: Complex64, gb: Complex64, depth: u32) -> Option<f64> {
        let d = (gb / ga).arg();
        if d.abs() < PI / 4.0 {
            return Some(d);
        }
        if depth > 40 || (b - a).norm() < 1e-13 * (1.0 + a.norm()) {
            return None;
        }
        let m = 0.5 * (a + b);
        let gm = self.g(m);
        if gm.norm() == 0.0 {
            return None;
        }
        Some(self.arg_change(a, m, ga, gm, depth + 1)? + self.arg_change(m, b, gm, gb, depth + 1)?)
    }

    /// Number of zeros of g inside the box, None when a zero sits on the edge.
    fn count(&self, b: &SearchBox) -> Option<i64> {
        let c = b.corners();
        let mut total = 0.0;
        for e in 0..4 {
            let (p, q) = (c[e], c[(e + 1) % 4]);
            let n = 32;
            let pts: Vec<Complex64> = (0..=n).map(|i| p + (q - p) * (i as f64 / n as f64)).collect();
            let vals: Vec<Complex64> = pts.iter().map(|&z| self.g(z)).collect();
            if vals.iter().any(|v| v.norm() == 0.0) {
                return None;
            }
            for i in 0..n {
                total += self.arg_change(pts[i], pts[i + 1], vals[i], vals[i + 1], 0)?;
            }
        }
        let w = total / (2.0 * PI);
        if (w - w.round()).abs() > 0.05 {
            return None;
        }
        Some(w.round() as i64)
    }

    fn polish(&self, start: Complex64, m: usize) -> Option<Complex64> {
        let mut k = start;
        for _ in 0..100 {
            let h = 1e-6 * (1.0 + k.norm());
            let hc = Complex64::new(h, 0.0);
            let g = self.g(k);
            if g.norm() == 0.0 {
                return Some(k);
            }
            let dg = (self.g(k + hc) - self.g(k - hc)) / (2.0 * hc);
            if dg.norm() == 0.0 {
                return Some(k);
            }
            let step = g / dg * m as f64;
            k -= step;
            if step.norm() <= 1e-15 * (1.0 + k.norm()) {
                break;
            }
        }
        k.is_finite().then_some(k)
    }

    fn residual(&self, k: Complex64) -> f64 {
        let rho = 1e-3 * (1.0 + k.norm());
        let scale = (0..16)
            .map(|i| self.det(k + Complex64::from_polar(rho, 2.0 * PI * i as f64 / 16.0)).norm())
            .fold(0.0, f64::max);
        self.det(k).norm() / scale
    }
}

const SPLITS: [(f64, f64); 4] = [(0.5137, 0.4861), (0.4719, 0.5273), (0.5521, 0.4487), (0.4411, 0.5629)];

fn search(det: &Det, b: SearchBox, count: i64, min_size: f64, found: &mut Vec<(Complex64, usize)>, unresolved: &mut Vec<(SearchBox, i64)>) {
    if count <= 0 {
        return;
    }
    if b.size() < min_size {
        match det.polish(b.center(), count as usize) {
            Some(k) => found.push((k, count as usize)),
            None => unresolved.push((b, count)),
        }
        return;
    }
    for &(fx, fy) in &SPLITS {
        let kids = b.split(fx, fy);
        let counts: Option<Vec<i64>> = kids.iter().map(|c| det.count(c)).collect();
        if let Some(cs) = counts {
            if cs.iter().sum::<i64>() == count && cs.iter().all(|&c| c >= 0) {
                for (kid, c) in kids.into_iter().zip(cs) {
                    search(det, kid, c, min_size, found, unresolved);
                }
                return;
            }
        }
    }
    unresolved.push((b, count));
}

/// Zeros of det F_c inside the box, by argument-principle counting on
/// nested boxes and modified-Newton polishing.
pub fn spectrum(model: &AlgebraicModel, search_box: Option<SearchBox>) -> SpectralCatalog {
    let b = search_box.unwrap_or_else(|| SearchBox::around(model));
    let poles = model.diagonal_determinant().poles;
    let det = Det { model, poles: poles.clone() };
    let mut found = Vec::new();
    let mut unresolved = Vec::new();
    match det.count(&b) {
        Some(n) => search(&det, b, n, 1e-4 * b.size(), &mut found, &mut unresolved),
        None => unresolved.push((b, -1)),
    }
    let mut cat = SpectralCatalog {
        search_box: b,
        bound: vec![],
        virtual_states: vec![],
        threshold: vec![],
        resonances: vec![],
        poles: poles.into_iter().filter(|p| p.re >= b.re.0 && p.re <= b.re.1 && p.im >= b.im.0 && p.im <= b.im.1).collect(),
        unresolved,
    };
    for (k, m) in found {
        let tol = 1e-7 * (1.0 + k.norm());
        let z = SpectralZero { k, degeneracy: m, residual: det.residual(k) };
        if k.re.abs() > tol {
            cat.resonances.push(z);
        } else if k.im > tol {
            cat.bound.push(SpectralZero { k: Complex64::new(0.0, k.im), ..z });
        } else if k.im < -tol {
            cat.virtual_states.push(SpectralZero { k: Complex64::new(0.0, k.im), ..z });
        } else {
            cat.threshold.push(SpectralZero { k: Complex64::new(0.0, 0.0), ..z });
        }
    }
    let by_im = |a: &SpectralZero, b: &SpectralZero| b.k.im.total_cmp(&a.k.im).then(a.k.re.total_cmp(&b.k.re));
    cat.bound.sort_by(by_im);
    cat.virtual_states.sort_by(by_im);
    cat.resonances.sort_by(by_im);
    cat
}
