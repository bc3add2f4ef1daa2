use super::exppoly::ExpPoly;
use super::series::Series;
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Value e^{log_scale} * mantissa.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scaled {
    pub mantissa: Complex64,
    pub log_scale: f64,
}

impl Scaled {
    pub fn value(&self) -> Complex64 {
        self.mantissa * self.log_scale.exp()
    }
}

/// Derivatives f, f', ..., all carrying the common factor e^{log_scale}.
#[derive(Clone, Debug)]
pub struct ScaledTower {
    pub values: Vec<Complex64>,
    pub log_scale: f64,
}

pub trait TowerProvider {
    /// Highest derivative order available analytically.
    fn max_order(&self) -> usize;
    fn scaled_tower(&self, r: f64, order: usize) -> ScaledTower;
}

/// Precomputed analytic derivative tower of an [`ExpPoly`].
#[derive(Clone, Debug)]
pub struct ExpPolyTower {
    tower: Vec<ExpPoly>,
    shift: f64,
}

impl ExpPolyTower {
    pub fn new(f: &ExpPoly, order: usize) -> ExpPolyTower {
        ExpPolyTower { tower: f.tower(order), shift: f.dominant_rate() }
    }

    pub fn function(&self) -> &ExpPoly {
        &self.tower[0]
    }
}

impl TowerProvider for ExpPolyTower {
    fn max_order(&self) -> usize {
        self.tower.len() - 1
    }

    fn scaled_tower(&self, r: f64, order: usize) -> ScaledTower {
        let values = self.tower[..=order]
            .iter()
            .map(|f| f.eval_scaled(r, self.shift))
            .collect();
        ScaledTower { values, log_scale: self.shift * r }
    }
}

fn det(m: DMatrix<Complex64>) -> Complex64 {
    if m.nrows() == 1 {
        m[(0, 0)]
    } else {
        m.determinant()
    }
}

fn det_with_orders(towers: &[ScaledTower], orders: &[usize]) -> Complex64 {
    let n = towers.len();
    det(DMatrix::from_fn(n, n, |row, col| towers[col].values[orders[row]]))
}

fn derivative_of_det(towers: &[ScaledTower], orders: &mut Vec<usize>, times: usize) -> Complex64 {
    if times == 0 {
        return det_with_orders(towers, orders);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for row in 0..orders.len() {
        let bumped = orders[row] + 1;
        if orders.contains(&bumped) {
            continue;
        }
        orders[row] = bumped;
        acc += derivative_of_det(towers, orders, times - 1);
        orders[row] = bumped - 1;
    }
    acc
}

/// Wronskian and its first `nderiv` r-derivatives, as mantissas sharing one log-scale.
pub fn wronskian_derivatives(
    fns: &[&dyn TowerProvider],
    r: f64,
    nderiv: usize,
) -> Result<(Vec<Complex64>, f64)> {
    if fns.is_empty() {
        return Err(Error::Contract("wronskian of an empty list".into()));
    }
    let n = fns.len();
    let need = n - 1 + nderiv;
    for (j, f) in fns.iter().enumerate() {
        if f.max_order() < need {
            return Err(Error::Contract(format!(
                "function {j} supplies derivatives through order {}, {need} required",
                f.max_order()
            )));
        }
    }
    let towers: Vec<ScaledTower> = fns.iter().map(|f| f.scaled_tower(r, need)).collect();
    let log_scale = towers.iter().map(|t| t.log_scale).sum();
    let mut orders: Vec<usize> = (0..n).collect();
    let out = (0..=nderiv)
        .map(|d| derivative_of_det(&towers, &mut orders, d))
        .collect();
    Ok((out, log_scale))
}

/// Overflow-safe Wronskian W[f_1, ..., f_n](r).
pub fn wronskian(fns: &[&dyn TowerProvider], r: f64) -> Result<Scaled> {
    let (w, log_scale) = wronskian_derivatives(fns, r, 0)?;
    Ok(Scaled { mantissa: w[0], log_scale })
}

fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<(Vec<usize>, f64)>) {
        let n = used.len();
        if prefix.len() == n {
            let mut inv = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if prefix[i] > prefix[j] {
                        inv += 1;
                    }
                }
            }
            out.push((prefix.clone(), if inv % 2 == 0 { 1.0 } else { -1.0 }));
            return;
        }
        for j in 0..n {
            if !used[j] {
                used[j] = true;
                prefix.push(j);
                rec(prefix, used, out);
                prefix.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Row reduction among the functions so that their leading orders become
/// distinct. Adding multiples of one function to another leaves the
/// Wronskian unchanged; coefficients are compared after weighting by
/// `r_ref^e` so that the pivot test reflects magnitudes near `r_ref`.
pub fn echelon(fns: &[Series], r_ref: f64, tol: f64) -> Vec<Series> {
    let lo = fns.iter().map(Series::lead).min().unwrap();
    let hi = fns.iter().map(Series::top).min().unwrap();
    let width = (hi - lo + 1).max(1) as usize;
    let weight: Vec<f64> = (0..width).map(|j| r_ref.powi(lo + j as i32)).collect();
    let mut rows: Vec<Vec<Complex64>> = fns
        .iter()
        .map(|s| (0..width).map(|j| s.coeff(lo + j as i32)).collect())
        .collect();
    let norms: Vec<f64> = rows
        .iter()
        .map(|v| v.iter().zip(&weight).map(|(c, w)| c.norm() * w).fold(0.0, f64::max))
        .collect();
    let mut done = vec![false; rows.len()];
    for col in 0..width {
        let mut best = None;
        let mut best_val = 0.0;
        for (i, v) in rows.iter().enumerate() {
            if done[i] {
                continue;
            }
            let val = v[col].norm() * weight[col] / norms[i];
            if val > best_val {
                best_val = val;
                best = Some(i);
            }
        }
        let Some(p) = best else { continue };
        if best_val <= tol {
            for (i, v) in rows.iter_mut().enumerate() {
                if !done[i] {
                    v[col] = Complex64::new(0.0, 0.0);
                }
            }
            continue;
        }
        done[p] = true;
        let pivot_row = rows[p].clone();
        for (i, v) in rows.iter_mut().enumerate() {
            if done[i] {
                continue;
            }
            let f = v[col] / pivot_row[col];
            for j in col..width {
                v[j] -= f * pivot_row[j];
            }
            v[col] = Complex64::new(0.0, 0.0);
        }
        if done.iter().all(|d| *d) {
            break;
        }
    }
    rows.into_iter()
        .map(|v| Series::new(lo, v).normalized())
        .collect()
}

/// Wronskian as a Laurent series about the origin, computed without
/// cancellation of leading orders.
pub fn series_wronskian(fns: &[Series], r_ref: f64) -> Series {
    let reduced = echelon(fns, r_ref, 1e-11);
    let n = reduced.len();
    let mut derivs: Vec<Vec<Series>> = Vec::with_capacity(n);
    for s in &reduced {
        let mut d = vec![s.clone()];
        for _ in 1..n {
            let next = d.last().unwrap().derivative();
            d.push(next);
        }
        derivs.push(d);
    }
    let mut total: Option<Series> = None;
    for (perm, sign) in permutations(n) {
        // row m holds the m-th derivative of function perm[m]
        let mut prod = derivs[perm[0]][0].clone();
        for (m, &j) in perm.iter().enumerate().skip(1) {
            prod = &prod * &derivs[j][m];
        }
        if sign < 0.0 {
            prod = -&prod;
        }
        total = Some(match total {
            None => prod,
            Some(acc) => &acc + &prod,
        });
    }
    total.unwrap().normalized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::exppoly::{Aux, ExpTerm};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn expo(rate: Complex64) -> ExpPoly {
        ExpPoly::new(Aux::Const, vec![ExpTerm { rate, poly: vec![c(1.0)] }])
    }

    fn sinh(k: f64) -> ExpPoly {
        ExpPoly::new(
            Aux::Const,
            vec![ExpTerm { rate: c(k), poly: vec![c(0.5)] }, ExpTerm { rate: c(-k), poly: vec![c(-0.5)] }],
        )
    }

    fn combo(k: f64, beta: f64) -> ExpPoly {
        ExpPoly::new(
            Aux::Const,
            vec![ExpTerm { rate: c(k), poly: vec![c(1.0)] }, ExpTerm { rate: c(-k), poly: vec![c(beta)] }],
        )
    }

    #[test]
    fn plane_wave_pair() {
        let i = Complex64::i();
        for &k in &[0.3, 2.0] {
            let a = ExpPolyTower::new(&expo(i * k), 1);
            let b = ExpPolyTower::new(&expo(-i * k), 1);
            for &r in &[0.1, 1.0, 40.0] {
                let w = wronskian(&[&a, &b], r).unwrap().value();
                assert!((w - (-2.0 * i * k)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn single_function() {
        let f = ExpPolyTower::new(&sinh(1.2), 0);
        let w = wronskian(&[&f], 0.8).unwrap();
        assert!((w.value().re - (1.2f64 * 0.8).sinh()).abs() < 1e-14);
    }

    #[test]
    fn missing_order_is_contract_error() {
        let a = ExpPolyTower::new(&sinh(1.0), 0);
        let b = ExpPolyTower::new(&sinh(2.0), 0);
        assert!(matches!(wronskian(&[&a, &b], 1.0), Err(Error::Contract(_))));
    }

    #[test]
    fn nodeless_three_seed_wronskian() {
        let (k0, k1, k2, beta) = (1.0, 2.5, 3.5, -2.0);
        let fs = [
            ExpPolyTower::new(&sinh(k0), 2),
            ExpPolyTower::new(&sinh(k2), 2),
            ExpPolyTower::new(&combo(k1, beta), 2),
        ];
        let refs: Vec<&dyn TowerProvider> = fs.iter().map(|f| f as &dyn TowerProvider).collect();
        // constant sign (negative in this column order) means no node
        for j in 0..2000 {
            let r = 0.05 + 50.0 * j as f64 / 2000.0;
            let w = wronskian(&refs, r).unwrap();
            assert!(w.mantissa.re < 0.0, "node near r={r}: {:?}", w);
        }
        // near the origin the closed form cancels; the series keeps the sign
        let series: Vec<Series> = [sinh(k0), sinh(k2), combo(k1, beta)].iter().map(|f| f.series(40)).collect();
        let ws = series_wronskian(&series, 0.1);
        assert_eq!(ws.lead(), 1);
        for &r in &[1e-6, 1e-3, 0.05] {
            assert!(ws.eval(r).re < 0.0);
        }
        // large r: no overflow, scale carries the exponentials
        let w = wronskian(&refs, 400.0).unwrap();
        assert!(w.mantissa.re.is_finite() && w.log_scale > 100.0);
    }

    #[test]
    fn derivative_determinants_match_finite_differences() {
        let fs = [
            ExpPolyTower::new(&sinh(1.0), 3),
            ExpPolyTower::new(&sinh(2.0), 3),
            ExpPolyTower::new(&combo(1.5, -3.0), 3),
        ];
        let refs: Vec<&dyn TowerProvider> = fs.iter().map(|f| f as &dyn TowerProvider).collect();
        let r = 0.9;
        let h = 1e-4;
        let (w, s) = wronskian_derivatives(&refs, r, 1).unwrap();
        let wp = wronskian(&refs, r + h).unwrap().value();
        let wm = wronskian(&refs, r - h).unwrap().value();
        let fd = (wp - wm) / (2.0 * h);
        let an = w[1] * s.exp();
        assert!((fd - an).norm() < 1e-6 * an.norm());
    }

    #[test]
    fn series_wronskian_agrees_with_direct() {
        let fns = [sinh(1.0), sinh(3.5), combo(2.5, -1.0)];
        let series: Vec<Series> = fns.iter().map(|f| f.series(40)).collect();
        let w = series_wronskian(&series, 0.1);
        // leading order for orders {1, 1, 1} after reduction {1, 3, 5}: r^6
        assert_eq!(w.lead(), 6);
        let towers: Vec<ExpPolyTower> = fns.iter().map(|f| ExpPolyTower::new(f, 2)).collect();
        let refs: Vec<&dyn TowerProvider> = towers.iter().map(|f| f as &dyn TowerProvider).collect();
        let r = 0.1;
        let direct = wronskian(&refs, r).unwrap().value();
        let ser = w.eval(r);
        assert!((direct - ser).norm() < 1e-8 * ser.norm(), "{direct} vs {ser}");
    }
}
