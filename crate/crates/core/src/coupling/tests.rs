use super::*;
use crate::error::Error;
use crate::onechannel::{build_family, Family};
use nalgebra::Matrix2;
use num_complex::Complex64;

fn pair(a: Family, b: Family) -> [crate::onechannel::OneChannelModel; 2] {
    [build_family(&a).unwrap(), build_family(&b).unwrap()]
}

fn beta(b: f64) -> Family {
    Family::Beta { kappa0: 1.0, kappa1: 2.5, kappa2: 3.5, beta: b }
}

fn ss(x: f64) -> TransformedModel {
    let ch = pair(Family::Cosech { kappa: 1.5 }, Family::Cosech { kappa: 1.0 });
    TransformedModel::new(ch, CouplingParams::new(29.0 / 7.0, 0.4, x), false).unwrap()
}

fn sp() -> TransformedModel {
    let ch = pair(Family::SpS { kappa0: 1.5, kappa1: 1.75 }, Family::Centrifugal { l: 1 });
    TransformedModel::new(ch, CouplingParams::new(3.53, 1.0, 1.0), false).unwrap()
}

fn sd() -> TransformedModel {
    let ch = pair(Family::SdS { kappas: [1.0, 1.5, 1.75, 2.0] }, Family::SdD { kappa: 3.0 });
    TransformedModel::new(ch, CouplingParams::new(5.53, 1.0, 15.0), false).unwrap()
}

fn trivial() -> TransformedModel {
    TransformedModel::new(pair(beta(-2.0), beta(-1.5)), CouplingParams::new(6.0, 0.5, 25.0), false).unwrap()
}

fn ntc() -> TransformedModel {
    TransformedModel::new(pair(beta(-2.0), beta(-1.0)), CouplingParams::new(6.0, 0.5, 25.0), false).unwrap()
}

fn all() -> Vec<(&'static str, TransformedModel)> {
    vec![("ss", ss(15.0)), ("sp", sp()), ("sd", sd()), ("trivial", trivial()), ("ntc", ntc())]
}

#[test]
fn relabeled_quantum_numbers() {
    let m = sp();
    assert_eq!(m.l(), [0, 1]);
    assert_eq!(m.l_tilde(), [1, 0]);
    assert_eq!(m.nu_tilde(), [1, 0]);
    let m = sd();
    assert_eq!(m.l_tilde(), [2, 0]);
    assert_eq!(m.nu_tilde(), [2, 0]);
    assert_eq!(ss(15.0).l_tilde(), [0, 0]);
    assert_eq!(ntc().nu_tilde(), [0, 2]);
}

#[test]
fn origin_behaviour_of_superpotential() {
    for (name, m) in all() {
        let (w, _) = m.superpotential(1e-3).unwrap();
        let nu = m.nu();
        let dev = (w * 1e-3 + Matrix2::new(nu[0] as f64, 0.0, 0.0, nu[1] as f64)).amax();
        assert!(dev < 1e-2, "{name}: r w + nu = {dev}");
    }
}

#[test]
fn superpotential_tends_to_w_infinity() {
    for (name, m) in all() {
        let d20 = (m.superpotential(20.0).unwrap().0 - m.w_infinity()).amax();
        let d40 = (m.superpotential(40.0).unwrap().0 - m.w_infinity()).amax();
        assert!(d20 * 20.0 < 5.0 && d40 <= (d20 * 0.75).max(1e-12), "{name}: {d20} {d40}");
    }
}

#[test]
fn algebraic_derivative_matches_difference_quotient() {
    let h = 1e-4;
    for (name, m) in all() {
        for &r in &[1.0, 0.3, 2.7] {
            let (_, dw) = m.superpotential(r).unwrap();
            let fd = (m.superpotential(r + h).unwrap().0 - m.superpotential(r - h).unwrap().0) / (2.0 * h);
            let dev = (fd - dw).amax();
            assert!(dev <= 1e-6 * (1.0 + dw.amax()), "{name} r={r}: {dev}");
        }
    }
}

#[test]
fn potential_is_symmetric() {
    for (name, m) in all() {
        for i in 1..400 {
            let r = 0.025 * i as f64;
            let v = m.transformed_potential(r).unwrap();
            let (w, _) = m.superpotential(r).unwrap();
            assert!((v - v.transpose()).amax() <= 1e-10 * v.amax(), "{name} r={r}");
            assert!((w - w.transpose()).amax() <= 1e-10 * w.amax(), "{name} r={r}");
        }
    }
}

#[test]
fn origin_behaviour_of_potential() {
    for (name, m) in all() {
        let nt = m.nu_tilde();
        let want = Matrix2::new((nt[0] * (nt[0] + 1)) as f64, 0.0, 0.0, (nt[1] * (nt[1] + 1)) as f64);
        let r = 1e-3;
        let v = m.transformed_potential(r).unwrap() * (r * r);
        assert!((v - want).amax() < 1e-2, "{name}: {v}");
    }
}

#[test]
fn centrifugal_tails() {
    let m = sp();
    let tail = |r: f64| m.transformed_potential(r).unwrap() * (r * r) - Matrix2::new(2.0, 0.0, 0.0, 0.0);
    let (a, b) = (tail(20.0).amax(), tail(40.0).amax());
    assert!(a < 1e-8 && b < 1e-8, "{a} {b}");
    let m = ss(15.0);
    assert!((m.transformed_potential(25.0).unwrap() * 625.0).amax() < 1e-6);
    // s-d: centrifugal tails exchanged, remainder falls off like r^-3
    let m = sd();
    let tail = |r: f64| m.transformed_potential(r).unwrap() * (r * r) - Matrix2::new(6.0, 0.0, 0.0, 0.0);
    let (a, b) = (tail(40.0).amax(), tail(80.0).amax());
    assert!(a < 0.2 && (b / a - 0.5).abs() < 0.02, "{a} {b}");
}

#[test]
fn generic_mixing_leaves_coupled_tail() {
    let ch = pair(Family::SpS { kappa0: 1.5, kappa1: 1.75 }, Family::Centrifugal { l: 1 });
    let p = CouplingParams::new(3.53, 0.5, 1.0);
    assert!(matches!(TransformedModel::new(ch.clone(), p, false), Err(Error::Constraint(_))));
    let m = TransformedModel::new(ch, p, true).unwrap();
    let a = p.alpha();
    let want = 2.0 * a.sin() * (-a.cos());
    let off = |r: f64| m.transformed_potential(r).unwrap()[(0, 1)] * r * r;
    let (o1, o2) = (off(30.0), off(60.0));
    let extrap = 2.0 * o2 - o1;
    assert!((extrap - want).abs() < 2e-2 * want.abs(), "{o1} {o2} vs {want}");
}

#[test]
fn regularity_scan() {
    assert!(ss(15.0).singularity_scan(50.0, 10_000).is_empty());
    let ch = ss(15.0).channels().clone();
    let q0 = TransformedModel::new_unchecked(ch, CouplingParams::new(29.0 / 7.0, 0.0, 15.0), false).unwrap();
    assert!(q0.singularity_scan(50.0, 10_000).is_empty());
}

#[test]
fn small_x_produces_node() {
    let ch = ss(15.0).channels().clone();
    let m = TransformedModel::new_unchecked(ch.clone(), CouplingParams::new(29.0 / 7.0, 0.4, 0.01), false).unwrap();
    let bad = m.singularity_scan(50.0, 10_000);
    assert!(!bad.is_empty());
    assert!(matches!(TransformedModel::new(ch, CouplingParams::new(29.0 / 7.0, 0.4, 0.01), false), Err(Error::Singularity { .. })));
}

#[test]
fn scattering_data_independent_of_x_but_potentials_differ() {
    let (a, b) = (ss(15.0), ss(150.0));
    let mut dmax: f64 = 0.0;
    for i in 1..500 {
        let r = 0.02 * i as f64;
        dmax = dmax.max((a.transformed_potential(r).unwrap() - b.transformed_potential(r).unwrap()).amax());
    }
    assert!(dmax > 1e-2, "{dmax}");
}

fn residual(m: &TransformedModel, k: Complex64, r: f64) -> f64 {
    let j = m.jost_at(k).unwrap();
    let (f, _) = j.eval(r).unwrap();
    let d2 = |h: f64| (j.eval(r + h).unwrap().1 - j.eval(r - h).unwrap().1) / Complex64::new(2.0 * h, 0.0);
    let h = 1e-3;
    let f2 = (d2(h / 2.0) * Complex64::new(4.0, 0.0) - d2(h)) / Complex64::new(3.0, 0.0);
    let v = m.transformed_potential(r).unwrap().map(|x| Complex64::new(x, 0.0));
    let res = -f2 + v * f - f * (k * k);
    let scale = 1.0 + (f * (k * k)).iter().map(|z| z.norm()).fold(0.0, f64::max);
    res.iter().map(|z| z.norm()).fold(0.0, f64::max) / scale
}

#[test]
fn transformed_jost_solution_intertwines() {
    for (name, m) in all() {
        for i in 0..10 {
            let k = 0.2 + 0.31 * i as f64;
            let r = 0.6 + 0.47 * i as f64;
            let res = residual(&m, Complex64::new(k, 0.0), r);
            assert!(res <= 1e-5, "{name} k={k} r={r}: {res}");
        }
    }
}

#[test]
fn transformed_jost_solution_is_outgoing() {
    for (name, m) in all() {
        let k = 1.1;
        let j = m.jost_at(Complex64::new(k, 0.0)).unwrap();
        let dev = |r: f64| {
            let (f, _) = j.eval(r).unwrap();
            (f * Complex64::new(0.0, -k * r).exp() - Matrix2::identity()).iter().map(|z| z.norm()).fold(0.0, f64::max)
        };
        assert!(dev(40.0) < 0.2 && dev(80.0) < 0.6 * dev(40.0) + 1e-9, "{name}: {} {}", dev(40.0), dev(80.0));
    }
}

#[test]
fn opposite_solution_is_bound() {
    for (name, m) in all() {
        let kappa = m.params().kappa;
        let h = 1e-3;
        for &r in &[0.7, 1.9, 4.2] {
            let p = m.opposite_solution(r).unwrap();
            let d = |h: f64| {
                let a = m.opposite_solution(r + h).unwrap();
                let b = m.opposite_solution(r - h).unwrap();
                let sa = Matrix2::from_diagonal(&nalgebra::Vector2::new((a.log_scale[0] - p.log_scale[0]).exp(), (a.log_scale[1] - p.log_scale[1]).exp()));
                let sb = Matrix2::from_diagonal(&nalgebra::Vector2::new((b.log_scale[0] - p.log_scale[0]).exp(), (b.log_scale[1] - p.log_scale[1]).exp()));
                (a.du * sa - b.du * sb) / (2.0 * h)
            };
            let d2 = (d(h / 2.0) * 4.0 - d(h)) / 3.0;
            let v = m.transformed_potential(r).unwrap();
            let res = -d2 + v * p.u + p.u * (kappa * kappa);
            assert!(res.amax() <= 1e-5 * (1.0 + (p.u * kappa * kappa).amax()), "{name} r={r}: {res}");
        }
        // first column: e^{-kappa r} decay and vanishing at the origin
        let col = |r: f64| {
            let p = m.opposite_solution(r).unwrap();
            p.u.column(0).norm().ln() + p.log_scale[0]
        };
        let rate = (col(30.0) - col(20.0)) / 10.0;
        assert!((rate + kappa).abs() < 0.05 * kappa, "{name}: rate {rate}");
        assert!(col(1e-3) < col(0.1), "{name}");
    }
}

#[test]
fn validation_collects_problems() {
    let ch = ss(15.0).channels().clone();
    match TransformedModel::new(ch.clone(), CouplingParams::new(-1.0, f64::NAN, 1.0), false) {
        Err(Error::Validation(v)) => assert_eq!(v.len(), 2),
        other => panic!("{other:?}"),
    }
    assert!(matches!(TransformedModel::new(ch.clone(), CouplingParams::new(1.2, 0.4, 15.0), false), Err(Error::Constraint(_))));
    assert!(matches!(TransformedModel::new(ch, CouplingParams::new(1.5, 0.4, 15.0), true), Err(Error::Validation(_))));
    let reg = pair(Family::Centrifugal { l: 0 }, Family::Cosech { kappa: 1.0 });
    assert!(matches!(TransformedModel::new(reg, CouplingParams::new(3.0, 0.4, 15.0), false), Err(Error::Validation(_))));
}

#[test]
fn decoupled_limit_is_diagonal() {
    let ch = ss(15.0).channels().clone();
    let m = TransformedModel::new(ch, CouplingParams::new(29.0 / 7.0, 0.0, 15.0), false).unwrap();
    for &r in &[0.3, 1.0, 4.0] {
        let v = m.transformed_potential(r).unwrap();
        assert!(v[(0, 1)].abs() < 1e-12 * v.amax());
    }
}
