use super::*;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn all_families() -> Vec<Family> {
    vec![
        Family::Beta { kappa0: 1.0, kappa1: 2.5, kappa2: 3.5, beta: -2.0 },
        Family::Beta { kappa0: 1.0, kappa1: 2.5, kappa2: 3.5, beta: -1.5 },
        Family::Beta { kappa0: 1.0, kappa1: 2.5, kappa2: 3.5, beta: -1.0 },
        Family::Cosech { kappa: 1.5 },
        Family::Cosech { kappa: 1.0 },
        Family::SpS { kappa0: 1.5, kappa1: 1.75 },
        Family::Centrifugal { l: 1 },
        Family::Centrifugal { l: 2 },
        Family::SdS { kappas: [1.0, 1.5, 1.75, 2.0] },
        Family::SdD { kappa: 3.0 },
    ]
}

fn wrap_pi(x: f64) -> f64 {
    x - PI * (x / PI).round()
}

#[test]
fn every_family_builds() {
    for fam in all_families() {
        let m = build_family(&fam).unwrap_or_else(|e| panic!("{fam:?}: {e}"));
        assert!(m.report().limit_relative_error < 1e-6);
    }
}

// high-precision values of lim f r^nu/(2nu-1)!! at k = 0.7 + 0.3i
#[test]
fn limits_match_high_precision_values() {
    let k = c(0.7, 0.3);
    let cases = [
        (Family::Cosech { kappa: 1.5 }, c(0.482573726541555, 0.187667560321716)),
        (Family::SpS { kappa0: 1.5, kappa1: 1.75 }, c(0.18282554015663, 0.153973384600662)),
        (Family::Beta { kappa0: 1.0, kappa1: 2.5, kappa2: 3.5, beta: -2.0 }, c(-0.224011749018355, -0.337016167190006)),
        (Family::Beta { kappa0: 1.0, kappa1: 2.5, kappa2: 3.5, beta: -1.5 }, c(-0.224011749018355, -0.337016167190006)),
        (Family::Beta { kappa0: 1.0, kappa1: 2.5, kappa2: 3.5, beta: -1.0 }, c(0.036740210257278, 0.0483586885536766)),
        (Family::SdD { kappa: 3.0 }, c(-3.0499405469679, 4.95243757431629)),
        (Family::SdS { kappas: [1.0, 1.5, 1.75, 2.0] }, c(0.0486232938832756, 0.0162979351425648)),
    ];
    for (fam, want) in cases {
        let m = build_family(&fam).unwrap();
        let lim = jost_from_limit(&m, k).unwrap();
        assert!((lim - want).norm() < 1e-7 * want.norm(), "{fam:?}: {lim} vs {want}");
        let exact = m.jost_function().eval(k).unwrap();
        assert!((exact - want).norm() < 1e-12 * want.norm(), "{fam:?}: {exact} vs {want}");
    }
}

#[test]
fn limit_examples() {
    let m = build_family(&Family::Cosech { kappa: 1.5 }).unwrap();
    let lim = jost_from_limit(&m, c(1.0, 0.0)).unwrap();
    assert!((lim - 1.0 / c(1.5, -1.0)).norm() < 1e-6 * lim.norm());
    let m = build_family(&Family::Centrifugal { l: 1 }).unwrap();
    let lim = jost_from_limit(&m, c(2.0, 0.0)).unwrap();
    assert!((lim - c(0.0, 0.5)).norm() < 1e-6);
    let m = build_family(&Family::Beta { kappa0: 1.0, kappa1: 2.5, kappa2: 3.5, beta: -2.0 }).unwrap();
    let lim = jost_from_limit(&m, c(0.0, 0.0)).unwrap();
    let exact = m.jost_function().eval(c(0.0, 0.0)).unwrap();
    assert!((lim - exact).norm() < 1e-6 * exact.norm());
}

#[test]
fn sp_s_threshold_value() {
    let m = build_family(&Family::SpS { kappa0: 1.5, kappa1: 1.75 }).unwrap();
    let f0 = m.jost_function().eval(c(0.0, 0.0)).unwrap();
    assert!((f0 - c(1.0 / (1.5 * 1.75), 0.0)).norm() < 1e-15);
    for &k in &[0.1f64, 1.0, 5.0] {
        let want = PI - (k / 1.5).atan() - (k / 1.75).atan();
        assert!(wrap_pi(m.phase_shift(k) - want).abs() < 1e-13);
    }
}

#[test]
fn schrodinger_residuals() {
    let mut seed = 12345u64;
    let mut rnd = move || {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (seed >> 11) as f64 / (1u64 << 53) as f64
    };
    let h = 1e-3;
    for fam in all_families() {
        let m = build_family(&fam).unwrap();
        for _ in 0..20 {
            let k = c(0.1 + 3.9 * rnd(), 0.0);
            let r = 0.5 + 6.0 * rnd();
            let ev = m.jost_evaluator(k).unwrap();
            let (f, _) = ev.eval(r).unwrap().unscaled();
            let central = |h: f64| {
                let (_, dp) = ev.eval(r + h).unwrap().unscaled();
                let (_, dm) = ev.eval(r - h).unwrap().unscaled();
                (dp - dm) / (2.0 * h)
            };
            let f2 = (4.0 * central(h / 2.0) - central(h)) / 3.0;
            let res = -f2 + (m.potential(r) - k * k) * f;
            assert!(res.norm() <= 1e-6 * (1.0 + (k * k * f).norm()), "{fam:?} k={k} r={r} res={res}");
        }
    }
}

#[test]
fn sd_s_phase_shift_closed_form() {
    let kap = [1.0, 1.5, 1.75, 2.0];
    let m = build_family(&Family::SdS { kappas: kap }).unwrap();
    let mut worst: f64 = 0.0;
    for j in 0..=1000 {
        let k = 0.01 + (10.0 - 0.01) * j as f64 / 1000.0;
        let want = PI / 2.0 - kap.iter().map(|kj| (k / kj).atan()).sum::<f64>();
        worst = worst.max(wrap_pi(m.phase_shift(k) - want).abs());
    }
    assert!(worst <= 1e-8);
    let m = build_family(&Family::SdD { kappa: 3.0 }).unwrap();
    for &k in &[0.01f64, 1.0, 9.0] {
        assert!(wrap_pi(m.phase_shift(k) - (k / 3.0).atan()).abs() < 1e-13);
    }
}

#[test]
fn beta_family_bound_state() {
    let fam = Family::Beta { kappa0: 1.0, kappa1: 2.5, kappa2: 3.5, beta: -2.0 };
    let f = fam.jost_function().unwrap();
    let upper: Vec<_> = f.zeros.iter().filter(|z| z.im > 0.0 && z.re == 0.0).collect();
    assert_eq!(upper, vec![&c(0.0, 2.5)]);
}

#[test]
fn sd_d_potential_closed_form() {
    let k4: f64 = 3.0;
    let m = build_family(&Family::SdD { kappa: k4 }).unwrap();
    for &r in &[0.01f64, 0.1, 0.5, 2.0, 7.0] {
        let x = k4 * r;
        let num = 6.0 * (3.0 + 6.0 * x + 6.0 * x * x + 4.0 * x.powi(3) + x.powi(4));
        let den = r * r * (3.0 + 3.0 * x + x * x).powi(2);
        let want = num / den;
        assert!((m.potential(r) - want).abs() < 1e-10 * want, "r={r}");
    }
}

#[test]
fn asymptotics_and_origin() {
    for fam in all_families() {
        let m = build_family(&fam).unwrap();
        let rep = m.report();
        assert!(rep.asymptotic_deviation[1] <= 1e-8 || rep.asymptotic_deviation[1] <= 0.6 * rep.asymptotic_deviation[0]);
        let r = 1e-4;
        let nn = f64::from(m.nu() * (m.nu() + 1));
        assert!((m.potential(r) * r * r - nn).abs() < 1e-3, "{fam:?}");
    }
}

#[test]
fn validation_lists_all_problems() {
    let errs = Family::Beta { kappa0: 3.0, kappa1: 2.0, kappa2: -1.0, beta: 0.5 }.validation_errors();
    assert!(errs.len() >= 3, "{errs:?}");
    assert!(matches!(build_family(&Family::Cosech { kappa: -1.0 }), Err(Error::Validation(_))));
}

#[test]
fn scattering_length_of_cosech() {
    let m = build_family(&Family::Cosech { kappa: 1.5 }).unwrap();
    assert!((m.scattering_length().unwrap() - 1.0 / 1.5).abs() < 1e-15);
    let k = 1e-4;
    let s = m.s_matrix(k).unwrap();
    assert!((s - (1.0 - c(0.0, 2.0 * k / 1.5))).norm() < 1e-7);
}
