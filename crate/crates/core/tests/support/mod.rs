//! Randomized invariant checks shared by the property tests and the
//! acceptance run.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use std::f64::consts::PI;
use susy_channels::coupling::{CouplingParams, GeneralCoupling};
use susy_channels::onechannel::{build_family, Family};
use susy_channels::scattering::{
    determinant_factor, eigenphases, s_matrix, symmetry_defect, transformed_jost, unitarity_defect,
};
use susy_channels::scenario::{preset, preset_names, ChannelSpec, CouplingSpec, Grid, Scenario, Spacing};
use susy_channels::specfun::{hankel_coefficients, riccati_hankel};

pub type Check = fn() -> Result<(), String>;

pub const ALL: &[(&str, Check)] = &[
    ("hankel_asymptotics", hankel_asymptotics),
    ("hankel_derivative", hankel_derivative),
    ("hankel_wronskian", hankel_wronskian),
    ("channel_wronskian", channel_wronskian),
    ("radial_equation", radial_equation),
    ("s_unitary_and_diagonalized", s_unitary_and_diagonalized),
    ("potential_symmetric", potential_symmetric),
    ("determinant_n2", determinant_n2),
    ("determinant_n3", determinant_n3),
    ("determinant_n4", determinant_n4),
    ("canonical_symmetry", canonical_symmetry),
    ("scenario_round_trip", scenario_round_trip),
];

fn runner(cases: u32) -> TestRunner {
    TestRunner::new(Config { cases, failure_persistence: None, ..Config::default() })
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![
        (0.3..3.0f64).prop_map(|kappa| Family::Cosech { kappa }),
        (0.3..2.0f64, 0.1..1.0f64).prop_map(|(a, d)| Family::SpS { kappa0: a, kappa1: a + d }),
        (1.0..4.0f64).prop_map(|kappa| Family::SdD { kappa }),
        (0.5..1.5f64, 0.1..0.5f64, 0.1..0.5f64).prop_map(|(k0, d1, d2)| Family::Beta {
            kappa0: k0,
            kappa1: k0 + d1,
            kappa2: k0 + d1 + d2,
            beta: -2.0,
        }),
        Just(Family::SdS { kappas: [1.0, 1.5, 1.75, 2.0] }),
        (1u32..4).prop_map(|l| Family::Centrifugal { l }),
    ]
}

pub fn hankel_asymptotics() -> Result<(), String> {
    runner(200)
        .run(&(0u32..=4, 0.1..50.0f64, 0.0..PI), |(l, rho, theta)| {
            let z = Complex64::from_polar(rho, theta);
            let (h, _) = riccati_hankel(l, z).unwrap();
            let lead = c(1.0, 0.0) + c(0.0, f64::from(l * (l + 1))) / (2.0 * z);
            // remainder of the terminating series beyond 1/z, bounded on |z| >= 0.1
            let a = hankel_coefficients(l);
            let bound: f64 = a.iter().enumerate().skip(2).map(|(m, am)| am.abs() * 10f64.powi(m as i32 - 2)).sum();
            let rem = (h * (-Complex64::i() * z).exp() - lead).norm() * rho * rho;
            prop_assert!(rem <= bound * (1.0 + 1e-12) + 1e-9, "l={l} z={z}: {rem} > {bound}");
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn hankel_derivative() -> Result<(), String> {
    runner(200)
        .run(&(0u32..=4, 0.5..20.0f64, 0.0..(PI / 2.0)), |(l, rho, theta)| {
            let z = Complex64::from_polar(rho, theta);
            let step = 1e-5;
            let (_, d) = riccati_hankel(l, z).unwrap();
            let (p, _) = riccati_hankel(l, z + step).unwrap();
            let (m, _) = riccati_hankel(l, z - step).unwrap();
            let fd = (p - m) / (2.0 * step);
            prop_assert!((fd - d).norm() <= 1e-8 * d.norm(), "l={l} z={z}");
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn hankel_wronskian() -> Result<(), String> {
    runner(200)
        .run(&(0u32..=4, 0.1..5.0f64, 0.2..30.0f64), |(l, k, r)| {
            let (hp, dp) = riccati_hankel(l, c(k * r, 0.0)).unwrap();
            let (hm, dm) = riccati_hankel(l, c(-k * r, 0.0)).unwrap();
            let w = hp * (-k) * dm - k * dp * hm;
            prop_assert!((w - c(0.0, -2.0 * k)).norm() <= 1e-10 * (1.0 + hp.norm() * hm.norm()) * k);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn channel_wronskian() -> Result<(), String> {
    runner(200)
        .run(&(family(), 0.05..6.0f64), |(f, k)| {
            let m = build_family(&f).unwrap();
            for r in [0.5, 1.3, 2.7, 5.0, 10.0] {
                let (a, da) = m.jost_solution(c(k, 0.0), r).unwrap();
                let (b, db) = m.jost_solution(c(-k, 0.0), r).unwrap();
                let w = a * db - da * b;
                // relative to the size of the products that cancel
                let size = ((a * db).norm() + (da * b).norm()).max(2.0 * k);
                prop_assert!((w - c(0.0, -2.0 * k)).norm() <= 1e-10 * size, "{} r={r}: {w}", f.name());
            }
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn radial_equation() -> Result<(), String> {
    runner(60)
        .run(&(family(), 0.1..5.0f64, 0.5..8.0f64), |(f, k, r)| {
            let m = build_family(&f).unwrap();
            let h = 1e-3;
            let k = c(k, 0.0);
            let (fv, _) = m.jost_solution(k, r).unwrap();
            let central = |h: f64| {
                let (_, dp) = m.jost_solution(k, r + h).unwrap();
                let (_, dm) = m.jost_solution(k, r - h).unwrap();
                (dp - dm) / (2.0 * h)
            };
            let f2 = (4.0 * central(h / 2.0) - central(h)) / 3.0;
            let res = (-f2 + m.potential(r) * fv - k * k * fv).norm();
            prop_assert!(res <= 1e-6 * (1.0 + (k * k * fv).norm()), "{}: {res}", f.name());
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn s_unitary_and_diagonalized() -> Result<(), String> {
    runner(120)
        .run(&(0usize..preset_names().len(), 0.01..10.0f64), |(idx, k)| {
            let alg = preset(preset_names()[idx]).unwrap().algebraic().unwrap();
            let sm = s_matrix(&alg, k).unwrap();
            prop_assert!(unitarity_defect(&sm) <= 1e-10);
            prop_assert!(symmetry_defect(&sm) <= 1e-10);
            let (d, eps, _) = eigenphases(&sm, None).unwrap();
            let (sn, cs) = eps.sin_cos();
            let r = Matrix2::new(cs, sn, -sn, cs).map(|x| c(x, 0.0));
            let phase = |x: f64| (2.0 * x * Complex64::i()).exp();
            let back = r * Matrix2::new(phase(d[0]), c(0.0, 0.0), c(0.0, 0.0), phase(d[1])) * r.transpose();
            let err = (back - sm).iter().map(|z| z.norm()).fold(0.0, f64::max);
            prop_assert!(err <= 1e-10, "{} k={k}: {err}", preset_names()[idx]);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn potential_symmetric() -> Result<(), String> {
    runner(60)
        .run(&(0usize..preset_names().len(), 0.01..12.0f64), |(idx, r)| {
            let m = preset(preset_names()[idx]).unwrap().model().unwrap();
            let v = m.transformed_potential(r).unwrap();
            prop_assert!((v - v.transpose()).amax() <= 1e-10 * v.amax().max(1.0));
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn general_coupling(n: usize) -> impl Strategy<Value = (GeneralCoupling, Vec<(f64, f64)>, f64, f64)> {
    (1..n, 0.5..6.0f64).prop_flat_map(move |(m, kappa)| {
        (
            prop::collection::vec(-2.0..2.0f64, (n - m) * m),
            prop::collection::vec(-2.0..2.0f64, m * m),
            prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), n),
            -8.0..8.0f64,
            -8.0..8.0f64,
        )
            .prop_map(move |(q, x, fd, kr, ki)| {
                let a = DMatrix::from_row_slice(m, m, &x);
                // symmetric and safely nonsingular
                let x0 = &a * a.transpose() + DMatrix::identity(m, m);
                let g = GeneralCoupling { kappa, m, q: DMatrix::from_row_slice(n - m, m, &q), x0 };
                (g, fd, kr, ki)
            })
    })
}

fn determinant(n: usize) -> Result<(), String> {
    runner(100)
        .run(&general_coupling(n), |(g, fd, kr, ki)| {
            let k = c(kr, ki);
            let fd: Vec<Complex64> = fd.iter().map(|&(a, b)| c(a, b)).collect();
            let w = g.w_infinity().unwrap();
            let got = transformed_jost(&w, &fd, k).determinant();
            let want = fd.iter().product::<Complex64>() * determinant_factor(n, g.m, g.kappa, k);
            let scale = fd.iter().map(|z| z.norm()).product::<f64>() * (k.norm() + w.amax()).powi(n as i32);
            prop_assert!((got - want).norm() <= 1e-10 * scale, "N={n} M={}: {got} vs {want}", g.m);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

pub fn determinant_n2() -> Result<(), String> {
    determinant(2)
}

pub fn determinant_n3() -> Result<(), String> {
    determinant(3)
}

pub fn determinant_n4() -> Result<(), String> {
    determinant(4)
}

pub fn canonical_symmetry() -> Result<(), String> {
    let pair = (0.5..6.0f64, -3.0..3.0f64, -20.0..20.0f64);
    runner(100)
        .run(&pair, |(kappa, q, x)| {
            let (cc, dd) = CouplingParams::new(kappa, q, x).canonical_cd();
            prop_assert!((dd.transpose() * cc - cc.transpose() * dd).amax() <= 1e-12 * (1.0 + x.abs() + q * q));
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    let general = (2usize..=4, 0.5..6.0f64).prop_flat_map(|(n, kappa)| general_coupling(n).prop_map(move |(g, ..)| GeneralCoupling { kappa, ..g }));
    runner(100)
        .run(&general, |g| {
            let (cg, dg) = g.canonical_cd().unwrap();
            let tol = 1e-12 * (1.0 + g.x0.amax() + g.q.amax().powi(2));
            prop_assert!((dg.transpose() * &cg - cg.transpose() * &dg).amax() <= tol);
            Ok(())
        })
        .map_err(|e| e.to_string())
}

fn grid() -> impl Strategy<Value = Grid> {
    (0.001..1.0f64, 1.0..20.0f64, 2usize..500, prop_oneof![Just(Spacing::Linear), Just(Spacing::Log)])
        .prop_map(|(min, span, count, spacing)| Grid { min, max: min + span, count, spacing })
}

pub fn scenario_round_trip() -> Result<(), String> {
    let inputs = ((0.5..2.0f64, 0.1..1.0f64, 0.1..5.0f64, -2.0..2.0f64, 1.0..100.0f64), grid(), grid(), 0usize..preset_names().len());
    runner(100)
        .run(&inputs, |((k1, dk, extra, q, x), kg, rg, pick)| {
            let mut s = preset(preset_names()[pick]).unwrap();
            if s.channels.iter().all(|c| c.family == "cosech") {
                s.channels = vec![
                    ChannelSpec::from_family(&Family::Cosech { kappa: k1 + dk }),
                    ChannelSpec::from_family(&Family::Cosech { kappa: k1 }),
                ];
                s.coupling = CouplingSpec::pair(k1 + dk + extra, q, x);
            }
            s.k_grid = kg;
            s.r_grid = rg;
            let text = s.to_json();
            let back = Scenario::from_json(&text).unwrap();
            prop_assert_eq!(&back, &s);
            prop_assert_eq!(back.to_json(), text);
            Ok(())
        })
        .map_err(|e| e.to_string())
}
