use dilute_bose::coefficients::{momentum, smooth_cutoff, uncut_closed_forms, Interaction, KernelSet, ModelParams};
use proptest::prelude::*;
use std::sync::OnceLock;

fn interaction() -> &'static Interaction {
    static IT: OnceLock<Interaction> = OnceLock::new();
    IT.get_or_init(|| Interaction::soft_sphere(2.0, 1.0).unwrap())
}

fn ks(n: f64) -> KernelSet {
    interaction().kernels(ModelParams::new(n, 0.6).unwrap())
}

fn lattice() -> impl Strategy<Value = [i64; 3]> {
    [-60i64..=60, -60i64..=60, -60i64..=60].prop_filter("nonzero", |n| *n != [0, 0, 0])
}

fn log_n() -> impl Strategy<Value = f64> {
    3.0f64..7.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn hyperbolic_identity(n in lattice(), e in log_n()) {
        let b = ks(10f64.powf(e)).mu_sigma_gamma(momentum(n)).unwrap();
        prop_assert!((b.gamma * b.gamma - b.sigma * b.sigma - 1.0).abs() < 1e-10);
    }

    #[test]
    fn tanh_identity(n in lattice(), e in log_n()) {
        prop_assert!(ks(10f64.powf(e)).tanh_identity_residual(momentum(n)).abs() < 1e-10);
    }

    #[test]
    fn uncut_coefficients_match_closed_forms(n in lattice(), e in log_n()) {
        let k = ks(10f64.powf(e));
        let p = dilute_bose::coefficients::norm(momentum(n));
        let (s2, g2, gs) = uncut_closed_forms(k.eta_inf(p));
        let (s, g) = (k.sigma_inf(p), k.gamma_inf(p));
        prop_assert!((s * s - s2).abs() <= 1e-10 * s2.abs().max(1e-3));
        prop_assert!((g * g - g2).abs() <= 1e-10 * g2);
        prop_assert!((g * s - gs).abs() <= 1e-10 * gs.abs().max(1e-3));
    }

    #[test]
    fn a6_symmetries(p in lattice(), q in lattice(), e in log_n()) {
        let k = ks(10f64.powf(e));
        let (p, q) = (momentum(p), momentum(q));
        let r = [-p[0] - q[0], -p[1] - q[1], -p[2] - q[2]];
        let v = k.cubic6(p, q);
        let scale = v.abs().max(1e-300);
        for w in [k.cubic6(q, p), k.cubic6(r, q), k.cubic6(p, r)] {
            prop_assert!((w - v).abs() <= 1e-10 * scale);
        }
    }

    #[test]
    fn cubic_bound(p in lattice(), q in lattice(), e in log_n()) {
        let n = 10f64.powf(e);
        let k = ks(n);
        let (p, q) = (momentum(p), momentum(q));
        let bound = 2.0 / n.sqrt() * k.eta_at(p).abs() * k.sigma_at(q).abs();
        prop_assert!(k.cubic(p, q).abs() <= bound * (1.0 + 1e-12));
    }

    #[test]
    fn cutoff_profile(x in -1.0f64..4.0) {
        let c = smooth_cutoff(x);
        prop_assert!((0.0..=1.0).contains(&c));
        if x <= 1.0 { prop_assert_eq!(c, 0.0); }
        if x >= 2.0 { prop_assert_eq!(c, 1.0); }
    }
}

#[test]
fn cutoff_is_monotone_and_smooth() {
    let xs: Vec<f64> = (0..=3000).map(|i| i as f64 / 1000.0).collect();
    let v: Vec<f64> = xs.iter().map(|&x| smooth_cutoff(x)).collect();
    assert!(v.windows(2).all(|w| w[1] >= w[0]));
    assert!((smooth_cutoff(1.5) - 0.5).abs() < 1e-12);
}

#[test]
fn kernels_vanish_where_cut() {
    let k = ks(1e5);
    let p = k.params();
    let below = 0.9 * p.p_sigma;
    assert_eq!(k.sigma(below), 0.0);
    assert_eq!(k.eta(0.9 * p.p_eta), 0.0);
    assert!(k.sigma(2.1 * p.p_sigma) != 0.0);
    assert_eq!(k.kinetic_low_p(2.1 * p.p_eta), 0.0);
    assert_eq!(k.cubic(momentum([1, 0, 0]), [0.0; 3]), 0.0);
}

#[test]
fn eta_inf_opposes_transform_and_stays_in_domain() {
    let k = ks(1e6);
    for n in 1..2000 {
        let p = 2.0 * std::f64::consts::PI * n as f64;
        let e = k.eta_inf(p);
        assert!(e * k.vf(p) <= 0.0, "n = {n}");
        assert!(1.0 - 4.0 * e > 0.0, "n = {n}");
    }
}

#[test]
fn model_params() {
    assert!(ModelParams::new(1e4, 0.7).is_err());
    assert!(ModelParams::new(1e4, 0.4).is_err());
    assert!(ModelParams::new(0.5, 0.6).is_err());
    let p = ModelParams::new(1e6, 0.6).unwrap();
    assert!((p.beta - 0.2).abs() < 1e-15);
    assert!((p.box_length - 1e6f64.powf(0.4)).abs() < 1e-9);
    assert!((p.l_eta * p.p_eta - 1.0).abs() < 1e-12);
    assert!((p.l_sigma * p.p_sigma - 1.0).abs() < 1e-12);
    assert!((p.epsilon() - 1e6f64.powf(-0.1)).abs() < 1e-15);
}

#[test]
fn condensate_number_positive() {
    for n in [1e3, 1e5] {
        let k = ks(n);
        let n0 = k.condensate_number().unwrap();
        assert!(n0 > 0.0 && n0 < n);
    }
}
