use dilute_bose::coefficients::{Interaction, ModelParams};
use dilute_bose::lattice::{
    cubic_l2_squared_exact, cubic_l2_squared_shell_averaged, discrete_scattering_residual, first_shells, kahan, lattice_sum, orbit, sigma_norms, KahanSum, ShellCounts,
    ShellReps, SumSpec, Symmetry, TailModel,
};
use dilute_bose::Error;
use std::f64::consts::PI;

/// Σ' |n|^{-4} by a plain triple loop over the ball of radius `r`, plus the
/// continuum tail `4π/r`.
fn epstein_brute_force(r: i64) -> f64 {
    let r2 = r * r;
    let mut total = KahanSum::new();
    for x in -r..=r {
        let mut row = KahanSum::new();
        for y in -r..=r {
            for z in -r..=r {
                let m = x * x + y * y + z * z;
                if m == 0 || m > r2 {
                    continue;
                }
                let m = m as f64;
                row.add(1.0 / (m * m));
            }
        }
        total.add(row.value());
    }
    total.value() + 4.0 * PI / r as f64
}

fn inv4(k: f64) -> f64 {
    (2.0 * PI).powi(4) / k.powi(4)
}

#[test]
fn epstein_value() {
    let oracle = epstein_brute_force(200);
    assert!((oracle - 16.5323).abs() < 1e-3, "oracle {oracle}");
    let s = lattice_sum(
        &SumSpec::radial(&inv4, 2.0 * PI * 60.0)
            .with_tail(TailModel::PowerLaw { exponent: 4.0 })
            .with_symmetry(Symmetry::Cubic48),
    )
    .unwrap();
    assert!((s.value - 16.5323).abs() < 1e-3, "{}", s.value);
    assert!((s.value - oracle).abs() < 1e-3);
    assert!(s.error < 1e-3);
}

#[test]
fn closed_form_tail() {
    let tail = |k: f64| (2.0 * PI).powi(4) * 4.0 * PI / (2.0 * PI).powi(3) / k;
    let s = lattice_sum(&SumSpec::radial(&inv4, 2.0 * PI * 60.0).with_tail(TailModel::ClosedForm(&tail))).unwrap();
    assert!((s.value - 16.5323).abs() < 2e-3, "{}", s.value);
}

#[test]
fn zero_and_odd_summands() {
    let zero = |_: f64| 0.0;
    assert_eq!(lattice_sum(&SumSpec::radial(&zero, 100.0)).unwrap().value, 0.0);
    let odd = |p: [f64; 3]| p[0] * (-(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) / 1e3).exp();
    let s = lattice_sum(&SumSpec::vector(&odd, 2.0 * PI * 25.0)).unwrap();
    assert!(s.value.abs() < 1e-10, "{}", s.value);
}

#[test]
fn symmetry_reduction_matches_full_enumeration() {
    let f = |k: f64| (-k / 40.0).exp() / (1.0 + k * k);
    let g = |p: [f64; 3]| f((p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt());
    let outer = 2.0 * PI * 30.0;
    let a = lattice_sum(&SumSpec::radial(&f, outer).with_symmetry(Symmetry::Cubic48)).unwrap();
    let b = lattice_sum(&SumSpec::radial(&f, outer)).unwrap();
    let c = lattice_sum(&SumSpec::vector(&g, outer)).unwrap();
    assert!((a.value - b.value).abs() < 1e-12 * a.value.abs());
    assert!((a.value - c.value).abs() < 1e-12 * a.value.abs());
    assert!(a.points < c.points);
}

#[test]
fn deterministic_under_parallel_reduction() {
    let f = |p: [f64; 3]| 1.0 / (1.0 + p[0] * p[0] + 2.0 * p[1] * p[1] + 3.0 * p[2] * p[2]).powi(2);
    let spec = SumSpec::vector(&f, 2.0 * PI * 40.0);
    let first = lattice_sum(&spec).unwrap().value;
    for _ in 0..5 {
        assert_eq!(lattice_sum(&spec).unwrap().value.to_bits(), first.to_bits());
    }
}

#[test]
fn tail_doubling_consistent() {
    let spec = |r: f64| {
        SumSpec::radial(&inv4, 2.0 * PI * r)
            .with_symmetry(Symmetry::Cubic48)
            .with_tail(TailModel::PowerLaw { exponent: 4.0 })
    };
    let a = lattice_sum(&spec(40.0)).unwrap();
    let b = lattice_sum(&spec(80.0)).unwrap();
    assert!((a.value - b.value).abs() <= 2.0 * (a.error + b.error));
    assert!(b.error < a.error);
}

#[test]
fn invalid_specs_rejected() {
    let nan = |k: f64| if k > 20.0 { f64::NAN } else { 1.0 };
    assert!(matches!(lattice_sum(&SumSpec::radial(&nan, 100.0)), Err(Error::NonFinite { .. })));
    let one = |_: f64| 1.0;
    assert!(lattice_sum(&SumSpec::radial(&one, 10.0).with_inner(20.0)).is_err());
    assert!(lattice_sum(&SumSpec::radial(&one, 10.0).with_tail(TailModel::PowerLaw { exponent: 2.0 })).is_err());
    let v = |_: [f64; 3]| 1.0;
    assert!(lattice_sum(&SumSpec::vector(&v, 10.0).with_symmetry(Symmetry::Cubic48)).is_err());
}

#[test]
fn inner_cutoff_excludes_shells() {
    let one = |_: f64| 1.0;
    // 0 < |n| ≤ 1 holds the six nearest neighbours
    let s = lattice_sum(&SumSpec::radial(&one, 2.0 * PI * 1.0)).unwrap();
    assert_eq!(s.value, 6.0);
    let s = lattice_sum(&SumSpec::radial(&one, 2.0 * PI * 2.0).with_inner(2.0 * PI * 1.0)).unwrap();
    assert_eq!(s.value, (12 + 8 + 6) as f64);
}

#[test]
fn shell_tables_agree() {
    let counts = ShellCounts::build(400);
    let reps = ShellReps::build(400);
    let mut total = 0u64;
    for m in 0..=400 {
        let pts = reps.points(m);
        assert_eq!(pts.len() as u32, counts.count(m), "m = {m}");
        assert!(pts.iter().all(|p| (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) as usize == m));
        total += pts.len() as u64;
        assert_eq!(counts.cumulative(m), total);
    }
    assert_eq!(orbit([1, 2, 3]).len(), 48);
    assert_eq!(orbit([0, 0, 1]).len(), 6);
    assert_eq!(kahan(&[1e16, 1.0, -1e16]), 1.0);
}

#[test]
fn first_shells_ordered() {
    let s = first_shells(20);
    assert_eq!(s.len(), 20);
    assert!(s.windows(2).all(|w| w[1].0 > w[0].0));
    assert_eq!(s[0].0, 1);
    assert!(s.iter().all(|&(m, _)| m != 7 && m != 15));
}

#[test]
fn sigma_norms_zero_potential() {
    let it = Interaction::from_potential(&dilute_bose::scattering::RadialPotential::zero(1.0).unwrap(), 100).unwrap();
    let ks = it.kernels(ModelParams::new(1e4, 0.6).unwrap());
    let s = sigma_norms(&ks).unwrap();
    assert_eq!(s.l2_squared, 0.0);
    assert_eq!(s.l1, 0.0);
}

#[test]
fn residual_truncation_error_reported() {
    let it = Interaction::soft_sphere(2.0, 1.0).unwrap();
    let ks = it.kernels(ModelParams::new(1e3, 0.6).unwrap());
    let p = first_shells(1)[0].1;
    let r = discrete_scattering_residual(&ks, p, 12.0).unwrap();
    assert!(r.value.is_finite() && r.error.is_finite());
    assert!(r.error < 1e-2 * r.value.abs());
}

#[test]
fn shell_averaged_cubic_norm_tracks_exact_sum() {
    let it = Interaction::soft_sphere(2.0, 1.0).unwrap();
    let ks = it.kernels(ModelParams::new(1e3, 0.6).unwrap());
    let trunc = 6.0;
    let avg = cubic_l2_squared_shell_averaged(&ks, trunc);
    let exact = cubic_l2_squared_exact(&ks, trunc * ks.params().p_eta / (2.0 * PI));
    println!("shell averaged {avg:.6e}, exact {exact:.6e}");
    assert!((avg / exact - 1.0).abs() < 1e-3);
}
