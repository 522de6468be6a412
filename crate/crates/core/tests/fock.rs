use dilute_bose::coefficients::{Interaction, KernelSet, ModelParams};
use dilute_bose::fock_oracle::*;
use dilute_bose::Error;
use std::f64::consts::PI;

fn ks() -> KernelSet {
    Interaction::soft_sphere(2.0, 1.0)
        .unwrap()
        .kernels(ModelParams::with_any_kappa(50.0, 0.6).unwrap())
}

fn zero_sector(modes: &[Mode], n_max: u8, cap: u32) -> FockRep {
    FockRep::new(
        modes,
        n_max,
        cap,
        SpaceOptions {
            sector: Some([0, 0, 0]),
            budget: DEFAULT_BUDGET,
        },
    )
    .unwrap()
}

#[test]
fn ladder_matrix_elements() {
    let rep = build_space(&[[0, 0, 0]], 5, 5).unwrap();
    assert_eq!(rep.dim(), 6);
    let a = rep.annihilation(0);
    for n in 1..=5u8 {
        let from = rep.state_index(&[n]).unwrap();
        let to = rep.state_index(&[n - 1]).unwrap();
        let v = *a.get(to, from).unwrap();
        assert!((v - (n as f64).sqrt()).abs() < 1e-15);
    }
}

#[test]
fn ccr_hermiticity_and_momentum() {
    assert!(build_space(&shell_modes(&[0, 1]), 3, 4).unwrap().ccr_residual() < 1e-14);
    let rep = zero_sector(&shell_modes(&[0, 1, 2]), 6, 6);
    let h = build_hamiltonian(&rep, &ks());
    assert!(max_asymmetry(&h) < 1e-14);
    assert!(rep.conserves_momentum(&h));
    for i in 0..rep.dim() {
        assert_eq!(rep.total_momentum(i), [0, 0, 0]);
    }
}

#[test]
fn weyl_matches_poisson_amplitudes() {
    let rep = build_space(&[[0, 0, 0]], 20, 20).unwrap();
    let n0: f64 = 1.0;
    let w = apply_weyl(&rep, n0, &OracleState::vacuum(&rep).unwrap(), 1e-6).unwrap();
    let mut fact = 1.0;
    for n in 0..=20u8 {
        if n > 0 {
            fact *= n as f64;
        }
        let want = (-n0 / 2.0).exp() * n0.powf(n as f64 / 2.0) / fact.sqrt();
        let i = rep.state_index(&[n]).unwrap();
        assert!((w.coefficients[i] - want).abs() < 1e-10, "n = {n}");
    }
    let num = expectation(&rep.number(), &w.coefficients);
    assert!((num - n0).abs() < 1e-8);
    let a0 = expectation(&rep.annihilation(0), &w.coefficients);
    assert!((a0 - n0.sqrt()).abs() < 1e-8);

    let id = apply_weyl(&rep, 0.0, &OracleState::vacuum(&rep).unwrap(), 1e-6).unwrap();
    assert_eq!(id.coefficients, rep.vacuum().unwrap());
}

#[test]
fn two_mode_ground_energy() {
    let g = 7.5;
    let q = quad_ground_energy([1, 0, 0], g, 16).unwrap();
    let p2 = (2.0 * PI).powi(2);
    let want = (p2 * p2 + 2.0 * p2 * g).sqrt() - p2 - g;
    assert!((q.closed_form - want).abs() < 1e-12);
    assert!(q.residual < 1e-6);
    let res: Vec<f64> = [4u8, 8, 12]
        .iter()
        .map(|&m| bogoliubov_conjugation_residual(&ks(), [1, 0, 0], m).unwrap())
        .collect();
    assert!(res.windows(2).all(|w| w[1] < w[0]), "{res:?}");
}

#[test]
fn bogoliubov_number_matches_sigma() {
    let rep = zero_sector(&shell_modes(&[0, 1]), 8, 16);
    let (num, target, leak) = bogoliubov_number(&rep, &ks()).unwrap();
    assert!(leak < 1e-6);
    assert!((num - target).abs() < 1e-6);
}

#[test]
fn cubic_state_checks() {
    let k = ks();
    let rep = zero_sector(&shell_modes(&[0, 1, 2]), 6, 6);
    let ops = PertOperators::new(&rep, &k, 50.0);
    let scaled: Vec<f64> = [0.1, 0.05, 0.025]
        .iter()
        .map(|&e| {
            let p = perturbative_energy_check(&rep, &ops, e).unwrap();
            assert!(p.leakage < 1e-6);
            (p.residual / e.powi(3)).abs()
        })
        .collect();
    let hi = scaled.iter().cloned().fold(0.0, f64::max);
    let lo = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(hi / lo <= 2.0, "{scaled:?}");

    let (m, c) = cubic_contraction_two_ways(&rep, &k, 50.0).unwrap();
    assert!((m - c).abs() <= 1e-10 * m.abs().max(1.0));
    let f = two_body_expectation(&k, [1, 0, 0]).unwrap();
    let o = two_body_first_quantized(&k, [1, 0, 0]);
    assert!((f - o).abs() <= 1e-10 * o.abs().max(1.0));
}

#[test]
fn composite_state() {
    let rep = zero_sector(&triangle_modes([1, 0, 0], [0, 1, 0]), 12, 20);
    let c = composite_state_check(&rep, &ks(), 1.0, 1.0).unwrap();
    assert!(c.leakage < 1e-6);
    assert!(c.number >= c.lower_bound - 1e-10, "{c:?}");
    assert!(c.pair_amplitude < 1e-10);
}

#[test]
fn invalid_spaces() {
    assert!(matches!(build_space(&[], 2, 2), Err(Error::InvalidModes(_))));
    assert!(matches!(build_space(&[[1, 0, 0]], 2, 2), Err(Error::InvalidModes(_))));
    let e = FockRep::new(
        &shell_modes(&[0, 1, 2, 3]),
        8,
        40,
        SpaceOptions {
            sector: None,
            budget: 1000,
        },
    );
    assert!(matches!(e, Err(Error::DimensionBudget { .. })));
}
