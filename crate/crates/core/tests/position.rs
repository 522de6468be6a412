use dilute_bose::coefficients::{momentum, Interaction, KernelSet, ModelParams};
use dilute_bose::position_space::{
    decay_profile, kernel_fft, kernel_fft_with, localized_norms, nyquist_ratio, Which,
};
use dilute_bose::scattering::RadialPotential;
use dilute_bose::Error;
use std::f64::consts::PI;

fn ks(n: f64) -> KernelSet {
    Interaction::soft_sphere(2.0, 1.0).unwrap().kernels(ModelParams::new(n, 0.6).unwrap())
}

fn modes(m: i64) -> impl Iterator<Item = [i64; 3]> {
    let h = m / 2;
    (-h + 1..h).flat_map(move |x| (-h + 1..h).flat_map(move |y| (-h + 1..h).map(move |z| [x, y, z])))
}

#[test]
fn pointwise_values_match_direct_fourier_sum() {
    let k = ks(1e3);
    let m = 32;
    let field = kernel_fft_with(&k, Which::Sigma, m, 1.0).unwrap();
    for j in [[0i64, 0, 0], [1, 0, 0], [3, 5, -2], [16, 1, 7], [-9, -9, 4]] {
        let x = [j[0] as f64 / m as f64, j[1] as f64 / m as f64, j[2] as f64 / m as f64];
        let direct: f64 = modes(m as i64)
            .map(|n| {
                let p = momentum(n);
                k.sigma_at(p) * (p[0] * x[0] + p[1] * x[1] + p[2] * x[2]).cos()
            })
            .sum();
        let got = field.at(j);
        assert!((got - direct).abs() < 1e-10 * direct.abs().max(1.0), "j = {j:?}: {got} vs {direct}");
    }
    assert!(field.imag_residue() < 1e-10);
}

#[test]
fn parseval_against_coefficients() {
    let k = ks(1e3);
    let m = 32;
    for which in [Which::Sigma, Which::GammaMinusOne] {
        let field = kernel_fft_with(&k, which, m, 1.0).unwrap();
        let coeff: f64 = modes(m as i64)
            .map(|n| {
                let p = momentum(n);
                let c = match which {
                    Which::Sigma => k.sigma_at(p),
                    Which::GammaMinusOne => k.gamma_at(p) - 1.0,
                };
                c * c
            })
            .sum();
        assert!((field.l2_squared() - coeff).abs() < 1e-9 * coeff, "{which:?}");
    }
}

#[test]
fn grid_size_and_aliasing_errors() {
    let k = ks(1e6);
    assert!(matches!(kernel_fft(&k, Which::Sigma, 48), Err(Error::GridSize(48))));
    match kernel_fft_with(&k, Which::Sigma, 16, 1e-3) {
        Err(Error::Aliasing { required, ratio, .. }) => {
            assert!(required > 16 && required.is_power_of_two());
            assert!(ratio > 1e-3);
            assert!(nyquist_ratio(&k, Which::Sigma, required) <= 1e-3);
        }
        other => panic!("expected aliasing error, got {:?}", other.map(|f| f.grid_size())),
    }
}

#[test]
fn zero_potential_profile_file() {
    let it = Interaction::from_potential(&RadialPotential::zero(1.0).unwrap(), 100).unwrap();
    let k = it.kernels(ModelParams::new(1e4, 0.6).unwrap());
    let field = kernel_fft(&k, Which::Sigma, 16).unwrap();
    assert_eq!(field.max_abs(), 0.0);
    let profile = decay_profile(&field);
    let dir = std::env::temp_dir().join("dilute-bose-profile-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("zero.csv");
    profile.write_csv(&path, 5).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "radius,max_abs,mean_abs");
    assert_eq!(lines.len(), 1 + 5);
    for l in &lines[1..] {
        let cols: Vec<f64> = l.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cols[1], 0.0);
        assert_eq!(cols[2], 0.0);
    }
}

#[test]
fn profile_rows_and_bins() {
    let k = ks(1e4);
    let field = kernel_fft(&k, Which::Sigma, 64).unwrap();
    let p = decay_profile(&field);
    assert_eq!(p.len(), 33);
    assert_eq!(p.radius[0], 0.0);
    assert!((p.radius[1] - 1.0 / 64.0).abs() < 1e-15);
    assert!(p.max_abs.iter().zip(&p.mean_abs).all(|(a, b)| a >= b));
    assert!((p.max_abs[0] - field.at([0, 0, 0]).abs()).abs() < 1e-12);
    assert!(matches!(p.window_slope(0.3, 0.2), Err(Error::WindowEmpty { .. })));
}

#[test]
fn localized_norms_bound_global_norm() {
    let k = ks(1e4);
    let params = *k.params();
    let field = kernel_fft(&k, Which::Sigma, 64).unwrap();
    let (s2, s1) = localized_norms(&field, params.l_b).unwrap();
    let l2 = field.l2_squared().sqrt();
    assert!(s2 >= l2 * (1.0 - 1e-12));
    assert!(s1 > 0.0);
    // one box covering the torus gives back the global norm
    let (whole, _) = localized_norms(&field, 1.0).unwrap();
    assert!((whole - l2).abs() < 1e-10 * l2);
    assert!(localized_norms(&field, 1.0 / 256.0).is_err());
}

#[test]
fn decay_of_sigma_is_monotone_at_small_radius() {
    let k = ks(1e5);
    let field = kernel_fft(&k, Which::Sigma, 128).unwrap();
    let p = decay_profile(&field);
    assert!(p.max_abs[0] > p.max_abs[4]);
    assert!(p.max_abs[4] > p.max_abs[16]);
    let _ = PI;
}
