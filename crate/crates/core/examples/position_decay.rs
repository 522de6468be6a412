//! Position-space decay of σ̌ on the torus and the localized-norm ratio.

use dilute_bose::coefficients::{Interaction, ModelParams};
use dilute_bose::fit::power_law;
use dilute_bose::position_space::{decay_profile, kernel_fft, localized_norms, Which};

fn main() -> dilute_bose::Result<()> {
    let it = Interaction::soft_sphere(2.0, 1.0)?;
    let m = 256;
    let mut ratios = Vec::new();
    let ns = [1e4, 1e5, 1e6];
    for &n in &ns {
        let params = ModelParams::new(n, 0.6)?;
        let ks = it.kernels(params);
        let t = std::time::Instant::now();
        let field = kernel_fft(&ks, Which::Sigma, m)?;
        let profile = decay_profile(&field);
        let (s2, _) = localized_norms(&field, params.l_b)?;
        let l2 = field.l2_squared().sqrt();
        println!(
            "N = {n:.0e}  nyquist ratio {:.2e}  sup {:.4e}  sum_u |s_u|_2 / |s|_2 = {:.4}  ({:.1?})",
            field.nyquist_ratio(),
            field.max_abs(),
            s2 / l2,
            t.elapsed()
        );
        ratios.push(s2 / l2);
        let (lo, hi) = (params.l_eta, params.l_sigma / 3.0);
        match profile.window_slope(lo, hi) {
            Ok(f) => println!("  slope on [{lo:.4}, {hi:.4}]: {:.3}", f.slope),
            Err(e) => println!("  {e}"),
        }
        match profile.window_slope(1.0 / m as f64, params.l_eta) {
            Ok(f) => println!("  near-field slope: {:.3}", f.slope),
            Err(e) => println!("  near field: {e}"),
        }
        match profile.window_slope(2.0 * params.l_sigma, 10.0 * params.l_sigma) {
            Ok(f) => println!("  far-field slope: {:.3}", f.slope),
            Err(e) => println!("  far field: {e}"),
        }
    }
    println!("localized ratio exponent {:.3}", power_law(&ns, &ratios)?.slope);
    Ok(())
}
