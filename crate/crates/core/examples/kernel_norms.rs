//! Lattice norms of the trial-state kernels and their growth exponents in N.

use dilute_bose::coefficients::{Interaction, ModelParams};
use dilute_bose::fit::power_law;
use dilute_bose::lattice::{cubic_l2_squared_shell_averaged, kinetic_low_l2_squared, sigma_norms};

fn main() -> dilute_bose::Result<()> {
    let kappa = 0.6;
    let it = Interaction::soft_sphere(2.0, 1.0)?;
    let ns = [1e4, 1e5, 1e6];
    let mut rows = Vec::new();
    for &n in &ns {
        let ks = it.kernels(ModelParams::new(n, kappa)?);
        let s = sigma_norms(&ks)?;
        let a2 = cubic_l2_squared_shell_averaged(&ks, 12.0);
        let ak = kinetic_low_l2_squared(&ks)?;
        println!(
            "N = {n:.0e}  |s|^2 = {:.4e}  |s|_1 = {:.4e}  |gs-e| = {:.4e}  |A|^2 = {:.4e}  |A_K|^2 = {:.4e}",
            s.l2_squared, s.l1, s.gamma_sigma_minus_eta, a2, ak
        );
        rows.push([s.l2_squared, s.l1, s.gamma_sigma_minus_eta, a2, ak]);
    }
    let names = ["|sigma|_2^2", "|sigma|_1", "|gamma sigma - eta|_1", "|A|_2^2", "|A_K low|_2^2"];
    let targets = [1.5 * kappa, 1.0, 1.5 * kappa, 4.0 * kappa - 1.6, 5.0 * kappa - 1.0];
    for (j, name) in names.iter().enumerate() {
        let y: Vec<f64> = rows.iter().map(|r| r[j]).collect();
        let f = power_law(&ns, &y)?;
        println!("{name:>22}: exponent {:.3} (expected {:.2})", f.slope, targets[j]);
    }
    Ok(())
}
