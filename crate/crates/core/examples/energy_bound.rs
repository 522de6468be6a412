//! Finite-N upper bound and its rescaling to the energy density expansion.

use dilute_bose::asymptotics::{energy_density, energy_upper_bound, scaling_consistency_check};

fn main() -> dilute_bose::Result<()> {
    let (kappa, a) = (0.6, 1.0 - 1f64.tanh());
    for n in [1e4, 1e6, 1e8] {
        let b = energy_upper_bound(n, kappa, a)?;
        let r = scaling_consistency_check(kappa, a, n)?;
        let rho = n.powf(3.0 * kappa - 2.0);
        println!(
            "N = {n:.0e}: leading {:.4e} LHY {:.4e} log {:.4e}; e(rho) = {:.4e}; term residuals {:.1e} {:.1e} {:.1e}",
            b.leading,
            b.lhy,
            b.log_term,
            energy_density(rho, a),
            r[0],
            r[1],
            r[2]
        );
    }
    Ok(())
}
