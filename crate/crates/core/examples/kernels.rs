//! Trial-state coefficients along a ray of lattice momenta.

use dilute_bose::coefficients::{momentum, Interaction, ModelParams};

fn main() -> dilute_bose::Result<()> {
    let it = Interaction::soft_sphere(2.0, 1.0)?;
    let params = ModelParams::new(1e5, 0.6)?;
    let ks = it.kernels(params);
    println!(
        "N = 1e5, kappa = 0.6: L = {:.3}, p_sigma = {:.3}, p_eta = {:.3}, eps = {:.3e}",
        params.box_length,
        params.p_sigma,
        params.p_eta,
        params.epsilon()
    );
    println!("{:>6} {:>12} {:>12} {:>12} {:>12} {:>12}", "|n|", "eta_inf", "sigma", "gamma-1", "eta", "A_K p-part");
    for n in [1i64, 2, 4, 8, 16, 32, 64, 128] {
        let p = momentum([n, 0, 0]);
        let k = 2.0 * std::f64::consts::PI * n as f64;
        let b = ks.mu_sigma_gamma(p)?;
        println!(
            "{n:>6} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}",
            ks.eta_inf(k),
            b.sigma,
            b.gamma - 1.0,
            ks.eta(k),
            ks.kinetic_low_p(k)
        );
    }
    let (p, q) = (momentum([40, 3, 0]), momentum([-5, 12, 2]));
    let (a3, a6) = ks.symmetrized_kernels(p, q);
    println!("A(p,q) = {:.6e}, A3 = {a3:.6e}, A6 = {a6:.6e}, A6(q,p) = {:.6e}", ks.cubic(p, q), ks.cubic6(q, p));
    println!("N0 = N - |sigma|^2 = {:.3}", ks.condensate_number()?);
    Ok(())
}
