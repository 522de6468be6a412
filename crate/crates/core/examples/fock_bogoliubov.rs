//! Two-mode Bogoliubov diagonalization and the conjugation identity on a truncated Fock space.

use dilute_bose::coefficients::{Interaction, ModelParams};
use dilute_bose::fock_oracle::{
    bogoliubov_conjugation_residual, bogoliubov_number, build_space, quad_ground_energy, shell_modes,
};

fn main() -> dilute_bose::Result<()> {
    let p = 2.0 * std::f64::consts::PI;
    let q = quad_ground_energy([1, 0, 0], 0.25 * p * p, 16)?;
    println!(
        "G/p^2 = 0.25, n_max = 16: ground {:.12} closed form {:.12} residual {:.2e}",
        q.ground, q.closed_form, q.residual
    );

    let ks = Interaction::soft_sphere(2.0, 1.0)?.kernels(ModelParams::new(50.0, 0.6)?);
    for n_max in [4u8, 8, 12] {
        let r = bogoliubov_conjugation_residual(&ks, [1, 0, 0], n_max)?;
        println!("n_max = {n_max:2}: conjugation residual {r:.3e}");
    }
    let modes = shell_modes(&[0, 1]);
    for n_max in [2u8, 4, 6] {
        let rep = build_space(&modes, n_max, 2 * n_max as u32)?;
        let (num, target, leak) = bogoliubov_number(&rep, &ks)?;
        println!("n_max = {n_max}: <N> = {num:.8} vs sum sigma^2 = {target:.8} (leakage {leak:.1e}, dim {})", rep.dim());
    }
    Ok(())
}
