//! Cubic transformation on a truncated Fock space: perturbative energy and operator identities.

use dilute_bose::coefficients::{Interaction, ModelParams};
use dilute_bose::fock_oracle::{
    build_hamiltonian, cubic_contraction_two_ways, perturbative_energy_check, shell_modes, two_body_expectation,
    two_body_first_quantized, max_asymmetry, FockRep, PertOperators, SpaceOptions,
};

fn main() -> dilute_bose::Result<()> {
    let ks = Interaction::soft_sphere(2.0, 1.0)?.kernels(ModelParams::new(50.0, 0.6)?);
    let modes = shell_modes(&[0, 1, 2]);
    let t = std::time::Instant::now();
    let rep = FockRep::new(&modes, 6, 6, SpaceOptions { sector: Some([0, 0, 0]), ..Default::default() })?;
    println!("{} modes, dimension {} ({:.1?})", modes.len(), rep.dim(), t.elapsed());
    let h = build_hamiltonian(&rep, &ks);
    println!("H asymmetry {:.1e}, momentum conserved: {}", max_asymmetry(&h), rep.conserves_momentum(&h));
    let ops = PertOperators::new(&rep, &ks, 50.0);
    for eps in [0.1, 0.05, 0.025] {
        let c = perturbative_energy_check(&rep, &ops, eps)?;
        println!(
            "eps = {eps}: lhs {:.10e} rhs {:.10e} residual/eps^3 {:.4e} leakage {:.1e}",
            c.lhs,
            c.rhs,
            c.residual / eps.powi(3),
            c.leakage
        );
    }
    let (m, c) = cubic_contraction_two_ways(&rep, &ks, 50.0)?;
    println!("<A C* > matrix {m:.12e} contraction {c:.12e}");
    let f = two_body_expectation(&ks, [1, 0, 0])?;
    let o = two_body_first_quantized(&ks, [1, 0, 0]);
    println!("two-body: fock {f:.12e} first-quantized {o:.12e}");
    println!("total {:.1?}", t.elapsed());
    Ok(())
}
