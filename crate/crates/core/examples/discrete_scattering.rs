//! Residual of the discrete scattering identity over the first momentum shells.

use dilute_bose::coefficients::{Interaction, ModelParams};
use dilute_bose::fit::power_law;
use dilute_bose::lattice::{discrete_scattering_residual, eta_correction_sum, first_shells};

fn main() -> dilute_bose::Result<()> {
    let it = Interaction::soft_sphere(2.0, 1.0)?;
    let ns = [1e3, 10f64.powf(3.5), 1e4];
    let shells = first_shells(20);
    let mut maxima = Vec::new();
    for &n in &ns {
        let ks = it.kernels(ModelParams::new(n, 0.6)?);
        let res: Vec<f64> = shells
            .iter()
            .map(|&(_, p)| discrete_scattering_residual(&ks, p, 12.0).map(|r| r.value.abs()))
            .collect::<Result<_, _>>()?;
        let max = res.iter().cloned().fold(0.0, f64::max);
        let min = res.iter().cloned().fold(f64::INFINITY, f64::min);
        println!("N = {n:.3e}  max |residual| = {max:.4e}  max/min = {:.3}", max / min);
        maxima.push(max);
    }
    let f = power_law(&ns, &maxima)?;
    println!("residual exponent {:.3} (expected 0.2)", f.slope);

    let ns = [1e3, 1e4, 1e5];
    let mut corr = Vec::new();
    for &n in &ns {
        let ks = it.kernels(ModelParams::new(n, 0.6)?);
        let c = eta_correction_sum(&ks, 24.0)?;
        println!("N = {n:.0e}  eta correction sum = {:.5e} ± {:.1e}", c.value, c.error);
        corr.push(c.value);
    }
    let f = power_law(&ns, &corr)?;
    println!("correction exponent {:.3} (expected 1.2)", f.slope);
    Ok(())
}
