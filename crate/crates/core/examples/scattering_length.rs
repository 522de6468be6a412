//! Zero-energy scattering: soft sphere against its closed form, and a tabulated potential.

use dilute_bose::scattering::{
    scattering_length_by_integral, soft_sphere_scattering_length, solve_zero_energy, RadialGrid, RadialPotential,
};

fn main() -> dilute_bose::Result<()> {
    let t = std::time::Instant::now();
    let v = RadialPotential::soft_sphere(2.0, 1.0)?;
    let sol = solve_zero_energy(&v, &RadialGrid::uniform(1.0, 4000)?)?;
    let exact = soft_sphere_scattering_length(2.0, 1.0);
    println!("soft sphere V0 = 2, R = 1 ({:.1?})", t.elapsed());
    println!("  a (matching) = {:.15}", sol.scattering_length());
    println!("  a (integral) = {:.15}", scattering_length_by_integral(&sol));
    println!("  1 - tanh 1   = {exact:.15}");
    println!("  Richardson estimate {:.2e}, sup f = {:.6}", sol.richardson_estimate(), sol.f_sup());
    for m in [1, 2, 3] {
        println!("  F_{m}(xi) at xi = 0, 5, 20: {:.4e} {:.4e} {:.4e}", sol.fm_envelope(m, 0.0), sol.fm_envelope(m, 5.0), sol.fm_envelope(m, 20.0));
    }

    // a Gaussian-like bump given as a table
    let r: Vec<f64> = (0..=40).map(|i| i as f64 * 0.05).collect();
    let vt: Vec<f64> = r.iter().map(|x| 3.0 * (-4.0 * x * x).exp() * (1.0 - x / 2.0)).collect();
    let tab = RadialPotential::from_table(r, vt)?;
    let sol = solve_zero_energy(&tab, &RadialGrid::uniform(tab.radius(), 4000)?)?;
    println!(
        "tabulated bump: a = {:.12} (matching), {:.12} (integral)",
        sol.scattering_length(),
        scattering_length_by_integral(&sol)
    );
    Ok(())
}
