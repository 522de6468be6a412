//! Extracts the LHY constant from the counterterm sum and checks the radial integral.

use dilute_bose::asymptotics::{lhy_constant, lhy_extrapolation, lhy_radial_integral};
use dilute_bose::coefficients::Interaction;

fn main() -> dilute_bose::Result<()> {
    let it = Interaction::soft_sphere(2.0, 1.0)?;
    let integral = lhy_radial_integral();
    println!("radial integral {integral:.15} (8√2/15 = {:.15})", 8.0 * 2f64.sqrt() / 15.0);
    let t = std::time::Instant::now();
    let ex = lhy_extrapolation(&it, 0.6, &[1e5, 1e6, 1e7, 1e8])?;
    for (n, r) in ex.n.iter().zip(&ex.ratios) {
        println!("N = {n:.0e}  S1/(a^5/2 N^5κ/2) = {r:.5}");
    }
    println!(
        "extrapolated {:.4} vs {:.4} ({:.2}%), {:.1?}",
        ex.value,
        lhy_constant(),
        100.0 * ex.relative_error(),
        t.elapsed()
    );
    Ok(())
}
