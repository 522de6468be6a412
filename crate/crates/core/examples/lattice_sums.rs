//! Shell-enumerated lattice sums: an Epstein zeta value and the effect of the analytic tail.

use dilute_bose::lattice::{lattice_sum, ShellCounts, SumSpec, Symmetry, TailModel};
use std::f64::consts::PI;

fn main() -> dilute_bose::Result<()> {
    let k4 = (2.0 * PI).powi(4);
    let f = move |k: f64| k4 / k.powi(4);
    for radius in [20.0, 60.0, 200.0] {
        let outer = 2.0 * PI * radius;
        let bare = lattice_sum(&SumSpec::radial(&f, outer).with_symmetry(Symmetry::Cubic48))?;
        let tail = lattice_sum(
            &SumSpec::radial(&f, outer)
                .with_symmetry(Symmetry::Cubic48)
                .with_tail(TailModel::PowerLaw { exponent: 4.0 }),
        )?;
        println!(
            "radius {radius:>5}: truncated {:.8}  with tail {:.8} ± {:.1e}",
            bare.value, tail.value, tail.error
        );
    }
    let g = |p: [f64; 3]| (-(p[0] * p[0] + 2.0 * p[1] * p[1] + 3.0 * p[2] * p[2]) / 400.0).exp();
    let s = lattice_sum(&SumSpec::vector(&g, 2.0 * PI * 30.0))?;
    println!("anisotropic Gaussian: {:.12} over {} points", s.value, s.points);
    let counts = ShellCounts::build(10);
    println!("r3(m), m = 0..10: {:?}", counts.counts());
    Ok(())
}
