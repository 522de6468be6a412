//! Term-by-term constant of the quadratic renormalization, lattice double sum vs continuum.

use dilute_bose::asymptotics::{constant_term_assembly, ConvolutionMode};
use dilute_bose::coefficients::{Interaction, ModelParams};

fn main() -> dilute_bose::Result<()> {
    let it = Interaction::soft_sphere(2.0, 1.0)?;
    let ks = it.kernels(ModelParams::new(1e3, 0.6)?);
    for mode in [
        ConvolutionMode::Continuum,
        ConvolutionMode::Exact { p_outer: 2.0, q_outer: 4.0 },
    ] {
        let t = std::time::Instant::now();
        let c = constant_term_assembly(&ks, mode)?;
        println!("{mode:?} ({:.1?})", t.elapsed());
        println!(
            "  leading {:.6e}  S1 {:.6e}  sigma-eta {:.6e}  convolution {:.6e}  total {:.6e}",
            c.leading, c.s1, c.sigma_eta, c.convolution, c.total
        );
    }
    Ok(())
}
