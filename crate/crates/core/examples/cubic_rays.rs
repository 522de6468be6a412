//! The cubic kernel in position space along the two coordinate rays.

use dilute_bose::coefficients::{Interaction, ModelParams};
use dilute_bose::position_space::{cubic_kernel_position, CubicRays};

fn main() -> dilute_bose::Result<()> {
    let it = Interaction::soft_sphere(2.0, 1.0)?;
    let ks = it.kernels(ModelParams::new(1e3, 0.6)?);
    let t = std::time::Instant::now();
    let rays = CubicRays::new(&ks, 6.0);
    let (np, nq) = rays.points();
    println!("{np} x {nq} momenta ({:.1?}); A(0,0) = {:.6e}", t.elapsed(), rays.at_origin());
    for x in [0.01, 0.02, 0.05, 0.1, 0.2, 0.4] {
        let v = [x, 0.0, 0.0];
        println!("  |x| = {x:<5} A(x,0) = {:>12.4e}  A(0,x) = {:>12.4e}", rays.along_x(v), rays.along_y(v));
    }
    // oscillatory double sums converge slowly; accept a quarter of the peak as truncation change
    let tol = 0.25 * rays.at_origin().abs();
    match cubic_kernel_position(&ks, [0.05, 0.0, 0.0], [0.0, 0.05, 0.0], 6.0, tol) {
        Ok(v) => println!("A(x,y) at x = 0.05 e1, y = 0.05 e2: {v:.6e}"),
        Err(e) => println!("A(x,y): {e}"),
    }
    Ok(())
}
