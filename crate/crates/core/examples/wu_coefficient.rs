//! Regression of the cubic correction sums against log N^β.

use dilute_bose::asymptotics::{wu_regression, Cutoff};
use dilute_bose::coefficients::Interaction;

fn main() -> dilute_bose::Result<()> {
    let it = Interaction::soft_sphere(2.0, 1.0)?;
    let ns = [1e4, 1e5, 1e6, 1e7];
    for cutoff in [Cutoff::Sharp, Cutoff::Smooth] {
        let t = std::time::Instant::now();
        let r = wu_regression(&it, 0.6, &ns, cutoff)?;
        for (n, y) in r.n.iter().zip(&r.scaled) {
            println!("{cutoff:?} N = {n:.0e}  (S2+S3)/(a^4 N^(4κ-1)) = {y:.4}");
        }
        println!(
            "{cutoff:?}: slope {:.2} (naive {:.2}), target {:.2}, rel. error {:.2}%, {:.1?}",
            r.slope,
            r.naive_slope,
            -r.target,
            100.0 * r.relative_error(),
            t.elapsed()
        );
    }
    Ok(())
}
