//! Runs two suites through the batch runner and prints the summary.

use dilute_bose::cli::run;
use dilute_bose::config::{RunConfig, Suite};

fn main() -> dilute_bose::Result<()> {
    let out = std::env::temp_dir().join("dilute-bose-batch");
    let mut cfg = RunConfig::from_toml(
        r#"
kappa = 0.6
n_list = [1e4, 1e5]

[potential]
kind = "soft_sphere"
v0 = 2.0
radius = 1.0
"#,
    )?;
    cfg.out_dir = out.clone();
    cfg.suites = vec![Suite::Scattering, Suite::Fock];
    let summary = run(&cfg, &out, false)?;
    for a in &summary.assertions {
        println!("{} [{}] {}", if a.passed { "PASS" } else { "FAIL" }, a.suite, a.name);
    }
    println!("{} -> exit code {}; reports in {}", summary.status, summary.exit_code(), out.display());
    Ok(())
}
