use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dilute-bose"))
}

fn scratch(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("dilute-bose-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(args: &[&str], out: &Path) -> Output {
    bin().args(args).arg("--out").arg(out).output().unwrap()
}

fn header(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

#[test]
fn scattering_passes_and_writes_reports() {
    let d = scratch("scat");
    let o = run(&["scattering"], &d);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(header(&d.join("scattering.csv")), "r,u,f");
    let log = std::fs::read_to_string(d.join("log.txt")).unwrap();
    assert!(log.contains("PASS"));
    let s: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("summary.json")).unwrap()).unwrap();
    assert_eq!(s["status"], "pass");
}

#[test]
fn tiny_tolerance_scale_fails() {
    let d = scratch("tight");
    let o = run(&["scattering", "--tolerance-scale", "1e-30"], &d);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("failed:"));
}

#[test]
fn empty_suite_list_has_nothing_to_run() {
    let d = scratch("empty");
    let cfg = d.join("run.toml");
    std::fs::write(&cfg, "suites = []\n").unwrap();
    let o = bin().args(["all", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let s = std::fs::read_to_string(d.join("out/summary.json")).unwrap();
    assert!(s.contains("nothing to run"), "{s}");
}

#[test]
fn malformed_potential_is_a_config_error() {
    let d = scratch("bad");
    let cfg = d.join("run.toml");
    std::fs::write(&cfg, "[potential]\nkind = \"soft_sphere\"\nv0 = -2.0\nradius = 1.0\n").unwrap();
    let o = bin().args(["all", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("potential.v0"));

    std::fs::write(&cfg, "[potential]\nkind = \"table\"\npath = \"missing.csv\"\n").unwrap();
    let o = bin().args(["scattering", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("potential.path"));

    let o = bin().args(["coeffs", "--kappa", "0.9"]).arg("--out").arg(&d).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("kappa"));
}

#[test]
fn seeded_reports_are_reproducible() {
    let (a, b) = (scratch("seed-a"), scratch("seed-b"));
    for d in [&a, &b] {
        let o = run(&["coeffs", "--n-list", "1e4,1e5,1e6"], d);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let ra = std::fs::read(a.join("kernel_norms.csv")).unwrap();
    let rb = std::fs::read(b.join("kernel_norms.csv")).unwrap();
    assert_eq!(ra, rb);
    assert!(header(&a.join("kernel_norms.csv")).starts_with("N,sigma_l2_squared,sigma_l1"));
}

#[test]
fn energy_report_rows_follow_n() {
    let d = scratch("energy");
    let cfg = d.join("run.toml");
    std::fs::write(
        &cfg,
        "n_list = [1e4, 1e5]\n[regressions]\nlhy = [1e4, 1e5]\nwu = [1e3, 3e3, 1e4, 3e4]\n",
    )
    .unwrap();
    let o = bin().args(["energy", "--config"]).arg(&cfg).output().unwrap();
    assert!(matches!(o.status.code(), Some(0 | 1)), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(d.join("out/energy_report.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "N,kappa,a,S1,S2,S3,lhy_ratio,log_slope,assembled_bound");
    let ns: Vec<f64> = lines.map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(ns, vec![1e4, 1e5]);
    assert!(d.join("out/energy_report.json").exists());
}

#[test]
fn fock_suite_writes_report() {
    let d = scratch("fock");
    let o = run(&["fock"], &d);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(d.join("fock_report.json")).unwrap()).unwrap();
    assert!(r["space"]["dimension"].as_u64().unwrap() > 0);
}

#[test]
fn readme_config_block_matches_defaults() {
    let readme = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../README.md")).unwrap();
    let start = readme.find("```toml\n").unwrap() + "```toml\n".len();
    let block = &readme[start..start + readme[start..].find("```").unwrap()];
    let cfg = dilute_bose::config::RunConfig::from_toml(block).unwrap();
    assert_eq!(cfg, dilute_bose::config::RunConfig::default());
}
