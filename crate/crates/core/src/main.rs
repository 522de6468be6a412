use clap::{Parser, Subcommand};
use dilute_bose::cli::{self, EXIT_CONFIG};
use dilute_bose::config::{RunConfig, Suite};
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "dilute-bose", version, about = "Verification runs for the dilute Bose gas trial state")]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// TOML configuration; every field has a default.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Comma-separated particle numbers, e.g. 1e4,1e5,1e6.
    #[arg(long, global = true, value_delimiter = ',')]
    n_list: Option<Vec<f64>>,
    #[arg(long, global = true)]
    kappa: Option<f64>,
    /// Multiplies every assertion tolerance.
    #[arg(long, global = true)]
    tolerance_scale: Option<f64>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    Scattering,
    Coeffs,
    Sums,
    Position,
    Energy,
    Fock,
    /// Suites listed in the configuration (all by default).
    All,
}

fn main() {
    let args = Args::parse();
    let cwd = PathBuf::from(".");
    let mut cfg = match &args.config {
        Some(p) => match RunConfig::load(p) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("{e}");
                std::process::exit(EXIT_CONFIG);
            }
        },
        None => RunConfig::default(),
    };
    let base = args
        .config
        .as_ref()
        .and_then(|p| p.parent().map(|d| d.to_path_buf()))
        .unwrap_or(cwd);
    if let Some(o) = args.out {
        cfg.out_dir = std::path::absolute(o).unwrap_or_default();
    }
    if let Some(n) = args.n_list {
        cfg.n_list = n;
    }
    if let Some(k) = args.kappa {
        cfg.kappa = k;
    }
    if let Some(t) = args.tolerance_scale {
        cfg.tolerance_scale = t;
    }
    let suite = match args.command {
        Command::Scattering => Some(Suite::Scattering),
        Command::Coeffs => Some(Suite::Coefficients),
        Command::Sums => Some(Suite::Sums),
        Command::Position => Some(Suite::Position),
        Command::Energy => Some(Suite::Asymptotics),
        Command::Fock => Some(Suite::Fock),
        Command::All => None,
    };
    if let Some(s) = suite {
        cfg.suites = vec![s];
    }
    match cli::run(&cfg, &base, true) {
        Ok(summary) => {
            for a in summary.failures() {
                eprintln!("failed: [{}] {} ({})", a.suite, a.name, a.detail);
            }
            std::process::exit(summary.exit_code());
        }
        Err(e @ dilute_bose::Error::Config(_)) => {
            eprintln!("{e}");
            std::process::exit(EXIT_CONFIG);
        }
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(cli::EXIT_FAIL);
        }
    }
}
