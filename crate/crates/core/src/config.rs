//! Run configuration (TOML) with full defaulting.

use crate::error::{Error, Result};
use crate::scattering::RadialPotential;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Scattering,
    Coefficients,
    Sums,
    Position,
    Asymptotics,
    Fock,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Scattering,
        Suite::Coefficients,
        Suite::Sums,
        Suite::Position,
        Suite::Asymptotics,
        Suite::Fock,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Scattering => "scattering",
            Suite::Coefficients => "coefficients",
            Suite::Sums => "sums",
            Suite::Position => "position",
            Suite::Asymptotics => "asymptotics",
            Suite::Fock => "fock",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    SoftSphere { v0: f64, radius: f64 },
    Table { path: PathBuf },
}

impl Default for PotentialSpec {
    fn default() -> Self {
        PotentialSpec::SoftSphere { v0: 2.0, radius: 1.0 }
    }
}

impl PotentialSpec {
    pub fn build(&self, base: &Path) -> Result<RadialPotential> {
        match self {
            PotentialSpec::SoftSphere { v0, radius } => RadialPotential::soft_sphere(*v0, *radius)
                .map_err(|e| Error::Config(format!("potential: {e}"))),
            PotentialSpec::Table { path } => {
                let p = if path.is_absolute() { path.clone() } else { base.join(path) };
                RadialPotential::from_csv(&p).map_err(|e| Error::Config(format!("potential.path {}: {e}", p.display())))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grids {
    /// Uniform radial steps for the scattering solver.
    pub radial_steps: usize,
    /// FFT grid size per axis.
    pub fft_size: usize,
    /// Nyquist-shell ratio accepted by the FFT.
    pub aliasing_tolerance: f64,
    /// Rows written per decay profile.
    pub profile_rows: usize,
}

impl Default for Grids {
    fn default() -> Self {
        Self {
            radial_steps: 4000,
            fft_size: 256,
            aliasing_tolerance: crate::position_space::DEFAULT_ALIASING_TOLERANCE,
            profile_rows: 129,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Truncation {
    /// Inner `q` sum of the discrete scattering residual, in units of `L`.
    pub residual: f64,
    /// `η` correction sum, in units of `L`.
    pub eta_correction: f64,
    /// Cubic-kernel norm, in units of `p_η`.
    pub cubic: f64,
}

impl Default for Truncation {
    fn default() -> Self {
        Self {
            residual: 12.0,
            eta_correction: 24.0,
            cubic: 12.0,
        }
    }
}

/// `N` grids of the regressions that need a specific range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Regressions {
    pub lhy: Vec<f64>,
    pub wu: Vec<f64>,
    pub residual: Vec<f64>,
    pub eta_correction: Vec<f64>,
}

impl Default for Regressions {
    fn default() -> Self {
        Self {
            lhy: vec![1e5, 1e6, 1e7, 1e8],
            wu: vec![1e4, 1e5, 1e6, 1e7],
            residual: vec![1e3, 1e4, 1e5],
            eta_correction: vec![1e3, 1e4, 1e5],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FockConfig {
    /// Toy particle number for the oracle kernels.
    pub n: f64,
    pub kappa: f64,
    /// Integer shells `|n|²` of the mode list.
    pub shells: Vec<usize>,
    pub n_max: u8,
    pub total_cap: u32,
    pub budget: usize,
}

impl Default for FockConfig {
    fn default() -> Self {
        Self {
            n: 50.0,
            kappa: 0.6,
            shells: vec![0, 1, 2],
            n_max: 6,
            total_cap: 6,
            budget: crate::fock_oracle::DEFAULT_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub kappa: f64,
    pub n_list: Vec<f64>,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub tolerance_scale: f64,
    pub suites: Vec<Suite>,
    pub potential: PotentialSpec,
    pub grids: Grids,
    pub truncation: Truncation,
    pub regressions: Regressions,
    pub fock: FockConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            kappa: 0.6,
            n_list: vec![1e4, 1e5, 1e6],
            out_dir: PathBuf::from("out"),
            seed: 20240611,
            tolerance_scale: 1.0,
            suites: Suite::ALL.to_vec(),
            potential: PotentialSpec::default(),
            grids: Grids::default(),
            truncation: Truncation::default(),
            regressions: Regressions::default(),
            fock: FockConfig::default(),
        }
    }
}

fn strictly_increasing(name: &str, v: &[f64], min_len: usize) -> Result<()> {
    if v.len() < min_len {
        return Err(Error::Config(format!("{name}: need at least {min_len} entries, got {}", v.len())));
    }
    if v.iter().any(|x| !(x.is_finite() && *x > 1.0)) {
        return Err(Error::Config(format!("{name}: entries must be finite and > 1")));
    }
    if v.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Config(format!("{name}: must be strictly increasing")));
    }
    Ok(())
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let p = path.as_ref();
        let text = std::fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.5..2.0 / 3.0).contains(&self.kappa) {
            return Err(Error::Config(format!("kappa: {} outside [1/2, 2/3)", self.kappa)));
        }
        strictly_increasing("n_list", &self.n_list, 1)?;
        strictly_increasing("regressions.lhy", &self.regressions.lhy, 2)?;
        strictly_increasing("regressions.wu", &self.regressions.wu, 4)?;
        strictly_increasing("regressions.residual", &self.regressions.residual, 2)?;
        strictly_increasing("regressions.eta_correction", &self.regressions.eta_correction, 2)?;
        if !(self.tolerance_scale > 0.0 && self.tolerance_scale.is_finite()) {
            return Err(Error::Config("tolerance_scale: must be positive".into()));
        }
        if !(self.grids.aliasing_tolerance > 0.0) {
            return Err(Error::Config("grids.aliasing_tolerance: must be positive".into()));
        }
        if !self.grids.fft_size.is_power_of_two() || self.grids.fft_size < 8 {
            return Err(Error::Config(format!(
                "grids.fft_size: {} is not a power of two >= 8",
                self.grids.fft_size
            )));
        }
        if self.grids.radial_steps < 10 {
            return Err(Error::Config("grids.radial_steps: need at least 10".into()));
        }
        for (name, v) in [
            ("truncation.residual", self.truncation.residual),
            ("truncation.eta_correction", self.truncation.eta_correction),
            ("truncation.cubic", self.truncation.cubic),
        ] {
            if !(v > 1.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name}: must exceed 1")));
            }
        }
        match &self.potential {
            PotentialSpec::SoftSphere { v0, radius } => {
                if !(v0.is_finite() && *v0 >= 0.0) {
                    return Err(Error::Config(format!("potential.v0: {v0} must be finite and >= 0")));
                }
                if !(radius.is_finite() && *radius > 0.0) {
                    return Err(Error::Config(format!("potential.radius: {radius} must be positive")));
                }
            }
            PotentialSpec::Table { path } => {
                if path.as_os_str().is_empty() {
                    return Err(Error::Config("potential.path: empty".into()));
                }
            }
        }
        if !(self.fock.n > 1.0 && self.fock.kappa > 0.0 && self.fock.kappa < 2.0 / 3.0) {
            return Err(Error::Config("fock: need n > 1 and kappa in (0, 2/3)".into()));
        }
        if self.fock.n_max == 0 || self.fock.total_cap == 0 {
            return Err(Error::Config("fock: caps must be positive".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let c = RunConfig::default();
        assert_eq!(RunConfig::from_toml(&c.to_toml()).unwrap(), c);
        assert_eq!(RunConfig::from_toml("").unwrap(), c);
    }

    #[test]
    fn malformed_potential_names_field() {
        let e = RunConfig::from_toml("[potential]\nkind = \"soft_sphere\"\nv0 = 2.0\n").unwrap_err();
        assert!(e.to_string().contains("radius"), "{e}");
        let e = RunConfig::from_toml("[potential]\nkind = \"soft_sphere\"\nv0 = -1.0\nradius = 1.0\n").unwrap_err();
        assert!(e.to_string().contains("potential.v0"), "{e}");
    }

    #[test]
    fn n_list_must_increase() {
        assert!(RunConfig::from_toml("n_list = [1e5, 1e4]").is_err());
        assert!(RunConfig::from_toml("kappa = 0.7").is_err());
        let e = RunConfig::from_toml("[regressions]\nwu = [1e4, 1e5]").unwrap_err();
        assert!(e.to_string().contains("regressions.wu"), "{e}");
    }
}
