//! Run configuration: defaults, then `SLICEQUAT_SEED`, then a JSON config
//! file, then command-line flags.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use slicequat::aut::AutMethod;
use slicequat::deform::FamilyParams;
use slicequat::suite::GridRow;
use slicequat::{AutConfig, HopfParams, Quaternion, Tolerance};

pub const SEED_ENV: &str = "SLICEQUAT_SEED";
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Auto,
    Direct,
    Linearized,
}

impl MethodArg {
    pub fn resolve(self, params: &HopfParams) -> AutMethod {
        match self {
            MethodArg::Auto => AutMethod::auto(params),
            MethodArg::Direct => AutMethod::Direct,
            MethodArg::Linearized => AutMethod::Linearized,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamsPatch {
    pub p: Option<u32>,
    pub alpha: Option<Quaternion>,
    pub beta: Option<Quaternion>,
    pub lambda: Option<Quaternion>,
}

impl ParamsPatch {
    pub fn or(self, base: ParamsPatch) -> ParamsPatch {
        ParamsPatch {
            p: self.p.or(base.p),
            alpha: self.alpha.or(base.alpha),
            beta: self.beta.or(base.beta),
            lambda: self.lambda.or(base.lambda),
        }
    }

    /// Unset fields fall back to the case-B example `(2, 1/4, 1/2, j)`.
    pub fn finish(self) -> HopfParams {
        HopfParams::new(
            self.p.unwrap_or(2),
            self.alpha.unwrap_or(Quaternion::real(0.25)),
            self.beta.unwrap_or(Quaternion::real(0.5)),
            self.lambda.unwrap_or(Quaternion::J),
        )
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub seeds: Option<Vec<u64>>,
    pub degree: Option<u32>,
    pub samples: Option<usize>,
    pub atol: Option<f64>,
    pub rtol: Option<f64>,
    pub sv_tol: Option<f64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub method: Option<MethodArg>,
    pub params: ParamsPatch,
    pub family: Option<FamilyParams>,
    pub lambdas: Option<Vec<Quaternion>>,
    pub grid: Option<Vec<GridRow>>,
}

impl ConfigFile {
    pub fn load(path: Option<&Path>) -> Result<Self, String> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Common {
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub aut: AutConfig,
}

#[derive(Debug, Clone, Default, clap::Args)]
pub struct CommonArgs {
    /// JSON config file; flags override its values
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// RNG seed [default: $SLICEQUAT_SEED, else 42]
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true)]
    pub atol: Option<f64>,

    #[arg(long, global = true)]
    pub rtol: Option<f64>,

    /// Relative singular-value cutoff
    #[arg(long, global = true)]
    pub sv_tol: Option<f64>,

    /// Series truncation degree [default: max(2, p) + 1]
    #[arg(long, global = true)]
    pub degree: Option<u32>,

    /// Sample points for system assembly [default: 4 × unknowns]
    #[arg(long, global = true)]
    pub samples: Option<usize>,
}

impl CommonArgs {
    pub fn resolve(&self, file: &ConfigFile) -> Result<Common, String> {
        let env_seed = match std::env::var(SEED_ENV) {
            Ok(s) => Some(s.trim().parse::<u64>().map_err(|e| format!("{SEED_ENV}={s}: {e}"))?),
            Err(_) => None,
        };
        let seed = self.seed.or(file.seed).or(env_seed).unwrap_or(DEFAULT_SEED);
        let d = Tolerance::default();
        let tol = Tolerance::new(
            self.atol.or(file.atol).unwrap_or(d.atol),
            self.rtol.or(file.rtol).unwrap_or(d.rtol),
        );
        let aut = AutConfig {
            degree: self.degree.or(file.degree),
            samples: self.samples.or(file.samples),
            seed,
            sv_tol: self.sv_tol.or(file.sv_tol).unwrap_or(AutConfig::default().sv_tol),
            tol,
        };
        Ok(Common {
            seed,
            format: self.format.or(file.format).unwrap_or(Format::Json),
            out: self.out.clone().or_else(|| file.out.clone()),
            aut,
        })
    }
}

/// `"0.5"` is the real quaternion 0.5; `"w,x,y,z"` gives all four components.
pub fn parse_quaternion(s: &str) -> Result<Quaternion, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [r] => Ok(Quaternion::real(r)),
        [w, x, y, z] => Ok(Quaternion::new(w, x, y, z)),
        _ => Err(format!("expected 1 or 4 comma-separated numbers, got {}", parts.len())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quaternion_args() {
        assert_eq!(parse_quaternion("0.5").unwrap(), Quaternion::real(0.5));
        assert_eq!(parse_quaternion("0,0,1,0").unwrap(), Quaternion::J);
        assert_eq!(parse_quaternion("-0.5, 0, 0, 1").unwrap(), Quaternion::new(-0.5, 0.0, 0.0, 1.0));
        assert!(parse_quaternion("1,2").is_err());
        assert!(parse_quaternion("x").is_err());
    }

    #[test]
    fn patch_layers() {
        let file = ParamsPatch { p: Some(1), alpha: Some(Quaternion::real(0.5)), ..Default::default() };
        let flags = ParamsPatch { alpha: Some(Quaternion::I * 0.5), ..Default::default() };
        let p = flags.or(file).finish();
        assert_eq!((p.p, p.alpha, p.lambda), (1, Quaternion::I * 0.5, Quaternion::J));
    }
}
