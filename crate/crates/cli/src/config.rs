use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use dilute_core::potentials::{RadialPotential, Shell, TabulatedProfile, DEFAULT_RESAMPLE_SHELLS};
use serde::Deserialize;

/// Whole config file; each subcommand reads its own block.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub potential: Option<PotentialConfig>,
    pub scatter: Option<ScatterConfig>,
    pub regularize: Option<RegularizeConfig>,
    pub fbog: Option<FbogConfig>,
    pub fthermo: Option<FthermoConfig>,
    pub assemble: Option<AssembleConfig>,
    pub symcheck: Option<SymcheckConfig>,
    pub regime: Option<RegimeConfig>,
    #[serde(skip)]
    pub base_dir: PathBuf,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum PotentialConfig {
    Hardcore {
        radius: f64,
    },
    Squarewell {
        height: f64,
        radius: f64,
    },
    Piecewise {
        #[serde(default)]
        core_radius: f64,
        /// `[r_lo, r_hi, value]` triples.
        shells: Vec<[f64; 3]>,
    },
    Tabulated {
        file: PathBuf,
        resample: Option<usize>,
    },
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatterConfig {
    pub r_out: Option<f64>,
    pub grid: Option<usize>,
    /// Momenta for the `ĝ` table.
    #[serde(default)]
    pub momenta: Vec<f64>,
    /// Square-well sweep at radius `sweep_radius` over these `γ = √(K/2)R`.
    #[serde(default)]
    pub sweep_gamma: Vec<f64>,
    pub sweep_radius: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegularizeConfig {
    pub rho: f64,
    pub eta: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FbogConfig {
    pub a: f64,
    pub rho: f64,
    pub temperature: f64,
    /// Box lengths; alternatively `ell_sqrt_t` gives `ℓ√T`.
    #[serde(default)]
    pub ell: Vec<f64>,
    #[serde(default)]
    pub ell_sqrt_t: Vec<f64>,
    #[serde(default)]
    pub mu: bool,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FthermoConfig {
    pub a: f64,
    pub rho_a3: Vec<f64>,
    pub t_over_rho_a: Vec<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssembleConfig {
    /// Side of the large box; `L/ℓ` must be an integer.
    pub big_l: f64,
    /// Total particle number; must split evenly over the `(L/ℓ)³` boxes.
    pub n: u64,
    pub ell: f64,
    pub a: f64,
    pub temperature: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymcheckConfig {
    pub ell: f64,
    pub radius: f64,
    #[serde(default = "one")]
    pub amplitude: f64,
    #[serde(default = "nine")]
    pub n2_max: u32,
    pub nodes: Option<usize>,
}

fn one() -> f64 {
    1.0
}

fn nine() -> u32 {
    9
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegimeConfig {
    pub a: f64,
    pub rho_a3: Vec<f64>,
    pub eta: Vec<f64>,
    /// `ν/η` for every point.
    pub nu_over_eta: f64,
    pub t_over_rho_a: f64,
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: RunConfig =
            toml::from_str(&text).map_err(|e| anyhow!("config {}: {e}", path.display()))?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn block<'a, T>(&self, block: &'a Option<T>, name: &str) -> anyhow::Result<&'a T> {
        block.as_ref().ok_or_else(|| anyhow!("missing [{name}] block in config"))
    }

    pub fn potential(&self, tol: &Overrides) -> anyhow::Result<RadialPotential> {
        let p = self.block(&self.potential, "potential")?;
        let v = match p {
            PotentialConfig::Hardcore { radius } => RadialPotential::hard_core(*radius)?,
            PotentialConfig::Squarewell { height, radius } => RadialPotential::square_well(*height, *radius)?,
            PotentialConfig::Piecewise { core_radius, shells } => RadialPotential::piecewise(
                *core_radius,
                shells.iter().map(|s| Shell::new(s[0], s[1], s[2])).collect(),
            )?,
            PotentialConfig::Tabulated { file, resample } => {
                let path = self.base_dir.join(file);
                let text =
                    fs::read_to_string(&path).with_context(|| format!("reading profile {}", path.display()))?;
                let n = tol.usize("resample")?.or(*resample).unwrap_or(DEFAULT_RESAMPLE_SHELLS);
                TabulatedProfile::parse(&text)?.resample(n)?
            }
        };
        Ok(v)
    }
}

/// `--tol key=value` overrides.
#[derive(Debug, Default)]
pub struct Overrides(BTreeMap<String, f64>);

pub const OVERRIDE_KEYS: [&str; 4] = ["budget", "grid", "nodes", "resample"];

impl Overrides {
    pub fn parse(items: &[String]) -> anyhow::Result<Self> {
        let mut map = BTreeMap::new();
        for item in items {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| anyhow!("--tol expects key=value, got '{item}'"))?;
            if !OVERRIDE_KEYS.contains(&k) {
                bail!("unknown --tol key '{k}' (known: {})", OVERRIDE_KEYS.join(", "));
            }
            let v: f64 = v.parse().map_err(|_| anyhow!("--tol {k}: '{v}' is not a number"))?;
            map.insert(k.to_string(), v);
        }
        Ok(Self(map))
    }

    pub fn usize(&self, key: &str) -> anyhow::Result<Option<usize>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(&v) if v >= 0.0 && v.fract() == 0.0 => Ok(Some(v as usize)),
            Some(v) => bail!("--tol {key} must be a non-negative integer, got {v}"),
        }
    }

    pub fn budget(&self) -> anyhow::Result<u64> {
        Ok(self
            .usize("budget")?
            .map_or(dilute_core::spectral::DEFAULT_BUDGET, |b| b as u64))
    }

    pub fn describe(&self) -> String {
        self.0.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
    }
}
