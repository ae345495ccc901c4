use serde::Deserialize;
use std::path::Path;

use crate::error::{Error, Result};
use crate::fields::{ExpansionAmplitudes, Family};
use crate::material::{validate_config, BimaterialConfig, CoupleStressMaterial, ProblemKind};

#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub r_min: f64,
    pub r_max: f64,
    pub n_r: usize,
    pub n_theta: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Self { r_min: 0.1, r_max: 1.0, n_r: 10, n_theta: 13 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
pub enum SweepParameter {
    #[serde(rename = "G+")]
    GPlus,
    #[serde(rename = "G-")]
    GMinus,
    #[serde(rename = "l+")]
    LPlus,
    #[serde(rename = "l-")]
    LMinus,
    #[serde(rename = "eta+")]
    EtaPlus,
    #[serde(rename = "eta-")]
    EtaMinus,
    /// `η₊ = η₋` together.
    #[serde(rename = "eta")]
    Eta,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::GPlus => "G+",
            SweepParameter::GMinus => "G-",
            SweepParameter::LPlus => "l+",
            SweepParameter::LMinus => "l-",
            SweepParameter::EtaPlus => "eta+",
            SweepParameter::EtaMinus => "eta-",
            SweepParameter::Eta => "eta",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub parameter: SweepParameter,
    pub from: f64,
    pub to: f64,
    pub steps: usize,
    /// Hold `a/b = G₊l₊²/(G₋l₋²)` at each listed value by rescaling `G₊`.
    #[serde(default)]
    pub ab_ratios: Vec<f64>,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        match self.steps {
            0 => Vec::new(),
            1 => vec![self.from],
            n => (0..n).map(|i| self.from + (self.to - self.from) * i as f64 / (n - 1) as f64).collect(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRunConfig {
    plus: CoupleStressMaterial,
    minus: CoupleStressMaterial,
    problem: ProblemKind,
    #[serde(default)]
    amplitudes: Option<ExpansionAmplitudes>,
    #[serde(default)]
    edge_condition: bool,
    #[serde(default)]
    order: Option<f64>,
    #[serde(default)]
    grid: Option<Grid>,
    #[serde(default)]
    radii: Option<Vec<f64>>,
    #[serde(default)]
    window: Option<(f64, f64)>,
    #[serde(default)]
    sweep: Option<Sweep>,
    #[serde(default)]
    strict_paper: Option<bool>,
    #[serde(default)]
    kappa_perturbation: f64,
}

/// Everything a command may read.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub config: BimaterialConfig,
    pub amplitudes: ExpansionAmplitudes,
    /// Impose the crack-edge condition with `Q = amplitudes.line_load`.
    pub edge_condition: bool,
    /// Cut the expansion at `Re λ ≤ order`.
    pub order: Option<f64>,
    pub grid: Grid,
    pub radii: Option<Vec<f64>>,
    pub window: Option<(f64, f64)>,
    pub sweep: Option<Sweep>,
    pub strict_paper: Option<bool>,
    /// Negative-control hook for the determinant suite.
    pub kappa_perturbation: f64,
    /// No configuration file was given.
    pub is_default: bool,
}

fn default_amplitudes(cfg: &BimaterialConfig) -> ExpansionAmplitudes {
    Family::for_config(cfg).map(ExpansionAmplitudes::default_for).unwrap_or_default()
}

impl RunConfig {
    pub fn from_config(config: BimaterialConfig) -> Self {
        Self {
            amplitudes: default_amplitudes(&config),
            config,
            edge_condition: false,
            order: None,
            grid: Grid::default(),
            radii: None,
            window: None,
            sweep: None,
            strict_paper: None,
            kappa_perturbation: 0.0,
            is_default: false,
        }
    }

    pub fn default_run() -> Self {
        Self { is_default: true, ..Self::from_config(BimaterialConfig::homogeneous_unit()) }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RawRunConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let config = validate_config(raw.plus, raw.minus, raw.problem)?;
        let grid = raw.grid.unwrap_or_default();
        if !(grid.r_min > 0.0) || !(grid.r_max >= grid.r_min) || grid.n_r == 0 || grid.n_theta == 0 {
            return Err(Error::Config(format!("grid needs 0 < r_min <= r_max and n_r, n_theta >= 1, got {grid:?}")));
        }
        Ok(Self {
            amplitudes: raw.amplitudes.unwrap_or_else(|| default_amplitudes(&config)),
            config,
            edge_condition: raw.edge_condition,
            order: raw.order,
            grid,
            radii: raw.radii,
            window: raw.window,
            sweep: raw.sweep,
            strict_paper: raw.strict_paper,
            kappa_perturbation: raw.kappa_perturbation,
            is_default: false,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}
