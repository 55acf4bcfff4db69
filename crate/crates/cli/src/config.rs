//! Flat TOML run configuration. Every key is optional; command-line flags
//! override file values and missing values fall back to defaults.

use std::path::Path;

use multiphoton_core::lattice::NetworkConfig;
use serde::Deserialize;

use crate::error::SweepError;
use crate::sweep::{linspace, Quantity, SweepSpec, TimeMode, VaryParam};

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum TimeSetting {
    Named(TimeName),
    Explicit(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeName {
    Tau,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(rename = "N")]
    pub chain_len: Option<usize>,
    #[serde(rename = "m")]
    pub tap_site: Option<usize>,
    pub kappa: Option<f64>,
    pub g0: Option<f64>,
    pub j0: Option<f64>,
    pub time: Option<TimeSetting>,
    pub n_list: Option<Vec<usize>>,
    pub d_list: Option<Vec<usize>>,
    pub vary: Option<String>,
    pub grid_start: Option<f64>,
    pub grid_stop: Option<f64>,
    pub grid_points: Option<usize>,
    pub mc_samples: Option<usize>,
    pub seed: Option<u64>,
    /// Column selectors such as `["F_t", "sigma_t", "bound_t"]`.
    pub columns: Option<Vec<String>>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, SweepError> {
        toml::from_str(text).map_err(|e| SweepError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, SweepError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| SweepError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Network parameters. `N`, `m` and `g0` are required.
    pub fn network(&self) -> Result<NetworkConfig, SweepError> {
        let missing = |key: &str| SweepError::Validation(format!("missing required key `{key}`"));
        NetworkConfig::new(
            self.chain_len.ok_or_else(|| missing("N"))?,
            self.tap_site.ok_or_else(|| missing("m"))?,
            self.kappa.unwrap_or(1.0),
            self.g0.ok_or_else(|| missing("g0"))?,
            self.j0.unwrap_or(0.0),
        )
        .map_err(|e| SweepError::Validation(e.to_string()))
    }

    pub fn time_mode(&self) -> TimeMode {
        match self.time {
            None | Some(TimeSetting::Named(TimeName::Tau)) => TimeMode::Tau,
            Some(TimeSetting::Explicit(t)) => TimeMode::Explicit(t),
        }
    }

    /// A full sweep. `g0` may be omitted when it is the swept parameter.
    pub fn sweep_spec(&self) -> Result<SweepSpec, SweepError> {
        let vary = VaryParam::parse(
            self.vary
                .as_deref()
                .ok_or_else(|| SweepError::Validation("missing required key `vary`".into()))?,
        )?;
        let mut cfg = self.clone();
        if vary == VaryParam::G0OverKappa && cfg.g0.is_none() {
            cfg.g0 = Some(1.0);
        }
        let base = cfg.network()?;
        let start = self.grid_start.unwrap_or(0.0);
        let stop = self
            .grid_stop
            .ok_or_else(|| SweepError::Validation("missing required key `grid_stop`".into()))?;
        let points = self.grid_points.unwrap_or(101);
        let fock = self.n_list.clone().unwrap_or_default();
        let dims = self.d_list.clone().unwrap_or_default();
        let quantities = match &self.columns {
            Some(cols) => cols.iter().map(|c| Quantity::parse(c)).collect::<Result<Vec<_>, _>>()?,
            None => vec![Quantity::Ft, Quantity::Fr, Quantity::SigmaT, Quantity::BoundT],
        };
        Ok(SweepSpec {
            base,
            vary,
            grid: linspace(start, stop, points),
            fock,
            dims,
            time: self.time_mode(),
            quantities,
            mc_samples: self.mc_samples.unwrap_or(0),
            seed: self.seed.unwrap_or(0),
        })
    }
}
