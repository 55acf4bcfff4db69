//! Parameter sweeps over `j0 / kappa` or `g0 / kappa`, and bound verification.

use std::fmt;

use multiphoton_core::bounds::{average_bounds, reflection_bound, transmission_bound, BoundReport, Regime};
use multiphoton_core::dynamics::{Propagator, Spectral};
use multiphoton_core::lattice::{build_coupling_matrix, swap_time, NetworkConfig};
use multiphoton_core::transport::{average_fidelities, fock_fidelities, haar_average_oracle, MAX_PHOTONS};
use multiphoton_core::Error as ModelError;
use rayon::prelude::*;

use crate::error::SweepError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VaryParam {
    J0OverKappa,
    G0OverKappa,
}

impl VaryParam {
    pub fn name(self) -> &'static str {
        match self {
            VaryParam::J0OverKappa => "j0_over_kappa",
            VaryParam::G0OverKappa => "g0_over_kappa",
        }
    }

    pub fn parse(s: &str) -> Result<Self, SweepError> {
        match s {
            "j0" | "j0_over_kappa" | "J0" => Ok(VaryParam::J0OverKappa),
            "g0" | "g0_over_kappa" | "G0" => Ok(VaryParam::G0OverKappa),
            other => Err(SweepError::Validation(format!(
                "unknown sweep parameter {other:?} (expected j0_over_kappa or g0_over_kappa)"
            ))),
        }
    }

    fn apply(self, base: &NetworkConfig, value: f64) -> NetworkConfig {
        match self {
            VaryParam::J0OverKappa => base.with_j0(value * base.kappa),
            VaryParam::G0OverKappa => base.with_g0(value * base.kappa),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeMode {
    /// Swap time of the current grid point's configuration.
    Tau,
    Explicit(f64),
}

/// Per-input quantity selectors. Bound and estimate columns switch to their
/// averaged forms for Haar-averaged inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quantity {
    Ft,
    Fr,
    SigmaT,
    SigmaR,
    EstT,
    EstR,
    BoundT,
    BoundR,
}

impl Quantity {
    pub const ALL: [Quantity; 8] = [
        Quantity::Ft,
        Quantity::Fr,
        Quantity::SigmaT,
        Quantity::SigmaR,
        Quantity::EstT,
        Quantity::EstR,
        Quantity::BoundT,
        Quantity::BoundR,
    ];

    pub fn parse(s: &str) -> Result<Self, SweepError> {
        Ok(match s {
            "F_t" => Quantity::Ft,
            "F_r" => Quantity::Fr,
            "sigma_t" => Quantity::SigmaT,
            "sigma_r" => Quantity::SigmaR,
            "est_t" => Quantity::EstT,
            "est_r" => Quantity::EstR,
            "bound_t" => Quantity::BoundT,
            "bound_r" => Quantity::BoundR,
            other => {
                return Err(SweepError::Validation(format!(
                    "unknown column {other:?}; expected one of F_t, F_r, sigma_t, sigma_r, est_t, est_r, bound_t, bound_r"
                )))
            }
        })
    }

    fn column_name(self, probe: Probe) -> String {
        let stem = match (self, probe) {
            (Quantity::Ft, _) => "F_t",
            (Quantity::Fr, _) => "F_r",
            (Quantity::SigmaT, _) => "sigma_t",
            (Quantity::SigmaR, _) => "sigma_r",
            (Quantity::EstT, Probe::Fock(_)) => "est_t",
            (Quantity::EstR, Probe::Fock(_)) => "est_r",
            (Quantity::BoundT, Probe::Fock(_)) => "bound_t",
            (Quantity::BoundR, Probe::Fock(_)) => "bound_r",
            (Quantity::EstT, Probe::Average(_)) => "avg_est_t",
            (Quantity::EstR, Probe::Average(_)) => "avg_est_r",
            (Quantity::BoundT, Probe::Average(_)) => "avg_bound_t",
            (Quantity::BoundR, Probe::Average(_)) => "avg_bound_r",
        };
        format!("{stem}[{probe}]")
    }

    fn needs_regime(self) -> Option<Regime> {
        match self {
            Quantity::EstT | Quantity::BoundT => Some(Regime::Transmit),
            Quantity::EstR | Quantity::BoundR => Some(Regime::Reflect),
            _ => None,
        }
    }
}

/// One input family: Fock state `|n>` or the Haar average over dimension `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Probe {
    Fock(usize),
    Average(usize),
}

impl fmt::Display for Probe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Probe::Fock(n) => write!(f, "n={n}"),
            Probe::Average(d) => write!(f, "d={d}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: NetworkConfig,
    pub vary: VaryParam,
    /// Values of the swept coupling in units of `kappa`.
    pub grid: Vec<f64>,
    pub fock: Vec<usize>,
    pub dims: Vec<usize>,
    pub time: TimeMode,
    pub quantities: Vec<Quantity>,
    /// Monte Carlo samples per averaged input; 0 disables the oracle columns.
    pub mc_samples: usize,
    pub seed: u64,
}

/// `points` uniformly spaced values from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (points - 1) as f64;
            (0..points)
                .map(|i| if i == points - 1 { stop } else { start + step * i as f64 })
                .collect()
        }
    }
}

impl SweepSpec {
    pub fn probes(&self) -> Vec<Probe> {
        self.fock
            .iter()
            .map(|&n| Probe::Fock(n))
            .chain(self.dims.iter().map(|&d| Probe::Average(d)))
            .collect()
    }

    pub fn validate(&self) -> Result<(), SweepError> {
        self.base
            .validate()
            .map_err(|e| SweepError::Validation(e.to_string()))?;
        if self.grid.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(SweepError::Validation("grid values must be finite and non-negative".into()));
        }
        if self.grid.len() < 2 || self.grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(SweepError::GridNotIncreasing(self.grid.clone()));
        }
        if self.fock.is_empty() && self.dims.is_empty() {
            return Err(SweepError::Validation("request at least one Fock n or dimension d".into()));
        }
        if self.quantities.is_empty() {
            return Err(SweepError::Validation("request at least one output column".into()));
        }
        if let Some(&n) = self.fock.iter().find(|&&n| n > MAX_PHOTONS) {
            return Err(SweepError::Validation(format!("photon number {n} exceeds {MAX_PHOTONS}")));
        }
        if self.dims.iter().any(|&d| d == 0 || d > MAX_PHOTONS + 1) {
            return Err(SweepError::Validation(format!("dimensions must lie in 1..={}", MAX_PHOTONS + 1)));
        }
        let wants_bounds = self.quantities.iter().any(|q| q.needs_regime().is_some());
        if wants_bounds && self.fock.contains(&0) {
            return Err(SweepError::Validation("bound columns need n >= 1".into()));
        }
        if let TimeMode::Explicit(t) = self.time {
            if !t.is_finite() {
                return Err(SweepError::Validation(format!("time {t} is not finite")));
            }
        }
        Ok(())
    }

    pub fn header(&self) -> Vec<String> {
        let mut header = Vec::new();
        for probe in self.probes() {
            for q in &self.quantities {
                header.push(q.column_name(probe));
            }
            if let (Probe::Average(_), true) = (probe, self.mc_samples > 0) {
                for stem in ["mc_F_t", "mc_F_r", "mc_se_t", "mc_se_r"] {
                    header.push(format!("{stem}[{probe}]"));
                }
            }
        }
        header
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub vary_value: f64,
    /// One value per header column.
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub vary: VaryParam,
    pub header: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r.values[idx]).collect())
    }
}

/// Everything computed at one grid point.
struct GridPoint {
    config: NetworkConfig,
    time: f64,
    propagator: Propagator,
}

fn model_err(vary: VaryParam, value: f64) -> impl Fn(ModelError) -> SweepError {
    move |source| SweepError::Model {
        vary: vary.name(),
        value,
        source,
    }
}

fn grid_point(spec: &SweepSpec, value: f64) -> Result<GridPoint, SweepError> {
    let config = spec.vary.apply(&spec.base, value);
    let err = model_err(spec.vary, value);
    let time = match spec.time {
        TimeMode::Tau => swap_time(&config).map_err(&err)?,
        TimeMode::Explicit(t) => t,
    };
    let a = build_coupling_matrix(&config).map_err(&err)?;
    let propagator = Spectral::new(&a).map_err(&err)?.propagator(time);
    Ok(GridPoint {
        config,
        time,
        propagator,
    })
}

fn bound_for(point: &GridPoint, probe: Probe, regime: Regime) -> Result<BoundReport, ModelError> {
    match (probe, regime) {
        (Probe::Fock(n), Regime::Transmit) => transmission_bound(&point.config, n, point.time),
        (Probe::Fock(n), Regime::Reflect) => reflection_bound(&point.config, n, point.time),
        (Probe::Average(d), regime) => average_bounds(&point.config, d, point.time, regime),
    }
}

/// Seed for the Monte Carlo oracle at one grid point and dimension (splitmix64 mix).
fn oracle_seed(seed: u64, grid_index: usize, d: usize) -> u64 {
    let mut x = seed ^ ((grid_index as u64) << 32 | d as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn evaluate_row(spec: &SweepSpec, grid_index: usize, value: f64) -> Result<SweepRow, SweepError> {
    let point = grid_point(spec, value)?;
    let err = model_err(spec.vary, value);
    let mut values = Vec::new();
    for probe in spec.probes() {
        let report = match probe {
            Probe::Fock(n) => fock_fidelities(&point.propagator, n),
            Probe::Average(d) => average_fidelities(&point.propagator, d).map_err(&err)?,
        };
        for &q in &spec.quantities {
            let v = match q {
                Quantity::Ft => report.f_t,
                Quantity::Fr => report.f_r,
                Quantity::SigmaT => report.sigma_t,
                Quantity::SigmaR => report.sigma_r,
                Quantity::EstT | Quantity::EstR | Quantity::BoundT | Quantity::BoundR => {
                    let regime = q.needs_regime().expect("bound quantity");
                    let bound = bound_for(&point, probe, regime).map_err(&err)?;
                    if matches!(q, Quantity::EstT | Quantity::EstR) {
                        bound.infidelity_estimate
                    } else {
                        bound.upper_bound
                    }
                }
            };
            values.push(v);
        }
        if let (Probe::Average(d), true) = (probe, spec.mc_samples > 0) {
            let mc = haar_average_oracle(
                &point.propagator,
                d,
                spec.mc_samples,
                oracle_seed(spec.seed, grid_index, d),
            )
            .map_err(&err)?;
            values.extend([mc.mean_f_t, mc.mean_f_r, mc.stderr_f_t, mc.stderr_f_r]);
        }
    }
    Ok(SweepRow {
        vary_value: value,
        values,
    })
}

fn with_workers<T: Send>(workers: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T, SweepError> {
    match workers {
        None => Ok(job()),
        Some(0) => Err(SweepError::Validation("--parallel needs at least one worker".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| SweepError::Validation(e.to_string()))?;
            Ok(pool.install(job))
        }
    }
}

/// Evaluates every grid point; rows come back in grid order. Any model error
/// aborts the whole sweep.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable, SweepError> {
    run_sweep_with(spec, None)
}

pub fn run_sweep_with(spec: &SweepSpec, workers: Option<usize>) -> Result<SweepTable, SweepError> {
    spec.validate()?;
    let rows = with_workers(workers, || {
        spec.grid
            .par_iter()
            .enumerate()
            .map(|(i, &v)| evaluate_row(spec, i, v))
            .collect::<Result<Vec<_>, _>>()
    })??;
    Ok(SweepTable {
        vary: spec.vary,
        header: spec.header(),
        rows,
    })
}

/// A grid point where the exact infidelity exceeded its bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub vary: VaryParam,
    pub vary_value: f64,
    pub probe: Probe,
    pub regime: Regime,
    pub infidelity: f64,
    pub bound: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let which = match self.regime {
            Regime::Transmit => "sigma_t",
            Regime::Reflect => "sigma_r",
        };
        write!(
            f,
            "{} = {}: {which}[{}] = {:.6e} > bound {:.6e} (ratio {:.6})",
            self.vary.name(),
            self.vary_value,
            self.probe,
            self.infidelity,
            self.bound,
            self.infidelity / self.bound
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: usize,
    /// Largest `infidelity / bound` seen.
    pub worst_ratio: f64,
    pub worst_at: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Multiplies every bound before comparison; 1.0 for real runs. Values
    /// below one exercise the failure path.
    pub bound_scale: f64,
    pub workers: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            bound_scale: 1.0,
            workers: None,
        }
    }
}

/// Checks exact infidelity against its bound at every grid point and input.
/// The regime follows the point's auxiliary coupling: transmit when `j0 = 0`,
/// reflect otherwise. Returns the first violation in grid order.
pub fn verify_bounds(spec: &SweepSpec, options: VerifyOptions) -> Result<VerifyReport, SweepError> {
    spec.validate()?;
    if spec.fock.contains(&0) {
        return Err(SweepError::Validation("bound verification needs n >= 1".into()));
    }
    let per_point = with_workers(options.workers, || {
        spec.grid
            .par_iter()
            .map(|&value| -> Result<Vec<(f64, Violation)>, SweepError> {
                let point = grid_point(spec, value)?;
                let err = model_err(spec.vary, value);
                let regime = if point.config.j0 == 0.0 {
                    Regime::Transmit
                } else {
                    Regime::Reflect
                };
                spec.probes()
                    .into_iter()
                    .map(|probe| {
                        let report = match probe {
                            Probe::Fock(n) => fock_fidelities(&point.propagator, n),
                            Probe::Average(d) => average_fidelities(&point.propagator, d).map_err(&err)?,
                        };
                        let infidelity = match regime {
                            Regime::Transmit => report.sigma_t,
                            Regime::Reflect => report.sigma_r,
                        };
                        let bound = bound_for(&point, probe, regime).map_err(&err)?.upper_bound * options.bound_scale;
                        let ratio = if bound > 0.0 {
                            infidelity / bound
                        } else if infidelity > 0.0 {
                            f64::INFINITY
                        } else {
                            0.0
                        };
                        Ok((
                            ratio,
                            Violation {
                                vary: spec.vary,
                                vary_value: value,
                                probe,
                                regime,
                                infidelity,
                                bound,
                            },
                        ))
                    })
                    .collect()
            })
            .collect::<Result<Vec<_>, _>>()
    })??;

    let mut report = VerifyReport {
        checks: 0,
        worst_ratio: 0.0,
        worst_at: spec.grid[0],
    };
    let mut first_violation = None;
    for (ratio, check) in per_point.into_iter().flatten() {
        report.checks += 1;
        if ratio > report.worst_ratio {
            report.worst_ratio = ratio;
            report.worst_at = check.vary_value;
        }
        if first_violation.is_none() && check.infidelity > check.bound {
            first_violation = Some(check);
        }
    }
    match first_violation {
        Some(v) => Err(SweepError::BoundViolated(Box::new(v))),
        None => Ok(report),
    }
}
