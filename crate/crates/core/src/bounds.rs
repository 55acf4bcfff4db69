//! Second-order leakage out of the zero-mode channel and the resulting
//! infidelity estimates and upper bounds.
//!
//! Transmit regime (`j0 = 0`): the off-resonant chain modes `k != z` pull
//! amplitude out of the boundary-to-boundary swap,
//!
//! ```text
//! Delta_t = sum_{k<z} (g_k / eps_k)^2 [1 - (-1)^(k+z-1) cos(eps_k t)]
//! ```
//!
//! Reflect regime (odd `m`, `g0 << j0`): the boundaries stay detuned from the
//! split zero mode, `Delta_r = g_z^2 / (2 J_z^2) [1 - cos(J_z t)]`.
//!
//! Fock inputs see `sigma ~ 4 n Delta`; Haar-averaged inputs of dimension `d`
//! see `sigma ~ 2 d (d - 1) / (d + 1) Delta`. Each bound replaces the
//! oscillating bracket by its maximum.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{chain_spectrum, mode_couplings, NetworkConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Transmit,
    Reflect,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundInput {
    Fock(usize),
    Average(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    /// `Delta_t` or `Delta_r`.
    pub delta: f64,
    pub infidelity_estimate: f64,
    pub upper_bound: f64,
    pub regime: Regime,
    pub input: BoundInput,
}

/// `sum_{k<z} g_k^2 / eps_k^2`.
pub fn leakage_sum(config: &NetworkConfig) -> Result<f64> {
    let couplings = mode_couplings(config)?;
    let spectrum = chain_spectrum(config.chain_len, config.kappa)?;
    Ok((1..couplings.z)
        .map(|k| (couplings.g[k - 1] / spectrum.energy(k)).powi(2))
        .sum())
}

pub fn delta_t(config: &NetworkConfig, t: f64) -> Result<f64> {
    let couplings = mode_couplings(config)?;
    let spectrum = chain_spectrum(config.chain_len, config.kappa)?;
    let z = couplings.z;
    Ok((1..z)
        .map(|k| {
            let eps = spectrum.energy(k);
            let sign = if (k + z - 1) % 2 == 0 { 1.0 } else { -1.0 };
            (couplings.g[k - 1] / eps).powi(2) * (1.0 - sign * (eps * t).cos())
        })
        .sum())
}

/// Zero-mode couplings `(g_z, J_z)` for the reflect regime; `J_z` must be nonzero.
fn reflect_couplings(config: &NetworkConfig) -> Result<(f64, f64)> {
    let couplings = mode_couplings(config)?;
    let j_z = couplings.j_z();
    if j_z == 0.0 {
        return Err(Error::DegenerateTap {
            tap_site: config.tap_site,
            j0: config.j0,
        });
    }
    Ok((couplings.g_z(), j_z))
}

/// Only `J_z^2` and `cos(J_z t)` enter, so the sign of `J_z` is irrelevant.
pub fn delta_r(config: &NetworkConfig, t: f64) -> Result<f64> {
    let (g_z, j_z) = reflect_couplings(config)?;
    Ok(g_z * g_z / (2.0 * j_z * j_z) * (1.0 - (j_z.abs() * t).cos()))
}

fn photon_count(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidState("bounds need at least one photon".into()));
    }
    Ok(n as f64)
}

pub fn transmission_bound(config: &NetworkConfig, n: usize, t: f64) -> Result<BoundReport> {
    let n_f = photon_count(n)?;
    let delta = delta_t(config, t)?;
    Ok(BoundReport {
        delta,
        infidelity_estimate: 4.0 * n_f * delta,
        upper_bound: 8.0 * n_f * leakage_sum(config)?,
        regime: Regime::Transmit,
        input: BoundInput::Fock(n),
    })
}

pub fn reflection_bound(config: &NetworkConfig, n: usize, t: f64) -> Result<BoundReport> {
    let n_f = photon_count(n)?;
    let delta = delta_r(config, t)?;
    let (g_z, j_z) = reflect_couplings(config)?;
    Ok(BoundReport {
        delta,
        infidelity_estimate: 4.0 * n_f * delta,
        upper_bound: 4.0 * n_f * (g_z / j_z).powi(2),
        regime: Regime::Reflect,
        input: BoundInput::Fock(n),
    })
}

/// Estimate and bound for the Haar-averaged infidelity over `d`-dimensional inputs.
pub fn average_bounds(config: &NetworkConfig, d: usize, t: f64, regime: Regime) -> Result<BoundReport> {
    if d == 0 {
        return Err(Error::InvalidState("dimension d must be at least 1".into()));
    }
    let d_f = d as f64;
    let factor = 2.0 * d_f * (d_f - 1.0) / (d_f + 1.0);
    let (delta, upper_bound) = match regime {
        Regime::Transmit => (delta_t(config, t)?, 2.0 * factor * leakage_sum(config)?),
        Regime::Reflect => {
            let (g_z, j_z) = reflect_couplings(config)?;
            (delta_r(config, t)?, factor * (g_z / j_z).powi(2))
        }
    };
    Ok(BoundReport {
        delta,
        infidelity_estimate: factor * delta,
        upper_bound,
        regime,
        input: BoundInput::Average(d),
    })
}

/// `M_{0,N+1} ~ (-1)^z (1 - 2 Delta_t)`.
pub fn perturbative_transmit_element(config: &NetworkConfig, t: f64) -> Result<Complex64> {
    let z = config.zero_mode()?;
    let sign = if z % 2 == 0 { 1.0 } else { -1.0 };
    Ok(Complex64::new(sign * (1.0 - 2.0 * delta_t(config, t)?), 0.0))
}

/// `M_{0,0} ~ 1 - 2 Delta_r`.
pub fn perturbative_reflect_element(config: &NetworkConfig, t: f64) -> Result<Complex64> {
    Ok(Complex64::new(1.0 - 2.0 * delta_r(config, t)?, 0.0))
}

/// First-order-corrected `(M_{0,N+1}, M_{0,0})`. Each side is computed only
/// when its regime is well defined for `config`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerturbativeElements {
    pub transmit: Result<Complex64>,
    pub reflect: Result<Complex64>,
}

pub fn perturbative_matrix_elements(config: &NetworkConfig, t: f64) -> Result<PerturbativeElements> {
    config.zero_mode()?;
    Ok(PerturbativeElements {
        transmit: perturbative_transmit_element(config, t),
        reflect: perturbative_reflect_element(config, t),
    })
}
