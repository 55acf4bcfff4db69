//! Swap-time demonstration: exact fidelities at tau with and without the
//! auxiliary coupling, next to the effective-model boundary amplitudes.

use std::fmt;

use multiphoton_core::dynamics::{effective_boundary_amplitudes, propagator, EffectiveAmplitudes};
use multiphoton_core::lattice::{build_coupling_matrix, mode_couplings, swap_time, NetworkConfig};
use multiphoton_core::transport::{fock_fidelities, TransportReport, MAX_PHOTONS};
use multiphoton_core::Complex64;

use crate::error::SweepError;

#[derive(Debug, Clone, PartialEq)]
pub struct SwapDemo {
    pub config: NetworkConfig,
    pub photons: usize,
    pub tau: f64,
    /// Exact fidelities at tau with the auxiliary resonator detached.
    pub uncoupled: TransportReport,
    /// Exact fidelities at tau with the configured `j0`.
    pub coupled: TransportReport,
    /// Effective single-mode amplitudes at tau (boundary-zero-mode model, `j0 = 0`).
    pub effective: EffectiveAmplitudes,
    /// Exact `M_{0,N+1}(tau)` and `M_{0,0}(tau)` at `j0 = 0`.
    pub exact_transmit: Complex64,
    pub exact_reflect: Complex64,
}

fn model(source: multiphoton_core::Error, config: &NetworkConfig) -> SweepError {
    SweepError::Model {
        vary: "j0",
        value: config.j0 / config.kappa,
        source,
    }
}

pub fn swap_demo(config: &NetworkConfig, photons: usize) -> Result<SwapDemo, SweepError> {
    if photons > MAX_PHOTONS {
        return Err(SweepError::Validation(format!("photon number {photons} exceeds {MAX_PHOTONS}")));
    }
    let err = |e| model(e, config);
    let tau = swap_time(config).map_err(err)?;
    let bare = config.with_j0(0.0);
    let m_bare = propagator(&build_coupling_matrix(&bare).map_err(err)?, tau).map_err(err)?;
    let m_coupled = propagator(&build_coupling_matrix(config).map_err(err)?, tau).map_err(err)?;
    let modes = mode_couplings(config).map_err(err)?;
    Ok(SwapDemo {
        config: *config,
        photons,
        tau,
        uncoupled: fock_fidelities(&m_bare, photons),
        coupled: fock_fidelities(&m_coupled, photons),
        effective: effective_boundary_amplitudes(modes.g_z(), modes.z, tau),
        exact_transmit: m_bare.element(0, m_bare.right()),
        exact_reflect: m_bare.element(0, 0),
    })
}

impl fmt::Display for SwapDemo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = &self.config;
        writeln!(
            f,
            "N = {}, m = {}, kappa = {}, g0 = {}, j0 = {}, n = {}",
            c.chain_len, c.tap_site, c.kappa, c.g0, c.j0, self.photons
        )?;
        writeln!(f, "tau = {:.12}", self.tau)?;
        writeln!(
            f,
            "j0 = 0:      F_t = {:.12}  F_r = {:.12}",
            self.uncoupled.f_t, self.uncoupled.f_r
        )?;
        writeln!(
            f,
            "j0 = {:<7} F_t = {:.12}  F_r = {:.12}",
            format!("{}:", c.j0),
            self.coupled.f_t,
            self.coupled.f_r
        )?;
        writeln!(
            f,
            "exact     M[0,N+1] = {:+.9}{:+.9}i  M[0,0] = {:+.9}{:+.9}i",
            self.exact_transmit.re, self.exact_transmit.im, self.exact_reflect.re, self.exact_reflect.im
        )?;
        write!(
            f,
            "effective M[0,N+1] = {:+.9}{:+.9}i  M[0,0] = {:+.9}{:+.9}i",
            self.effective.right.re, self.effective.right.im, self.effective.left.re, self.effective.left.im
        )
    }
}
