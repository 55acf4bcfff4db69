//! Named sweeps for the published figures. All use N = 7, m = 3, kappa = 1,
//! t = tau and 101 grid points.

use multiphoton_core::lattice::NetworkConfig;

use crate::error::SweepError;
use crate::sweep::{linspace, Quantity, SweepSpec, TimeMode, VaryParam};

pub const PRESET_NAMES: [&str; 12] = [
    "fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b", "figA1a", "figA1b", "figA2a", "figA2b", "figA3a", "figA3b",
];

pub const GRID_POINTS: usize = 101;
pub const J0_RANGE: (f64, f64) = (0.0, 0.1);
pub const G0_RANGE: (f64, f64) = (0.001, 0.02);

const CHAIN_LEN: usize = 7;
const TAP_SITE: usize = 3;
const COUPLED_J0: f64 = 0.1;

/// Expands a preset name into a fully explicit sweep.
pub fn preset(name: &str) -> Result<SweepSpec, SweepError> {
    let fidelity_sweep = |g0: f64, fock: Vec<usize>, dims: Vec<usize>| SweepSpec {
        base: NetworkConfig::new(CHAIN_LEN, TAP_SITE, 1.0, g0, 0.0).expect("preset config"),
        vary: VaryParam::J0OverKappa,
        grid: linspace(J0_RANGE.0, J0_RANGE.1, GRID_POINTS),
        fock,
        dims,
        time: TimeMode::Tau,
        quantities: vec![Quantity::Ft, Quantity::Fr],
        mc_samples: 0,
        seed: 0,
    };
    let infidelity_sweep = |j0: f64, fock: Vec<usize>, dims: Vec<usize>| {
        let quantities = if j0 == 0.0 {
            vec![Quantity::SigmaT, Quantity::EstT, Quantity::BoundT]
        } else {
            vec![Quantity::SigmaR, Quantity::EstR, Quantity::BoundR]
        };
        SweepSpec {
            // g0 is overwritten at every grid point
            base: NetworkConfig::new(CHAIN_LEN, TAP_SITE, 1.0, G0_RANGE.0, j0).expect("preset config"),
            vary: VaryParam::G0OverKappa,
            grid: linspace(G0_RANGE.0, G0_RANGE.1, GRID_POINTS),
            fock,
            dims,
            time: TimeMode::Tau,
            quantities,
            mc_samples: 0,
            seed: 0,
        }
    };
    let ns = || vec![2, 3, 5];
    Ok(match name {
        "fig2a" => fidelity_sweep(0.01, ns(), vec![]),
        "fig2b" => fidelity_sweep(0.005, ns(), vec![]),
        "fig3a" => infidelity_sweep(0.0, vec![2], vec![]),
        "fig3b" => infidelity_sweep(0.0, vec![5], vec![]),
        "fig4a" => infidelity_sweep(COUPLED_J0, vec![2], vec![]),
        "fig4b" => infidelity_sweep(COUPLED_J0, vec![5], vec![]),
        "figA1a" => fidelity_sweep(0.01, vec![], ns()),
        "figA1b" => fidelity_sweep(0.005, vec![], ns()),
        "figA2a" => infidelity_sweep(0.0, vec![], vec![3]),
        "figA2b" => infidelity_sweep(0.0, vec![], vec![5]),
        "figA3a" => infidelity_sweep(COUPLED_J0, vec![], vec![3]),
        "figA3b" => infidelity_sweep(COUPLED_J0, vec![], vec![5]),
        other => {
            return Err(SweepError::Validation(format!(
                "unknown preset {other:?}; choose one of {}",
                PRESET_NAMES.join(", ")
            )))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_expands_and_validates() {
        for name in PRESET_NAMES {
            let spec = preset(name).unwrap();
            spec.validate().unwrap();
            assert_eq!(spec.grid.len(), GRID_POINTS);
            assert_eq!((spec.base.chain_len, spec.base.tap_site), (7, 3));
        }
        assert!(preset("fig5").is_err());
    }

    #[test]
    fn fig2a_header() {
        let spec = preset("fig2a").unwrap();
        assert_eq!(spec.base.g0, 0.01);
        assert_eq!(
            spec.header(),
            ["F_t[n=2]", "F_r[n=2]", "F_t[n=3]", "F_r[n=3]", "F_t[n=5]", "F_r[n=5]"]
        );
        assert_eq!(spec.grid[0], 0.0);
        assert_eq!(spec.grid[100], 0.1);
    }

    #[test]
    fn infidelity_presets_pick_regime() {
        let a3 = preset("figA3b").unwrap();
        assert_eq!(a3.base.j0, 0.1);
        assert_eq!(a3.dims, vec![5]);
        assert_eq!(a3.header(), ["sigma_r[d=5]", "avg_est_r[d=5]", "avg_bound_r[d=5]"]);
        let f3 = preset("fig3a").unwrap();
        assert_eq!(f3.header(), ["sigma_t[n=2]", "est_t[n=2]", "bound_t[n=2]"]);
        assert_eq!(f3.grid[0], 0.001);
    }
}
