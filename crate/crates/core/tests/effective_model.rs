use multiphoton_core::bounds::{delta_t, perturbative_reflect_element, perturbative_transmit_element};
use multiphoton_core::dynamics::{effective_propagator_uncoupled, propagator, Spectral};
use multiphoton_core::lattice::{build_coupling_matrix, mode_couplings, swap_time, NetworkConfig};
use multiphoton_core::transport::fock_fidelities;

fn figure_config(g0: f64, j0: f64) -> NetworkConfig {
    NetworkConfig::new(7, 3, 1.0, g0, j0).unwrap()
}

#[test]
fn boundary_block_within_leakage_scale() {
    for g0 in [0.002, 0.005, 0.008, 0.01] {
        let config = figure_config(g0, 0.0);
        let tau = swap_time(&config).unwrap();
        let m = propagator(&build_coupling_matrix(&config).unwrap(), tau).unwrap();
        let u = effective_propagator_uncoupled(mode_couplings(&config).unwrap().g_z(), 4, tau);
        let err = [(0, 0, 0, 0), (0, 8, 0, 2), (8, 0, 2, 0), (8, 8, 2, 2)]
            .iter()
            .map(|&(i, j, a, b)| (m.element(i, j) - u[(a, b)]).norm())
            .fold(0.0, f64::max);
        assert!(err <= 4.0 * delta_t(&config, tau).unwrap(), "g0={g0}: {err}");
    }
}

#[test]
fn perturbative_elements_track_exact_entries() {
    let config = figure_config(0.005, 0.0);
    let tau = swap_time(&config).unwrap();
    let m = propagator(&build_coupling_matrix(&config).unwrap(), tau).unwrap();
    let approx = perturbative_transmit_element(&config, tau).unwrap();
    assert!((m.element(0, 8) - approx).norm() <= 1e-5);

    let config = figure_config(0.01, 0.1);
    let tau = swap_time(&config).unwrap();
    let m = propagator(&build_coupling_matrix(&config).unwrap(), tau).unwrap();
    let approx = perturbative_reflect_element(&config, tau).unwrap();
    assert!((m.element(0, 0) - approx).norm() <= 5e-3);
}

/// sigma_t oscillates with g0 through cos(eps_k tau), so the decay is
/// checked on the envelope: block maxima over successive slices of the grid.
#[test]
fn transmission_leakage_envelope_shrinks_with_boundary_coupling() {
    let sigma: Vec<f64> = (0..100)
        .map(|i| {
            let config = figure_config(0.001 + 0.0002 * i as f64, 0.0);
            let tau = swap_time(&config).unwrap();
            let m = Spectral::new(&build_coupling_matrix(&config).unwrap()).unwrap().propagator(tau);
            fock_fidelities(&m, 2).sigma_t
        })
        .collect();
    let envelope: Vec<f64> = sigma.chunks(20).map(|c| c.iter().copied().fold(0.0, f64::max)).collect();
    assert!(envelope.windows(2).all(|w| w[0] < w[1]), "{envelope:?}");
}
