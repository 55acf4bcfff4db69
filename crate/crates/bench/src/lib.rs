//! Benchmark fixtures shared by the criterion targets.

use multiphoton_core::lattice::NetworkConfig;

/// The operating point used throughout the figures: N = 7, m = 3, kappa = 1.
pub fn figure_config(g0: f64, j0: f64) -> NetworkConfig {
    NetworkConfig::new(7, 3, 1.0, g0, j0).expect("valid figure configuration")
}
