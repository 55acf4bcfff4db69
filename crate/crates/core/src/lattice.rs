//! Resonator network geometry: a chain of `N` resonators with hopping `kappa`,
//! two boundary resonators attached to its ends with strength `g0`, and an
//! auxiliary control resonator attached to chain site `m` with strength `j0`.
//!
//! Single-excitation index convention used throughout the crate:
//!
//! | index      | resonator            |
//! |------------|----------------------|
//! | `0`        | left boundary        |
//! | `1..=N`    | chain sites          |
//! | `N + 1`    | right boundary       |
//! | `N + 2`    | auxiliary (control)  |

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Physical parameters of the network. Energies are in units where hbar = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkConfig {
    /// Number of chain resonators `N`.
    pub chain_len: usize,
    /// Chain site `m` (1-based) that the auxiliary resonator couples to.
    pub tap_site: usize,
    /// Intrachain hopping.
    pub kappa: f64,
    /// Boundary coupling.
    pub g0: f64,
    /// Auxiliary coupling.
    pub j0: f64,
}

impl NetworkConfig {
    pub fn new(chain_len: usize, tap_site: usize, kappa: f64, g0: f64, j0: f64) -> Result<Self> {
        let config = Self {
            chain_len,
            tap_site,
            kappa,
            g0,
            j0,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.chain_len == 0 {
            return Err(Error::InvalidConfig("chain length must be at least 1".into()));
        }
        if self.tap_site == 0 || self.tap_site > self.chain_len {
            return Err(Error::InvalidConfig(format!(
                "tap site m = {} must lie in 1..={}",
                self.tap_site, self.chain_len
            )));
        }
        if !(self.kappa.is_finite() && self.kappa > 0.0) {
            return Err(Error::InvalidConfig(format!("kappa = {} must be positive", self.kappa)));
        }
        if !(self.g0.is_finite() && self.g0 >= 0.0) {
            return Err(Error::InvalidConfig(format!("g0 = {} must be non-negative", self.g0)));
        }
        if !(self.j0.is_finite() && self.j0 >= 0.0) {
            return Err(Error::InvalidConfig(format!("j0 = {} must be non-negative", self.j0)));
        }
        Ok(())
    }

    pub fn with_g0(mut self, g0: f64) -> Self {
        self.g0 = g0;
        self
    }

    pub fn with_j0(mut self, j0: f64) -> Self {
        self.j0 = j0;
        self
    }

    /// Size of the single-excitation space, `N + 3`.
    pub fn dim(&self) -> usize {
        self.chain_len + 3
    }

    pub fn left(&self) -> usize {
        0
    }

    pub fn right(&self) -> usize {
        self.chain_len + 1
    }

    pub fn auxiliary(&self) -> usize {
        self.chain_len + 2
    }

    /// Index `z = (N + 1) / 2` of the zero-energy chain mode.
    pub fn zero_mode(&self) -> Result<usize> {
        zero_mode_index(self.chain_len)
    }
}

/// Zero-mode index for a chain of length `chain_len`; only odd chains have one.
pub fn zero_mode_index(chain_len: usize) -> Result<usize> {
    if chain_len % 2 == 0 {
        Err(Error::EvenChainLength(chain_len))
    } else {
        Ok((chain_len + 1) / 2)
    }
}

/// `sin(p * pi / q)` with the argument reduced in integer arithmetic, so that
/// integer multiples of pi give an exact zero.
pub(crate) fn sin_pi_ratio(p: usize, q: usize) -> f64 {
    let period = 2 * q;
    let r = p % period;
    if r == 0 || r == q {
        return 0.0;
    }
    // sin(pi + x) = -sin(x)
    let (r, sign) = if r > q { (r - q, -1.0) } else { (r, 1.0) };
    // sin(pi - x) = sin(x)
    let r = r.min(q - r);
    sign * (PI * r as f64 / q as f64).sin()
}

/// `cos(p * pi / q)`, exact zero at odd multiples of pi/2.
pub(crate) fn cos_pi_ratio(p: usize, q: usize) -> f64 {
    // cos(x) = sin(x + pi/2)
    sin_pi_ratio(2 * p + q, 2 * q)
}

/// Real symmetric single-excitation coupling matrix `A`, with
/// `H = sum_ij A_ij c_i^dag c_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingMatrix {
    config: NetworkConfig,
    entries: DMatrix<f64>,
}

impl CouplingMatrix {
    pub fn config(&self) -> &NetworkConfig {
        &self.config
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn chain_len(&self) -> usize {
        self.config.chain_len
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    /// The inner `N x N` chain block (sites `1..=N`).
    pub fn chain_block(&self) -> DMatrix<f64> {
        let n = self.config.chain_len;
        self.entries.view((1, 1), (n, n)).into_owned()
    }
}

pub fn build_coupling_matrix(config: &NetworkConfig) -> Result<CouplingMatrix> {
    config.validate()?;
    let n = config.chain_len;
    let mut entries = DMatrix::zeros(n + 3, n + 3);
    let mut set = |i: usize, j: usize, value: f64| {
        entries[(i, j)] = value;
        entries[(j, i)] = value;
    };
    set(0, 1, config.g0);
    set(n, n + 1, config.g0);
    for i in 1..n {
        set(i, i + 1, config.kappa);
    }
    set(config.tap_site, n + 2, config.j0);
    Ok(CouplingMatrix {
        config: *config,
        entries,
    })
}

/// Exact spectrum of the open tight-binding chain.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainSpectrum {
    /// `energies[k - 1] = 2 kappa cos(k pi / (N + 1))` for `k = 1..=N`.
    pub energies: Vec<f64>,
    /// Orthogonal sine transform; column `k - 1` is chain mode `k` in the site basis.
    pub transform: DMatrix<f64>,
}

impl ChainSpectrum {
    /// Energy of mode `k` (1-based).
    pub fn energy(&self, k: usize) -> f64 {
        self.energies[k - 1]
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }
}

pub fn chain_spectrum(chain_len: usize, kappa: f64) -> Result<ChainSpectrum> {
    if chain_len == 0 {
        return Err(Error::InvalidConfig("chain length must be at least 1".into()));
    }
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::InvalidConfig(format!("kappa = {kappa} must be positive")));
    }
    let q = chain_len + 1;
    let norm = (2.0 / q as f64).sqrt();
    let energies = (1..=chain_len)
        .map(|k| 2.0 * kappa * cos_pi_ratio(k, q))
        .collect();
    let transform = DMatrix::from_fn(chain_len, chain_len, |i, k| {
        norm * sin_pi_ratio((i + 1) * (k + 1), q)
    });
    Ok(ChainSpectrum {
        energies,
        transform,
    })
}

/// Couplings of the boundary (`g`) and auxiliary (`j`) resonators to each chain mode.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeCouplings {
    /// `g[k - 1] = g0 sqrt(2/(N+1)) sin(k pi/(N+1))`.
    pub g: Vec<f64>,
    /// `j[k - 1] = j0 sqrt(2/(N+1)) sin(m k pi/(N+1))`.
    pub j: Vec<f64>,
    /// Zero-mode index `(N + 1) / 2`, 1-based.
    pub z: usize,
}

impl ModeCouplings {
    pub fn g_z(&self) -> f64 {
        self.g[self.z - 1]
    }

    pub fn j_z(&self) -> f64 {
        self.j[self.z - 1]
    }
}

pub fn mode_couplings(config: &NetworkConfig) -> Result<ModeCouplings> {
    config.validate()?;
    let z = config.zero_mode()?;
    let q = config.chain_len + 1;
    let norm = (2.0 / q as f64).sqrt();
    let g = (1..=config.chain_len)
        .map(|k| config.g0 * norm * sin_pi_ratio(k, q))
        .collect();
    let j = (1..=config.chain_len)
        .map(|k| config.j0 * norm * sin_pi_ratio(config.tap_site * k, q))
        .collect();
    Ok(ModeCouplings { g, j, z })
}

/// Swap time `tau = pi / (sqrt(2) g_z)`, at which the boundary modes exchange
/// their contents through the zero mode.
pub fn swap_time(config: &NetworkConfig) -> Result<f64> {
    let couplings = mode_couplings(config)?;
    let g_z = couplings.g_z();
    if g_z <= 0.0 {
        return Err(Error::ZeroCoupling);
    }
    Ok(PI / (2f64.sqrt() * g_z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn cfg(n: usize, m: usize, kappa: f64, g0: f64, j0: f64) -> NetworkConfig {
        NetworkConfig::new(n, m, kappa, g0, j0).unwrap()
    }

    #[test]
    fn all_couplings_off_gives_zero_matrix() {
        let a = build_coupling_matrix(&cfg(1, 1, 1.0, 0.0, 0.0)).unwrap();
        assert_eq!(a.dim(), 4);
        assert!(a.entries().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn figure_configuration_pattern() {
        let a = build_coupling_matrix(&cfg(7, 3, 1.0, 0.01, 0.1)).unwrap();
        assert_eq!(a.dim(), 10);
        for i in 0..10 {
            for j in 0..10 {
                let expected = match (i.min(j), i.max(j)) {
                    (0, 1) | (7, 8) => 0.01,
                    (3, 9) => 0.1,
                    (lo, hi) if hi == lo + 1 && (1..=6).contains(&lo) => 1.0,
                    _ => 0.0,
                };
                assert_eq!(a.get(i, j), expected, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn auxiliary_row_empty_without_j0() {
        let a = build_coupling_matrix(&cfg(3, 2, 2.0, 0.5, 0.0)).unwrap();
        assert_eq!(a.dim(), 6);
        assert_eq!(a.get(1, 2), 2.0);
        assert_eq!(a.get(2, 3), 2.0);
        assert_eq!(a.get(0, 1), 0.5);
        assert_eq!(a.get(3, 4), 0.5);
        assert!((0..6).all(|i| a.get(5, i) == 0.0 && a.get(i, 5) == 0.0));
    }

    #[test]
    fn rejects_invalid_configs() {
        assert!(NetworkConfig::new(0, 1, 1.0, 0.0, 0.0).is_err());
        assert!(NetworkConfig::new(5, 0, 1.0, 0.0, 0.0).is_err());
        assert!(NetworkConfig::new(5, 6, 1.0, 0.0, 0.0).is_err());
        assert!(NetworkConfig::new(5, 1, 0.0, 0.0, 0.0).is_err());
        assert!(NetworkConfig::new(5, 1, 1.0, -0.1, 0.0).is_err());
        assert!(NetworkConfig::new(5, 1, 1.0, 0.1, f64::NAN).is_err());
    }

    #[test]
    fn spectrum_closed_forms() {
        let s = chain_spectrum(1, 1.0).unwrap();
        assert_eq!(s.energies, vec![0.0]);

        let s = chain_spectrum(7, 1.0).unwrap();
        assert_abs_diff_eq!(s.energy(1), 1.847759065022573, epsilon = 1e-12);
        assert_eq!(s.energy(4), 0.0);
        assert!(s.energies.windows(2).all(|w| w[0] > w[1]));
    }

    #[test]
    fn transform_is_orthogonal() {
        for n in [1, 2, 5, 7, 12, 31] {
            let s = chain_spectrum(n, 1.0).unwrap();
            let gram = s.transform.transpose() * &s.transform;
            let err = (gram - DMatrix::identity(n, n)).amax();
            assert!(err < 1e-12, "N={n}: {err}");
        }
    }

    #[test]
    fn transform_diagonalizes_chain_block() {
        for (n, kappa) in [(7, 1.0), (8, 0.7), (15, 2.5)] {
            let a = build_coupling_matrix(&cfg(n, 1, kappa, 0.0, 0.0)).unwrap();
            let s = chain_spectrum(n, kappa).unwrap();
            let d = s.transform.transpose() * a.chain_block() * &s.transform;
            let expected = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(s.energies.clone()));
            assert!((d - expected).amax() < 1e-10 * kappa);
        }
    }

    #[test]
    fn zero_mode_gap_is_open() {
        for n in [1usize, 3, 7, 21] {
            let s = chain_spectrum(n, 1.0).unwrap();
            let z = zero_mode_index(n).unwrap();
            assert_eq!(s.energy(z), 0.0);
            if n > 1 {
                assert!((s.energy(z - 1) - s.energy(z)).abs() > 0.0);
                assert!((s.energy(z + 1) - s.energy(z)).abs() > 0.0);
            }
        }
    }

    #[test]
    fn mode_coupling_values() {
        let c = mode_couplings(&cfg(7, 3, 1.0, 0.01, 0.1)).unwrap();
        assert_eq!(c.z, 4);
        assert_abs_diff_eq!(c.g_z(), 0.005, epsilon = 1e-15);
        assert_abs_diff_eq!(c.j_z(), -0.05, epsilon = 1e-15);
        assert!(c.g.iter().all(|&g| g > 0.0));

        let c = mode_couplings(&cfg(7, 2, 1.0, 0.01, 0.1)).unwrap();
        assert_eq!(c.j_z(), 0.0);

        assert_eq!(
            mode_couplings(&cfg(6, 3, 1.0, 0.01, 0.1)),
            Err(Error::EvenChainLength(6))
        );
    }

    #[test]
    fn mode_couplings_match_transformed_rows() {
        let config = cfg(9, 5, 1.3, 0.02, 0.07);
        let a = build_coupling_matrix(&config).unwrap();
        let s = chain_spectrum(9, 1.3).unwrap();
        let c = mode_couplings(&config).unwrap();
        let left_row = a.entries().view((0, 1), (1, 9)).into_owned();
        let aux_row = a.entries().view((11, 1), (1, 9)).into_owned();
        let right_row = a.entries().view((10, 1), (1, 9)).into_owned();
        let g = left_row * &s.transform;
        let j = aux_row * &s.transform;
        let g_right = right_row * &s.transform;
        for k in 0..9 {
            assert_abs_diff_eq!(g[k], c.g[k], epsilon = 1e-12);
            assert_abs_diff_eq!(j[k], c.j[k], epsilon = 1e-12);
            // right boundary sees (-1)^(k-1) g_k with 1-based k
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert_abs_diff_eq!(g_right[k], sign * c.g[k], epsilon = 1e-12);
        }
    }

    #[test]
    fn swap_times() {
        assert_abs_diff_eq!(
            swap_time(&cfg(7, 3, 1.0, 0.01, 0.0)).unwrap(),
            444.2882938158366,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            swap_time(&cfg(7, 3, 1.0, 0.005, 0.0)).unwrap(),
            888.5765876316732,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            swap_time(&cfg(3, 1, 1.0, 0.01, 0.0)).unwrap(),
            // g_z = 0.01 sqrt(2/4) sin(pi/2)
            std::f64::consts::PI / (2f64.sqrt() * 0.01 * 0.5f64.sqrt()),
            epsilon = 1e-9
        );
        assert_eq!(swap_time(&cfg(7, 3, 1.0, 0.0, 0.0)), Err(Error::ZeroCoupling));
        assert_eq!(
            swap_time(&cfg(4, 3, 1.0, 0.01, 0.0)),
            Err(Error::EvenChainLength(4))
        );
    }

    #[test]
    fn reduced_trig_matches_std() {
        for q in 1..20 {
            for p in 0..60 {
                let x = PI * p as f64 / q as f64;
                assert_abs_diff_eq!(sin_pi_ratio(p, q), x.sin(), epsilon = 1e-13);
                assert_abs_diff_eq!(cos_pi_ratio(p, q), x.cos(), epsilon = 1e-13);
            }
        }
    }
}
