//! Transmission and reflection fidelities of multiphoton states launched from
//! the left boundary resonator.
//!
//! After evolution, `c_0(t) = M_{0,mu} c_mu + sqrt(delta_mu) c_collective`, so
//! the photons of an input Fock state `|n>` split binomially between resonator
//! `mu` and the collective mode:
//!
//! ```text
//! f_mu(r, n) = sqrt(C(n, r)) * M_{0,mu}^(n - r) * delta_mu^(r / 2)
//! ```
//!
//! is the amplitude for `r` photons leaking and `n - r` arriving in `mu`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::dynamics::Propagator;
use crate::error::{Error, Result};
use crate::lattice::zero_mode_index;

/// Largest photon number whose binomials fit in `u64` for every `r`.
pub const MAX_PHOTONS: usize = 62;

const NORM_TOLERANCE: f64 = 1e-12;
const IMAG_TOLERANCE: f64 = 1e-10;

/// Samples per independent random substream of the Monte Carlo oracle.
const ORACLE_CHUNK: usize = 4096;

/// Exact binomial coefficient, `n <= MAX_PHOTONS`.
pub fn binomial(n: usize, r: usize) -> u64 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// A pure state `sum_n alpha_n |n>` of one resonator, truncated at `d` levels.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionState {
    amplitudes: Vec<Complex64>,
}

impl SuperpositionState {
    /// Accepts amplitudes that are already normalized to within 1e-12.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("state needs at least one amplitude".into()));
        }
        if amplitudes.len() > MAX_PHOTONS + 1 {
            return Err(Error::PhotonNumberTooLarge(amplitudes.len() - 1));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidState(format!("squared norm is {norm}, expected 1")));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        Self::new(amplitudes.into_iter().map(|a| a / norm).collect())
    }

    /// `|n>` embedded in `dim` levels.
    pub fn fock(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::InvalidState(format!("Fock level {n} does not fit in {dim} levels")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[n] = Complex64::new(1.0, 0.0);
        Self::new(amplitudes)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }
}

/// Table of `f_mu(r, n)` for `0 <= r <= n <= n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct FCoefficients {
    pub mu: usize,
    /// `M_{0,mu}`.
    pub element: Complex64,
    /// `delta_mu = 1 - |M_{0,mu}|^2`, clamped to `[0, 1]`.
    pub delta_mu: f64,
    rows: Vec<Vec<Complex64>>,
}

impl FCoefficients {
    pub fn n_max(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn get(&self, r: usize, n: usize) -> Complex64 {
        self.rows[n][r]
    }

    pub fn row(&self, n: usize) -> &[Complex64] {
        &self.rows[n]
    }
}

pub fn f_coefficients(m: &Propagator, mu: usize, n_max: usize) -> Result<FCoefficients> {
    if mu >= m.dim() {
        return Err(Error::ModeOutOfRange { index: mu, dim: m.dim() });
    }
    if n_max > MAX_PHOTONS {
        return Err(Error::PhotonNumberTooLarge(n_max));
    }
    let element = m.element(0, mu);
    let delta_mu = (1.0 - element.norm_sqr()).clamp(0.0, 1.0);
    let leak = delta_mu.sqrt();
    let rows = (0..=n_max)
        .map(|n| {
            (0..=n)
                .map(|r| {
                    let weight = (binomial(n, r) as f64).sqrt() * leak.powi(r as i32);
                    element.powu((n - r) as u32) * weight
                })
                .collect()
        })
        .collect();
    Ok(FCoefficients {
        mu,
        element,
        delta_mu,
        rows,
    })
}

/// What was sent into the left boundary resonator.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    Fock(usize),
    Superposition { dim: usize },
    HaarAverage { dim: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportReport {
    pub f_t: f64,
    pub f_r: f64,
    pub sigma_t: f64,
    pub sigma_r: f64,
    pub input: InputKind,
    pub time: f64,
}

impl TransportReport {
    fn new(f_t: f64, f_r: f64, input: InputKind, time: f64) -> Self {
        let f_t = f_t.clamp(0.0, 1.0);
        let f_r = f_r.clamp(0.0, 1.0);
        Self {
            f_t,
            f_r,
            sigma_t: 1.0 - f_t,
            sigma_r: 1.0 - f_r,
            input,
            time,
        }
    }
}

/// `F_t = |M_{0,N+1}|^(2n)`, `F_r = |M_{0,0}|^(2n)`.
pub fn fock_fidelities(m: &Propagator, n: usize) -> TransportReport {
    let transmit = m.element(0, m.right()).norm_sqr();
    let reflect = m.element(0, 0).norm_sqr();
    TransportReport::new(
        transmit.powi(n as i32),
        reflect.powi(n as i32),
        InputKind::Fock(n),
        m.time(),
    )
}

/// Input accepted by [`reduced_density_matrix`].
#[derive(Debug, Clone, PartialEq)]
pub enum InputState {
    Fock(usize),
    Superposition(SuperpositionState),
}

/// Reduced state of resonator `mu` on Fock levels `0..=n_max`, where `n_max`
/// is the largest photon number present in the input.
pub fn reduced_density_matrix(m: &Propagator, input: &InputState, mu: usize) -> Result<DMatrix<Complex64>> {
    match input {
        InputState::Fock(n) => {
            let f = f_coefficients(m, mu, *n)?;
            let mut rho = DMatrix::from_element(n + 1, n + 1, Complex64::new(0.0, 0.0));
            for r in 0..=*n {
                rho[(n - r, n - r)] = Complex64::new(f.get(r, *n).norm_sqr(), 0.0);
            }
            Ok(rho)
        }
        InputState::Superposition(psi) => {
            let d = psi.dim();
            let alpha = psi.amplitudes();
            let f = f_coefficients(m, mu, d - 1)?;
            let mut rho = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
            for n in 0..d {
                for n2 in 0..d {
                    let weight = alpha[n] * alpha[n2].conj();
                    for r in 0..=n.min(n2) {
                        rho[(n - r, n2 - r)] += weight * f.get(r, n) * f.get(r, n2).conj();
                    }
                }
            }
            Ok(rho)
        }
    }
}

fn real_part(value: Complex64) -> Result<f64> {
    if value.im.abs() > IMAG_TOLERANCE {
        Err(Error::ComplexFidelity(value.im))
    } else {
        Ok(value.re)
    }
}

/// `<psi| Q^dag rho_mu Q |psi>` as the explicit quadruple sum, where `Q` is
/// the phase corrector `exp(i z pi n)` when `phase_z` is set and the identity
/// otherwise.
fn superposition_overlap(f: &FCoefficients, alpha: &[Complex64], phase_z: Option<usize>) -> Result<f64> {
    let d = alpha.len();
    let mut total = Complex64::new(0.0, 0.0);
    for n in 0..d {
        for n2 in 0..d {
            let sign = match phase_z {
                Some(z) if ((n + n2) * z) % 2 == 1 => -1.0,
                _ => 1.0,
            };
            for r in 0..=n.min(n2) {
                total += alpha[n] * alpha[n2 - r] * alpha[n2].conj() * alpha[n - r].conj()
                    * f.get(r, n)
                    * f.get(r, n2).conj()
                    * sign;
            }
        }
    }
    real_part(total)
}

/// f-tables for both boundaries, shared by every input of dimension up to `n_max + 1`.
struct BoundaryTables {
    transmit: FCoefficients,
    reflect: FCoefficients,
    z: usize,
}

impl BoundaryTables {
    fn new(m: &Propagator, n_max: usize) -> Result<Self> {
        let z = zero_mode_index(m.chain_len())?;
        Ok(Self {
            transmit: f_coefficients(m, m.right(), n_max)?,
            reflect: f_coefficients(m, 0, n_max)?,
            z,
        })
    }

    fn fidelities(&self, psi: &SuperpositionState) -> Result<(f64, f64)> {
        Ok((
            superposition_overlap(&self.transmit, psi.amplitudes(), Some(self.z))?,
            superposition_overlap(&self.reflect, psi.amplitudes(), None)?,
        ))
    }
}

/// Fidelities for an arbitrary superposition. The transmitted state is
/// compared after the phase corrector `exp(i z pi c^dag c)` on resonator `N+1`,
/// which undoes the `(-1)^(n z)` swap phase.
pub fn superposition_fidelities(m: &Propagator, psi: &SuperpositionState) -> Result<TransportReport> {
    let (f_t, f_r) = BoundaryTables::new(m, psi.dim() - 1)?.fidelities(psi)?;
    Ok(TransportReport::new(
        f_t,
        f_r,
        InputKind::Superposition { dim: psi.dim() },
        m.time(),
    ))
}

/// Closed-form average of `<psi| Q^dag rho_mu Q |psi>` over Haar-random pure
/// states of dimension `d`.
fn averaged_overlap(f: &FCoefficients, d: usize, phase_z: Option<usize>) -> Result<f64> {
    let incoherent: f64 = (0..d)
        .map(|n| f.row(n).iter().map(|x| x.norm_sqr()).sum::<f64>())
        .sum();
    let coherent: Complex64 = (0..d)
        .map(|n| {
            let sign = match phase_z {
                Some(z) if (n * z) % 2 == 1 => -1.0,
                _ => 1.0,
            };
            f.get(0, n) * sign
        })
        .sum();
    // the double sum over (n, n') factorizes into |sum_n (-1)^(nz) f(0, n)|^2
    let total = incoherent + coherent.norm_sqr();
    Ok(total / (d * (d + 1)) as f64)
}

/// Haar-averaged fidelities `<F_t>`, `<F_r>` over `d`-dimensional pure inputs.
pub fn average_fidelities(m: &Propagator, d: usize) -> Result<TransportReport> {
    if d == 0 {
        return Err(Error::InvalidState("dimension d must be at least 1".into()));
    }
    if d - 1 > MAX_PHOTONS {
        return Err(Error::PhotonNumberTooLarge(d - 1));
    }
    let z = zero_mode_index(m.chain_len())?;
    let transmit = f_coefficients(m, m.right(), d - 1)?;
    let reflect = f_coefficients(m, 0, d - 1)?;
    Ok(TransportReport::new(
        averaged_overlap(&transmit, d, Some(z))?,
        averaged_overlap(&reflect, d, None)?,
        InputKind::HaarAverage { dim: d },
        m.time(),
    ))
}

/// Sample means and standard errors from [`haar_average_oracle`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HaarEstimate {
    pub samples: usize,
    pub mean_f_t: f64,
    pub mean_f_r: f64,
    pub stderr_f_t: f64,
    pub stderr_f_r: f64,
}

/// Draws a Haar-random pure state: a normalized vector of i.i.d. complex Gaussians.
pub fn haar_random_state<R: rand::Rng + ?Sized>(d: usize, rng: &mut R) -> Result<SuperpositionState> {
    loop {
        let amplitudes: Vec<Complex64> = (0..d)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(re, im)
            })
            .collect();
        if amplitudes.iter().any(|a| a.norm_sqr() > 0.0) {
            return SuperpositionState::normalized(amplitudes);
        }
    }
}

#[derive(Default, Clone, Copy)]
struct Moments {
    count: usize,
    sum_t: f64,
    sum_r: f64,
    sum_sq_t: f64,
    sum_sq_r: f64,
}

/// Monte Carlo estimate of the Haar-averaged fidelities, evaluating
/// [`superposition_fidelities`] on `samples` random states.
///
/// The sample budget is split into fixed-size chunks; chunk `i` draws from
/// ChaCha8 stream `i` seeded with `seed`, and chunk sums are combined in
/// chunk order, so the result does not depend on the rayon thread count.
pub fn haar_average_oracle(m: &Propagator, d: usize, samples: usize, seed: u64) -> Result<HaarEstimate> {
    if samples == 0 {
        return Err(Error::InvalidState("need at least one Monte Carlo sample".into()));
    }
    if d == 0 {
        return Err(Error::InvalidState("dimension d must be at least 1".into()));
    }
    if d - 1 > MAX_PHOTONS {
        return Err(Error::PhotonNumberTooLarge(d - 1));
    }
    let tables = BoundaryTables::new(m, d - 1)?;
    let chunks = samples.div_ceil(ORACLE_CHUNK);
    let partials: Vec<Moments> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64);
            let count = ORACLE_CHUNK.min(samples - chunk * ORACLE_CHUNK);
            let mut moments = Moments {
                count,
                ..Moments::default()
            };
            for _ in 0..count {
                let psi = haar_random_state(d, &mut rng)?;
                let (f_t, f_r) = tables.fidelities(&psi)?;
                let (f_t, f_r) = (f_t.clamp(0.0, 1.0), f_r.clamp(0.0, 1.0));
                moments.sum_t += f_t;
                moments.sum_r += f_r;
                moments.sum_sq_t += f_t * f_t;
                moments.sum_sq_r += f_r * f_r;
            }
            Ok(moments)
        })
        .collect::<Result<_>>()?;

    let total = partials.iter().fold(Moments::default(), |acc, p| Moments {
        count: acc.count + p.count,
        sum_t: acc.sum_t + p.sum_t,
        sum_r: acc.sum_r + p.sum_r,
        sum_sq_t: acc.sum_sq_t + p.sum_sq_t,
        sum_sq_r: acc.sum_sq_r + p.sum_sq_r,
    });
    let n = total.count as f64;
    let stderr = |sum: f64, sum_sq: f64| {
        if total.count < 2 {
            return 0.0;
        }
        let mean = sum / n;
        let variance = ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0);
        (variance / n).sqrt()
    };
    Ok(HaarEstimate {
        samples,
        mean_f_t: (total.sum_t / n).clamp(0.0, 1.0),
        mean_f_r: (total.sum_r / n).clamp(0.0, 1.0),
        stderr_f_t: stderr(total.sum_t, total.sum_sq_t),
        stderr_f_r: stderr(total.sum_r, total.sum_sq_r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{propagator, Spectral};
    use crate::lattice::{build_coupling_matrix, swap_time, NetworkConfig};
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Propagator whose `M_{0,mu}` entries are prescribed; only row 0 matters
    /// for the f-coefficients.
    fn with_row(chain_len: usize, row: &[(usize, Complex64)]) -> Propagator {
        let dim = chain_len + 3;
        let mut entries = DMatrix::zeros(dim, dim);
        // build a real propagator from the identity-evolving network, then patch row 0
        let a = build_coupling_matrix(&NetworkConfig::new(chain_len, 1, 1.0, 0.0, 0.0).unwrap()).unwrap();
        let base = propagator(&a, 0.0).unwrap();
        entries.copy_from(base.matrix());
        for &(mu, value) in row {
            entries[(0, mu)] = value;
        }
        Propagator::from_parts(0.0, chain_len, entries)
    }

    fn swap_point(g0: f64, j0: f64) -> Propagator {
        let config = NetworkConfig::new(7, 3, 1.0, g0, j0).unwrap();
        let tau = swap_time(&config).unwrap();
        propagator(&build_coupling_matrix(&config).unwrap(), tau).unwrap()
    }

    #[test]
    fn binomials_are_exact() {
        assert_eq!(binomial(0, 0), 1);
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(62, 31), 465428353255261088);
        assert_eq!(binomial(3, 4), 0);
        for n in 0..=MAX_PHOTONS {
            let row_sum: u128 = (0..=n).map(|r| binomial(n, r) as u128).sum();
            assert_eq!(row_sum, 1u128 << n);
        }
    }

    #[test]
    fn f_coefficients_edge_cases() {
        let phase = c(0.6, 0.8);
        let f = f_coefficients(&with_row(3, &[(2, phase)]), 2, 4).unwrap();
        assert_eq!(f.delta_mu, 0.0);
        for n in 0..=4 {
            assert!((f.get(0, n) - phase.powu(n as u32)).norm() < 1e-15);
            assert!((1..=n).all(|r| f.get(r, n).norm() == 0.0));
        }

        let f = f_coefficients(&with_row(3, &[(0, c(0.0, 0.0))]), 0, 2).unwrap();
        assert_eq!(f.get(2, 2), c(1.0, 0.0));
        assert_eq!(f.get(0, 2).norm() + f.get(1, 2).norm(), 0.0);

        let half = c(0.5f64.sqrt(), 0.0);
        let f = f_coefficients(&with_row(3, &[(4, half)]), 4, 2).unwrap();
        assert_abs_diff_eq!(f.get(0, 2).norm_sqr(), 0.25, epsilon = 1e-15);
        assert_abs_diff_eq!(f.get(1, 2).norm_sqr(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(f.get(2, 2).norm_sqr(), 0.25, epsilon = 1e-15);

        assert!(f_coefficients(&with_row(3, &[]), 6, 1).is_err());
        assert!(f_coefficients(&with_row(3, &[]), 0, MAX_PHOTONS + 1).is_err());
    }

    #[test]
    fn leakage_clamped_when_roundoff_exceeds_one() {
        let f = f_coefficients(&with_row(3, &[(1, c(1.0 + 1e-15, 0.0))]), 1, 3).unwrap();
        assert_eq!(f.delta_mu, 0.0);
    }

    #[test]
    fn f_rows_are_normalized() {
        let m = swap_point(0.013, 0.04);
        for mu in 0..m.dim() {
            let f = f_coefficients(&m, mu, 8).unwrap();
            for n in 0..=8 {
                let s: f64 = f.row(n).iter().map(|x| x.norm_sqr()).sum();
                assert_abs_diff_eq!(s, 1.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn vacuum_fock_input() {
        let m = swap_point(0.01, 0.0);
        let r = fock_fidelities(&m, 0);
        assert_eq!((r.f_t, r.f_r), (1.0, 1.0));
    }

    #[test]
    fn swap_point_transmits_fock_states() {
        let m = swap_point(0.01, 0.0);
        for n in [2usize, 3, 5] {
            let r = fock_fidelities(&m, n);
            assert!(r.f_t >= 1.0 - 7e-4 * (n as f64 / 2.0));
            assert!(r.f_r <= 1e-3);
            assert_eq!(r.sigma_t, 1.0 - r.f_t);
        }
    }

    #[test]
    fn control_point_reflects_fock_states() {
        let r = fock_fidelities(&swap_point(0.01, 0.1), 2);
        assert!(r.f_r >= 0.92, "{}", r.f_r);
    }

    #[test]
    fn exponent_law() {
        let m = swap_point(0.017, 0.03);
        let one = fock_fidelities(&m, 1);
        for n in 0..=8 {
            let r = fock_fidelities(&m, n);
            assert_eq!(r.f_t, one.f_t.powi(n as i32));
            assert_eq!(r.f_r, one.f_r.powi(n as i32));
        }
    }

    #[test]
    fn reduced_state_without_coupling_is_pure_input() {
        let a = build_coupling_matrix(&NetworkConfig::new(7, 3, 1.0, 0.0, 0.0).unwrap()).unwrap();
        let m = propagator(&a, 55.0).unwrap();
        let rho = reduced_density_matrix(&m, &InputState::Fock(3), 0).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == 3 && j == 3 { 1.0 } else { 0.0 };
                assert_eq!(rho[(i, j)], c(expected, 0.0));
            }
        }
    }

    #[test]
    fn vacuum_input_stays_vacuum() {
        let m = swap_point(0.01, 0.1);
        for mu in [0, 4, 8, 9] {
            let rho = reduced_density_matrix(&m, &InputState::Fock(0), mu).unwrap();
            assert_eq!(rho.shape(), (1, 1));
            assert_eq!(rho[(0, 0)], c(1.0, 0.0));
        }
    }

    #[test]
    fn reduced_state_diagonal_matches_fock_fidelity() {
        let m = swap_point(0.01, 0.0);
        let rho = reduced_density_matrix(&m, &InputState::Fock(2), 8).unwrap();
        assert_abs_diff_eq!(rho[(2, 2)].re, fock_fidelities(&m, 2).f_t, epsilon = 1e-12);
    }

    #[test]
    fn reduced_states_are_valid_density_matrices() {
        let m = swap_point(0.02, 0.05);
        let psi = SuperpositionState::normalized(vec![c(0.3, 0.1), c(-0.2, 0.7), c(0.5, 0.0), c(0.0, -0.4)]).unwrap();
        for mu in 0..m.dim() {
            let rho = reduced_density_matrix(&m, &InputState::Superposition(psi.clone()), mu).unwrap();
            assert_abs_diff_eq!(rho.trace().re, 1.0, epsilon = 1e-10);
            assert!(rho.trace().im.abs() < 1e-12);
            let hermitian = (&rho - rho.adjoint()).iter().map(|x| x.norm()).fold(0.0, f64::max);
            assert!(hermitian < 1e-12);
            let eig = rho.symmetric_eigenvalues();
            assert!(eig.iter().all(|&l| l >= -1e-10), "{eig:?}");
        }
    }

    #[test]
    fn vacuum_superposition_is_invariant() {
        let m = swap_point(0.01, 0.1);
        let psi = SuperpositionState::fock(0, 4).unwrap();
        let r = superposition_fidelities(&m, &psi).unwrap();
        assert_abs_diff_eq!(r.f_t, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.f_r, 1.0, epsilon = 1e-15);
        let single = SuperpositionState::fock(0, 1).unwrap();
        let r1 = superposition_fidelities(&m, &single).unwrap();
        let f0 = fock_fidelities(&m, 0);
        assert_eq!((r1.f_t, r1.f_r), (f0.f_t, f0.f_r));
    }

    #[test]
    fn one_hot_superposition_matches_fock() {
        let m = swap_point(0.012, 0.02);
        for n in 0..=6 {
            let psi = SuperpositionState::fock(n, n + 1).unwrap();
            let s = superposition_fidelities(&m, &psi).unwrap();
            let f = fock_fidelities(&m, n);
            assert_abs_diff_eq!(s.f_t, f.f_t, epsilon = 1e-10);
            assert_abs_diff_eq!(s.f_r, f.f_r, epsilon = 1e-10);
        }
    }

    #[test]
    fn even_photon_superposition_transfers() {
        let m = swap_point(0.01, 0.0);
        let h = 0.5f64.sqrt();
        let psi = SuperpositionState::new(vec![c(h, 0.0), c(0.0, 0.0), c(h, 0.0)]).unwrap();
        assert!(superposition_fidelities(&m, &psi).unwrap().f_t >= 0.999);
    }

    #[test]
    fn phase_corrector_matters_for_odd_zero_mode() {
        // N = 5 gives z = 3, so the swap imprints (-1)^n on |n>
        let config = NetworkConfig::new(5, 1, 1.0, 0.01, 0.0).unwrap();
        let tau = swap_time(&config).unwrap();
        let m = propagator(&build_coupling_matrix(&config).unwrap(), tau).unwrap();
        let h = 0.5f64.sqrt();
        let psi = SuperpositionState::new(vec![c(h, 0.0), c(h, 0.0)]).unwrap();
        assert!(superposition_fidelities(&m, &psi).unwrap().f_t > 0.999);
    }

    #[test]
    fn state_validation() {
        assert!(SuperpositionState::new(vec![]).is_err());
        assert!(SuperpositionState::new(vec![c(0.5, 0.0)]).is_err());
        assert!(SuperpositionState::normalized(vec![c(0.0, 0.0)]).is_err());
        assert!(SuperpositionState::fock(3, 3).is_err());
        let even = swap_point(0.01, 0.0);
        let a = build_coupling_matrix(&NetworkConfig::new(6, 3, 1.0, 0.01, 0.0).unwrap()).unwrap();
        let m_even = propagator(&a, 3.0).unwrap();
        let psi = SuperpositionState::fock(1, 2).unwrap();
        assert_eq!(superposition_fidelities(&m_even, &psi), Err(Error::EvenChainLength(6)));
        assert_eq!(average_fidelities(&m_even, 2), Err(Error::EvenChainLength(6)));
        assert!(average_fidelities(&even, 0).is_err());
    }

    #[test]
    fn trivial_average() {
        let r = average_fidelities(&swap_point(0.01, 0.1), 1).unwrap();
        assert_abs_diff_eq!(r.f_t, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(r.f_r, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn control_point_average_transmission_near_inverse_dimension() {
        let m = swap_point(0.01, 0.1);
        for d in [2usize, 3, 5] {
            let r = average_fidelities(&m, d).unwrap();
            assert!((r.f_t - 1.0 / d as f64).abs() <= 0.02, "d={d}: {}", r.f_t);
        }
    }

    #[test]
    fn transmit_point_average_within_bound() {
        let r = average_fidelities(&swap_point(0.01, 0.0), 3).unwrap();
        assert!(r.f_t >= 1.0 - 2.7e-4, "{}", r.f_t);
    }

    #[test]
    fn oracle_trivial_cases() {
        let m = swap_point(0.01, 0.1);
        let e = haar_average_oracle(&m, 1, 500, 3).unwrap();
        assert_abs_diff_eq!(e.mean_f_t, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(e.mean_f_r, 1.0, epsilon = 1e-12);
        assert!(e.stderr_f_t < 1e-12 && e.stderr_f_r < 1e-12);

        let a = build_coupling_matrix(&NetworkConfig::new(7, 3, 1.0, 0.0, 0.0).unwrap()).unwrap();
        let m = propagator(&a, 100.0).unwrap();
        let e = haar_average_oracle(&m, 4, 2000, 9).unwrap();
        assert_abs_diff_eq!(e.mean_f_r, 1.0, epsilon = 1e-12);
        assert!(e.stderr_f_r < 1e-12);
    }

    #[test]
    fn oracle_is_deterministic_and_thread_independent() {
        let m = swap_point(0.01, 0.05);
        let a = haar_average_oracle(&m, 3, 10_000, 42).unwrap();
        let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = single.install(|| haar_average_oracle(&m, 3, 10_000, 42).unwrap());
        assert_eq!(a, b);
        let c = haar_average_oracle(&m, 3, 10_000, 43).unwrap();
        assert_ne!(a.mean_f_t, c.mean_f_t);
    }

    #[test]
    fn closed_form_average_matches_oracle() {
        let m = swap_point(0.02, 0.04);
        for d in [2usize, 4] {
            let exact = average_fidelities(&m, d).unwrap();
            let mc = haar_average_oracle(&m, d, 40_000, 11).unwrap();
            assert!((exact.f_t - mc.mean_f_t).abs() <= 4.0 * mc.stderr_f_t);
            assert!((exact.f_r - mc.mean_f_r).abs() <= 4.0 * mc.stderr_f_r);
        }
    }

    #[test]
    fn spectral_reuse_matches_fresh_propagator() {
        let config = NetworkConfig::new(7, 3, 1.0, 0.01, 0.1).unwrap();
        let a = build_coupling_matrix(&config).unwrap();
        let spectral = Spectral::new(&a).unwrap();
        let t = 123.0;
        assert_eq!(
            fock_fidelities(&spectral.propagator(t), 3),
            fock_fidelities(&propagator(&a, t).unwrap(), 3)
        );
    }
}
