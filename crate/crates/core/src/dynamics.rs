//! Single-excitation propagators `M(t) = exp(-i A t)`.
//!
//! `M` is assembled from a real symmetric eigendecomposition of `A`. The
//! coupling graph is split into connected components first, so resonators
//! that are switched off (for example the boundaries at `g0 = 0`) evolve as
//! exact identities rather than picking up eigensolver roundoff.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::CouplingMatrix;

const EIG_TOLERANCE: f64 = f64::EPSILON;
const EIG_MAX_ITER: usize = 10_000;

/// Eigendecomposition of one connected block of `A`.
#[derive(Debug, Clone)]
struct Block {
    sites: Vec<usize>,
    values: Vec<f64>,
    /// Column `k` is the eigenvector for `values[k]`, in `sites` order.
    vectors: DMatrix<f64>,
}

/// Cached spectral decomposition of a coupling matrix, reusable across times.
#[derive(Debug, Clone)]
pub struct Spectral {
    dim: usize,
    chain_len: usize,
    blocks: Vec<Block>,
    /// `(block, position)` of each site.
    location: Vec<(usize, usize)>,
}

impl Spectral {
    pub fn new(a: &CouplingMatrix) -> Result<Self> {
        Self::from_symmetric(a.entries(), a.chain_len())
    }

    pub(crate) fn from_symmetric(entries: &DMatrix<f64>, chain_len: usize) -> Result<Self> {
        let dim = entries.nrows();
        let mut blocks = Vec::new();
        let mut location = vec![(usize::MAX, 0); dim];
        for sites in connected_components(entries) {
            let b = blocks.len();
            for (pos, &site) in sites.iter().enumerate() {
                location[site] = (b, pos);
            }
            let sub = DMatrix::from_fn(sites.len(), sites.len(), |i, j| entries[(sites[i], sites[j])]);
            let (values, vectors) = if sites.len() == 1 {
                (vec![sub[(0, 0)]], DMatrix::identity(1, 1))
            } else {
                let eig = SymmetricEigen::try_new(sub, EIG_TOLERANCE, EIG_MAX_ITER)
                    .ok_or(Error::EigFailure(sites.len()))?;
                (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
            };
            blocks.push(Block {
                sites,
                values,
                vectors,
            });
        }
        Ok(Self {
            dim,
            chain_len,
            blocks,
            location,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// All eigenvalues of `A`, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut values: Vec<f64> = self.blocks.iter().flat_map(|b| b.values.iter().copied()).collect();
        values.sort_by(f64::total_cmp);
        values
    }

    /// Single entry `M_ij(t)` without forming the full matrix.
    pub fn element(&self, i: usize, j: usize, t: f64) -> Complex64 {
        let (bi, pi) = self.location[i];
        let (bj, pj) = self.location[j];
        if bi != bj {
            return Complex64::new(0.0, 0.0);
        }
        let block = &self.blocks[bi];
        block
            .values
            .iter()
            .enumerate()
            .map(|(k, &lambda)| {
                let weight = block.vectors[(pi, k)] * block.vectors[(pj, k)];
                Complex64::from_polar(weight, -lambda * t)
            })
            .sum()
    }

    pub fn propagator(&self, t: f64) -> Propagator {
        let mut matrix = DMatrix::from_element(self.dim, self.dim, Complex64::new(0.0, 0.0));
        for block in &self.blocks {
            let phases: Vec<Complex64> = block
                .values
                .iter()
                .map(|&lambda| Complex64::from_polar(1.0, -lambda * t))
                .collect();
            for (a, &sa) in block.sites.iter().enumerate() {
                for (b, &sb) in block.sites.iter().enumerate().skip(a) {
                    let entry: Complex64 = phases
                        .iter()
                        .enumerate()
                        .map(|(k, phase)| phase * (block.vectors[(a, k)] * block.vectors[(b, k)]))
                        .sum();
                    matrix[(sa, sb)] = entry;
                    matrix[(sb, sa)] = entry;
                }
            }
        }
        Propagator {
            time: t,
            chain_len: self.chain_len,
            matrix,
        }
    }
}

fn connected_components(entries: &DMatrix<f64>) -> Vec<Vec<usize>> {
    let dim = entries.nrows();
    let mut seen = vec![false; dim];
    let mut components = Vec::new();
    for root in 0..dim {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut stack = vec![root];
        let mut sites = Vec::new();
        while let Some(i) = stack.pop() {
            sites.push(i);
            for j in 0..dim {
                if !seen[j] && (entries[(i, j)] != 0.0 || entries[(j, i)] != 0.0) {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        sites.sort_unstable();
        components.push(sites);
    }
    components
}

/// `M = exp(-i A t)` together with the time it represents.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagator {
    time: f64,
    chain_len: usize,
    matrix: DMatrix<Complex64>,
}

impl Propagator {
    #[cfg(test)]
    pub(crate) fn from_parts(time: f64, chain_len: usize, matrix: DMatrix<Complex64>) -> Self {
        Self {
            time,
            chain_len,
            matrix,
        }
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn chain_len(&self) -> usize {
        self.chain_len
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn element(&self, i: usize, j: usize) -> Complex64 {
        self.matrix[(i, j)]
    }

    /// Index of the right boundary resonator, `N + 1`.
    pub fn right(&self) -> usize {
        self.chain_len + 1
    }

    /// `max |(M^dag M - I)_ij|`.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.dim();
        let gram = self.matrix.adjoint() * &self.matrix;
        (gram - DMatrix::<Complex64>::identity(n, n))
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max)
    }

    /// `max |M_ij - M_ji|`.
    pub fn symmetry_error(&self) -> f64 {
        (&self.matrix - self.matrix.transpose())
            .iter()
            .map(|x| x.norm())
            .fold(0.0, f64::max)
    }
}

pub fn propagator(a: &CouplingMatrix, t: f64) -> Result<Propagator> {
    Ok(Spectral::new(a)?.propagator(t))
}

/// Heisenberg-picture coefficients of `c_0^dag(t)` in the three-mode model
/// (left boundary, right boundary, zero mode) with the auxiliary resonator off.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveAmplitudes {
    pub left: Complex64,
    pub right: Complex64,
    pub zero_mode: Complex64,
}

impl EffectiveAmplitudes {
    pub fn norm_sqr(&self) -> f64 {
        self.left.norm_sqr() + self.right.norm_sqr() + self.zero_mode.norm_sqr()
    }
}

fn parity(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub fn effective_boundary_amplitudes(g_z: f64, z: usize, t: f64) -> EffectiveAmplitudes {
    let theta = 2f64.sqrt() * g_z * t;
    let shift = 0.5 * (theta.cos() - 1.0);
    EffectiveAmplitudes {
        left: Complex64::new(1.0 + shift, 0.0),
        right: Complex64::new(parity(z + 1) * shift, 0.0),
        zero_mode: Complex64::new(0.0, theta.sin() / 2f64.sqrt()),
    }
}

/// Exponential of a star Hamiltonian `H = |hub><b| + |b><hub|` scaled by the
/// norm of `bright`, where `bright` is the (unnormalized) vector of couplings
/// from the hub to the other modes. With `b` the normalized bright vector and
/// `w = |bright|`:
///
/// `exp(-iHt) = I + (cos wt - 1)(|b><b| + |hub><hub|) - i sin wt (|b><hub| + |hub><b|)`.
fn star_exponential(dim: usize, hub: usize, bright: &[f64], t: f64) -> DMatrix<Complex64> {
    let w = bright.iter().map(|x| x * x).sum::<f64>().sqrt();
    let mut u = DMatrix::<Complex64>::identity(dim, dim);
    if w == 0.0 {
        return u;
    }
    let b: Vec<f64> = bright.iter().map(|x| x / w).collect();
    let (s, c) = (w * t).sin_cos();
    for i in 0..dim {
        for j in 0..dim {
            let projector = b[i] * b[j] + if i == hub && j == hub { 1.0 } else { 0.0 };
            let hop = if i == hub { b[j] } else { 0.0 } + if j == hub { b[i] } else { 0.0 };
            u[(i, j)] += Complex64::new((c - 1.0) * projector, -s * hop);
        }
    }
    u
}

/// Exact `exp(-i H t)` of the three-mode channel on `{left, zero mode, right}`:
/// `H = g_z (|e1><e2| + (-1)^(z-1) |e3><e2| + h.c.)`.
pub fn effective_propagator_uncoupled(g_z: f64, z: usize, t: f64) -> DMatrix<Complex64> {
    star_exponential(3, 1, &[g_z, 0.0, parity(z + 1) * g_z], t)
}

/// Exact `exp(-i H t)` of the four-mode model on `{left, zero mode, right, auxiliary}`:
/// the three-mode channel plus `J_z (|e4><e2| + h.c.)`.
pub fn effective_propagator_coupled(g_z: f64, j_z: f64, z: usize, t: f64) -> Result<DMatrix<Complex64>> {
    if j_z == 0.0 {
        return Err(Error::DegenerateTap {
            tap_site: 0,
            j0: 0.0,
        });
    }
    Ok(star_exponential(4, 1, &[g_z, 0.0, parity(z + 1) * g_z, j_z], t))
}

/// The three-mode channel Hamiltonian as a dense matrix.
pub fn effective_hamiltonian_uncoupled(g_z: f64, z: usize) -> DMatrix<f64> {
    let s = parity(z + 1) * g_z;
    DMatrix::from_row_slice(3, 3, &[0.0, g_z, 0.0, g_z, 0.0, s, 0.0, s, 0.0])
}

/// The four-mode Hamiltonian (channel plus auxiliary) as a dense matrix.
pub fn effective_hamiltonian_coupled(g_z: f64, j_z: f64, z: usize) -> DMatrix<f64> {
    let s = parity(z + 1) * g_z;
    DMatrix::from_row_slice(
        4,
        4,
        &[
            0.0, g_z, 0.0, 0.0, //
            g_z, 0.0, s, j_z, //
            0.0, s, 0.0, 0.0, //
            0.0, j_z, 0.0, 0.0,
        ],
    )
}
