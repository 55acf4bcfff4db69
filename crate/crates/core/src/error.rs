use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid network configuration: {0}")]
    InvalidConfig(String),

    #[error("chain length N = {0} is even; the zero-energy mode only exists for odd N")]
    EvenChainLength(usize),

    #[error("boundary coupling g0 is zero; the swap time is undefined")]
    ZeroCoupling,

    #[error("auxiliary resonator does not couple to the zero mode (m = {tap_site}, j0 = {j0})")]
    DegenerateTap { tap_site: usize, j0: f64 },

    #[error("symmetric eigensolver failed to converge on a {0}x{0} matrix")]
    EigFailure(usize),

    #[error("mode index {index} out of range for a {dim}-mode network")]
    ModeOutOfRange { index: usize, dim: usize },

    #[error("photon number {0} exceeds the supported maximum of {max}", max = crate::transport::MAX_PHOTONS)]
    PhotonNumberTooLarge(usize),

    #[error("invalid input state: {0}")]
    InvalidState(String),

    #[error("fidelity has imaginary residue {0:e}; expected a real value")]
    ComplexFidelity(f64),
}

impl Error {
    /// True for failures that point at numerical trouble rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::EigFailure(_) | Error::ComplexFidelity(_))
    }
}
