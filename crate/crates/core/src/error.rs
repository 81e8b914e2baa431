use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("negative effective mass: transfer energy {name} = {value} eV must be negative")]
    NegativeMass { name: &'static str, value: f64 },

    #[error("wave vector out of domain: k = {k} Å⁻¹ ({reason})")]
    WaveVector { k: f64, reason: &'static str },

    #[error("exciton-photon coupling is zero; use the bare bands instead")]
    DegenerateCoupling,

    #[error("singular denominator: Λ_k = {lambda} eV")]
    SingularDenominator { lambda: f64 },

    #[error("occupancy mismatch: {0}")]
    OccupancyMismatch(&'static str),

    #[error("wave vector ({kx}, {ky}) Å⁻¹ is not on the reciprocal grid of a {n_side}×{n_side} lattice")]
    OffGrid { kx: f64, ky: f64, n_side: usize },

    #[error("no convergence after {iterations} refinements (last estimate {estimate}, error {error})")]
    Convergence {
        iterations: usize,
        estimate: f64,
        error: f64,
    },

    #[error("far-field extraction failed at eta = {eta} eV: relative residual {residual} above {threshold}")]
    Extraction {
        eta: f64,
        residual: f64,
        threshold: f64,
    },

    #[error("k-space resolution {dk} Å⁻¹ too coarse for |k_in| = {k_in} Å⁻¹")]
    Resolution { dk: f64, k_in: f64 },
}

impl Error {
    pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }

    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Convergence { .. } | Error::Extraction { .. } | Error::SingularDenominator { .. }
        )
    }
}
