//! Parabolic exciton bands for singly and doubly occupied lattices.
//!
//! A band is stored as its edge E(0) and its effective width
//! Δ = ħ²π²/(2ma²), so that E(k) = E(0) + Δ·(ka/π)². Effective masses never
//! appear explicitly.
//!
//! The single-occupancy edge is E_A − 2J as used throughout the scattering
//! formulas. For nearest-neighbour transfer on a square lattice (four
//! neighbours) one would expect E_A + 4J; the two differ only by a constant
//! shift of the band, which never enters an amplitude.

use core::f64::consts::PI;

#[allow(unused_imports)] // inherent f64 methods shadow these when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::units::{AtomParams, LatticeParams, Occupancy};

/// Above this value of ka the quadratic band is no longer a good
/// approximation to the tight-binding cosine band.
pub const PARABOLIC_KA_LIMIT: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandKind {
    Exciton,
    SymmetricExciton,
    LowerPolaritonParabolic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandModel {
    /// Band edge E(k = 0) (eV).
    pub e0: f64,
    /// Effective band width Δ (eV).
    pub delta: f64,
    /// Lattice constant (Å).
    pub a: f64,
    pub kind: BandKind,
}

impl BandModel {
    pub fn new(e0: f64, delta: f64, a: f64, kind: BandKind) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::param("delta", delta, "band width must be positive"));
        }
        if !(a > 0.0) {
            return Err(Error::param("a", a, "lattice constant must be positive"));
        }
        if !e0.is_finite() {
            return Err(Error::param("E0", e0, "band edge must be finite"));
        }
        Ok(Self { e0, delta, a, kind })
    }

    /// E(k) = E(0) + Δ(ka/π)².
    pub fn energy(&self, k: f64) -> Result<f64> {
        eval_band(self, k)
    }

    /// Kinetic part Δ(ka/π)², without domain checks.
    pub fn kinetic(&self, k: f64) -> f64 {
        let x = k * self.a / PI;
        self.delta * x * x
    }

    /// Magnitude of the wave vector at which the band reaches `energy`.
    pub fn wave_vector_at(&self, energy: f64) -> Option<f64> {
        let excess = energy - self.e0;
        (excess >= 0.0).then(|| PI / self.a * (excess / self.delta).sqrt())
    }

    /// ħ²/(2m) in eV·Å², the coefficient of k².
    pub fn kinetic_coefficient(&self) -> f64 {
        self.delta * self.a * self.a / (PI * PI)
    }
}

/// Exciton band of the singly occupied lattice: E(0) = E_A − 2J and
/// Δ = π²|J| (from m = −ħ/(2Ja²)).
pub fn exciton_band(lat: &LatticeParams, at: &AtomParams) -> Result<BandModel> {
    if lat.occupancy != Occupancy::Single {
        return Err(Error::OccupancyMismatch("exciton_band needs a singly occupied lattice"));
    }
    if !(at.j < 0.0) {
        return Err(Error::NegativeMass { name: "J", value: at.j });
    }
    BandModel::new(at.e_a - 2.0 * at.j, PI * PI * at.j.abs(), lat.a, BandKind::Exciton)
}

/// Symmetric-exciton band of the doubly occupied lattice:
/// E(0) = E_A + J₀ + 8J₁ and Δ = 2π²|J₁| (from m = −ħ/(4J₁a²)).
pub fn symmetric_exciton_band(lat: &LatticeParams, at: &AtomParams) -> Result<BandModel> {
    if lat.occupancy != Occupancy::Double {
        return Err(Error::OccupancyMismatch(
            "symmetric_exciton_band needs a doubly occupied lattice",
        ));
    }
    symmetric_band_with_j0(lat.a, at, at.j0)
}

/// Symmetric band with an explicit on-site transfer, used when J₀ depends on
/// the polarization angle.
pub(crate) fn symmetric_band_with_j0(a: f64, at: &AtomParams, j0: f64) -> Result<BandModel> {
    if !(at.j1 < 0.0) {
        return Err(Error::NegativeMass { name: "J1", value: at.j1 });
    }
    BandModel::new(
        at.e_a + j0 + 8.0 * at.j1,
        2.0 * PI * PI * at.j1.abs(),
        a,
        BandKind::SymmetricExciton,
    )
}

pub fn eval_band(b: &BandModel, k: f64) -> Result<f64> {
    if !(k >= 0.0) {
        return Err(Error::WaveVector { k, reason: "must be non-negative" });
    }
    if k * b.a > PARABOLIC_KA_LIMIT {
        log::warn!(
            "ka = {:.3} exceeds {PARABOLIC_KA_LIMIT}; parabolic band is inaccurate",
            k * b.a
        );
    }
    Ok(b.e0 + b.kinetic(k))
}
