//! Cavity photons, polariton branches and Hopfield weights.
//!
//! The detuning carries a factor one half, δ_k = (ω_cav(k) − ω_ex(k))/2, and
//! the branches are Ω±(k) = (ω_cav + ω_ex)/2 ± √(δ_k² + g²). With δ_k > 0 the
//! photon lies above the exciton and the lower branch is exciton-like.

use core::f64::consts::PI;

#[allow(unused_imports)] // inherent f64 methods shadow these when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::exciton::{eval_band, BandKind, BandModel};
use crate::units::{CavityParams, HBAR_C};

/// Warn when k₀a exceeds this fraction of π.
const K0_WARN_FRACTION: f64 = 0.1;

/// ħω_cav(k) = (ħc/√ε)·√(k² + (π/L)²).
pub fn cavity_dispersion(c: &CavityParams, k: f64) -> Result<f64> {
    if !(k >= 0.0) {
        return Err(Error::WaveVector { k, reason: "must be non-negative" });
    }
    let kz = PI / c.l;
    Ok(HBAR_C / c.epsilon.sqrt() * k.hypot(kz))
}

/// δ_k = (ω_cav(k) − ω_ex(k))/2.
pub fn detuning(c: &CavityParams, b: &BandModel, k: f64) -> Result<f64> {
    Ok(0.5 * (cavity_dispersion(c, k)? - eval_band(b, k)?))
}

/// Exciton (X) and photon (Y) amplitudes of both branches.
///
/// Signs: X₋, Y₋ ≥ 0, X₊ = Y₋ and Y₊ = −X₋, so that the matrix
/// [[X₊, Y₊], [X₋, Y₋]] is orthogonal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfieldWeights {
    pub x_plus: f64,
    pub y_plus: f64,
    pub x_minus: f64,
    pub y_minus: f64,
}

impl HopfieldWeights {
    /// Weights for detuning δ and coupling g > 0. |X₋|² = (Δ + δ)/(2Δ) and
    /// |Y₋|² = (Δ − δ)/(2Δ); whichever of Δ ± δ would cancel is rewritten as
    /// g²/(Δ ∓ δ).
    pub fn from_detuning(delta: f64, g: f64) -> Result<Self> {
        if g == 0.0 {
            return Err(Error::DegenerateCoupling);
        }
        if !(g > 0.0) || !delta.is_finite() {
            return Err(Error::param("g", g, "coupling must be positive and detuning finite"));
        }
        let big = delta.hypot(g);
        let (sum, diff) = if delta >= 0.0 {
            (big + delta, g * g / (big + delta))
        } else {
            (g * g / (big - delta), big - delta)
        };
        let x2 = sum / (sum + diff);
        let y2 = diff / (sum + diff);
        let x_minus = x2.sqrt();
        let y_minus = y2.sqrt();
        Ok(Self {
            x_plus: y_minus,
            y_plus: -x_minus,
            x_minus,
            y_minus,
        })
    }

    pub fn x_minus_sq(&self) -> f64 {
        self.x_minus * self.x_minus
    }

    pub fn y_minus_sq(&self) -> f64 {
        self.y_minus * self.y_minus
    }

    pub fn x_plus_sq(&self) -> f64 {
        self.x_plus * self.x_plus
    }

    pub fn y_plus_sq(&self) -> f64 {
        self.y_plus * self.y_plus
    }
}

/// Both polariton branches at one wave vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPoint {
    pub k: f64,
    pub omega_cav: f64,
    pub omega_ex: f64,
    /// δ_k (eV).
    pub detuning: f64,
    /// Δ_k = √(δ_k² + g²) (eV).
    pub half_splitting: f64,
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub weights: HopfieldWeights,
}

pub fn branches(c: &CavityParams, b: &BandModel, k: f64) -> Result<BranchPoint> {
    let omega_cav = cavity_dispersion(c, k)?;
    let omega_ex = eval_band(b, k)?;
    let delta = 0.5 * (omega_cav - omega_ex);
    let weights = HopfieldWeights::from_detuning(delta, c.g)?;
    let half = delta.hypot(c.g);
    let mid = 0.5 * (omega_cav + omega_ex);
    Ok(BranchPoint {
        k,
        omega_cav,
        omega_ex,
        detuning: delta,
        half_splitting: half,
        omega_plus: mid + half,
        omega_minus: mid - half,
        weights,
    })
}

/// Polariton band width Δ_p = ħ²π²/(2m_p a²) for the photon-like mass
/// m_p = ħπ√ε/(cL), i.e. Δ_p = πħcL/(2√ε a²).
pub fn polariton_band_width(c: &CavityParams, a: f64) -> f64 {
    PI * HBAR_C * c.l / (2.0 * c.epsilon.sqrt() * a * a)
}

/// Parabolic model of the lower branch: E₋(k) = Ω₋(0) + Δ_p(ka/π)².
pub fn lower_polariton_parabolic(c: &CavityParams, b: &BandModel) -> Result<BandModel> {
    let p = branches(c, b, 0.0)?;
    BandModel::new(
        p.omega_minus,
        polariton_band_width(c, b.a),
        b.a,
        BandKind::LowerPolaritonParabolic,
    )
}

/// Wave vector where the parabolic lower branch meets the flat exciton-like
/// part at `e_flat`: k₀ = (π/a)√((E_flat − Ω₋(0))/Δ_p).
pub fn crossover_k0(c: &CavityParams, b: &BandModel, e_flat: f64) -> Result<f64> {
    let lp = lower_polariton_parabolic(c, b)?;
    k0_from_band(&lp, e_flat)
}

fn k0_from_band(lp: &BandModel, e_flat: f64) -> Result<f64> {
    let excess = e_flat - lp.e0;
    if !(excess > 0.0) {
        return Err(Error::param(
            "E_flat",
            e_flat,
            "flat-band energy must lie above the lower-branch edge",
        ));
    }
    let k0 = PI / lp.a * (excess / lp.delta).sqrt();
    if k0 * lp.a > K0_WARN_FRACTION * PI {
        log::warn!("k0·a = {:.3e} is not small compared with π", k0 * lp.a);
    }
    Ok(k0)
}

/// Lower polariton branch with the two-part model used for the static sum:
/// parabolic below k₀, flat at `e_flat` above.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolaritonBranch {
    pub exciton: BandModel,
    pub cavity: CavityParams,
    /// Parabolic lower-branch model E₋(k).
    pub parabolic: BandModel,
    /// Energy of the flat part (eV).
    pub e_flat: f64,
    /// Crossover wave vector k₀ (Å⁻¹).
    pub k0: f64,
}

impl PolaritonBranch {
    pub fn lower(cavity: &CavityParams, exciton: &BandModel, e_flat: f64) -> Result<Self> {
        let parabolic = lower_polariton_parabolic(cavity, exciton)?;
        let k0 = k0_from_band(&parabolic, e_flat)?;
        Ok(Self {
            exciton: *exciton,
            cavity: *cavity,
            parabolic,
            e_flat,
            k0,
        })
    }

    /// Δ_p (eV).
    pub fn delta_p(&self) -> f64 {
        self.parabolic.delta
    }

    pub fn at(&self, k: f64) -> Result<BranchPoint> {
        branches(&self.cavity, &self.exciton, k)
    }

    /// |X₋(k)|² from the full two-level branches.
    pub fn exciton_weight(&self, k: f64) -> Result<f64> {
        Ok(self.at(k)?.weights.x_minus_sq())
    }

    /// E₋(k) of the parabolic model.
    pub fn energy(&self, k: f64) -> Result<f64> {
        eval_band(&self.parabolic, k)
    }

    /// Λ_k = E_flat − E₋(k).
    pub fn lambda(&self, k: f64) -> Result<f64> {
        Ok(self.e_flat - self.energy(k)?)
    }
}
