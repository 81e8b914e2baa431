//! Unit convention and validated parameter records.
//!
//! Energies in eV, lengths in Å, wave vectors in Å⁻¹. Frequencies are stored
//! as energies ħω.

use core::f64::consts::PI;

#[allow(unused_imports)] // inherent f64 methods shadow these when std is linked
use num_traits::Float;

use crate::error::{Error, Result};

/// ħc in eV·Å.
pub const HBAR_C: f64 = 1973.269804;

/// Inverse fine-structure constant.
pub const INV_FINE_STRUCTURE: f64 = 137.035999084;

/// e²/(4πε₀) in eV·Å, i.e. αħc.
pub const COULOMB_EV_ANGSTROM: f64 = HBAR_C / INV_FINE_STRUCTURE;

/// Lattice occupancy in the Mott phase.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Occupancy {
    Single,
    Double,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeParams {
    /// Lattice constant (Å).
    pub a: f64,
    /// Sites per dimension, used by the finite-lattice oracle and the wavefield grid.
    pub n_side: usize,
    pub occupancy: Occupancy,
}

impl LatticeParams {
    pub fn new(a: f64, n_side: usize, occupancy: Occupancy) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::param("a", a, "lattice constant must be positive"));
        }
        if n_side < 4 {
            return Err(Error::param("N_side", n_side as f64, "need at least 4 sites per side"));
        }
        Ok(Self { a, n_side, occupancy })
    }

    /// Brillouin-zone boundary π/a.
    pub fn zone_boundary(&self) -> f64 {
        PI / self.a
    }

    pub fn sites(&self) -> usize {
        self.n_side * self.n_side
    }
}

/// Atomic and transfer energies. `j` is used for single occupancy, `j0`/`j1`
/// for double occupancy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomParams {
    /// Atomic transition energy ħω_A.
    pub e_a: f64,
    /// Nearest-neighbour transfer energy ħJ.
    pub j: f64,
    /// On-site transfer energy ħJ₀ between the two atoms of a doubly occupied site.
    pub j0: f64,
    /// Nearest-neighbour transfer energy ħJ₁ for doubly occupied sites.
    pub j1: f64,
}

impl AtomParams {
    pub fn new(e_a: f64, j: f64, j0: f64, j1: f64) -> Result<Self> {
        if !(e_a > 0.0) {
            return Err(Error::param("E_A", e_a, "transition energy must be positive"));
        }
        for (name, v) in [("J", j), ("J0", j0), ("J1", j1)] {
            if !v.is_finite() {
                return Err(Error::param(name, v, "must be finite"));
            }
        }
        Ok(Self { e_a, j, j0, j1 })
    }

    pub fn single(e_a: f64, j: f64) -> Result<Self> {
        Self::new(e_a, j, 0.0, 0.0)
    }

    pub fn double(e_a: f64, j0: f64, j1: f64) -> Result<Self> {
        Self::new(e_a, 0.0, j0, j1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityParams {
    /// Mirror spacing L (Å).
    pub l: f64,
    /// Dielectric constant of the cavity medium.
    pub epsilon: f64,
    /// Exciton-photon coupling ħ|g| (eV), taken real and non-negative.
    pub g: f64,
}

impl CavityParams {
    pub fn new(l: f64, epsilon: f64, g: f64) -> Result<Self> {
        if !(l > 0.0) {
            return Err(Error::param("L", l, "mirror spacing must be positive"));
        }
        if !(epsilon >= 1.0) {
            return Err(Error::param("epsilon", epsilon, "dielectric constant must be >= 1"));
        }
        if !(g >= 0.0) {
            return Err(Error::param("g", g, "coupling must be non-negative"));
        }
        Ok(Self { l, epsilon, g })
    }

    /// Cavity whose k = 0 photon energy equals `energy`.
    pub fn resonant_with(energy: f64, epsilon: f64, g: f64) -> Result<Self> {
        if !(energy > 0.0) {
            return Err(Error::param("energy", energy, "photon energy must be positive"));
        }
        if !(epsilon >= 1.0) {
            return Err(Error::param("epsilon", epsilon, "dielectric constant must be >= 1"));
        }
        Self::new(resonant_length(energy, epsilon), epsilon, g)
    }

    /// ħω_cav(0) = ħcπ/(√ε L).
    pub fn cutoff_energy(&self) -> f64 {
        HBAR_C * PI / (self.epsilon.sqrt() * self.l)
    }
}

/// Mirror spacing for which the k = 0 cavity photon has energy `energy`.
pub fn resonant_length(energy: f64, epsilon: f64) -> f64 {
    HBAR_C * PI / (epsilon.sqrt() * energy)
}

/// Doubly occupied site elongated along x, probed with in-plane polarization
/// at angle `theta` (radians) to the elongation axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymmetricSiteParams {
    /// ħJ̄ (eV).
    pub j_bar: f64,
    pub theta: f64,
}

impl AsymmetricSiteParams {
    pub fn new(j_bar: f64, theta: f64) -> Result<Self> {
        if !(j_bar > 0.0) {
            return Err(Error::param("J_bar", j_bar, "must be positive"));
        }
        if !theta.is_finite() {
            return Err(Error::param("theta", theta, "must be finite"));
        }
        Ok(Self { j_bar, theta })
    }

    /// Derive J̄ from the transition dipole (e·Å) and intra-site separation (Å).
    pub fn from_dipole(mu: f64, r: f64, theta: f64) -> Result<Self> {
        Self::new(jbar_from_dipole(mu, r)?, theta)
    }

    pub fn with_theta(self, theta: f64) -> Self {
        Self { theta, ..self }
    }

    pub fn j0(&self) -> f64 {
        j0_of_theta(self)
    }
}

/// On-site dipole-dipole transfer J₀(θ) = J̄(1 − 3cos²θ).
pub fn j0_of_theta(p: &AsymmetricSiteParams) -> f64 {
    let c = p.theta.cos();
    p.j_bar * (1.0 - 3.0 * c * c)
}

/// Angle at which J₀(θ) vanishes, arccos(1/√3).
pub fn magic_angle() -> f64 {
    (1.0 / 3.0_f64.sqrt()).acos()
}

/// ħJ̄ = μ²/(4πε₀R³) with μ in e·Å and R in Å.
pub fn jbar_from_dipole(mu: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::param("R", r, "separation must be positive"));
    }
    if !mu.is_finite() {
        return Err(Error::param("mu", mu, "must be finite"));
    }
    Ok(COULOMB_EV_ANGSTROM * mu * mu / (r * r * r))
}
