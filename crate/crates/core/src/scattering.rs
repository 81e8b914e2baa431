//! Closed-form scattering amplitudes off a single-site defect.
//!
//! Scattered waves are written as ψ = e^{ik·r} + f·√(iπ/2kr)·e^{ikr}. With
//! this convention the rank-1 T-matrix solution gives f = S·I_os/(1 − S·I_st)
//! stripped of its radial factor, and a positive f corresponds to an
//! attractive effective potential.
//!
//! Exciton amplitude:
//!   f = β / (1 + β[ln(ka/π) − iπ/2]),   β = πS/(2Δ).
//!
//! Lower-polariton amplitude (vacancy, two-atom and asymmetric sites):
//!   f = X_k²·(πS/2Δ_p) / (1 − S·I_st),
//! with I_st = π/(4Λ_k) by default, or the full
//!   I_st = −(πX_k²/2Δ_p)[ln(k/k₀) − iπ/2] + π/(4Λ_k)
//! when [`Denominator::Exact`] is requested.

use alloc::vec::Vec;

use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 methods shadow these when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::exciton::{symmetric_band_with_j0, BandModel};
use crate::polariton::PolaritonBranch;
use crate::special::outgoing_wave;
use crate::units::{j0_of_theta, resonant_length, AsymmetricSiteParams, CavityParams, Occupancy};

/// Ratio strength/Δ above which the exciton amplitude is classified as
/// scattering off a hard disk.
pub const HARD_DISK_RATIO: f64 = 100.0;

/// Denominators of the asymmetric-site amplitude below this magnitude (eV)
/// are reported as poles.
pub const POLE_TOLERANCE_EV: f64 = 1e-9;

/// Probe wave vector standing in for k → 0 in detuning and angle sweeps (Å⁻¹).
pub const K_PROBE: f64 = 1e-6;

const KA_WARN: f64 = 0.1;
const KA_MAX: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefectSpec {
    /// S (eV): E_a for a vacancy, J₀ for a singly occupied site in a doubly
    /// occupied lattice.
    pub strength: f64,
    pub occupancy: Occupancy,
    /// Dipole angle for asymmetric sites.
    pub theta: Option<f64>,
}

impl DefectSpec {
    /// Vacancy in a singly occupied lattice.
    pub fn vacancy(e_a: f64) -> Result<Self> {
        if !(e_a > 0.0) {
            return Err(Error::param("E_a", e_a, "vacancy strength must be positive"));
        }
        Ok(Self {
            strength: e_a,
            occupancy: Occupancy::Single,
            theta: None,
        })
    }

    /// Singly occupied site in a doubly occupied lattice.
    pub fn two_atom(j0: f64) -> Result<Self> {
        if !j0.is_finite() {
            return Err(Error::param("J0", j0, "must be finite"));
        }
        Ok(Self {
            strength: j0,
            occupancy: Occupancy::Double,
            theta: None,
        })
    }

    /// Singly occupied elongated site probed at angle θ.
    pub fn asymmetric(p: &AsymmetricSiteParams) -> Self {
        Self {
            strength: j0_of_theta(p),
            occupancy: Occupancy::Double,
            theta: Some(p.theta),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PotentialClass {
    HardDisk,
    RepulsiveBarrier,
    AttractiveWell,
    /// f = 0: the defect does not scatter.
    Transparent,
}

impl PotentialClass {
    pub fn from_amplitude(f: Complex64) -> Self {
        if f.re < 0.0 {
            PotentialClass::RepulsiveBarrier
        } else if f.re > 0.0 {
            PotentialClass::AttractiveWell
        } else {
            PotentialClass::Transparent
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            PotentialClass::HardDisk => "hard_disk",
            PotentialClass::RepulsiveBarrier => "repulsive_barrier",
            PotentialClass::AttractiveWell => "attractive_well",
            PotentialClass::Transparent => "transparent",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringResult {
    pub k: f64,
    pub f: Complex64,
    /// σ = 2π|f|².
    pub sigma: f64,
    pub potential_class: PotentialClass,
    /// Height −Re(f)·Δ of the equivalent square potential of width a (eV);
    /// negative for wells.
    pub effective_height: f64,
    /// Width of the equivalent potential (Å).
    pub effective_width: f64,
    /// 1 − S·I_st.
    pub denominator: Complex64,
}

impl ScatteringResult {
    fn new(k: f64, f: Complex64, delta: f64, a: f64, denominator: Complex64, class: PotentialClass) -> Self {
        Self {
            k,
            f,
            sigma: cross_section(f),
            potential_class: class,
            effective_height: -f.re * delta,
            effective_width: a,
            denominator,
        }
    }
}

pub fn cross_section(f: Complex64) -> f64 {
    2.0 * PI * f.norm_sqr()
}

/// Choice of static sum in the polariton denominators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Denominator {
    /// I_st ≈ π/(4Λ_k).
    #[default]
    Approximate,
    /// I_st including the logarithmic parabolic-part term.
    Exact,
}

fn check_ka(k: f64, a: f64) -> Result<()> {
    if !(k > 0.0) {
        return Err(Error::WaveVector { k, reason: "amplitude is singular at k = 0" });
    }
    let ka = k * a;
    if ka >= KA_MAX {
        return Err(Error::WaveVector { k, reason: "ka must stay below 0.3" });
    }
    if ka > KA_WARN {
        log::warn!("ka = {ka:.3} is not small; long-wavelength amplitude is approximate");
    }
    Ok(())
}

/// Static sum for a parabolic band with Brillouin-zone cutoff,
/// I_st = −(π/2Δ)[ln(ka/π) − iπ/2].
pub fn static_integral(k: f64, band: &BandModel) -> Complex64 {
    let l = (k * band.a / PI).ln();
    -(PI / (2.0 * band.delta)) * Complex64::new(l, -FRAC_PI_2)
}

/// Oscillating sum at distance r in the far field,
/// I_os = (π/2Δ)·√(iπ/2kr)·e^{ikr}.
pub fn oscillating_integral_far_field(k: f64, r: f64, band: &BandModel) -> Complex64 {
    PI / (2.0 * band.delta) * outgoing_wave(k * r)
}

/// Exciton scattering off a vacancy (or a J₀ defect in a doubly occupied
/// lattice when `d.occupancy` is `Double`).
pub fn exciton_vacancy_amplitude(k: f64, band: &BandModel, d: &DefectSpec) -> Result<ScatteringResult> {
    check_ka(k, band.a)?;
    if d.occupancy == Occupancy::Single && !(d.strength > 0.0) {
        return Err(Error::param("E_a", d.strength, "vacancy strength must be positive"));
    }
    let beta = PI * d.strength / (2.0 * band.delta);
    let denominator = Complex64::new(1.0, 0.0) - d.strength * static_integral(k, band);
    let f = beta / denominator;
    let class = if d.strength / band.delta >= HARD_DISK_RATIO {
        PotentialClass::HardDisk
    } else {
        PotentialClass::from_amplitude(f)
    };
    Ok(ScatteringResult::new(k, f, band.delta, band.a, denominator, class))
}

/// Static sum of the two-part lower-branch model.
pub fn polariton_static_integral(k: f64, lp: &PolaritonBranch, mode: Denominator) -> Result<Complex64> {
    let lambda = lp.lambda(k)?;
    if lambda == 0.0 {
        return Err(Error::SingularDenominator { lambda });
    }
    let flat = Complex64::new(PI / (4.0 * lambda), 0.0);
    Ok(match mode {
        Denominator::Approximate => flat,
        Denominator::Exact => {
            let x2 = lp.exciton_weight(k)?;
            let l = (k / lp.k0).ln();
            flat - PI * x2 / (2.0 * lp.delta_p()) * Complex64::new(l, -FRAC_PI_2)
        }
    })
}

fn polariton_amplitude(k: f64, lp: &PolaritonBranch, strength: f64, mode: Denominator) -> Result<ScatteringResult> {
    check_ka(k, lp.parabolic.a)?;
    let x2 = lp.exciton_weight(k)?;
    let i_st = polariton_static_integral(k, lp, mode)?;
    let denominator = Complex64::new(1.0, 0.0) - strength * i_st;
    if denominator.norm() == 0.0 {
        return Err(Error::SingularDenominator { lambda: lp.lambda(k)? });
    }
    let f = x2 * PI * strength / (2.0 * lp.delta_p()) / denominator;
    let class = PotentialClass::from_amplitude(f);
    Ok(ScatteringResult::new(k, f, lp.delta_p(), lp.parabolic.a, denominator, class))
}

/// Lower-polariton scattering off a vacancy in a singly occupied lattice.
pub fn polariton_vacancy_amplitude(
    k: f64,
    lp: &PolaritonBranch,
    d: &DefectSpec,
    mode: Denominator,
) -> Result<ScatteringResult> {
    if d.occupancy != Occupancy::Single {
        return Err(Error::OccupancyMismatch("vacancy scattering needs a singly occupied lattice"));
    }
    polariton_amplitude(k, lp, d.strength, mode)
}

/// Lower-polariton scattering off a singly occupied site in a doubly
/// occupied lattice (strength J₀, flat energy E_A + J₀).
pub fn twoatom_polariton_amplitude(
    k: f64,
    lp: &PolaritonBranch,
    d: &DefectSpec,
    mode: Denominator,
) -> Result<ScatteringResult> {
    if d.occupancy != Occupancy::Double {
        return Err(Error::OccupancyMismatch("two-atom scattering needs a doubly occupied lattice"));
    }
    polariton_amplitude(k, lp, d.strength, mode)
}

/// Doubly occupied lattice with a fixed cavity, probed at a variable
/// polarization angle. The exciton band edge E_A + J₀(θ) + 8J₁ moves with θ
/// while the photon stays put, so detuning and Hopfield weights are
/// recomputed per angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymmetricSetup {
    pub a: f64,
    pub e_a: f64,
    pub j1: f64,
    pub cavity: CavityParams,
}

impl AsymmetricSetup {
    /// Cavity placed 2·`detuning` above the J₀ = 0 exciton band edge E_A + 8J₁.
    pub fn with_detuning(a: f64, e_a: f64, j1: f64, epsilon: f64, g: f64, detuning: f64) -> Result<Self> {
        let target = e_a + 8.0 * j1 + 2.0 * detuning;
        if !(target > 0.0) {
            return Err(Error::param("detuning", detuning, "cavity energy must be positive"));
        }
        let cavity = CavityParams::new(resonant_length(target, epsilon), epsilon, g)?;
        Ok(Self { a, e_a, j1, cavity })
    }

    pub fn branch(&self, j0: f64) -> Result<PolaritonBranch> {
        let atoms = crate::units::AtomParams::double(self.e_a, j0, self.j1)?;
        let band = symmetric_band_with_j0(self.a, &atoms, j0)?;
        PolaritonBranch::lower(&self.cavity, &band, self.e_a + j0)
    }

    /// Λ_k·(1 − S·I_st) in eV; its zeros are the amplitude poles.
    pub fn denominator_energy(&self, k: f64, p: &AsymmetricSiteParams, mode: Denominator) -> Result<Complex64> {
        let j0 = j0_of_theta(p);
        let lp = self.branch(j0)?;
        let lambda = lp.lambda(k)?;
        let i_st = polariton_static_integral(k, &lp, mode)?;
        Ok(lambda * (Complex64::new(1.0, 0.0) - j0 * i_st))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AsymmetricOutcome {
    Finite(ScatteringResult),
    /// |Λ_k(1 − S·I_st)| below [`POLE_TOLERANCE_EV`].
    Pole { theta: f64, denominator_energy: Complex64 },
}

pub fn asymmetric_amplitude(
    k: f64,
    setup: &AsymmetricSetup,
    p: &AsymmetricSiteParams,
    mode: Denominator,
) -> Result<AsymmetricOutcome> {
    let de = setup.denominator_energy(k, p, mode)?;
    if de.norm() < POLE_TOLERANCE_EV {
        return Ok(AsymmetricOutcome::Pole {
            theta: p.theta,
            denominator_energy: de,
        });
    }
    let lp = setup.branch(j0_of_theta(p))?;
    let d = DefectSpec::asymmetric(p);
    Ok(AsymmetricOutcome::Finite(polariton_amplitude(k, &lp, d.strength, mode)?))
}

/// A resonance located between two sweep angles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleAngle {
    pub theta: f64,
    /// Sweep angles bracketing the pole.
    pub bracket: (f64, f64),
    pub denominator_energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThetaSweep {
    /// One outcome per requested angle, in order.
    pub points: Vec<(f64, AsymmetricOutcome)>,
    /// Poles found on grid points or by a sign change between neighbours.
    pub poles: Vec<PoleAngle>,
}

/// Evaluate the asymmetric-site amplitude on an increasing grid of angles and
/// locate every zero of the (real part of the) denominator in between by
/// bisection.
pub fn theta_sweep(
    k: f64,
    setup: &AsymmetricSetup,
    j_bar: f64,
    thetas: &[f64],
    mode: Denominator,
) -> Result<ThetaSweep> {
    let base = AsymmetricSiteParams::new(j_bar, 0.0)?;
    let mut points = Vec::with_capacity(thetas.len());
    let mut dens = Vec::with_capacity(thetas.len());
    for &t in thetas {
        let p = base.with_theta(t);
        dens.push(setup.denominator_energy(k, &p, mode)?.re);
        points.push((t, asymmetric_amplitude(k, setup, &p, mode)?));
    }
    let mut poles = Vec::new();
    for (i, (t, out)) in points.iter().enumerate() {
        if let AsymmetricOutcome::Pole { denominator_energy, .. } = out {
            let lo = if i > 0 { thetas[i - 1] } else { *t };
            let hi = thetas.get(i + 1).copied().unwrap_or(*t);
            poles.push(PoleAngle {
                theta: *t,
                bracket: (lo, hi),
                denominator_energy: denominator_energy.re,
            });
        }
    }
    for i in 1..thetas.len() {
        let (d0, d1) = (dens[i - 1], dens[i]);
        let on_grid = |j: usize| matches!(points[j].1, AsymmetricOutcome::Pole { .. });
        if on_grid(i - 1) || on_grid(i) || d0.signum() == d1.signum() {
            continue;
        }
        let f = |t: f64| -> Result<f64> { Ok(setup.denominator_energy(k, &base.with_theta(t), mode)?.re) };
        let (mut lo, mut hi, mut dlo) = (thetas[i - 1], thetas[i], d0);
        let mut mid = 0.5 * (lo + hi);
        let mut dm = f(mid)?;
        for _ in 0..200 {
            if dm.abs() < POLE_TOLERANCE_EV * 1e-3 || hi - lo < 1e-15 {
                break;
            }
            if dm.signum() == dlo.signum() {
                lo = mid;
                dlo = dm;
            } else {
                hi = mid;
            }
            mid = 0.5 * (lo + hi);
            dm = f(mid)?;
        }
        poles.push(PoleAngle {
            theta: mid,
            bracket: (thetas[i - 1], thetas[i]),
            denominator_energy: dm,
        });
    }
    poles.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    Ok(ThetaSweep { points, poles })
}

/// Bound state below the lower-branch edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundState {
    /// ln(E_b/eV) of the binding energy E_b = E₋(0) − E.
    pub ln_binding_energy: f64,
    /// E_b (eV); underflows to zero for very shallow states.
    pub binding_energy: f64,
    /// E₋(0) − E_b (eV).
    pub energy: f64,
    /// ln(κ/k₀) with E_b = ħ²κ²/(2m_p).
    pub ln_kappa_over_k0: f64,
}

/// Denominator 1 − S·I_st continued to E = E₋(0) − E_b below the band edge,
/// as a function of u = ln(E_b/Λ₀) with Λ₀ = E_flat − E₋(0). At k = iκ the
/// logarithm becomes ln(κ/k₀) + iπ/2 and the imaginary parts cancel:
///   D(u) = 1 − S[−(πX₀²/(4Δ_p))·u + π/(4Λ₀(1 + eᵘ))].
pub fn bound_state_denominator(lp: &PolaritonBranch, strength: f64, u: f64) -> Result<f64> {
    let x2 = lp.exciton_weight(0.0)?;
    let lambda0 = lp.lambda(0.0)?;
    let i_st = -PI * x2 / (4.0 * lp.delta_p()) * u + PI / (4.0 * lambda0 * (1.0 + u.exp()));
    Ok(1.0 - strength * i_st)
}

/// Real root of the continued denominator for κ with ln(κ/k₀) inside
/// `ln_kappa_range`. Returns `None` for non-attractive defects or when the
/// root lies outside the range.
pub fn locate_pole(lp: &PolaritonBranch, d: &DefectSpec, ln_kappa_range: (f64, f64)) -> Result<Option<BoundState>> {
    if !(d.strength > 0.0) {
        return Ok(None);
    }
    let (lo, hi) = ln_kappa_range;
    if !(lo < hi) {
        return Err(Error::param("ln_kappa_range", lo, "lower bound must be below upper bound"));
    }
    // D(u) is increasing in u for S > 0.
    let (mut ulo, mut uhi) = (2.0 * lo, 2.0 * hi);
    let dlo = bound_state_denominator(lp, d.strength, ulo)?;
    let dhi = bound_state_denominator(lp, d.strength, uhi)?;
    if dlo > 0.0 || dhi < 0.0 {
        return Ok(None);
    }
    for _ in 0..400 {
        let mid = 0.5 * (ulo + uhi);
        if mid <= ulo || mid >= uhi {
            break;
        }
        if bound_state_denominator(lp, d.strength, mid)? < 0.0 {
            ulo = mid;
        } else {
            uhi = mid;
        }
    }
    let u = 0.5 * (ulo + uhi);
    let lambda0 = lp.lambda(0.0)?;
    let ln_eb = u + lambda0.ln();
    let eb = ln_eb.exp();
    Ok(Some(BoundState {
        ln_binding_energy: ln_eb,
        binding_energy: eb,
        energy: lp.parabolic.e0 - eb,
        ln_kappa_over_k0: 0.5 * u,
    }))
}
