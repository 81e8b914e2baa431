//! Quadrature of the Green's-function integrals.
//!
//! In the dimensionless variable x = k′/k, with ε = η/(Δ(ka/π)²),
//!
//!   I_os = (π/2Δ) ∫₀^∞ x J₀(kr·x) / (x² − 1 − iε) dx,
//!   I_st = (π/2Δ) ∫₀^{Q/k} x / (x² − 1 − iε) dx,   Q = π/a.
//!
//! Each integral is evaluated for ε_n = ε₀/4ⁿ and extrapolated to ε → 0 with
//! a Richardson table. The finite part is integrated adaptively with
//! breakpoints clustered around the pole at x = 1; the oscillating tail of
//! I_os is summed over half-periods of J₀ and accelerated with Wynn's ε.

use alloc::vec::Vec;

use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 methods shadow these when std is linked
use num_traits::Float;

use crate::error::{Error, Result};
use crate::exciton::BandModel;
use crate::polariton::PolaritonBranch;
use crate::quadrature::{integrate, integrate_with_breaks, richardson, wynn_epsilon, QuadSettings};
use crate::special::bessel_j0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Quadrature,
    LatticeSum,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralResult {
    /// Extrapolated value (eV⁻¹).
    pub value: Complex64,
    /// Difference between the two highest Richardson levels plus the
    /// accumulated quadrature error.
    pub estimated_error: f64,
    pub method: Method,
    /// Smallest regularization used (eV).
    pub eta: f64,
}

/// Geometric regularization schedule ε_n = ε₀/ratioⁿ, n = 0…levels−1, with
/// ε expressed relative to the kinetic energy Δ(ka/π)² of the incident wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaSchedule {
    pub eps0: f64,
    pub ratio: f64,
    pub levels: usize,
}

impl Default for EtaSchedule {
    fn default() -> Self {
        Self {
            eps0: 1e-2,
            ratio: 4.0,
            levels: 4,
        }
    }
}

impl EtaSchedule {
    pub fn values(&self) -> Vec<f64> {
        (0..self.levels).map(|n| self.eps0 / self.ratio.powi(n as i32)).collect()
    }

    fn validate(&self) -> Result<()> {
        if !(self.eps0 > 0.0) || !(self.ratio > 1.0) || self.levels == 0 {
            return Err(Error::param("eta", self.eps0, "schedule needs eps0 > 0, ratio > 1, levels ≥ 1"));
        }
        Ok(())
    }
}

fn settings() -> QuadSettings {
    QuadSettings {
        abs_tol: 1e-13,
        rel_tol: 1e-12,
        max_intervals: 20_000,
    }
}

/// Breakpoints of [0, upper] clustered around x = 1 at scales ε, 10ε, 100ε.
fn pole_breaks(eps: f64, upper: f64) -> Vec<f64> {
    let mut pts = alloc::vec![0.0, 1.0, upper];
    for s in [1.0, 10.0, 100.0] {
        pts.push(1.0 - s * eps);
        pts.push(1.0 + s * eps);
    }
    pts.retain(|&p| p >= 0.0 && p <= upper);
    pts.sort_by(|a, b| a.total_cmp(b));
    pts.dedup();
    pts
}

fn kinetic(k: f64, band: &BandModel) -> f64 {
    band.kinetic(k)
}

fn check_kr(k: f64, r: f64) -> Result<()> {
    if !(k > 0.0) {
        return Err(Error::WaveVector { k, reason: "must be positive" });
    }
    if !(r > 0.0) {
        return Err(Error::param("r", r, "distance must be positive"));
    }
    Ok(())
}

/// Number of half-period panels summed in the oscillating tail.
const TAIL_PANELS: usize = 60;

fn oscillating_dimensionless(rho: f64, eps: f64) -> Result<(Complex64, f64)> {
    let f = |x: f64| x * bessel_j0(rho * x) / Complex64::new(x * x - 1.0, -eps);
    // Tail nodes sit near the zeros of the J0 asymptote, ρx = 3π/4 + jπ.
    let node = |j: usize| (0.75 * PI + j as f64 * PI) / rho;
    let mut j0 = 0;
    while node(j0) < 2.0 + 100.0 * eps {
        j0 += 1;
    }
    let x0 = node(j0);
    let s = settings();
    let head = integrate_with_breaks(f, &pole_breaks(eps, x0), &s)?;
    let mut partials = Vec::with_capacity(TAIL_PANELS);
    let mut acc = head.value;
    let mut qerr = head.error;
    for j in j0..j0 + TAIL_PANELS {
        let p = integrate(f, node(j), node(j + 1), &s)?;
        acc += p.value;
        qerr += p.error;
        partials.push(acc);
    }
    let (v, werr) = wynn_epsilon(&partials);
    Ok((v, werr + qerr))
}

/// I_os(k, r) by quadrature with η → 0 extrapolation.
pub fn i_os_quadrature(k: f64, r: f64, band: &BandModel, schedule: &EtaSchedule) -> Result<IntegralResult> {
    check_kr(k, r)?;
    schedule.validate()?;
    let rho = k * r;
    let mut vals = Vec::with_capacity(schedule.levels);
    let mut qerr = 0.0;
    for eps in schedule.values() {
        let (v, e) = oscillating_dimensionless(rho, eps)?;
        vals.push(v);
        qerr += e;
    }
    let (v, rerr) = richardson(&vals, schedule.ratio);
    let scale = PI / (2.0 * band.delta);
    let eps_min = *schedule.values().last().unwrap();
    Ok(IntegralResult {
        value: v * scale,
        estimated_error: (rerr + qerr) * scale,
        method: Method::Quadrature,
        eta: eps_min * kinetic(k, band),
    })
}

/// I_st(k) by quadrature up to `cutoff_factor`·π/a with η → 0 extrapolation.
/// The physical choice is `cutoff_factor` = 1 (Brillouin-zone boundary).
pub fn i_st_quadrature(k: f64, band: &BandModel, schedule: &EtaSchedule, cutoff_factor: f64) -> Result<IntegralResult> {
    if !(k > 0.0) {
        return Err(Error::WaveVector { k, reason: "must be positive" });
    }
    if !(cutoff_factor > 0.0) {
        return Err(Error::param("cutoff_factor", cutoff_factor, "must be positive"));
    }
    schedule.validate()?;
    let upper = cutoff_factor * PI / (band.a * k);
    let (v, err) = static_dimensionless(upper, schedule)?;
    let scale = PI / (2.0 * band.delta);
    let eps_min = *schedule.values().last().unwrap();
    Ok(IntegralResult {
        value: v * scale,
        estimated_error: err * scale,
        method: Method::Quadrature,
        eta: eps_min * kinetic(k, band),
    })
}

/// ∫₀^upper x/(x² − 1 − iε) dx extrapolated to ε → 0.
fn static_dimensionless(upper: f64, schedule: &EtaSchedule) -> Result<(Complex64, f64)> {
    let s = settings();
    let mut vals = Vec::with_capacity(schedule.levels);
    let mut qerr = 0.0;
    for eps in schedule.values() {
        let f = |x: f64| x / Complex64::new(x * x - 1.0, -eps);
        let q = integrate_with_breaks(f, &pole_breaks(eps, upper), &s)?;
        vals.push(q.value);
        qerr += q.error;
    }
    let (v, rerr) = richardson(&vals, schedule.ratio);
    Ok((v, rerr + qerr))
}

/// The two contributions of the static sum over the two-part lower-branch
/// model, evaluated numerically, alongside the closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolaritonStaticParts {
    pub total: IntegralResult,
    /// Parabolic part, k′ ∈ [0, k₀].
    pub parabolic: Complex64,
    /// Flat part, k′ ∈ [k₀, π/a].
    pub flat: f64,
    /// Closed form −(πX²/2Δ_p)[ln(k/k₀) − iπ/2] + π/(4Λ_k).
    pub closed_form: Complex64,
    /// The logarithmic term −(πX²/2Δ_p)·ln(k/k₀) alone.
    pub ln_term: f64,
    /// π/(4Λ_k).
    pub flat_closed_form: f64,
}

/// Static sum over the two-part model: parabolic dispersion E₋(k′) weighted
/// by X_k² below k₀, constant E_flat above.
pub fn i_st_polariton_model(k: f64, lp: &PolaritonBranch, schedule: &EtaSchedule) -> Result<PolaritonStaticParts> {
    if !(k > 0.0 && k < lp.k0) {
        return Err(Error::WaveVector { k, reason: "need 0 < k < k0" });
    }
    let a = lp.parabolic.a;
    if !(lp.k0 < PI / a) {
        return Err(Error::param("k0", lp.k0, "crossover must lie inside the Brillouin zone"));
    }
    schedule.validate()?;
    let x2 = lp.exciton_weight(k)?;
    let dp = lp.delta_p();
    let (par, par_err) = static_dimensionless(lp.k0 / k, schedule)?;
    let parabolic = par * (x2 * PI / (2.0 * dp));

    // Flat part: (a/2π)² ∫ d²k′ 1/(E_flat − E₋(k)) over the annulus, done by
    // quadrature in k′ for symmetry with the parabolic part.
    let lambda = lp.lambda(k)?;
    let flat_q = integrate(
        |q: f64| Complex64::new(q / lambda, 0.0),
        lp.k0,
        PI / a,
        &settings(),
    )?;
    let flat = flat_q.value.re * a * a / (2.0 * PI);

    let l = (k / lp.k0).ln();
    let ln_term = -PI * x2 / (2.0 * dp) * l;
    let flat_closed_form = PI / (4.0 * lambda);
    let closed_form = Complex64::new(ln_term + flat_closed_form, PI * x2 / (2.0 * dp) * PI / 2.0);
    let eps_min = *schedule.values().last().unwrap();
    Ok(PolaritonStaticParts {
        total: IntegralResult {
            value: parabolic + flat,
            estimated_error: par_err * x2 * PI / (2.0 * dp) + flat_q.error * a * a / (2.0 * PI),
            method: Method::Quadrature,
            eta: eps_min * lp.parabolic.kinetic(k),
        },
        parabolic,
        flat,
        closed_form,
        ln_term,
        flat_closed_form,
    })
}

/// I_st = −(1/N²) Σ_q 1/(E(k) − E(q) + iη) on an N × N reciprocal grid with
/// the parabolic dispersion cut off at |q| = π/a, extrapolated η → 0 over the
/// `schedule` (ε relative to the incident kinetic energy).
pub fn i_st_lattice_sum(k: f64, band: &BandModel, n_side: usize, schedule: &EtaSchedule) -> Result<IntegralResult> {
    if !(k > 0.0) {
        return Err(Error::WaveVector { k, reason: "must be positive" });
    }
    if n_side % 2 == 0 || n_side < 5 {
        return Err(Error::param("N_side", n_side as f64, "lattice sums need an odd N_side ≥ 5"));
    }
    schedule.validate()?;
    let h = (n_side / 2) as isize;
    let ek = kinetic(k, band);
    let dq = 2.0 * PI / (n_side as f64);
    // Kinetic energies of the grid points inside the disk, in units of Δ.
    let mut levels = Vec::new();
    for mx in -h..=h {
        for my in -h..=h {
            let qa2 = (dq * dq) * (mx * mx + my * my) as f64;
            if qa2 <= PI * PI {
                levels.push(band.delta * qa2 / (PI * PI));
            }
        }
    }
    let norm = (n_side * n_side) as f64;
    let mut vals = Vec::with_capacity(schedule.levels);
    for eps in schedule.values() {
        let eta = eps * ek;
        // Pairwise summation for a fixed, order-independent rounding pattern.
        let terms: Vec<Complex64> = levels
            .iter()
            .map(|&e| -Complex64::new(ek - e, eta).inv())
            .collect();
        vals.push(pairwise_sum(&terms) / norm);
    }
    let (v, err) = richardson(&vals, schedule.ratio);
    Ok(IntegralResult {
        value: v,
        estimated_error: err,
        method: Method::LatticeSum,
        eta: *schedule.values().last().unwrap() * ek,
    })
}

pub(crate) fn pairwise_sum(v: &[Complex64]) -> Complex64 {
    if v.len() <= 16 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}
