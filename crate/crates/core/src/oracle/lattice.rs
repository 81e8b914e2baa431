//! Exact single-defect solve on a finite periodic lattice.
//!
//! For a defect −S|0⟩⟨0| the Lippmann–Schwinger equation has rank one:
//!
//!   ψ₀ = φ₀ / (1 + S·G(0)),   ψ_i = φ_i − S·G(r_i)·ψ₀,
//!
//! with the lattice Green's function
//!
//!   G(r) = (1/N) Σ_q e^{iq·r} / (E(k) + iη − E(q)),
//!
//! N = N_side² and q on the reciprocal grid. G is even in x and y for the
//! dispersions used here, so it is synthesized with the folded cosine
//! transform of [`crate::dft`].
//!
//! The scattered part is fitted over the annulus N_side·a/8 ≤ r ≤ N_side·a/4
//! to f·(iπ/2)·H₀⁽¹⁾(q̃r) with the complex wave number
//! q̃ = (π/a)√((E(k) + iη − E₀)/Δ) of the regularized problem, using the
//! large-argument Hankel series. The fitted f converges to the continuum
//! amplitude as η → 0 and N → ∞; [`extract_amplitude`] does the η
//! extrapolation.

use alloc::vec::Vec;

use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 methods shadow these when std is linked
use num_traits::Float;

use crate::dft::{even_synthesis, Quadrant};
use crate::error::{Error, Result};
use crate::exciton::BandModel;
use crate::exec::Executor;
use crate::quadrature::richardson;
use crate::special::hankel1_0_asymptotic;

/// Band energy on the reciprocal grid.
#[derive(Debug, Clone, Copy)]
pub enum LatticeDispersion {
    /// Nearest-neighbour tight binding E₀ + (2Δ/π²)(2 − cos q_x a − cos q_y a),
    /// whose long-wavelength limit is the parabolic band.
    Cosine,
    /// E₀ + Δ(|q|a/π)² restricted to the disk |q| ≤ π/a; grid points outside
    /// the disk are dropped from the sum.
    Parabolic,
    /// User callback E(q_x a, q_y a) in eV; must be even in each argument.
    Custom(fn(f64, f64) -> f64),
}

impl LatticeDispersion {
    /// Energy at (q_x a, q_y a), or `None` when the point is excluded.
    pub fn energy(&self, band: &BandModel, qxa: f64, qya: f64) -> Option<f64> {
        match self {
            LatticeDispersion::Cosine => {
                Some(band.e0 + 2.0 * band.delta / (PI * PI) * (2.0 - qxa.cos() - qya.cos()))
            }
            LatticeDispersion::Parabolic => {
                let q2 = qxa * qxa + qya * qya;
                (q2 <= PI * PI * (1.0 + 1e-12)).then(|| band.e0 + band.delta * q2 / (PI * PI))
            }
            LatticeDispersion::Custom(f) => Some(f(qxa, qya)),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FiniteLatticeProblem {
    /// Sites per side (odd, origin-centred).
    pub n_side: usize,
    /// Band edge, width and lattice constant.
    pub band: BandModel,
    pub dispersion: LatticeDispersion,
    /// Defect strength S (eV).
    pub strength: f64,
    /// Incident wave vector (Å⁻¹), on the reciprocal grid.
    pub k: [f64; 2],
    /// Imaginary energy shift η (eV).
    pub eta: f64,
    /// Largest relative fit residual accepted.
    pub residual_threshold: f64,
}

impl FiniteLatticeProblem {
    pub const DEFAULT_RESIDUAL_THRESHOLD: f64 = 0.3;

    /// Problem with the incident wave along x with `m` reciprocal-grid steps,
    /// k = 2πm/(N_side·a).
    pub fn along_x(n_side: usize, m: usize, band: BandModel, dispersion: LatticeDispersion, strength: f64, eta: f64) -> Self {
        let k = 2.0 * PI * m as f64 / (n_side as f64 * band.a);
        Self {
            n_side,
            band,
            dispersion,
            strength,
            k: [k, 0.0],
            eta,
            residual_threshold: Self::DEFAULT_RESIDUAL_THRESHOLD,
        }
    }

    fn grid_index(&self, k: f64) -> Option<isize> {
        let m = k * self.n_side as f64 * self.band.a / (2.0 * PI);
        let r = m.round();
        ((m - r).abs() < 1e-9 * (1.0 + m.abs())).then_some(r as isize)
    }

    fn validate(&self) -> Result<(isize, isize)> {
        if self.n_side % 2 == 0 || self.n_side < 5 {
            return Err(Error::param("N_side", self.n_side as f64, "finite-lattice solve needs an odd N_side ≥ 5"));
        }
        if !(self.eta > 0.0) {
            return Err(Error::param("eta", self.eta, "must be positive"));
        }
        let off = Error::OffGrid {
            kx: self.k[0],
            ky: self.k[1],
            n_side: self.n_side,
        };
        let mx = self.grid_index(self.k[0]).ok_or(off.clone())?;
        let my = self.grid_index(self.k[1]).ok_or(off.clone())?;
        let h = (self.n_side / 2) as isize;
        if mx.abs() > h || my.abs() > h || (mx == 0 && my == 0) {
            return Err(off);
        }
        Ok((mx, my))
    }

    fn incident_energy(&self) -> Result<f64> {
        let a = self.band.a;
        self.dispersion
            .energy(&self.band, self.k[0] * a, self.k[1] * a)
            .ok_or(Error::WaveVector {
                k: self.k[0].hypot(self.k[1]),
                reason: "incident wave vector outside the band",
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSolution {
    pub n_side: usize,
    /// ψ_i on the origin-centred grid, row-major over (ix, iy), normalized
    /// with 1/√N. Site (ix, iy) sits at ((ix − h)a, (iy − h)a).
    pub psi: Vec<Complex64>,
    /// Amplitude fitted from the far field.
    pub f: Complex64,
    /// T-matrix value (πS/2Δ)·ψ₀ (with φ₀ = 1).
    pub f_t_matrix: Complex64,
    /// Relative residual of the far-field fit.
    pub residual: f64,
    pub eta: f64,
    /// Number of sites in the fit annulus.
    pub annulus_sites: usize,
}

/// Lattice Green's function G(r) on the non-negative quadrant.
pub fn lattice_green<E: Executor>(p: &FiniteLatticeProblem, e_k: f64, exec: &E) -> Quadrant {
    let n = p.n_side;
    let h = n / 2;
    let dqa = 2.0 * PI / n as f64;
    let mut spec = Quadrant::zeros(n);
    let z = Complex64::new(e_k, p.eta);
    for mx in 0..=h {
        for my in 0..=h {
            if let Some(e) = p.dispersion.energy(&p.band, dqa * mx as f64, dqa * my as f64) {
                spec.set(mx, my, (z - e).inv());
            }
        }
    }
    even_synthesis(&spec, exec)
}

/// Solve at a single η and fit f from the far field.
pub fn finite_lattice_solve<E: Executor>(p: &FiniteLatticeProblem, exec: &E) -> Result<LatticeSolution> {
    p.validate()?;
    let n = p.n_side;
    let h = (n / 2) as isize;
    let a = p.band.a;
    let e_k = p.incident_energy()?;
    let g = lattice_green(p, e_k, exec);
    let psi0 = Complex64::new(1.0, 0.0) / (1.0 + p.strength * g.get(0, 0));
    let beta = PI * p.strength / (2.0 * p.band.delta);
    let norm = 1.0 / (n as f64);

    let mut psi = Vec::with_capacity(n * n);
    for ix in -h..=h {
        for iy in -h..=h {
            let phase = p.k[0] * a * ix as f64 + p.k[1] * a * iy as f64;
            let scat = -p.strength * g.at(ix, iy) * psi0;
            psi.push((Complex64::from_polar(1.0, phase) + scat) * norm);
        }
    }

    // Far-field fit of the scattered part.
    let qt = PI / a * (Complex64::new(e_k - p.band.e0, p.eta) / p.band.delta).sqrt();
    let (r_in, r_out) = (n as f64 / 8.0, n as f64 / 4.0);
    let (mut num, mut den, mut ss) = (Complex64::new(0.0, 0.0), 0.0, 0.0);
    let mut samples = Vec::new();
    for ix in -h..=h {
        for iy in -h..=h {
            let r = ((ix * ix + iy * iy) as f64).sqrt();
            if r < r_in || r > r_out {
                continue;
            }
            let s = -p.strength * g.at(ix, iy) * psi0;
            let shape = Complex64::new(0.0, PI / 2.0) * hankel1_0_asymptotic(qt * (r * a), 4);
            num += shape.conj() * s;
            den += shape.norm_sqr();
            ss += s.norm_sqr();
            samples.push((s, shape));
        }
    }
    let f = if den > 0.0 { num / den } else { Complex64::new(0.0, 0.0) };
    let rr: f64 = samples.iter().map(|(s, sh)| (s - f * sh).norm_sqr()).sum();
    let residual = if ss > 0.0 { (rr / ss).sqrt() } else { 0.0 };
    if residual > p.residual_threshold {
        return Err(Error::Extraction {
            eta: p.eta,
            residual,
            threshold: p.residual_threshold,
        });
    }
    Ok(LatticeSolution {
        n_side: n,
        psi,
        f,
        f_t_matrix: beta * psi0,
        residual,
        eta: p.eta,
        annulus_sites: samples.len(),
    })
}

/// η-extrapolated far-field amplitude.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeExtraction {
    pub f: Complex64,
    /// Difference between the two highest Richardson levels.
    pub estimated_error: f64,
    /// (η, fitted f, residual) per level.
    pub levels: Vec<(f64, Complex64, f64)>,
    /// Incident kinetic energy E(k) − E₀ that η is measured against (eV).
    pub kinetic: f64,
}

/// Default η levels relative to the incident kinetic energy; consecutive
/// levels halve η.
pub const LATTICE_ETA_LEVELS: [f64; 3] = [0.4, 0.2, 0.1];

/// Solve at η = ε·(E(k) − E₀) for each ε in `relative_etas` (geometric with
/// ratio 2) and Richardson-extrapolate the fitted f to η → 0.
pub fn extract_amplitude<E: Executor>(
    base: &FiniteLatticeProblem,
    relative_etas: &[f64],
    exec: &E,
) -> Result<AmplitudeExtraction> {
    base.validate()?;
    if relative_etas.is_empty() {
        return Err(Error::param("eta", 0.0, "need at least one η level"));
    }
    let kinetic = base.incident_energy()? - base.band.e0;
    let mut levels = Vec::with_capacity(relative_etas.len());
    for &eps in relative_etas {
        let p = FiniteLatticeProblem {
            eta: eps * kinetic,
            ..*base
        };
        let s = finite_lattice_solve(&p, exec)?;
        levels.push((p.eta, s.f, s.residual));
    }
    let vals: Vec<Complex64> = levels.iter().map(|l| l.1).collect();
    let (f, estimated_error) = if vals.len() > 1 {
        richardson(&vals, relative_etas[0] / relative_etas[1])
    } else {
        (vals[0], f64::INFINITY)
    };
    Ok(AmplitudeExtraction {
        f,
        estimated_error,
        levels,
        kinetic,
    })
}
