//! Far-field wavefunction on lattice sites and its momentum-space ring.
//!
//! ψ_i = (X/√N)·{e^{ik·r_i} + f·√(iπ/2kr_i)·e^{ikr_i}}, with the defect at the
//! grid centre. The origin and its four neighbours are outside the validity
//! of the far-field form: they carry the incident wave only and are flagged.

use alloc::vec;
use alloc::vec::Vec;

use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 methods shadow these when std is linked
use num_traits::Float;

use crate::dft::{even_analysis, Quadrant};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::special::outgoing_wave;
use crate::units::LatticeParams;

#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    pub n_side: usize,
    pub a: f64,
    pub k_in: [f64; 2],
    pub f_used: Complex64,
    /// Exciton amplitude X multiplying the whole field (1 for bare excitons).
    pub weight: f64,
    /// Row-major over (ix, iy); site (ix, iy) sits at ((ix − c)a, (iy − c)a).
    pub psi: Vec<Complex64>,
    /// Scattered part alone, same layout.
    pub scattered: Vec<Complex64>,
    pub flagged: Vec<bool>,
    /// Index c of the defect along each axis.
    pub origin_index: usize,
}

impl WaveField {
    pub fn index(&self, ix: usize, iy: usize) -> usize {
        ix * self.n_side + iy
    }

    /// Position (x, y) in Å of site (ix, iy).
    pub fn position(&self, ix: usize, iy: usize) -> (f64, f64) {
        let c = self.origin_index as f64;
        ((ix as f64 - c) * self.a, (iy as f64 - c) * self.a)
    }
}

pub fn evaluate_field(k_in: [f64; 2], f: Complex64, lat: &LatticeParams, hopfield_x: Option<f64>) -> Result<WaveField> {
    let k = k_in[0].hypot(k_in[1]);
    if !(k > 0.0) {
        return Err(Error::WaveVector { k, reason: "incident wave vector must be non-zero" });
    }
    if !(f.re.is_finite() && f.im.is_finite()) {
        return Err(Error::param("f", f.norm(), "amplitude must be finite"));
    }
    if lat.n_side % 2 == 0 {
        return Err(Error::param("N_side", lat.n_side as f64, "wavefield grid must be odd to centre the defect"));
    }
    let n = lat.n_side;
    let c = n / 2;
    let weight = hopfield_x.unwrap_or(1.0);
    let norm = weight / (lat.sites() as f64).sqrt();
    let mut psi = Vec::with_capacity(n * n);
    let mut scattered = Vec::with_capacity(n * n);
    let mut flagged = Vec::with_capacity(n * n);
    for ix in 0..n {
        for iy in 0..n {
            let dx = ix as isize - c as isize;
            let dy = iy as isize - c as isize;
            let (x, y) = (dx as f64 * lat.a, dy as f64 * lat.a);
            let inc = Complex64::from_polar(1.0, k_in[0] * x + k_in[1] * y);
            let near = dx.abs() + dy.abs() <= 1;
            let s = if near {
                Complex64::new(0.0, 0.0)
            } else {
                f * outgoing_wave(k * x.hypot(y))
            };
            psi.push((inc + s) * norm);
            scattered.push(s * norm);
            flagged.push(near);
        }
    }
    Ok(WaveField {
        n_side: n,
        a: lat.a,
        k_in,
        f_used: f,
        weight,
        psi,
        scattered,
        flagged,
        origin_index: c,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RingProfile {
    /// Bin centres |k′| (Å⁻¹), spacing `bin_width`.
    pub k: Vec<f64>,
    /// Mean |S(k′)|² of the windowed scattered part per bin.
    pub intensity: Vec<f64>,
    pub bin_width: f64,
    /// Centre of the brightest bin, `None` when there is no scattered wave.
    pub peak_k: Option<f64>,
}

impl RingProfile {
    /// Full width at half maximum of the peak, by linear interpolation
    /// between bins.
    pub fn peak_width(&self) -> Option<f64> {
        let (ip, &pmax) = self
            .intensity
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))?;
        if !(pmax > 0.0) {
            return None;
        }
        let half = 0.5 * pmax;
        let cross = |range: &mut dyn Iterator<Item = usize>, step: isize| -> Option<f64> {
            for i in range {
                let j = (i as isize - step) as usize;
                if self.intensity[i] < half {
                    let (a, b) = (self.intensity[i], self.intensity[j]);
                    let t = (half - a) / (b - a);
                    return Some(self.k[i] + t * (self.k[j] - self.k[i]));
                }
            }
            None
        };
        let right = cross(&mut (ip + 1..self.intensity.len()), 1)?;
        let left = cross(&mut (0..ip).rev(), -1)?;
        Some(right - left)
    }
}

fn hann(i: usize, n: usize) -> f64 {
    0.5 - 0.5 * (2.0 * PI * (i as f64 + 0.5) / n as f64).cos()
}

/// Radially binned power spectrum of the Hann-windowed scattered part.
pub fn ring_profile<E: Executor>(w: &WaveField, exec: &E) -> Result<RingProfile> {
    let n = w.n_side;
    let dk = 2.0 * PI / (n as f64 * w.a);
    let k_in = w.k_in[0].hypot(w.k_in[1]);
    if dk > k_in / 4.0 {
        return Err(Error::Resolution { dk, k_in });
    }
    let c = w.origin_index;
    // The scattered part is radial, hence even in x and y.
    let mut q = Quadrant::zeros(n);
    for x in 0..=c {
        for y in 0..=c {
            let v = w.scattered[w.index(c + x, c + y)] * hann(c + x, n) * hann(c + y, n);
            q.set(x, y, v);
        }
    }
    let spec = even_analysis(&q, exec);
    let nbins = ((c as f64) * 2f64.sqrt()).ceil() as usize + 2;
    let mut sum = vec![0.0; nbins];
    let mut count = vec![0usize; nbins];
    for mx in 0..=c {
        for my in 0..=c {
            let r = ((mx * mx + my * my) as f64).sqrt();
            let b = r.round() as usize;
            let mult = if mx == 0 { 1 } else { 2 } * if my == 0 { 1 } else { 2 };
            sum[b] += spec.get(mx, my).norm_sqr() * mult as f64;
            count[b] += mult;
        }
    }
    let intensity: Vec<f64> = sum
        .iter()
        .zip(&count)
        .map(|(s, &c)| if c > 0 { s / c as f64 } else { 0.0 })
        .collect();
    let k: Vec<f64> = (0..nbins).map(|b| b as f64 * dk).collect();
    let peak_k = intensity
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .filter(|(_, &v)| v > 0.0)
        .map(|(i, _)| k[i]);
    Ok(RingProfile {
        k,
        intensity,
        bin_width: dk,
        peak_k,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Serial;
    use crate::units::Occupancy;
    use approx::assert_relative_eq;

    fn lat(n: usize) -> LatticeParams {
        LatticeParams::new(2000.0, n, Occupancy::Single).unwrap()
    }

    fn k_in() -> [f64; 2] {
        [0.25 / 2000.0, 0.0]
    }

    #[test]
    fn free_field_is_flat() {
        let w = evaluate_field(k_in(), Complex64::new(0.0, 0.0), &lat(41), None).unwrap();
        for v in &w.psi {
            assert_relative_eq!(v.norm_sqr(), 1.0 / (41.0 * 41.0), max_relative = 1e-12);
        }
        let p = ring_profile(&evaluate_field(k_in(), Complex64::new(0.0, 0.0), &lat(201), None).unwrap(), &Serial).unwrap();
        assert!(p.peak_k.is_none());
    }

    #[test]
    fn flags_five_sites() {
        let w = evaluate_field(k_in(), Complex64::new(-0.1, 0.02), &lat(41), Some(0.7)).unwrap();
        assert_eq!(w.flagged.iter().filter(|&&b| b).count(), 5);
        let c = w.origin_index;
        assert!(w.flagged[w.index(c, c)] && w.flagged[w.index(c + 1, c)] && w.flagged[w.index(c, c - 1)]);
        assert!(!w.flagged[w.index(c + 1, c + 1)]);
    }

    #[test]
    fn isotropic_decay() {
        let w = evaluate_field(k_in(), Complex64::new(-0.1, 0.02), &lat(101), None).unwrap();
        let c = w.origin_index;
        let i = |ix, iy| w.scattered[w.index(ix, iy)].norm_sqr();
        assert_relative_eq!(i(c + 10, c), i(c, c + 10), max_relative = 1e-12);
        assert_relative_eq!(i(c + 6, c + 8), i(c + 10, c), max_relative = 1e-12);
        assert_relative_eq!(i(c + 10, c) / i(c + 40, c), 4.0, max_relative = 1e-12);
    }

    #[test]
    fn linear_in_amplitude() {
        let l = lat(31);
        let f = Complex64::new(0.3, -0.2);
        let w1 = evaluate_field(k_in(), f, &l, None).unwrap();
        let w2 = evaluate_field(k_in(), f * 2.0, &l, None).unwrap();
        for (a, b) in w1.scattered.iter().zip(&w2.scattered) {
            assert!((a * 2.0 - b).norm() < 1e-15);
        }
    }

    #[test]
    fn ring_at_incident_wave_vector() {
        let w = evaluate_field(k_in(), Complex64::new(-0.12, 0.05), &lat(201), None).unwrap();
        let p = ring_profile(&w, &Serial).unwrap();
        let k = k_in()[0];
        assert!((p.peak_k.unwrap() - k).abs() <= p.bin_width);
    }

    #[test]
    fn ring_narrows_with_grid() {
        let f = Complex64::new(-0.12, 0.05);
        let w1 = ring_profile(&evaluate_field(k_in(), f, &lat(201), None).unwrap(), &Serial).unwrap();
        let w2 = ring_profile(&evaluate_field(k_in(), f, &lat(401), None).unwrap(), &Serial).unwrap();
        let ratio = w1.peak_width().unwrap() / w2.peak_width().unwrap();
        assert!(ratio > 1.5 && ratio < 2.5, "ratio {ratio}");
    }

    #[test]
    fn coarse_grid_rejected() {
        let w = evaluate_field([1e-5, 0.0], Complex64::new(0.1, 0.0), &lat(41), None).unwrap();
        assert!(matches!(ring_profile(&w, &Serial), Err(Error::Resolution { .. })));
    }
}
