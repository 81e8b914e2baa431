//! Separable discrete cosine synthesis for inversion-symmetric lattice data.
//!
//! On an N × N periodic lattice with N = 2h + 1 odd, a function A(mx, my)
//! that is even in each index separately has a transform
//!
//!   G(x, y) = (1/N²) Σ_{mx,my} A(mx, my) e^{2πi(mx·x + my·y)/N}
//!           = (1/N²) Σ_{mx,my=0..h} w(mx) w(my) A(mx, my) cos(2π mx x/N) cos(2π my y/N)
//!
//! with w(0) = 1 and w(m > 0) = 2, which is again even in x and y. Only the
//! (h + 1)² quadrant is stored, and the transform costs two dense
//! (h + 1)³ real-by-complex products instead of an N⁴ direct sum.

use alloc::vec;
use alloc::vec::Vec;

use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 methods shadow these when std is linked
use num_traits::Float;

use crate::exec::Executor;

/// Quadrant of an inversion-symmetric N × N array, row-major over (ix, iy)
/// with 0 ≤ ix, iy ≤ h.
#[derive(Debug, Clone, PartialEq)]
pub struct Quadrant {
    pub n: usize,
    pub data: Vec<Complex64>,
}

impl Quadrant {
    pub fn zeros(n: usize) -> Self {
        let h = n / 2;
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); (h + 1) * (h + 1)],
        }
    }

    pub fn half(&self) -> usize {
        self.n / 2
    }

    pub fn get(&self, ix: usize, iy: usize) -> Complex64 {
        self.data[ix * (self.half() + 1) + iy]
    }

    pub fn set(&mut self, ix: usize, iy: usize, v: Complex64) {
        let w = self.half() + 1;
        self.data[ix * w + iy] = v;
    }

    /// Value at signed lattice offsets, using evenness and periodicity.
    pub fn at(&self, x: isize, y: isize) -> Complex64 {
        let n = self.n as isize;
        let fold = |v: isize| {
            let v = v.rem_euclid(n);
            (if v > n / 2 { n - v } else { v }) as usize
        };
        self.get(fold(x), fold(y))
    }
}

/// w(m)·cos(2π m x / N) for 0 ≤ x, m ≤ h, as a row-major (h + 1)² table.
fn cosine_table(n: usize, weighted: bool) -> Vec<f64> {
    let h = n / 2;
    let base: Vec<f64> = (0..n).map(|j| (2.0 * PI * j as f64 / n as f64).cos()).collect();
    let mut t = vec![0.0; (h + 1) * (h + 1)];
    for x in 0..=h {
        for m in 0..=h {
            let w = if weighted && m > 0 { 2.0 } else { 1.0 };
            t[x * (h + 1) + m] = w * base[(m * x) % n];
        }
    }
    t
}

/// Inverse transform of an even spectrum quadrant A(mx, my) to the even
/// real-space quadrant G(x, y), including the 1/N² normalization.
pub fn even_synthesis<E: Executor>(spectrum: &Quadrant, exec: &E) -> Quadrant {
    let scale = 1.0 / (spectrum.n as f64 * spectrum.n as f64);
    even_transform(spectrum, true, scale, exec)
}

/// Forward transform Σ s(r) e^{−iq·r} of an even real-space quadrant,
/// returning the even spectrum quadrant (no normalization).
pub fn even_analysis<E: Executor>(field: &Quadrant, exec: &E) -> Quadrant {
    even_transform(field, true, 1.0, exec)
}

fn even_transform<E: Executor>(input: &Quadrant, weighted: bool, scale: f64, exec: &E) -> Quadrant {
    let n = input.n;
    let h = n / 2;
    let w = h + 1;
    let c = cosine_table(n, weighted);
    // Stage 1: T(x, my) = Σ_mx C(x, mx) A(mx, my).
    let rows: Vec<Vec<Complex64>> = exec.map_indexed(w, |x| {
        let mut out = vec![Complex64::new(0.0, 0.0); w];
        for mx in 0..w {
            let cx = c[x * w + mx];
            let src = &input.data[mx * w..(mx + 1) * w];
            for (o, a) in out.iter_mut().zip(src) {
                *o += a * cx;
            }
        }
        out
    });
    // Stage 2: G(x, y) = Σ_my T(x, my) C(y, my).
    let out_rows: Vec<Vec<Complex64>> = exec.map_indexed(w, |x| {
        let t = &rows[x];
        (0..w)
            .map(|y| {
                let cy = &c[y * w..(y + 1) * w];
                let mut acc = Complex64::new(0.0, 0.0);
                for (tv, cv) in t.iter().zip(cy) {
                    acc += tv * cv;
                }
                acc * scale
            })
            .collect()
    });
    Quadrant {
        n,
        data: out_rows.into_iter().flatten().collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Serial;

    fn direct(spec: &Quadrant, x: isize, y: isize) -> Complex64 {
        let n = spec.n as isize;
        let h = n / 2;
        let mut acc = Complex64::new(0.0, 0.0);
        for mx in -h..=h {
            for my in -h..=h {
                let ph = 2.0 * PI * ((mx * x + my * y) as f64) / n as f64;
                acc += spec.at(mx, my) * Complex64::from_polar(1.0, ph);
            }
        }
        acc / (n * n) as f64
    }

    #[test]
    fn matches_direct_sum() {
        let n = 9;
        let mut spec = Quadrant::zeros(n);
        for mx in 0..=4 {
            for my in 0..=4 {
                spec.set(mx, my, Complex64::new((mx * 3 + my) as f64 * 0.1 + 1.0, (mx as f64 - my as f64) * 0.05));
            }
        }
        let g = even_synthesis(&spec, &Serial);
        for x in -4..=4 {
            for y in -4..=4 {
                assert!((g.at(x, y) - direct(&spec, x, y)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn round_trip() {
        let n = 11;
        let mut f = Quadrant::zeros(n);
        for x in 0..=5 {
            for y in 0..=5 {
                f.set(x, y, Complex64::new(1.0 / (1.0 + (x + y) as f64), y as f64));
            }
        }
        let spec = even_analysis(&f, &Serial);
        let back = even_synthesis(&spec, &Serial);
        for (a, b) in f.data.iter().zip(&back.data) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
