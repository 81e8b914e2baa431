//! Globally adaptive Gauss–Kronrod (7/15) quadrature for complex integrands,
//! Wynn-ε acceleration of alternating partial sums, and Richardson
//! extrapolation in a regularization parameter.

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)] // inherent f64 methods shadow these when std is linked
use num_traits::Float;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

/// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of subintervals before giving up.
    pub max_intervals: usize,
}

impl Default for QuadSettings {
    fn default() -> Self {
        Self {
            abs_tol: 1e-13,
            rel_tol: 1e-11,
            max_intervals: 2000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

#[derive(Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

fn kronrod<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        k += s * WGK[i];
        if i % 2 == 1 {
            g += s * WG[i / 2];
        }
    }
    let value = k * h;
    let error = ((k - g) * h).norm();
    Panel { a, b, value, error }
}

/// ∫ₐᵇ f(x) dx by globally adaptive bisection of the panel with the largest
/// Kronrod–Gauss difference.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, s: &QuadSettings) -> Result<Estimate> {
    integrate_with_breaks(f, &[a, b], s)
}

/// Like [`integrate`] over [points[0], points[last]], with the given interior
/// breakpoints used as initial panel boundaries.
pub fn integrate_with_breaks<F: Fn(f64) -> Complex64>(
    f: F,
    points: &[f64],
    s: &QuadSettings,
) -> Result<Estimate> {
    let mut panels: Vec<Panel> = points
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| kronrod(&f, w[0], w[1]))
        .collect();
    if panels.is_empty() {
        return Ok(Estimate {
            value: Complex64::new(0.0, 0.0),
            error: 0.0,
        });
    }
    loop {
        let value: Complex64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if error <= s.abs_tol.max(s.rel_tol * value.norm()) {
            return Ok(Estimate { value, error });
        }
        if panels.len() >= s.max_intervals {
            return Err(Error::Convergence {
                iterations: panels.len(),
                estimate: value.norm(),
                error,
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, p)| if p.error > acc.1 { (i, p.error) } else { acc });
        let p = panels[worst];
        let m = 0.5 * (p.a + p.b);
        if !(m > p.a && m < p.b) {
            return Err(Error::Convergence {
                iterations: panels.len(),
                estimate: value.norm(),
                error,
            });
        }
        panels[worst] = kronrod(&f, p.a, m);
        panels.push(kronrod(&f, m, p.b));
    }
}

/// Wynn ε-algorithm applied to a sequence of partial sums. Returns the last
/// even-column estimate and the change from the previous one.
pub fn wynn_epsilon(partials: &[Complex64]) -> (Complex64, f64) {
    let n = partials.len();
    if n == 0 {
        return (Complex64::new(0.0, 0.0), f64::INFINITY);
    }
    if n < 3 {
        let last = partials[n - 1];
        let diff = if n == 2 { (last - partials[0]).norm() } else { f64::INFINITY };
        return (last, diff);
    }
    // e_prev holds column k−1, e_cur column k.
    let mut e_prev: Vec<Complex64> = alloc::vec![Complex64::new(0.0, 0.0); n + 1];
    let mut e_cur: Vec<Complex64> = partials.to_vec();
    let mut best = partials[n - 1];
    let mut prev_best = partials[n - 2];
    let mut col = 0;
    while e_cur.len() > 1 {
        let mut next = Vec::with_capacity(e_cur.len() - 1);
        for i in 0..e_cur.len() - 1 {
            let d = e_cur[i + 1] - e_cur[i];
            let inv = if d.norm() == 0.0 {
                Complex64::new(f64::MAX.sqrt(), 0.0)
            } else {
                d.inv()
            };
            next.push(e_prev[i + 1] + inv);
        }
        col += 1;
        e_prev = e_cur;
        e_cur = next;
        if col % 2 == 0 {
            let cand = *e_cur.last().unwrap();
            if cand.re.is_finite() && cand.im.is_finite() {
                prev_best = best;
                best = cand;
            }
        }
    }
    (best, (best - prev_best).norm())
}

/// Richardson extrapolation to h → 0 of values sampled at h₀, h₀/r, h₀/r², …
/// assuming an error expansion in integer powers h, h², h³, …
///
/// Returns the extrapolated value and the difference between the two
/// highest-order estimates.
pub fn richardson(values: &[Complex64], ratio: f64) -> (Complex64, f64) {
    let n = values.len();
    if n == 0 {
        return (Complex64::new(0.0, 0.0), f64::INFINITY);
    }
    let mut row: Vec<Complex64> = values.to_vec();
    let mut prev_top = values[n - 1];
    let mut top = values[n - 1];
    let mut factor = 1.0;
    for _ in 1..n {
        factor *= ratio;
        let next: Vec<Complex64> = row
            .windows(2)
            .map(|w| w[1] + (w[1] - w[0]) / (factor - 1.0))
            .collect();
        prev_top = top;
        top = *next.last().unwrap();
        row = next;
    }
    let err = if n == 1 { f64::INFINITY } else { (top - prev_top).norm() };
    (top, err)
}
