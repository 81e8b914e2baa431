//! Bessel and Hankel functions of order zero.
//!
//! Real-argument J₀ and Y₀ come from `libm`, whose implementations are
//! accurate to a few ulp over the whole real axis. H₀⁽¹⁾ is assembled from
//! them. The large-argument Hankel expansion is provided separately for
//! complex arguments, where it is used as a far-field fit shape.

use core::f64::consts::{FRAC_PI_4, PI};

use num_complex::Complex64;

pub fn bessel_j0(x: f64) -> f64 {
    libm::j0(x)
}

pub fn bessel_y0(x: f64) -> f64 {
    libm::y0(x)
}

/// H₀⁽¹⁾(x) = J₀(x) + iY₀(x) for real x > 0.
pub fn hankel1_0(x: f64) -> Complex64 {
    Complex64::new(libm::j0(x), libm::y0(x))
}

/// Coefficients of the large-argument series
/// H₀⁽¹⁾(z) ≈ √(2/πz)·e^{i(z−π/4)}·Σ cₙ zⁿ.
const HANKEL_SERIES: [Complex64; 4] = [
    Complex64::new(1.0, 0.0),
    Complex64::new(0.0, -1.0 / 8.0),
    Complex64::new(-9.0 / 128.0, 0.0),
    Complex64::new(0.0, 225.0 / 3072.0),
];

/// Large-argument expansion of H₀⁽¹⁾(z) truncated after `terms` terms
/// (1 ≤ terms ≤ 4). Valid for complex z with Re z ≫ 1 and Im z ≥ 0.
pub fn hankel1_0_asymptotic(z: Complex64, terms: usize) -> Complex64 {
    let terms = terms.clamp(1, HANKEL_SERIES.len());
    let inv = z.inv();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut p = Complex64::new(1.0, 0.0);
    for c in &HANKEL_SERIES[..terms] {
        sum += c * p;
        p *= inv;
    }
    let phase = (Complex64::i() * (z - FRAC_PI_4)).exp();
    (2.0 / (PI * z)).sqrt() * phase * sum
}

/// Leading far-field form √(iπ/2x)·e^{ix}, equal to (iπ/2)·H₀⁽¹⁾(x) for x ≫ 1.
pub fn outgoing_wave(x: f64) -> Complex64 {
    let amp = (Complex64::new(0.0, PI / (2.0 * x))).sqrt();
    amp * Complex64::from_polar(1.0, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, QuadSettings};
    use approx::assert_relative_eq;

    #[test]
    fn reference_values() {
        assert_relative_eq!(bessel_j0(0.0), 1.0);
        assert_relative_eq!(bessel_j0(1.0), 0.765_197_686_557_966_6, max_relative = 1e-14);
        assert_relative_eq!(bessel_j0(10.0), -0.245_935_764_451_348_3, max_relative = 1e-13);
        assert_relative_eq!(bessel_y0(1.0), 0.088_256_964_215_676_96, max_relative = 1e-13);
        assert_relative_eq!(bessel_y0(10.0), 0.055_671_167_283_599_39, max_relative = 1e-12);
        // First zero of J0.
        assert!(bessel_j0(2.404_825_557_695_773).abs() < 1e-15);
    }

    #[test]
    fn j0_matches_integral_representation() {
        // J0(x) = (1/π)∫₀^π cos(x sin t) dt.
        let s = QuadSettings {
            abs_tol: 1e-14,
            rel_tol: 1e-13,
            max_intervals: 4000,
        };
        for &x in &[0.3, 2.0, 7.9, 8.1, 25.0, 120.0, 999.0] {
            let q = integrate(|t| Complex64::new((x * t.sin()).cos(), 0.0), 0.0, PI, &s).unwrap();
            let oracle = q.value.re / PI;
            assert!((bessel_j0(x) - oracle).abs() < 1e-10, "x = {x}");
        }
    }

    #[test]
    fn hankel_asymptotics_improve_with_argument() {
        let err = |x: f64| (hankel1_0_asymptotic(Complex64::new(x, 0.0), 4) - hankel1_0(x)).norm();
        assert!(err(50.0) < 1e-8);
        assert!(err(50.0) < err(5.0));
        let lead5 = (Complex64::i() * PI / 2.0 * hankel1_0(5.0) - outgoing_wave(5.0)).norm();
        let lead50 = (Complex64::i() * PI / 2.0 * hankel1_0(50.0) - outgoing_wave(50.0)).norm();
        assert!(lead50 < lead5);
    }

    #[test]
    fn outgoing_wave_envelope() {
        assert_relative_eq!(outgoing_wave(4.0).norm() / outgoing_wave(16.0).norm(), 2.0, max_relative = 1e-14);
    }
}
