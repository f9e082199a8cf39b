//! Complex log-gamma on the right half-plane.

use num_complex::Complex64;
use std::f64::consts::PI;

/// `B_{2k} / (2k(2k-1))` for the Stirling series, k = 1..=10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

/// `log Γ(z)` for `Re z > 0`, on the branch that is real on the positive
/// axis and continuous in `z` (no `2π` jumps in the imaginary part).
///
/// The recurrence shift depends only on `Re z`, so on any vertical line the
/// result is a continuous function of `Im z`.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    assert!(z.re > 0.0, "ln_gamma needs Re z > 0, got {z}");
    let shift = (12.0 - z.re).max(0.0).ceil() as usize;
    let mut correction = Complex64::new(0.0, 0.0);
    for k in 0..shift {
        correction += (z + k as f64).ln();
    }
    let w = z + shift as f64;
    let inv = 1.0 / w;
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        series += p * c;
        p *= inv2;
    }
    (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series - correction
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_axis_matches_factorials() {
        let mut fact = 1.0f64;
        for n in 1..20 {
            let g = ln_gamma(Complex64::new(n as f64, 0.0));
            assert!((g.re - fact.ln()).abs() < 1e-12, "n={n}");
            assert_eq!(g.im, 0.0);
            fact *= n as f64;
        }
        let half = ln_gamma(Complex64::new(0.5, 0.0));
        assert!((half.re - 0.5 * PI.ln()).abs() < 1e-13);
    }

    #[test]
    fn recurrence_and_reflection_modulus() {
        // |Γ(1/2 + it)|² = π / cosh(πt)
        for t in [0.3, 2.0, 7.5, 20.0] {
            let g = ln_gamma(Complex64::new(0.5, t));
            let expected = 0.5 * (PI / (PI * t).cosh()).ln();
            assert!((g.re - expected).abs() < 1e-11, "t={t}");
            let z = Complex64::new(0.25, t);
            let lhs = ln_gamma(z + 1.0);
            let rhs = ln_gamma(z) + z.ln();
            assert!((lhs - rhs).norm() < 1e-11);
        }
    }

    #[test]
    fn imaginary_part_has_no_jumps() {
        let mut prev = ln_gamma(Complex64::new(0.25, 0.0)).im;
        for k in 1..=20_000 {
            let g = ln_gamma(Complex64::new(0.25, k as f64 * 0.005)).im;
            assert!((g - prev).abs() < 0.1);
            prev = g;
        }
    }
}
