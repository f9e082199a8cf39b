//! Roots of complex polynomials by Aberth–Ehrlich iteration with Newton polishing.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `p(z)` and `p'(z)` by Horner's rule; coefficients lowest degree first.
fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All roots of `Σ c_k z^k`, with multiplicity. Trailing zero coefficients
/// are ignored; the zero polynomial is rejected.
pub fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let deg = match coeffs.iter().rposition(|c| c.norm() > 0.0) {
        Some(d) => d,
        None => return Err(Error::InvalidArgument("zero polynomial has no finite root set".into())),
    };
    let lead = coeffs[deg];
    let monic: Vec<Complex64> = coeffs[..=deg].iter().map(|c| c / lead).collect();
    if deg == 0 {
        return Ok(Vec::new());
    }
    if deg == 1 {
        return Ok(vec![-monic[0]]);
    }

    // Fujiwara-style radius for the initial circle.
    let radius = (0..deg)
        .map(|k| monic[k].norm().powf(1.0 / (deg - k) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * (k as f64 + 0.25) / deg as f64))
        .collect();

    for _ in 0..500 {
        let mut moved: f64 = 0.0;
        for i in 0..deg {
            let (p, dp) = horner(&monic, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..deg)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }

    for r in z.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = horner(&monic, *r);
            if dp.norm() == 0.0 {
                break;
            }
            let next = *r - p / dp;
            if !next.is_finite() || horner(&monic, next).0.norm() >= p.norm() {
                break;
            }
            *r = next;
        }
    }
    Ok(z)
}
