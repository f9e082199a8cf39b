//! Dirichlet L-values, the phase `ϑ_χ`, zeros on the critical line and the
//! continuously tracked argument of `L(1/2 + it, χ)`.

mod argument;
mod gamma;
mod hurwitz;
mod zeros;

pub use argument::{arg_l_at, arg_l_continuous, arg_l_continuous_with};
pub use gamma::ln_gamma;
pub use hurwitz::{hurwitz_zeta, hurwitz_zeta_with, EmParams};
pub use zeros::{find_zeros, find_zeros_with, ZeroList, ZeroSearch};
pub(crate) use zeros::golden_min;

use num_complex::Complex64;

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use hurwitz::{hurwitz_regular, real_pow_neg};

/// `s = σ + it`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexPoint {
    pub sigma: f64,
    pub t: f64,
}

impl ComplexPoint {
    pub fn new(sigma: f64, t: f64) -> Self {
        Self { sigma, t }
    }

    /// `1/2 + it`.
    pub fn critical(t: f64) -> Self {
        Self { sigma: 0.5, t }
    }

    pub fn real(sigma: f64) -> Self {
        Self { sigma, t: 0.0 }
    }

    pub fn conj(self) -> Self {
        Self {
            sigma: self.sigma,
            t: -self.t,
        }
    }

    pub fn is_central(self) -> bool {
        self.sigma == 0.5 && self.t == 0.0
    }
}

impl From<ComplexPoint> for Complex64 {
    fn from(p: ComplexPoint) -> Self {
        Complex64::new(p.sigma, p.t)
    }
}

impl From<Complex64> for ComplexPoint {
    fn from(z: Complex64) -> Self {
        Self { sigma: z.re, t: z.im }
    }
}

impl From<f64> for ComplexPoint {
    fn from(sigma: f64) -> Self {
        Self::real(sigma)
    }
}

/// `L(s, χ) = N^{-s} Σ_a χ(a) ζ(s, a/N)`.
pub fn l_value(s: impl Into<Complex64>, chi: &DirichletCharacter) -> Result<Complex64> {
    l_value_with(s, chi, EmParams::default())
}

pub fn l_value_with(
    s: impl Into<Complex64>,
    chi: &DirichletCharacter,
    params: EmParams,
) -> Result<Complex64> {
    let s = s.into();
    let n = chi.modulus();
    let nf = n as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    if chi.is_trivial() {
        for a in 1..=n {
            if chi.exponent(a as i64).is_some() {
                sum += hurwitz_zeta_with(s, a as f64 / nf, params)?;
            }
        }
    } else {
        // Σ χ(a) = 0 cancels the 1/(s-1) of every Hurwitz term, so the
        // regular parts suffice and s = 1 needs no special handling.
        for a in 1..=n {
            let c = chi.value_u(a);
            if c.norm_sqr() > 0.0 {
                sum += c * hurwitz_regular(s, a as f64 / nf, params);
            }
        }
    }
    Ok(real_pow_neg(nf, s) * sum)
}

/// `ϑ_χ(t) = Im log Γ((1/2 + a + it)/2) − (t/2) log(π/N)` for a primitive `χ`
/// of parity `a`; `e^{iϑ_χ(t)} L(1/2+it, χ)` has constant phase in `t`.
pub fn theta_chi(t: f64, chi: &DirichletCharacter) -> f64 {
    let a = chi.parity() as f64;
    let n = chi.modulus() as f64;
    ln_gamma(Complex64::new((0.5 + a) / 2.0, t / 2.0)).im - 0.5 * t * (std::f64::consts::PI / n).ln()
}

/// `e^{iϑ_χ(t)} L(1/2+it, χ)`; real for real primitive characters.
pub fn rotated_l(t: f64, chi: &DirichletCharacter, params: EmParams) -> Result<Complex64> {
    let l = l_value_with(ComplexPoint::critical(t), chi, params)?;
    Ok(Complex64::from_polar(1.0, theta_chi(t, chi)) * l)
}

pub(crate) fn check_nontrivial(chi: &DirichletCharacter) -> Result<()> {
    if chi.is_trivial() {
        Err(Error::InvalidArgument("character must be nontrivial".into()))
    } else {
        Ok(())
    }
}
