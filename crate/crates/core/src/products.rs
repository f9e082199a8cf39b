//! Partial Euler products `L_x(s, χ) = Π_{p≤x} (1 − χ(p)p^{-s})^{-1}` and the
//! quantities built from them: the √2-corrected comparison target, the
//! relative error `δL_x`, its power-law exponent, and `ψ(x, χ)`.

use std::f64::consts::SQRT_2;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::grid::{Cutoff, GridSeries, TGrid};
use crate::lfunc::{l_value, l_value_with, ComplexPoint, EmParams};
use crate::primes::{nth_prime, shared_primes};

/// `−log(1 − χ(p)p^{-s})`, principal branch.
#[inline]
pub(crate) fn neg_log_factor(chi_p: Complex64, p: u64, s: Complex64) -> Complex64 {
    let lp = (p as f64).ln();
    let w = chi_p * Complex64::from_polar((-s.re * lp).exp(), -s.im * lp);
    -(Complex64::new(1.0, 0.0) - w).ln()
}

fn singular(p: u64, chi_p: Complex64, s: Complex64) -> bool {
    let lp = (p as f64).ln();
    let w = chi_p * Complex64::from_polar((-s.re * lp).exp(), -s.im * lp);
    (Complex64::new(1.0, 0.0) - w).norm() == 0.0
}

/// `L_x(s, χ)`, accumulated as a sum of per-factor logarithms in increasing `p`.
pub fn partial_product(s: impl Into<Complex64>, chi: &DirichletCharacter, x: f64) -> Result<Complex64> {
    Ok(log_partial_product(s, chi, x)?.exp())
}

/// `log L_x(s, χ)` as the sum of principal per-factor logarithms.
pub fn log_partial_product(s: impl Into<Complex64>, chi: &DirichletCharacter, x: f64) -> Result<Complex64> {
    let s = s.into();
    if x < 2.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let table = shared_primes(x.floor() as u64);
    let mut acc = Complex64::new(0.0, 0.0);
    for &p in table.primes_le(x) {
        let c = chi.value_u(p);
        if c.norm_sqr() == 0.0 {
            continue;
        }
        if singular(p, c, s) {
            return Err(Error::SingularFactor(format!("p = {p}")));
        }
        acc += neg_log_factor(c, p, s);
    }
    Ok(acc)
}

/// Running multiplicative product; kept for cross-checks where `σ ≥ 1`.
pub fn partial_product_direct(s: impl Into<Complex64>, chi: &DirichletCharacter, x: f64) -> Result<Complex64> {
    let s = s.into();
    let one = Complex64::new(1.0, 0.0);
    let mut acc = one;
    if x < 2.0 {
        return Ok(acc);
    }
    for &p in shared_primes(x.floor() as u64).primes_le(x) {
        let c = chi.value_u(p);
        if c.norm_sqr() == 0.0 {
            continue;
        }
        let lp = (p as f64).ln();
        let denom = one - c * Complex64::from_polar((-s.re * lp).exp(), -s.im * lp);
        if denom.norm() == 0.0 {
            return Err(Error::SingularFactor(format!("p = {p}")));
        }
        acc /= denom;
    }
    Ok(acc)
}

/// `L_x(s, χ)` along an ascending list of cutoffs.
#[derive(Debug, Clone)]
pub struct PartialProductSeries {
    pub character: DirichletCharacter,
    pub s: ComplexPoint,
    pub cutoffs: Vec<f64>,
    pub values: Vec<Complex64>,
}

/// One pass over the primes, recording the product at each cutoff.
pub fn partial_product_series(
    s: impl Into<ComplexPoint>,
    chi: &DirichletCharacter,
    cutoffs: &[f64],
) -> Result<PartialProductSeries> {
    let point = s.into();
    let s: Complex64 = point.into();
    if cutoffs.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("cutoffs must be ascending".into()));
    }
    let max = cutoffs.last().copied().unwrap_or(0.0).max(2.0);
    let table = shared_primes(max.floor() as u64);
    let primes = table.primes_le(max);
    let mut values = Vec::with_capacity(cutoffs.len());
    let mut acc = Complex64::new(0.0, 0.0);
    let mut idx = 0;
    for &x in cutoffs {
        while idx < primes.len() && (primes[idx] as f64) <= x {
            let p = primes[idx];
            let c = chi.value_u(p);
            if c.norm_sqr() > 0.0 {
                if singular(p, c, s) {
                    return Err(Error::SingularFactor(format!("p = {p}")));
                }
                acc += neg_log_factor(c, p, s);
            }
            idx += 1;
        }
        values.push(acc.exp());
    }
    Ok(PartialProductSeries {
        character: chi.clone(),
        s: point,
        cutoffs: cutoffs.to_vec(),
        values,
    })
}

/// The limit predicted for `L_x(s, χ)`: `√2·L(1/2, χ)` at the centre for
/// quadratic `χ`, `L(s, χ)` otherwise.
pub fn drh_target(s: impl Into<ComplexPoint>, chi: &DirichletCharacter) -> Result<Complex64> {
    drh_target_with(s, chi, EmParams::default())
}

pub fn drh_target_with(s: impl Into<ComplexPoint>, chi: &DirichletCharacter, params: EmParams) -> Result<Complex64> {
    let s = s.into();
    let l = l_value_with(s, chi, params)?;
    if l.norm() < 1e-12 {
        return Err(Error::ZeroTarget);
    }
    Ok(if s.is_central() && chi.is_quadratic() {
        l * SQRT_2
    } else {
        l
    })
}

/// `δL_x(s, χ) = |L_x − target| / |target|`.
pub fn delta_l(s: impl Into<ComplexPoint>, chi: &DirichletCharacter, x: f64) -> Result<f64> {
    let s = s.into();
    let target = drh_target(s, chi)?;
    let lx = partial_product(s, chi, x)?;
    Ok((lx - target).norm() / target.norm())
}

/// Least-squares power law `δL_x ≈ C·x^{-α}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitResult {
    /// `α` (or `λ`), the negated log-log slope.
    pub exponent: f64,
    pub intercept: f64,
    /// RMS residual of the log-log fit.
    pub residual: f64,
    pub sample_points: usize,
}

/// Ordinary least squares of `y` against `x`, as (slope, intercept, rms residual).
pub fn linear_fit(points: &[(f64, f64)]) -> Result<(f64, f64, f64)> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return Err(Error::DegenerateFit("fewer than two points".into()));
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("all abscissae equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = points
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    Ok((slope, intercept, (rss / n).sqrt()))
}

/// Default cutoffs for exponent fits: `x = 10^{1 + k/10}` for `k = 0..=60`,
/// i.e. ten points per decade on `[10, 10^7]`.
pub fn default_alpha_cutoffs() -> Vec<f64> {
    log_uniform_cutoffs(10.0, 1e7, 10)
}

/// Cutoffs spaced log-uniformly on `[lo, hi]` with `per_decade` points per decade.
pub fn log_uniform_cutoffs(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let n = (decades * per_decade as f64).round() as usize;
    (0..=n)
        .map(|k| lo * 10f64.powf(decades * k as f64 / n.max(1) as f64))
        .collect()
}

/// `p_n` for `count` indices spaced geometrically between `n_lo` and `n_hi`.
pub fn geometric_prime_cutoffs(n_lo: usize, n_hi: usize, count: usize) -> Vec<f64> {
    let (a, b) = ((n_lo as f64).ln(), (n_hi as f64).ln());
    let mut idx: Vec<usize> = (0..count)
        .map(|k| (a + (b - a) * k as f64 / (count - 1).max(1) as f64).exp().round() as usize)
        .collect();
    idx.dedup();
    idx.into_iter().map(|n| nth_prime(n) as f64).collect()
}

/// Fit `δL_x(s, χ) ∼ x^{-α}` over the cutoffs.
pub fn fit_alpha(s: impl Into<ComplexPoint>, chi: &DirichletCharacter, cutoffs: &[f64]) -> Result<FitResult> {
    let s = s.into();
    if cutoffs.len() < 8 {
        return Err(Error::InvalidArgument("exponent fit needs at least 8 cutoffs".into()));
    }
    let (lo, hi) = (cutoffs[0], cutoffs[cutoffs.len() - 1]);
    if !(lo > 0.0 && hi / lo >= 100.0 * (1.0 - 1e-12)) {
        return Err(Error::InvalidArgument("cutoffs must span at least two decades".into()));
    }
    let target = drh_target(s, chi)?;
    let series = partial_product_series(s, chi, cutoffs)?;
    let points: Vec<(f64, f64)> = series
        .cutoffs
        .iter()
        .zip(&series.values)
        .map(|(&x, &v)| (x, (v - target).norm() / target.norm()))
        .filter(|&(_, d)| d > 0.0)
        .map(|(x, d)| (x.ln(), d.ln()))
        .collect();
    if points.len() < 2 {
        return Err(Error::DegenerateFit("δL vanishes at every cutoff".into()));
    }
    let (slope, intercept, residual) = linear_fit(&points)?;
    Ok(FitResult {
        exponent: -slope,
        intercept,
        residual,
        sample_points: points.len(),
    })
}

/// `ψ(x, χ) = Σ_{p^m ≤ x} χ(p) log p`.
pub fn psi(x: f64, chi: &DirichletCharacter) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    if x < 2.0 {
        return acc;
    }
    for &p in shared_primes(x.floor() as u64).primes_le(x) {
        let c = chi.value_u(p);
        if c.norm_sqr() == 0.0 {
            continue;
        }
        let lp = (p as f64).ln();
        let mut pm = p as f64;
        let mut count = 0u32;
        while pm <= x {
            count += 1;
            pm *= p as f64;
        }
        acc += c * (lp * count as f64);
    }
    acc
}

/// `L_x(σ + it, χ)` on a t-grid for each cutoff, with the `x = ∞` reference
/// from the analytic continuation appended last.
pub fn convergence_grid(
    sigma: f64,
    chi: &DirichletCharacter,
    grid: &TGrid,
    cutoffs: &[Cutoff],
) -> Result<Vec<GridSeries<Complex64>>> {
    let finite: Vec<u64> = cutoffs.iter().filter_map(Cutoff::value).collect();
    if finite.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::InvalidArgument("cutoffs must be ascending".into()));
    }
    let with_infinity = cutoffs.contains(&Cutoff::Infinity);
    let max = finite.last().copied().unwrap_or(2);
    let table = shared_primes(max);
    let primes = table.primes_le(max as f64);

    let rows: Vec<(Vec<Complex64>, Option<Complex64>)> = (0..grid.count)
        .into_par_iter()
        .map(|k| -> Result<_> {
            let s = Complex64::new(sigma, grid.at(k));
            let mut acc = Complex64::new(0.0, 0.0);
            let mut idx = 0;
            let mut row = Vec::with_capacity(finite.len());
            for &x in &finite {
                while idx < primes.len() && primes[idx] <= x {
                    let c = chi.value_u(primes[idx]);
                    if c.norm_sqr() > 0.0 {
                        acc += neg_log_factor(c, primes[idx], s);
                    }
                    idx += 1;
                }
                row.push(acc.exp());
            }
            let reference = if with_infinity { Some(l_value(s, chi)?) } else { None };
            Ok((row, reference))
        })
        .collect::<Result<_>>()?;

    let mut out: Vec<GridSeries<Complex64>> = finite
        .iter()
        .enumerate()
        .map(|(j, &x)| GridSeries {
            grid: *grid,
            values: rows.iter().map(|r| r.0[j]).collect(),
            cutoff: Cutoff::Finite(x),
        })
        .collect();
    if with_infinity {
        out.push(GridSeries {
            grid: *grid,
            values: rows.iter().map(|r| r.1.unwrap()).collect(),
            cutoff: Cutoff::Infinity,
        });
    }
    Ok(out)
}
