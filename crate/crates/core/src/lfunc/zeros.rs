use std::f64::consts::TAU;

use num_complex::Complex64;

use super::{check_nontrivial, l_value_with, rotated_l, ComplexPoint, EmParams};
use crate::characters::DirichletCharacter;
use crate::error::Result;

/// Knobs for the critical-line zero search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroSearch {
    /// Pre-scan spacing in t.
    pub scan_step: f64,
    /// A zero is accepted when `|L(1/2+it)|` is below this.
    pub tolerance: f64,
    pub params: EmParams,
}

impl Default for ZeroSearch {
    fn default() -> Self {
        Self {
            scan_step: 0.01,
            tolerance: 1e-8,
            params: EmParams::default(),
        }
    }
}

/// Ordinates `0 < t_j ≤ t_max` of zeros of `L(1/2 + it, χ)`.
#[derive(Debug, Clone)]
pub struct ZeroList {
    pub character: DirichletCharacter,
    pub zeros: Vec<f64>,
    pub tolerance: f64,
    /// Brackets where something zero-like was seen but could not be confirmed.
    pub unresolved: Vec<(f64, f64)>,
}

impl ZeroList {
    pub fn first(&self) -> Option<f64> {
        self.zeros.first().copied()
    }

    /// Number of zeros in `(lo, hi]`.
    pub fn count_in(&self, lo: f64, hi: f64) -> usize {
        self.zeros.iter().filter(|&&t| t > lo && t <= hi).count()
    }
}

pub fn find_zeros(chi: &DirichletCharacter, t_max: f64) -> Result<ZeroList> {
    find_zeros_with(chi, t_max, ZeroSearch::default())
}

pub fn find_zeros_with(chi: &DirichletCharacter, t_max: f64, cfg: ZeroSearch) -> Result<ZeroList> {
    check_nontrivial(chi)?;
    if !(t_max > 0.0) {
        return Err(crate::Error::InvalidArgument(format!("t_max must be positive, got {t_max}")));
    }
    let steps = (t_max / cfg.scan_step).ceil() as usize;
    let grid: Vec<f64> = (0..=steps)
        .map(|k| (k as f64 * cfg.scan_step).min(t_max))
        .collect();
    let abs_l = |t: f64| -> Result<f64> {
        Ok(l_value_with(ComplexPoint::critical(t), chi, cfg.params)?.norm())
    };

    let mut zeros = Vec::new();
    let mut unresolved = Vec::new();

    if chi.is_real() && chi.is_primitive() {
        let z = |t: f64| -> Result<f64> { Ok(rotated_l(t, chi, cfg.params)?.re) };
        let values: Vec<f64> = grid.iter().map(|&t| z(t)).collect::<Result<_>>()?;
        for k in 1..grid.len() {
            let (a, b) = (grid[k - 1], grid[k]);
            let (fa, fb) = (values[k - 1], values[k]);
            let root = if fb == 0.0 {
                Some(b)
            } else if fa.signum() != fb.signum() && fa != 0.0 {
                Some(brent(&|t| z(t).unwrap_or(f64::NAN), a, b, fa, fb, 1e-13))
            } else {
                None
            };
            if let Some(r) = root {
                if r <= 0.0 {
                    continue;
                }
                if abs_l(r)? < cfg.tolerance {
                    zeros.push(r);
                } else {
                    unresolved.push((a, b));
                }
            }
        }
    } else {
        let values: Vec<f64> = grid.iter().map(|&t| abs_l(t)).collect::<Result<_>>()?;
        for k in 1..grid.len().saturating_sub(1) {
            if !(values[k] <= values[k - 1] && values[k] <= values[k + 1]) {
                continue;
            }
            let (a, b) = (grid[k - 1], grid[k + 1]);
            let r = golden_min(&|t| abs_l(t).unwrap_or(f64::INFINITY), a, b, 1e-13);
            if r <= 0.0 || r > t_max {
                continue;
            }
            let winding = winding_number(chi, r, cfg.scan_step, cfg.params)?;
            if abs_l(r)? < cfg.tolerance && winding == 1 {
                zeros.push(r);
            } else if winding != 0 {
                unresolved.push((a, b));
            }
        }
    }
    zeros.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    Ok(ZeroList {
        character: chi.clone(),
        zeros,
        tolerance: cfg.tolerance,
        unresolved,
    })
}

/// Winding number of `L` around the circle of the given radius centred at `1/2 + it`.
pub(crate) fn winding_number(chi: &DirichletCharacter, t: f64, radius: f64, params: EmParams) -> Result<i64> {
    const SAMPLES: usize = 64;
    let centre = Complex64::new(0.5, t);
    let mut total = 0.0;
    let first = l_value_with(centre + radius, chi, params)?;
    let mut prev = first;
    for k in 1..=SAMPLES {
        let z = centre + Complex64::from_polar(radius, TAU * k as f64 / SAMPLES as f64);
        let cur = if k == SAMPLES { first } else { l_value_with(z, chi, params)? };
        total += (cur / prev).arg();
        prev = cur;
    }
    Ok((total / TAU).round() as i64)
}

/// Brent's method on a sign-changing bracket.
pub(crate) fn brent(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64, mut fb: f64, tol: f64) -> f64 {
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut bisected = true;
    for _ in 0..200 {
        if fb == 0.0 || (b - a).abs() < tol {
            return b;
        }
        let mut s = if fa != fc && fb != fc {
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            b - fb * (b - a) / (fb - fa)
        };
        let lo = (3.0 * a + b) / 4.0;
        let out_of_range = !((s > lo.min(b)) && (s < lo.max(b)));
        if out_of_range
            || (bisected && (s - b).abs() >= (b - c).abs() / 2.0)
            || (!bisected && (s - b).abs() >= (c - d).abs() / 2.0)
            || (bisected && (b - c).abs() < tol)
            || (!bisected && (c - d).abs() < tol)
        {
            s = (a + b) / 2.0;
            bisected = true;
        } else {
            bisected = false;
        }
        let fs = f(s);
        d = c;
        c = b;
        fc = fb;
        if fa * fs < 0.0 {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    b
}

/// Golden-section minimisation on `[a, b]`.
pub(crate) fn golden_min(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}
