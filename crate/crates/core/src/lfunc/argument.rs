use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{check_nontrivial, l_value_with, EmParams};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::grid::{Cutoff, GridSeries, TGrid};

const START_SIGMA: f64 = 2.0;
const MAX_STEP: f64 = 0.1;
const MIN_STEP: f64 = 1e-7;

/// `Im log L(1/2 + it, χ)` on the branch continued horizontally from `σ = +∞`.
///
/// At `σ = 2` the principal logarithm is the right branch since
/// `|L(2+it) − 1| ≤ ζ(2) − 1 < 1`; from there the argument is followed down
/// to the critical line with steps small enough that no step turns by more
/// than `π/4`.
pub fn arg_l_at(t: f64, chi: &DirichletCharacter, params: EmParams) -> Result<f64> {
    let l_at = |sigma: f64| l_value_with(Complex64::new(sigma, t), chi, params);
    let mut sigma = START_SIGMA;
    let mut prev = l_at(sigma)?;
    let mut arg = prev.arg();
    let mut h = MAX_STEP;
    while sigma > 0.5 {
        let next = (sigma - h).max(0.5);
        let cur = l_at(next)?;
        if cur.norm() < 1e-14 {
            return Err(Error::TrackingFailure { t });
        }
        let turn = (cur / prev).arg();
        if turn.abs() > FRAC_PI_4 {
            h /= 2.0;
            if h < MIN_STEP {
                return Err(Error::TrackingFailure { t });
            }
            continue;
        }
        arg += turn;
        sigma = next;
        prev = cur;
        h = (h * 1.5).min(MAX_STEP);
    }
    Ok(arg)
}

/// `Im log L(1/2 + it, χ)` on every grid point, each tracked independently.
pub fn arg_l_continuous(grid: &TGrid, chi: &DirichletCharacter) -> Result<GridSeries> {
    arg_l_continuous_with(grid, chi, EmParams::default())
}

pub fn arg_l_continuous_with(grid: &TGrid, chi: &DirichletCharacter, params: EmParams) -> Result<GridSeries> {
    check_nontrivial(chi)?;
    let values = (0..grid.count)
        .into_par_iter()
        .map(|k| arg_l_at(grid.at(k), chi, params))
        .collect::<Result<Vec<_>>>()?;
    Ok(GridSeries {
        grid: *grid,
        values,
        cutoff: Cutoff::Infinity,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{chi_3, chi_7a};
    use crate::lfunc::find_zeros;
    use std::f64::consts::PI;

    /// `Im log L(1/2+it) = Im Log L(2+it) − ∫_{1/2}^{2} Im L'/L dσ`,
    /// with `L'` by central differences and Simpson's rule.
    fn integrated_arg(t: f64, chi: &DirichletCharacter) -> f64 {
        let p = EmParams::default();
        let dlog = |sigma: f64| {
            let h = 1e-5;
            let l = l_value_with(Complex64::new(sigma, t), chi, p).unwrap();
            let lp = (l_value_with(Complex64::new(sigma + h, t), chi, p).unwrap()
                - l_value_with(Complex64::new(sigma - h, t), chi, p).unwrap())
                / (2.0 * h);
            (lp / l).im
        };
        let n = 3000;
        let (a, b) = (0.5, 2.0);
        let h = (b - a) / n as f64;
        let mut acc = dlog(a) + dlog(b);
        for k in 1..n {
            acc += dlog(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        let integral = acc * h / 3.0;
        l_value_with(Complex64::new(2.0, t), chi, p).unwrap().arg() - integral
    }

    #[test]
    fn real_character_at_origin() {
        let v = arg_l_at(0.0, &chi_3(), EmParams::default()).unwrap();
        assert!(v.abs() < 1e-14);
    }

    #[test]
    fn matches_argument_principle_integration() {
        let chi = chi_3();
        let tracked = arg_l_at(1.0, &chi, EmParams::default()).unwrap();
        let oracle = integrated_arg(1.0, &chi);
        assert!((tracked - oracle).abs() < 1e-6, "{tracked} vs {oracle}");
        let chi = chi_7a();
        let tracked = arg_l_at(6.3, &chi, EmParams::default()).unwrap();
        assert!((tracked - integrated_arg(6.3, &chi)).abs() < 1e-6);
    }

    #[test]
    fn jump_of_pi_across_first_zero() {
        let chi = chi_3();
        let t1 = find_zeros(&chi, 10.0).unwrap().first().unwrap();
        let eps = 1e-4;
        let below = arg_l_at(t1 - eps, &chi, EmParams::default()).unwrap();
        let above = arg_l_at(t1 + eps, &chi, EmParams::default()).unwrap();
        assert!(((above - below) / PI - 1.0).abs() < 1e-2);
    }

    #[test]
    fn grid_is_parallel_safe_and_deterministic() {
        let g = TGrid::span(0.0, 3.0, 0.25).unwrap();
        let a = arg_l_continuous(&g, &chi_7a()).unwrap();
        let b = arg_l_continuous(&g, &chi_7a()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.values.len(), 13);
    }
}
