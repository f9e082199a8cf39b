//! Finite-size behaviour of `L_x` on the critical line: the zero-density
//! analogue `ρ_x`, the argument `R_x`, the counting function `N_x`, and the
//! collapse of `N_x` near the first zero under `z = (t − t_1)/t_1 · x^λ`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::grid::{Cutoff, GridSeries, TGrid};
use crate::lfunc::{arg_l_at, arg_l_continuous, find_zeros, golden_min, theta_chi, EmParams};
use crate::primes::shared_primes;
use crate::products::neg_log_factor;

/// `(log p, χ(p))` for the primes `p ≤ x` with `χ(p) ≠ 0`.
fn weighted_primes(chi: &DirichletCharacter, x: u64) -> Vec<(u64, Complex64)> {
    if x < 2 {
        return Vec::new();
    }
    shared_primes(x)
        .primes_le(x as f64)
        .iter()
        .map(|&p| (p, chi.value_u(p)))
        .filter(|(_, c)| c.norm_sqr() > 0.0)
        .collect()
}

fn on_grid(grid: &TGrid, cutoff: Cutoff, f: impl Fn(f64) -> f64 + Sync) -> GridSeries {
    GridSeries {
        grid: *grid,
        values: (0..grid.count).into_par_iter().map(|k| f(grid.at(k))).collect(),
        cutoff,
    }
}

/// `ρ_x(t) = (1/π) Im d/dt log L_x(1/2+it, χ)`.
///
/// With `c_p = χ(p)p^{-1/2-it}`, `d/dt log L_x = Σ_p (−i log p) c_p / (1 − c_p)`.
pub fn rho_x(grid: &TGrid, chi: &DirichletCharacter, x: u64) -> GridSeries {
    let primes = weighted_primes(chi, x);
    on_grid(grid, Cutoff::Finite(x), |t| {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(p, chi_p) in &primes {
            let lp = (p as f64).ln();
            let c = chi_p * Complex64::from_polar((-0.5 * lp).exp(), -t * lp);
            acc += Complex64::new(0.0, -lp) * c / (1.0 - c);
        }
        acc.im / PI
    })
}

/// `R_x(t) = (1/π) Im log L_x(1/2+it, χ)`; per-factor principal logarithms
/// for finite `x`, the continuously tracked argument of `L` at `x = ∞`.
pub fn r_x(grid: &TGrid, chi: &DirichletCharacter, cutoff: Cutoff) -> Result<GridSeries> {
    match cutoff {
        Cutoff::Finite(x) => {
            let primes = weighted_primes(chi, x);
            Ok(on_grid(grid, cutoff, |t| {
                let s = Complex64::new(0.5, t);
                primes
                    .iter()
                    .map(|&(p, c)| neg_log_factor(c, p, s).im)
                    .sum::<f64>()
                    / PI
            }))
        }
        Cutoff::Infinity => {
            let mut series = arg_l_continuous(grid, chi)?;
            series.values.iter_mut().for_each(|v| *v /= PI);
            Ok(series)
        }
    }
}

/// The constant `c_χ` making `N_∞(t) → 0` as `t → 0⁺`.
///
/// `ϑ_χ(0) = 0`, so this is `−arg L(1/2, χ)/π`.
pub fn calibration_constant(chi: &DirichletCharacter) -> Result<f64> {
    Ok(-arg_l_at(0.0, chi, EmParams::default())? / PI - theta_chi(0.0, chi) / PI)
}

/// `N_x(t) = R_x(t) + ϑ_χ(t)/π + c_χ`.
pub fn n_x(grid: &TGrid, chi: &DirichletCharacter, cutoff: Cutoff) -> Result<GridSeries> {
    let c = calibration_constant(chi)?;
    n_x_calibrated(grid, chi, cutoff, c)
}

pub fn n_x_calibrated(grid: &TGrid, chi: &DirichletCharacter, cutoff: Cutoff, calibration: f64) -> Result<GridSeries> {
    let mut series = r_x(grid, chi, cutoff)?;
    for (k, v) in series.values.iter_mut().enumerate() {
        *v += theta_chi(grid.at(k), chi) / PI + calibration;
    }
    Ok(series)
}

/// Knobs for the collapse of `N_x` near the first zero.
#[derive(Debug, Clone, PartialEq)]
pub struct CollapseConfig {
    /// Each curve contributes only data with `|t − t_1| ≤ window·t_1`.
    pub window: f64,
    /// Common z-grid covers `|z| ≤ z_max`.
    pub z_max: f64,
    pub z_points: usize,
    /// Search interval for `λ`.
    pub lambda_range: (f64, f64),
    /// Spacing of the t-grid on which `N_x` is sampled before resampling in z.
    pub dt: f64,
    /// Precision of the golden-section search.
    pub lambda_tol: f64,
}

impl Default for CollapseConfig {
    fn default() -> Self {
        Self {
            window: 0.2,
            z_max: 2.0,
            z_points: 401,
            lambda_range: (0.01, 1.0),
            dt: 0.005,
            lambda_tol: 1e-5,
        }
    }
}

/// Default cutoffs `p_10, p_50, p_100, p_500, p_1000`.
pub fn default_collapse_cutoffs() -> Vec<u64> {
    [10, 50, 100, 500, 1000]
        .into_iter()
        .map(crate::primes::nth_prime)
        .collect()
}

#[derive(Debug, Clone)]
pub struct CollapseResult {
    pub lambda: f64,
    pub t1: f64,
    /// Mean pairwise RMS deviation between the scaled curves at `lambda`.
    pub spread: f64,
    pub calibration: f64,
    /// `Ñ_x(z)` on the common z-grid, one per cutoff; `NaN` where `z` maps
    /// outside the curve's data window.
    pub curves: Vec<GridSeries>,
}

/// Sampled `N_x` curves around `t_1`, reusable across many `λ`.
#[derive(Debug, Clone)]
pub struct CollapseData {
    pub t1: f64,
    pub calibration: f64,
    pub config: CollapseConfig,
    curves: Vec<GridSeries>,
}

impl CollapseData {
    pub fn new(chi: &DirichletCharacter, cutoffs: &[u64], config: CollapseConfig) -> Result<Self> {
        let t1 = find_zeros(chi, 30.0)?
            .first()
            .ok_or_else(|| Error::InvalidArgument(format!("no zero of {} below t = 30", chi.name())))?;
        Self::with_t1(chi, cutoffs, config, t1)
    }

    pub fn with_t1(chi: &DirichletCharacter, cutoffs: &[u64], config: CollapseConfig, t1: f64) -> Result<Self> {
        if cutoffs.len() < 2 {
            return Err(Error::InvalidArgument("collapse needs at least two cutoffs".into()));
        }
        if cutoffs.iter().any(|&x| x < 2) {
            return Err(Error::InvalidArgument("collapse cutoffs must be at least 2".into()));
        }
        if !(config.window > 0.0 && config.z_max > 0.0 && config.z_points >= 2) {
            return Err(Error::InvalidArgument("collapse window, z_max and z_points must be positive".into()));
        }
        let (lo, hi) = config.lambda_range;
        if !(0.0 < lo && lo < hi) {
            return Err(Error::InvalidArgument(format!("bad λ range [{lo}, {hi}]")));
        }
        let calibration = calibration_constant(chi)?;
        let half = config.window * t1 + config.dt;
        let grid = TGrid::span(t1 - half, t1 + half, config.dt)?;
        let curves = cutoffs
            .iter()
            .map(|&x| n_x_calibrated(&grid, chi, Cutoff::Finite(x), calibration))
            .collect::<Result<_>>()?;
        Ok(Self {
            t1,
            calibration,
            config,
            curves,
        })
    }

    pub fn z_grid(&self) -> TGrid {
        let z = self.config.z_max;
        let n = self.config.z_points;
        TGrid::new(-z, 2.0 * z / (n - 1) as f64, n).expect("z_max is positive")
    }

    /// `Ñ_x(z) = N_x(t_1(1 + z·x^{-λ}))` on the common z-grid.
    pub fn scaled_curves(&self, lambda: f64) -> Vec<GridSeries> {
        let zg = self.z_grid();
        let w = self.config.window;
        self.curves
            .iter()
            .map(|c| {
                let x = c.cutoff.value().expect("finite cutoff") as f64;
                let scale = x.powf(-lambda);
                let values = zg
                    .points()
                    .map(|z| {
                        let r = z * scale;
                        if r.abs() <= w {
                            c.interpolate(self.t1 * (1.0 + r)).unwrap_or(f64::NAN)
                        } else {
                            f64::NAN
                        }
                    })
                    .collect();
                GridSeries {
                    grid: zg,
                    values,
                    cutoff: c.cutoff,
                }
            })
            .collect()
    }

    /// Mean over curve pairs of the RMS difference, each pair compared on
    /// the z-points both curves cover.
    pub fn spread(&self, lambda: f64) -> f64 {
        let curves = self.scaled_curves(lambda);
        let pairs: Vec<(usize, usize)> = (0..curves.len()).flat_map(|i| (0..i).map(move |j| (i, j))).collect();
        let rms: Vec<f64> = pairs
            .par_iter()
            .filter_map(|&(i, j)| {
                let d: Vec<f64> = curves[i]
                    .values
                    .iter()
                    .zip(&curves[j].values)
                    .filter(|(a, b)| a.is_finite() && b.is_finite())
                    .map(|(a, b)| (a - b).powi(2))
                    .collect();
                (d.len() >= 2).then(|| (d.iter().sum::<f64>() / d.len() as f64).sqrt())
            })
            .collect();
        if rms.is_empty() {
            f64::INFINITY
        } else {
            rms.iter().sum::<f64>() / rms.len() as f64
        }
    }

    /// Golden-section search for the minimising `λ`, narrowed first by a
    /// 0.01 scan when the coarse profile has several local minima.
    pub fn fit_lambda(&self) -> Result<f64> {
        let (lo, hi) = self.config.lambda_range;
        let f = |l: f64| self.spread(l);
        let scan = |step: f64| -> Vec<(f64, f64)> {
            let n = ((hi - lo) / step).round().max(2.0) as usize;
            (0..=n)
                .map(|k| lo + (hi - lo) * k as f64 / n as f64)
                .map(|l| (l, f(l)))
                .collect()
        };
        let coarse = scan(0.05);
        let local_minima = (0..coarse.len())
            .filter(|&k| {
                (k == 0 || coarse[k].1 < coarse[k - 1].1) && (k + 1 == coarse.len() || coarse[k].1 < coarse[k + 1].1)
            })
            .count();
        let (a, b) = if local_minima <= 1 {
            (lo, hi)
        } else {
            let best = scan(0.01)
                .into_iter()
                .min_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap()
                .0;
            ((best - 0.01).max(lo), (best + 0.01).min(hi))
        };
        let lambda = golden_min(&f, a, b, self.config.lambda_tol);
        let edge = 10.0 * self.config.lambda_tol;
        if lambda - lo < edge || hi - lambda < edge {
            return Err(Error::SearchAtBoundary { lambda });
        }
        Ok(lambda)
    }

    pub fn result(&self, lambda: f64) -> CollapseResult {
        CollapseResult {
            lambda,
            t1: self.t1,
            spread: self.spread(lambda),
            calibration: self.calibration,
            curves: self.scaled_curves(lambda),
        }
    }
}

/// Fit the scaling exponent `λ` collapsing `N_x` near the first zero.
pub fn collapse(chi: &DirichletCharacter, cutoffs: &[u64], config: CollapseConfig) -> Result<CollapseResult> {
    let data = CollapseData::new(chi, cutoffs, config)?;
    let lambda = data.fit_lambda()?;
    Ok(data.result(lambda))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::{chi_3, chi_7a, chi_7b};
    use crate::lfunc::find_zeros;
    use crate::primes::nth_prime;

    #[test]
    fn empty_product_gives_flat_curves() {
        let g = TGrid::span(-2.0, 2.0, 0.5).unwrap();
        assert!(rho_x(&g, &chi_3(), 1).values.iter().all(|&v| v == 0.0));
        assert!(r_x(&g, &chi_3(), Cutoff::Finite(1)).unwrap().values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn real_character_symmetries() {
        let g = TGrid::span(-15.0, 15.0, 0.005).unwrap();
        let chi = chi_3();
        let x = nth_prime(100);
        let rho = rho_x(&g, &chi, x);
        let r = r_x(&g, &chi, Cutoff::Finite(x)).unwrap();
        let n = g.count;
        for k in 0..n {
            assert!((rho.values[k] - rho.values[n - 1 - k]).abs() < 1e-12);
            assert!((r.values[k] + r.values[n - 1 - k]).abs() < 1e-12);
        }
        assert!(r.values[n / 2].abs() < 1e-15);
    }

    fn max_fd_error(chi: &DirichletCharacter, x: u64, step: f64, five_point: bool) -> f64 {
        let g = TGrid::span(0.0, 15.0, step).unwrap();
        let rho = rho_x(&g, chi, x);
        let r = r_x(&g, chi, Cutoff::Finite(x)).unwrap();
        let v = &r.values;
        (2..g.count - 2)
            .map(|k| {
                let fd = if five_point {
                    (v[k - 2] - 8.0 * v[k - 1] + 8.0 * v[k + 1] - v[k + 2]) / (12.0 * step)
                } else {
                    (v[k + 1] - v[k - 1]) / (2.0 * step)
                };
                (fd - rho.values[k]).abs()
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn rho_is_the_derivative_of_r() {
        for chi in [chi_7a(), chi_3()] {
            for n in [10, 1000] {
                let x = nth_prime(n);
                let err = max_fd_error(&chi, x, 0.0025, true);
                assert!(err < 1e-6, "{} n={n}: {err}", chi.name());
                let coarse = max_fd_error(&chi, x, 0.004, false);
                let fine = max_fd_error(&chi, x, 0.002, false);
                let order = (coarse / fine).log2();
                assert!((order - 2.0).abs() < 0.2, "{} n={n}: order {order}", chi.name());
            }
        }
    }

    #[test]
    fn peak_near_first_zero_sharpens() {
        let chi = chi_3();
        let g = TGrid::span(6.0, 10.0, 0.005).unwrap();
        let t1 = 8.0397;
        let peaks: Vec<f64> = [10, 100, 1000]
            .iter()
            .map(|&n| rho_x(&g, &chi, nth_prime(n)).argmax_in(t1 - 1.0, t1 + 1.0).unwrap().1)
            .collect();
        assert!(peaks[0] < peaks[1] && peaks[1] < peaks[2], "{peaks:?}");
        let (t_peak, _) = rho_x(&g, &chi, nth_prime(1000)).argmax_in(6.0, 10.0).unwrap();
        assert!((t_peak - t1).abs() < 0.2);
    }

    #[test]
    fn counting_function_steps_by_one() {
        let chi = chi_3();
        let zeros = find_zeros(&chi, 15.0).unwrap();
        let t1 = zeros.first().unwrap();
        let g = TGrid::new(0.01, t1 - 0.5 - 0.01, 2).unwrap();
        let before = n_x(&g, &chi, Cutoff::Infinity).unwrap();
        assert!(before.values[0].abs() < 1e-6);
        let g = TGrid::new(t1 - 0.5, 1.0, 2).unwrap();
        let across = n_x(&g, &chi, Cutoff::Infinity).unwrap();
        assert!((across.values[1] - across.values[0] - 1.0).abs() < 1e-2);
        let at15 = n_x(&TGrid::new(15.0, 1.0, 1).unwrap(), &chi, Cutoff::Infinity).unwrap();
        assert!((at15.values[0] - zeros.count_in(0.0, 15.0) as f64).abs() < 0.1);
    }

    #[test]
    fn complex_character_is_calibrated() {
        let chi = chi_7a();
        let c = calibration_constant(&chi).unwrap();
        assert!(c.abs() > 1e-3);
        let g = TGrid::new(0.001, 1.0, 4).unwrap();
        let n = n_x(&g, &chi, Cutoff::Infinity).unwrap();
        assert!(n.values.iter().all(|v| v.abs() < 1e-6), "{:?}", n.values);
    }

    #[test]
    fn collapse_optimum_is_local() {
        let chi = chi_7b();
        let data = CollapseData::new(&chi, &default_collapse_cutoffs(), CollapseConfig::default()).unwrap();
        let lambda = data.fit_lambda().unwrap();
        let s = data.spread(lambda);
        assert!(s < data.spread(lambda - 0.05) && s < data.spread(lambda + 0.05));
    }
}
