//! Uniform t-grids and the curves sampled on them.

use std::fmt;

use crate::error::{Error, Result};

/// `count` points `start + k·step`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TGrid {
    pub start: f64,
    pub step: f64,
    pub count: usize,
}

impl TGrid {
    pub fn new(start: f64, step: f64, count: usize) -> Result<Self> {
        if !(step > 0.0) || !start.is_finite() || count == 0 {
            return Err(Error::InvalidArgument(format!(
                "grid needs step > 0 and at least one point (start {start}, step {step}, count {count})"
            )));
        }
        Ok(Self { start, step, count })
    }

    /// Grid from `start` to `stop` inclusive (rounded to the nearest whole step).
    pub fn span(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(stop >= start) {
            return Err(Error::InvalidArgument(format!("grid stop {stop} below start {start}")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        Self::new(start, step, count)
    }

    #[inline]
    pub fn at(&self, k: usize) -> f64 {
        self.start + k as f64 * self.step
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.count).map(|k| self.at(k))
    }

    pub fn to_vec(&self) -> Vec<f64> {
        self.points().collect()
    }

    pub fn stop(&self) -> f64 {
        self.at(self.count - 1)
    }
}

/// Cutoff of a partial Euler product: all primes `p ≤ x`, or the full L-function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cutoff {
    Finite(u64),
    Infinity,
}

impl Cutoff {
    /// `p_n`, the n-th prime.
    pub fn nth_prime(n: usize) -> Self {
        Cutoff::Finite(crate::primes::nth_prime(n))
    }

    pub fn value(&self) -> Option<u64> {
        match self {
            Cutoff::Finite(x) => Some(*x),
            Cutoff::Infinity => None,
        }
    }
}

impl fmt::Display for Cutoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cutoff::Finite(x) => write!(f, "{x}"),
            Cutoff::Infinity => write!(f, "inf"),
        }
    }
}

/// Values on a uniform grid, labelled by the cutoff that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSeries<T = f64> {
    pub grid: TGrid,
    pub values: Vec<T>,
    pub cutoff: Cutoff,
}

impl<T: Copy> GridSeries<T> {
    pub fn iter(&self) -> impl Iterator<Item = (f64, T)> + '_ {
        self.grid.points().zip(self.values.iter().copied())
    }
}

impl GridSeries<f64> {
    /// Linear interpolation; `None` outside the grid.
    pub fn interpolate(&self, t: f64) -> Option<f64> {
        let pos = (t - self.grid.start) / self.grid.step;
        if pos < -1e-9 || pos > (self.grid.count - 1) as f64 + 1e-9 {
            return None;
        }
        let pos = pos.clamp(0.0, (self.grid.count - 1) as f64);
        let k = (pos.floor() as usize).min(self.grid.count.saturating_sub(2));
        if self.grid.count == 1 {
            return Some(self.values[0]);
        }
        let frac = pos - k as f64;
        Some(self.values[k] * (1.0 - frac) + self.values[k + 1] * frac)
    }

    /// Index of the largest value within `[lo, hi]`.
    pub fn argmax_in(&self, lo: f64, hi: f64) -> Option<(f64, f64)> {
        self.iter()
            .filter(|(t, _)| *t >= lo && *t <= hi)
            .max_by(|a, b| a.1.total_cmp(&b.1))
    }
}
