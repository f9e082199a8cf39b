//! Option resolution: command-line flags over a `key=value` config file over
//! built-in defaults. Every resolved value is recorded for the CSV header.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use drh_core::grid::{Cutoff, TGrid};
use drh_core::lfunc::{EmParams, ZeroSearch};

/// Keys accepted in a config file; the same names as the long flags.
const KNOWN_KEYS: &[&str] = &[
    "char", "d", "sigma", "tmin", "tmax", "dt", "cutoffs", "counts", "out", "em-terms", "zero-tol", "window",
    "lambda", "modulus", "gen", "order", "t", "n", "q", "p1", "hyperelliptic", "alphas", "betas",
];

pub const MAX_EM_TERMS: usize = 15;
pub const MAX_ZERO_TOL: f64 = 1e-3;

/// A cutoff as written by the user, kept for column labels.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffSpec {
    pub label: String,
    pub cutoff: Cutoff,
}

impl FromStr for CutoffSpec {
    type Err = anyhow::Error;

    /// `p<n>` for the n-th prime, `inf`, or a plain number `x`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let cutoff = if s.eq_ignore_ascii_case("inf") {
            Cutoff::Infinity
        } else if let Some(n) = s.strip_prefix('p') {
            let n: usize = n.parse().with_context(|| format!("prime index in cutoff '{s}'"))?;
            if n == 0 {
                bail!("prime indices start at 1");
            }
            Cutoff::nth_prime(n)
        } else {
            let x: f64 = s.parse().with_context(|| format!("cutoff '{s}'"))?;
            if !(x >= 2.0 && x.is_finite()) {
                bail!("cutoff {x} must be at least 2");
            }
            Cutoff::Finite(x.floor() as u64)
        };
        Ok(Self {
            label: s.to_string(),
            cutoff,
        })
    }
}

pub fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: Display,
{
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| x.parse::<T>().map_err(|e| anyhow!("'{x}': {e}")))
        .collect()
}

#[derive(Debug, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected key=value", i + 1))?;
            let k = k.trim().replace('_', "-");
            if !KNOWN_KEYS.contains(&k.as_str()) {
                bail!("line {}: unknown key '{k}'", i + 1);
            }
            values.insert(k, v.trim().to_string());
        }
        Ok(Self { values })
    }
}

/// The resolved configuration of one run.
#[derive(Debug)]
pub struct RunConfig {
    pub command: &'static str,
    file: ConfigFile,
    /// Resolved `key=value` pairs in resolution order.
    used: Vec<(String, String)>,
}

impl RunConfig {
    pub fn new(command: &'static str, file: ConfigFile) -> Self {
        Self {
            command,
            file,
            used: Vec::new(),
        }
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.used
    }

    pub fn in_file(&self, key: &str) -> bool {
        self.file.values.contains_key(key)
    }

    pub fn record(&mut self, key: &str, value: impl Display) {
        self.used.push((key.to_string(), value.to_string()));
    }

    /// Flag, else file entry, else nothing; records what was found.
    pub fn optional<T>(&mut self, key: &str, flag: Option<T>) -> Result<Option<T>>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let value = match flag {
            Some(v) => Some(v),
            None => match self.file.values.get(key) {
                Some(raw) => Some(raw.parse::<T>().map_err(|e| anyhow!("config key {key}: {e}"))?),
                None => None,
            },
        };
        if let Some(v) = &value {
            self.record(key, v);
        }
        Ok(value)
    }

    pub fn value<T>(&mut self, key: &str, flag: Option<T>, default: T) -> Result<T>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        match self.optional(key, flag)? {
            Some(v) => Ok(v),
            None => {
                self.record(key, &default);
                Ok(default)
            }
        }
    }

    /// Comma-separated list: flag values, else the file entry, else the default.
    pub fn list<T>(&mut self, key: &str, flag: Vec<T>, default: Vec<T>) -> Result<Vec<T>>
    where
        T: FromStr + Display,
        T::Err: Display,
    {
        let values = match flag {
            v if !v.is_empty() => v,
            _ => match self.file.values.get(key) {
                Some(raw) => parse_list(raw).with_context(|| format!("config key {key}"))?,
                None => default,
            },
        };
        let joined = values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",");
        self.record(key, joined);
        Ok(values)
    }

    pub fn flag(&mut self, key: &str, flag: bool) -> Result<bool> {
        let v = flag
            || match self.file.values.get(key) {
                Some(raw) => raw.parse::<bool>().map_err(|e| anyhow!("config key {key}: {e}"))?,
                None => false,
            };
        if v {
            self.record(key, true);
        }
        Ok(v)
    }

    /// The t window `[tmin, tmax]` with step `dt`.
    pub fn t_grid(&mut self, flags: (Option<f64>, Option<f64>, Option<f64>), default: (f64, f64, f64)) -> Result<TGrid> {
        let tmin = self.value("tmin", flags.0, default.0)?;
        let tmax = self.value("tmax", flags.1, default.1)?;
        let dt = self.value("dt", flags.2, default.2)?;
        if !(dt > 0.0) {
            bail!("dt must be positive, got {dt}");
        }
        if tmax < tmin {
            bail!("tmax {tmax} is below tmin {tmin}");
        }
        Ok(TGrid::span(tmin, tmax, dt)?)
    }

    /// Cutoff list; must be ascending with `inf` only last.
    pub fn cutoffs(&mut self, flag: Vec<CutoffSpec>, default: &[&str]) -> Result<Vec<CutoffSpec>> {
        let default = default.iter().map(|s| s.parse()).collect::<Result<Vec<CutoffSpec>>>()?;
        let specs = match flag {
            v if !v.is_empty() => v,
            _ => match self.file.values.get("cutoffs") {
                Some(raw) => parse_list(raw).context("config key cutoffs")?,
                None => default,
            },
        };
        let joined = specs.iter().map(|c| c.label.as_str()).collect::<Vec<_>>().join(",");
        self.record("cutoffs", joined);
        let key = |c: &CutoffSpec| c.cutoff.value().unwrap_or(u64::MAX);
        if specs.windows(2).any(|w| key(&w[0]) >= key(&w[1])) {
            bail!("cutoffs must be strictly ascending");
        }
        Ok(specs)
    }

    pub fn em_params(&mut self, flag: Option<usize>) -> Result<EmParams> {
        let terms = self.value("em-terms", flag, EmParams::default().bernoulli_terms)?;
        if !(1..=MAX_EM_TERMS).contains(&terms) {
            bail!("em-terms must be in 1..={MAX_EM_TERMS}, got {terms}");
        }
        Ok(EmParams {
            bernoulli_terms: terms,
            ..EmParams::default()
        })
    }

    pub fn zero_search(&mut self, flag: Option<f64>, params: EmParams) -> Result<ZeroSearch> {
        let tol = self.value("zero-tol", flag, ZeroSearch::default().tolerance)?;
        if !(tol > 0.0 && tol <= MAX_ZERO_TOL) {
            bail!("zero-tol must be in (0, {MAX_ZERO_TOL}], got {tol}");
        }
        Ok(ZeroSearch {
            tolerance: tol,
            params,
            ..ZeroSearch::default()
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let file = ConfigFile::parse("sigma = 0.75\n# comment\nchar=chi_7a\n").unwrap();
        let mut cfg = RunConfig::new("converge", file);
        assert_eq!(cfg.value("sigma", Some(1.0), 0.5).unwrap(), 1.0);
        assert_eq!(cfg.value("char", None, "chi_3".to_string()).unwrap(), "chi_7a");
        assert_eq!(cfg.value("tmin", None, 2.0).unwrap(), 2.0);
        assert_eq!(cfg.entries()[1], ("char".to_string(), "chi_7a".to_string()));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_lines() {
        assert!(ConfigFile::parse("sigmaa=1").is_err());
        assert!(ConfigFile::parse("sigma").is_err());
        assert!(ConfigFile::parse("zero_tol=1e-9").is_ok());
    }

    #[test]
    fn cutoff_specs() {
        let c: CutoffSpec = "p10".parse().unwrap();
        assert_eq!(c.cutoff, Cutoff::Finite(29));
        assert_eq!("inf".parse::<CutoffSpec>().unwrap().cutoff, Cutoff::Infinity);
        assert_eq!("1e4".parse::<CutoffSpec>().unwrap().cutoff, Cutoff::Finite(10_000));
        assert!("p0".parse::<CutoffSpec>().is_err());
        assert!("1".parse::<CutoffSpec>().is_err());
        let mut cfg = RunConfig::new("x", ConfigFile::default());
        assert!(cfg.cutoffs(parse_list("p100,p10").unwrap(), &[]).is_err());
        assert!(cfg.cutoffs(parse_list("inf,p10").unwrap(), &[]).is_err());
        assert!(cfg.cutoffs(parse_list("p10,p100,inf").unwrap(), &[]).is_ok());
    }

    #[test]
    fn precision_knobs_are_range_checked() {
        let mut cfg = RunConfig::new("x", ConfigFile::default());
        assert!(cfg.em_params(Some(0)).is_err());
        assert!(cfg.em_params(Some(16)).is_err());
        let p = cfg.em_params(Some(10)).unwrap();
        assert!(cfg.zero_search(Some(0.0), p).is_err());
        assert!(cfg.zero_search(Some(1e-10), p).is_ok());
        assert!(cfg.t_grid((Some(0.0), Some(1.0), Some(0.0)), (0.0, 1.0, 0.1)).is_err());
    }
}
