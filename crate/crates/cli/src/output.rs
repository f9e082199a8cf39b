//! CSV tables with `#`-prefixed metadata lines.

use std::fmt::Display;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};

use crate::config::RunConfig;

#[derive(Debug, Default)]
pub struct Table {
    meta: Vec<(String, String)>,
    columns: Vec<String>,
    rows: Vec<Vec<String>>,
}

/// Shortest round-trip representation; stable across runs.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x.is_nan() {
        "nan".to_string()
    } else if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            ..Self::default()
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Display) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn write_to(&self, cfg: &RunConfig, w: &mut impl Write) -> std::io::Result<()> {
        writeln!(w, "# command: {}", cfg.command)?;
        writeln!(w, "# version: drh-cli {} drh-core {}", env!("CARGO_PKG_VERSION"), drh_core::VERSION)?;
        let config: Vec<String> = cfg.entries().iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(w, "# config: {}", config.join(" "))?;
        for (k, v) in &self.meta {
            writeln!(w, "# {k}: {v}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }

    /// Write to `out`, or to stdout when no path is given.
    pub fn emit(&self, cfg: &RunConfig, out: Option<&Path>) -> Result<()> {
        match out {
            Some(path) => {
                let file = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
                let mut w = std::io::BufWriter::new(file);
                self.write_to(cfg, &mut w)?;
                w.flush()?;
            }
            None => {
                let stdout = std::io::stdout();
                let mut w = stdout.lock();
                let written = self.write_to(cfg, &mut w).and_then(|_| w.flush());
                match written {
                    Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                    other => other?,
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.0, 1.0, -2.5, 4.828427124746190, 1e-17, -3.2e-9, 1e20, 0.000123] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(1e-17), "1e-17");
        assert_eq!(num(0.5), "0.5");
        assert_eq!(num(f64::NAN), "nan");
    }
}
