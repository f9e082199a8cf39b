use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;

use drh_core::characters::{fundamental_discriminants, kronecker_character, parse_character, DirichletCharacter, RootOfUnity};
use drh_core::curves::{
    count_hyperelliptic, jackson_q_integral, theorem2_limit, theorem2_partial, theorem3_partial_with, zeta_from_counts,
    CurveData, CurveZeta,
};
use drh_core::ffield::{ff_character, ff_character_of_order, ff_l_polynomial, ff_mertens_sum, verify_ff_drh, PolyOverFq};
use drh_core::grid::Cutoff;
use drh_core::lfunc::{find_zeros_with, l_value_with};
use drh_core::products::{
    convergence_grid, default_alpha_cutoffs, drh_target_with, fit_alpha, partial_product,
};
use drh_core::scaling::{calibration_constant, n_x_calibrated, rho_x, CollapseConfig, CollapseData};

use crate::config::{CutoffSpec, RunConfig};
use crate::output::{num, Table};
use crate::Common;

const DEFAULT_FIGURE_CUTOFFS: &[&str] = &["p10", "p100", "p1000", "inf"];
const DEFAULT_DENSITY_CUTOFFS: &[&str] = &["p10", "p100", "p1000"];
const DEFAULT_COLLAPSE_CUTOFFS: &[&str] = &["p10", "p50", "p100", "p500", "p1000"];

fn character(cfg: &mut RunConfig, o: &Common, default: &str) -> Result<DirichletCharacter> {
    let spec = cfg.value("char", o.character.clone(), default.to_string())?;
    parse_character(&spec).with_context(|| format!("character '{spec}'"))
}

fn out_path(cfg: &mut RunConfig, o: &Common) -> Result<Option<PathBuf>> {
    Ok(cfg
        .optional("out", o.out.as_ref().map(|p| p.display().to_string()))?
        .map(PathBuf::from))
}

fn complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { "-" } else { "+" };
    format!("{}{sign}{}i", num(z.re), num(z.im.abs()))
}

fn finite(specs: &[CutoffSpec]) -> Result<Vec<u64>> {
    specs
        .iter()
        .map(|c| c.cutoff.value().ok_or_else(|| anyhow!("cutoff inf is not allowed here")))
        .collect()
}

pub fn table1(mut cfg: RunConfig, o: &Common) -> Result<()> {
    let ds = cfg.list("d", o.d.clone(), fundamental_discriminants(29))?;
    let cutoff = match cfg.cutoffs(o.cutoffs.clone(), &["1e7"])?.as_slice() {
        [c] => c.cutoff.value().ok_or_else(|| anyhow!("table1 needs a finite cutoff"))?,
        _ => bail!("table1 takes exactly one cutoff"),
    };
    let params = cfg.em_params(o.em_terms)?;
    let out = out_path(&mut cfg, o)?;

    let mut table = Table::new(["d", "sqrt2L", "E", "ratio"]);
    table.meta("s", "1/2");
    table.meta("cutoff", cutoff);
    let mut failed = Vec::new();
    for d in ds {
        let row = kronecker_character(d).map_err(anyhow::Error::from).and_then(|chi| {
            let target = drh_target_with(0.5, &chi, params)?;
            let e = partial_product(0.5, &chi, cutoff as f64)?;
            Ok((target.re, e.re))
        });
        match row {
            Ok((l, e)) => table.row(vec![d.to_string(), num(l), num(e), num(l / e)]),
            Err(err) => {
                eprintln!("d={d}: {err:#}");
                failed.push(d);
            }
        }
    }
    table.emit(&cfg, out.as_deref())?;
    if !failed.is_empty() {
        bail!("{} of {} rows failed: {failed:?}", failed.len(), failed.len() + table.len());
    }
    Ok(())
}

pub fn converge(mut cfg: RunConfig, o: &Common) -> Result<()> {
    let chi = character(&mut cfg, o, "chi_3")?;
    let sigma = cfg.value("sigma", o.sigma, 0.5)?;
    if sigma < 0.5 {
        bail!("sigma must be at least 1/2");
    }
    let grid = cfg.t_grid((o.tmin, o.tmax, o.dt), (0.0, 30.0, 0.1))?;
    let specs = cfg.cutoffs(o.cutoffs.clone(), DEFAULT_FIGURE_CUTOFFS)?;
    let params = cfg.em_params(o.em_terms)?;
    let out = out_path(&mut cfg, o)?;

    let finite: Vec<Cutoff> = specs.iter().map(|c| c.cutoff).filter(|c| *c != Cutoff::Infinity).collect();
    let series = convergence_grid(sigma, &chi, &grid, &finite)?;
    let with_inf = specs.iter().any(|c| c.cutoff == Cutoff::Infinity);

    let mut columns = vec!["t".to_string()];
    for c in &specs {
        columns.push(format!("re_{}", c.label));
        columns.push(format!("im_{}", c.label));
    }
    let mut table = Table::new(columns);
    table.meta("character", chi.name());
    table.meta("sigma", sigma);
    for k in 0..grid.count {
        let t = grid.at(k);
        let mut row = vec![num(t)];
        for s in &series {
            row.push(num(s.values[k].re));
            row.push(num(s.values[k].im));
        }
        if with_inf {
            let l = l_value_with(Complex64::new(sigma, t), &chi, params)?;
            row.push(num(l.re));
            row.push(num(l.im));
        }
        table.row(row);
    }
    table.emit(&cfg, out.as_deref())
}

pub fn alpha(mut cfg: RunConfig, o: &Common) -> Result<()> {
    let chi = character(&mut cfg, o, "chi_7a")?;
    let sigmas = match cfg.optional("sigma", o.sigma)? {
        Some(s) => vec![s],
        None => vec![0.5, 0.75, 1.0],
    };
    let cutoffs: Vec<f64> = if !o.cutoffs.is_empty() || cfg.in_file("cutoffs") {
        finite(&cfg.cutoffs(o.cutoffs.clone(), &[])?)?
            .into_iter()
            .map(|x| x as f64)
            .collect()
    } else {
        let c = default_alpha_cutoffs();
        // long grid: record its shape rather than every value
        cfg.record("cutoffs", format!("log-uniform[{}..{}]x{}", c[0], c[c.len() - 1], c.len()));
        c
    };
    let out = out_path(&mut cfg, o)?;

    let mut table = Table::new(["sigma", "alpha", "intercept", "residual", "points"]);
    table.meta("character", chi.name());
    for s in sigmas {
        let fit = fit_alpha(s, &chi, &cutoffs)?;
        table.row(vec![
            num(s),
            format!("{:.4}", fit.exponent),
            num(fit.intercept),
            num(fit.residual),
            fit.sample_points.to_string(),
        ]);
    }
    table.emit(&cfg, out.as_deref())
}

pub fn density(mut cfg: RunConfig, o: &Common) -> Result<()> {
    let chi = character(&mut cfg, o, "chi_3")?;
    let grid = cfg.t_grid((o.tmin, o.tmax, o.dt), (0.0, 30.0, 0.01))?;
    let specs = cfg.cutoffs(o.cutoffs.clone(), DEFAULT_DENSITY_CUTOFFS)?;
    let xs = finite(&specs)?;
    let out = out_path(&mut cfg, o)?;

    let series: Vec<_> = xs.iter().map(|&x| rho_x(&grid, &chi, x)).collect();
    let mut table = Table::new(std::iter::once("t".to_string()).chain(specs.iter().map(|c| format!("rho_{}", c.label))));
    table.meta("character", chi.name());
    for k in 0..grid.count {
        let mut row = vec![num(grid.at(k))];
        row.extend(series.iter().map(|s| num(s.values[k])));
        table.row(row);
    }
    table.emit(&cfg, out.as_deref())
}

pub fn counting(mut cfg: RunConfig, o: &Common) -> Result<()> {
    let chi = character(&mut cfg, o, "chi_3")?;
    let grid = cfg.t_grid((o.tmin, o.tmax, o.dt), (0.0, 30.0, 0.01))?;
    let specs = cfg.cutoffs(o.cutoffs.clone(), DEFAULT_FIGURE_CUTOFFS)?;
    let params = cfg.em_params(o.em_terms)?;
    let search = cfg.zero_search(o.zero_tol, params)?;
    let out = out_path(&mut cfg, o)?;

    let c = calibration_constant(&chi)?;
    let series = specs
        .iter()
        .map(|s| n_x_calibrated(&grid, &chi, s.cutoff, c))
        .collect::<drh_core::Result<Vec<_>>>()?;
    let zeros = find_zeros_with(&chi, grid.stop().max(1.0), search)?;

    let mut table = Table::new(std::iter::once("t".to_string()).chain(specs.iter().map(|c| format!("N_{}", c.label))));
    table.meta("character", chi.name());
    table.meta("calibration", num(c));
    let listed: Vec<String> = zeros.zeros.iter().map(|t| format!("{t:.6}")).collect();
    table.meta("zeros", listed.join(" "));
    for k in 0..grid.count {
        let mut row = vec![num(grid.at(k))];
        row.extend(series.iter().map(|s| num(s.values[k])));
        table.row(row);
    }
    table.emit(&cfg, out.as_deref())
}

pub fn collapse(mut cfg: RunConfig, o: &Common, a: crate::CollapseArgs) -> Result<()> {
    let chi = character(&mut cfg, o, "chi_3")?;
    let specs = cfg.cutoffs(o.cutoffs.clone(), DEFAULT_COLLAPSE_CUTOFFS)?;
    let xs = finite(&specs)?;
    let defaults = CollapseConfig::default();
    let window = cfg.value("window", a.window, defaults.window)?;
    if !(window > 0.0 && window < 1.0) {
        bail!("window must be in (0, 1)");
    }
    let fixed = cfg.optional("lambda", a.lambda)?;
    let params = cfg.em_params(o.em_terms)?;
    let search = cfg.zero_search(o.zero_tol, params)?;
    let out = out_path(&mut cfg, o)?;

    let t1 = find_zeros_with(&chi, 30.0, search)?
        .first()
        .ok_or_else(|| anyhow!("no zero of {} below t = 30", chi.name()))?;
    let config = CollapseConfig { window, ..defaults };
    let data = CollapseData::with_t1(&chi, &xs, config, t1)?;
    let lambda = match fixed {
        Some(l) => l,
        None => data.fit_lambda()?,
    };
    let result = data.result(lambda);
    let z = data.z_grid();

    let mut table = Table::new(std::iter::once("z".to_string()).chain(specs.iter().map(|c| format!("N_{}", c.label))));
    table.meta("character", chi.name());
    table.meta("t1", format!("{t1:.6}"));
    table.meta("lambda", format!("{lambda:.4}"));
    table.meta("spread", num(result.spread));
    table.meta("calibration", num(result.calibration));
    for k in 0..z.count {
        let mut row = vec![num(z.at(k))];
        row.extend(result.curves.iter().map(|s| num(s.values[k])));
        table.row(row);
    }
    table.emit(&cfg, out.as_deref())
}

fn parse_generator(q: u64, s: &str) -> Result<(PolyOverFq, RootOfUnity)> {
    let (p, r) = s.rsplit_once('=').ok_or_else(|| anyhow!("generator '{s}' is not <poly>=<root>"))?;
    let poly: PolyOverFq = if p.contains(':') { p.parse()? } else { format!("{q}:{p}").parse()? };
    Ok((poly, r.parse()?))
}

pub fn ff_verify(mut cfg: RunConfig, o: &Common, a: crate::FfArgs) -> Result<()> {
    let modulus = cfg
        .optional("modulus", a.modulus)?
        .ok_or_else(|| anyhow!("ff-verify needs --modulus q:c0,c1,..."))?;
    let f: PolyOverFq = modulus.parse().with_context(|| format!("modulus '{modulus}'"))?;
    let gens = if a.generators.is_empty() {
        Vec::new()
    } else {
        cfg.list("gen", a.generators, Vec::new())?
    };
    let order = cfg.optional("order", a.order)?;
    let t = cfg.value("t", a.t, 0.0)?;
    let n = cfg.value("n", a.n, 12usize)?;
    let out = out_path(&mut cfg, o)?;

    let chi = match (gens.is_empty(), order) {
        (false, None) => {
            let assignments = gens.iter().map(|g| parse_generator(f.q(), g)).collect::<Result<Vec<_>>>()?;
            ff_character(&f, &assignments)?
        }
        (true, Some(m)) => ff_character_of_order(&f, m)?,
        _ => bail!("give either --gen values or --order"),
    };
    let lpoly = ff_l_polynomial(&chi)?;
    let report = verify_ff_drh(&chi, t, n)?;

    let mut table = Table::new(["n", "re_E", "im_E", "dev"]);
    table.meta("character", chi.name());
    table.meta("order", chi.order());
    table.meta("conductor", chi.conductor());
    table.meta("L coefficients", lpoly.coefficients.iter().map(|c| complex(*c)).collect::<Vec<_>>().join(" "));
    table.meta("|roots|", lpoly.roots.iter().map(|r| format!("{:.10}", r.norm())).collect::<Vec<_>>().join(" "));
    table.meta("L", complex(report.l_value));
    table.meta("sqrt2 branch", report.sqrt2_branch);
    table.meta("target", complex(report.target));
    table.meta("decreasing", report.decreasing());
    for (k, (e, d)) in report.products.iter().zip(&report.deviations).enumerate() {
        table.row(vec![(k + 1).to_string(), num(e.re), num(e.im), num(*d)]);
    }
    table.emit(&cfg, out.as_deref())
}

fn parse_roots(s: &str) -> Result<Vec<Complex64>> {
    s.split(',')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(|x| {
            let (re, im) = x.split_once(':').unwrap_or((x, "0"));
            Ok(Complex64::new(re.trim().parse()?, im.trim().parse()?))
        })
        .collect()
}

pub fn curve_drh(mut cfg: RunConfig, o: &Common, a: crate::CurveArgs) -> Result<()> {
    let p1 = cfg.flag("p1", a.p1)?;
    let counts = cfg.optional("counts", o.counts.as_ref().map(|p| p.display().to_string()))?;
    let hyper = cfg.optional("hyperelliptic", a.hyperelliptic)?;
    let n = cfg.value("n", a.n, 40usize)?;
    if n == 0 {
        bail!("n must be at least 1");
    }
    let alphas = cfg.optional("alphas", a.alphas)?;
    let betas = cfg.optional("betas", a.betas)?;

    let data = match (p1, counts, hyper) {
        (true, None, None) => {
            let q = cfg.value("q", a.q, 2u64)?;
            CurveData::projective_line(q, 2)?
        }
        (false, Some(path), None) => {
            let text = std::fs::read_to_string(&path).with_context(|| format!("reading {path}"))?;
            text.parse::<CurveData>().with_context(|| format!("counts file {path}"))?
        }
        (false, None, Some(poly)) => {
            let f: PolyOverFq = poly.parse().with_context(|| format!("polynomial '{poly}'"))?;
            let deg = f.degree().unwrap_or(0);
            let g = deg.saturating_sub(1) / 2;
            count_hyperelliptic(&f, g.max(1))?
        }
        _ => bail!("give exactly one of --p1, --counts, --hyperelliptic"),
    };
    let out = out_path(&mut cfg, o)?;

    let zeta: CurveZeta = match (alphas, betas) {
        (None, None) => zeta_from_counts(&data)?,
        (al, be) => CurveZeta::from_roots(
            data.q,
            data.dim,
            parse_roots(al.as_deref().unwrap_or(""))?,
            parse_roots(be.as_deref().unwrap_or(""))?,
        )?,
    };
    let is_curve = data.dim == 1;

    let mut columns = vec!["n"];
    if is_curve {
        columns.extend(["theorem2", "theorem2_dev"]);
    }
    columns.push("theorem3_ratio");
    let mut table = Table::new(columns);
    table.meta("q", data.q);
    table.meta("dim", data.dim);
    if let Some(g) = zeta.genus() {
        table.meta("genus", g);
        table.meta("numerator", zeta.numerator.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "));
    }
    table.meta("residue", num(zeta.residue()));
    let limit = if is_curve {
        let lim = theorem2_limit(&zeta);
        table.meta("zeta(1/2)", num(lim.zeta_half));
        table.meta("|zeta(1/2)|", num(lim.abs_zeta_half));
        table.meta("theorem2 limit", num(lim.limit));
        Some(lim.limit)
    } else {
        None
    };

    for k in 1..=n {
        let mut row = vec![k.to_string()];
        if let Some(limit) = limit {
            let e = theorem2_partial(&data, k)?;
            row.push(num(e));
            row.push(num(e / limit - 1.0));
        }
        row.push(num(theorem3_partial_with(&data, &zeta, k)?));
        table.row(row);
    }
    table.emit(&cfg, out.as_deref())
}

pub fn mertens(mut cfg: RunConfig, o: &Common, a: crate::MertensArgs) -> Result<()> {
    let q = cfg.value("q", a.q, 2u64)?;
    let n = cfg.value("n", a.n, 32usize)?;
    if n < 2 {
        bail!("n must be at least 2");
    }
    let out = out_path(&mut cfg, o)?;
    let mut table = Table::new(["n", "sum_n", "sum_2n_minus_sum_n"]);
    table.meta("log 2", num(2f64.ln()));
    for k in 2..=n {
        let s = ff_mertens_sum(q, k)?;
        let s2 = ff_mertens_sum(q, 2 * k)?;
        table.row(vec![k.to_string(), num(s), num(s2 - s)]);
    }
    table.emit(&cfg, out.as_deref())
}

pub fn jackson(mut cfg: RunConfig, o: &Common, a: crate::JacksonArgs) -> Result<()> {
    let qs = cfg.list("q", a.q, vec![2u64, 3, 5])?;
    let n = cfg.value("n", a.n, 30usize)?;
    if qs.iter().any(|&q| q < 2) {
        bail!("q must be at least 2");
    }
    let out = out_path(&mut cfg, o)?;
    let mut table = Table::new(["q", "n", "lhs", "rhs", "rel_diff"]);
    for &q in &qs {
        for k in 1..=n {
            let (l, r) = jackson_q_integral(q, k);
            table.row(vec![q.to_string(), k.to_string(), num(l), num(r), num((l - r).abs() / l.abs())]);
        }
    }
    table.emit(&cfg, out.as_deref())
}
