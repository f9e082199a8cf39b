//! Zeta functions of curves over finite fields from point counts, and the
//! Mertens-type products over closed points.

use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arith::{divisors, mobius};
use crate::error::{Error, Result};
use crate::ffield::{irreducibles_of_degree, PolyOverFq};
use crate::roots::poly_roots;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Point counts `|X(F_{q^l})|` for `l = 1..=counts.len()`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveData {
    pub q: u64,
    pub dim: u32,
    /// Required for curves (`dim = 1`).
    pub genus: Option<u32>,
    pub counts: Vec<i128>,
}

fn inconsistent(msg: impl Into<String>) -> Error {
    Error::InconsistentCounts(msg.into())
}

impl CurveData {
    /// Validates that every closed-point count `b_d` is a nonnegative integer.
    pub fn new(q: u64, dim: u32, genus: Option<u32>, counts: Vec<i128>) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidArgument(format!("q = {q} is not a field size")));
        }
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        if dim == 1 && genus.is_none() {
            return Err(Error::InvalidArgument("curve data needs a genus".into()));
        }
        if let Some(l) = counts.iter().position(|&c| c < 0) {
            return Err(inconsistent(format!("negative count at l = {}", l + 1)));
        }
        let data = Self { q, dim, genus, counts };
        data.closed_points()?;
        Ok(data)
    }

    /// `P^1` over `F_q`: `|X(F_{q^l})| = q^l + 1`.
    pub fn projective_line(q: u64, l_max: usize) -> Result<Self> {
        let counts = (1..=l_max as u32)
            .map(|l| (q as i128).checked_pow(l).map(|v| v + 1).ok_or_else(|| overflow()))
            .collect::<Result<_>>()?;
        Self::new(q, 1, Some(0), counts)
    }

    pub fn max_degree(&self) -> usize {
        self.counts.len()
    }

    /// `b_d = (1/d) Σ_{e|d} μ(e) |X(F_{q^{d/e}})|` for `d = 1..=L`.
    pub fn closed_points(&self) -> Result<Vec<i128>> {
        (1..=self.counts.len() as u64)
            .map(|d| {
                let s: i128 = divisors(d)
                    .into_iter()
                    .map(|e| mobius(e) as i128 * self.counts[(d / e - 1) as usize])
                    .sum();
                if s % d as i128 != 0 || s < 0 {
                    return Err(inconsistent(format!(
                        "closed points of degree {d} would be {s}/{d}"
                    )));
                }
                Ok(s / d as i128)
            })
            .collect()
    }

    /// Counts up to `l_max`, extended through the zeta function when needed.
    pub fn extended(&self, l_max: usize) -> Result<CurveData> {
        if l_max <= self.counts.len() {
            let mut out = self.clone();
            out.counts.truncate(l_max.max(1));
            return Ok(out);
        }
        let zeta = zeta_from_counts(self)?;
        let counts = zeta.exact_counts(l_max)?;
        Self::new(self.q, self.dim, self.genus, counts)
    }
}

fn overflow() -> Error {
    Error::InvalidArgument("point counts overflow 128 bits".into())
}

/// Counts file: a header `q=<q> dim=<d> genus=<g>` then lines `l=<l> count=<N>`.
impl FromStr for CurveData {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| Error::Parse("empty counts file".into()))?;
        let fields = parse_fields(header)?;
        let get = |k: &str| fields.iter().find(|(key, _)| key == k).map(|(_, v)| v.clone());
        let q: u64 = get("q")
            .ok_or_else(|| Error::Parse("header needs q=".into()))?
            .parse()
            .map_err(|_| Error::Parse("bad q".into()))?;
        let dim: u32 = get("dim").map_or(Ok(1), |v| v.parse().map_err(|_| Error::Parse("bad dim".into())))?;
        let genus: Option<u32> = get("genus")
            .map(|v| v.parse().map_err(|_| Error::Parse("bad genus".into())))
            .transpose()?;
        let mut counts: Vec<Option<i128>> = Vec::new();
        for line in lines {
            let f = parse_fields(line)?;
            let find = |k: &str| {
                f.iter()
                    .find(|(key, _)| key == k)
                    .map(|(_, v)| v.clone())
                    .ok_or_else(|| Error::Parse(format!("line {line:?} needs {k}=")))
            };
            let l: usize = find("l")?.parse().map_err(|_| Error::Parse(format!("bad l in {line:?}")))?;
            let n: i128 = find("count")?
                .parse()
                .map_err(|_| Error::Parse(format!("bad count in {line:?}")))?;
            if l == 0 {
                return Err(Error::Parse("l starts at 1".into()));
            }
            if counts.len() < l {
                counts.resize(l, None);
            }
            if counts[l - 1].replace(n).is_some() {
                return Err(Error::Parse(format!("l={l} given twice")));
            }
        }
        let counts = counts
            .into_iter()
            .enumerate()
            .map(|(i, c)| c.ok_or_else(|| Error::Parse(format!("missing count for l={}", i + 1))))
            .collect::<Result<Vec<_>>>()?;
        if counts.is_empty() {
            return Err(Error::Parse("no counts given".into()));
        }
        CurveData::new(q, dim, genus, counts)
    }
}

fn parse_fields(line: &str) -> Result<Vec<(String, String)>> {
    line.split_whitespace()
        .map(|tok| {
            tok.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {tok:?}")))
        })
        .collect()
}

impl fmt::Display for CurveData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q={} dim={}", self.q, self.dim)?;
        if let Some(g) = self.genus {
            write!(f, " genus={g}")?;
        }
        writeln!(f)?;
        for (l, c) in self.counts.iter().enumerate() {
            writeln!(f, "l={} count={c}", l + 1)?;
        }
        Ok(())
    }
}

/// `ζ(X, s) = Π_i (1 − α_i q^{-s}) / ((1 − q^{dim−s}) Π_j (1 − β_j q^{-s}))`.
///
/// For a curve of genus `g` the `α_i` are the `2g` reciprocal roots of the
/// numerator `P(u)` and `β = [1]`.
#[derive(Debug, Clone)]
pub struct CurveZeta {
    pub q: u64,
    pub dim: u32,
    pub alphas: Vec<Complex64>,
    pub betas: Vec<Complex64>,
    /// Exact numerator `P(u) = Σ a_k u^k` for curves; empty otherwise.
    pub numerator: Vec<i128>,
}

impl CurveZeta {
    /// A zeta function given directly by its `α` and `β` lists.
    pub fn from_roots(q: u64, dim: u32, alphas: Vec<Complex64>, betas: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || q < 2 {
            return Err(Error::InvalidArgument("need q ≥ 2 and dim ≥ 1".into()));
        }
        let bound = (q as f64).powi(dim as i32);
        if alphas.iter().chain(&betas).any(|r| r.norm() >= bound) {
            return Err(Error::InvalidArgument(format!("roots must have modulus below q^dim = {bound}")));
        }
        Ok(Self {
            q,
            dim,
            alphas,
            betas,
            numerator: Vec::new(),
        })
    }

    pub fn genus(&self) -> Option<usize> {
        (!self.numerator.is_empty()).then(|| (self.numerator.len() - 1) / 2)
    }

    /// `ζ(X, s)` at real `s` away from the poles.
    pub fn eval(&self, s: f64) -> Complex64 {
        let u = (self.q as f64).powf(-s);
        let num: Complex64 = self.alphas.iter().map(|a| 1.0 - a * u).product();
        let den: Complex64 = self.betas.iter().map(|b| 1.0 - b * u).product::<Complex64>()
            * (1.0 - (self.q as f64).powi(self.dim as i32) * u);
        num / den
    }

    /// `Res_{s=dim} ζ(X, s) = (1/log q) Π(1 − α_i q^{-dim}) / Π(1 − β_j q^{-dim})`.
    pub fn residue(&self) -> f64 {
        let u = (self.q as f64).powi(-(self.dim as i32));
        let num: Complex64 = self.alphas.iter().map(|a| 1.0 - a * u).product();
        let den: Complex64 = self.betas.iter().map(|b| 1.0 - b * u).product();
        (num / den).re / (self.q as f64).ln()
    }

    /// `q^{l·dim} + Σ β_j^l − Σ α_i^l`.
    pub fn count(&self, l: u32) -> f64 {
        let main = (self.q as f64).powi((l * self.dim) as i32);
        let b: Complex64 = self.betas.iter().map(|b| b.powu(l)).sum();
        let a: Complex64 = self.alphas.iter().map(|a| a.powu(l)).sum();
        main + (b - a).re
    }

    /// Exact `|X(F_{q^l})|` for `l = 1..=l_max` from the integer numerator.
    pub fn exact_counts(&self, l_max: usize) -> Result<Vec<i128>> {
        if self.numerator.is_empty() {
            return Err(Error::InvalidArgument(
                "exact counts need a curve numerator; supply counts for this scheme".into(),
            ));
        }
        let sums = power_sums(&self.numerator, l_max)?;
        (1..=l_max)
            .map(|l| {
                (self.q as i128)
                    .checked_pow(l as u32)
                    .and_then(|v| v.checked_add(1))
                    .and_then(|v| v.checked_sub(sums[l]))
                    .ok_or_else(overflow)
            })
            .collect()
    }
}

/// Power sums `p_l = Σ α^l`, `l = 0..=l_max`, of the reciprocal roots of
/// `P(u) = Σ a_k u^k`, by `p_l = −l a_l − Σ_{i<l} a_i p_{l−i}`.
fn power_sums(a: &[i128], l_max: usize) -> Result<Vec<i128>> {
    let deg = a.len() - 1;
    let mut p = vec![deg as i128];
    for l in 1..=l_max {
        let mut v: i128 = if l <= deg { -(l as i128) * a[l] } else { 0 };
        for i in 1..l.min(deg + 1) {
            v = a[i]
                .checked_mul(p[l - i])
                .and_then(|t| v.checked_sub(t))
                .ok_or_else(overflow)?;
        }
        p.push(v);
    }
    Ok(p)
}

/// Numerator and roots of the zeta function of a curve from its point counts.
pub fn zeta_from_counts(data: &CurveData) -> Result<CurveZeta> {
    if data.dim != 1 {
        return Err(Error::InvalidArgument(
            "counts determine the zeta function only for curves; give alpha/beta lists for dim > 1".into(),
        ));
    }
    let g = data.genus.ok_or_else(|| Error::InvalidArgument("curve data needs a genus".into()))? as usize;
    if data.counts.len() < g {
        return Err(inconsistent(format!("genus {g} needs counts for l = 1..{g}")));
    }
    let q = data.q as i128;
    let p: Vec<i128> = std::iter::once(2 * g as i128)
        .chain(
            data.counts
                .iter()
                .enumerate()
                .map(|(i, &n)| q.pow(i as u32 + 1) + 1 - n),
        )
        .collect();

    // k a_k = −Σ_{i=1..k} p_i a_{k−i}
    let mut a = vec![1i128];
    for k in 1..=g {
        let s: i128 = (1..=k).map(|i| p[i] * a[k - i]).sum();
        if s % k as i128 != 0 {
            return Err(inconsistent(format!("numerator coefficient a_{k} = {}/{k} is not an integer", -s)));
        }
        a.push(-s / k as i128);
    }
    for k in (0..g).rev() {
        let v = q.checked_pow((g - k) as u32).and_then(|m| m.checked_mul(a[k])).ok_or_else(overflow)?;
        a.push(v);
    }

    let implied = power_sums(&a, data.counts.len())?;
    if let Some(l) = (1..=data.counts.len()).find(|&l| implied[l] != p[l]) {
        return Err(inconsistent(format!(
            "count at l = {l} disagrees with the genus-{g} functional equation"
        )));
    }

    let reversed: Vec<Complex64> = a.iter().rev().map(|&c| Complex64::new(c as f64, 0.0)).collect();
    let alphas = if g == 0 { Vec::new() } else { poly_roots(&reversed)? };
    let sq = (data.q as f64).sqrt();
    if let Some(r) = alphas.iter().find(|r| (r.norm() / sq - 1.0).abs() > 1e-6) {
        return Err(inconsistent(format!("root {r} violates |α| = √q")));
    }
    Ok(CurveZeta {
        q: data.q,
        dim: 1,
        alphas,
        betas: vec![Complex64::new(1.0, 0.0)],
        numerator: a,
    })
}

/// `−log(1 − x)` for `0 ≤ x < 1`.
fn neg_log1m(x: f64) -> f64 {
    -(-x).ln_1p()
}

/// `−log(1 − x) − x`, by its series when `x` is small.
fn neg_log1m_minus_x(x: f64) -> f64 {
    if x > 0.25 {
        return neg_log1m(x) - x;
    }
    let mut term = x;
    let mut sum = 0.0;
    for k in 2..200 {
        term *= x;
        let t = term / k as f64;
        sum += t;
        if t < 1e-18 * sum {
            break;
        }
    }
    sum
}

/// `Π_{deg x ≤ n} (1 − N(x)^{-1/2})^{-1} · exp(−Σ_{l≤n} q^{l/2}/l)` for a curve.
pub fn theorem2_partial(data: &CurveData, n: usize) -> Result<f64> {
    if data.dim != 1 {
        return Err(Error::InvalidArgument("the compensated product is stated for curves".into()));
    }
    let b = data.extended(n)?.closed_points()?;
    let q = data.q as f64;
    // b_d(−log(1−w)) − q^{d/2}/d = w(d·b_d − q^d)/d + b_d(−log(1−w) − w),
    // with the integer part exact so the main terms cancel without rounding.
    let log: f64 = (1..=n)
        .map(|d| {
            let w = q.powf(-(d as f64) / 2.0);
            let excess = match (data.q as i128).checked_pow(d as u32) {
                Some(qd) => (d as i128 * b[d - 1] - qd) as f64,
                None => d as f64 * b[d - 1] as f64 - q.powi(d as i32),
            };
            w * excess / d as f64 + b[d - 1] as f64 * neg_log1m_minus_x(w)
        })
        .sum();
    Ok(log.exp())
}

/// The predicted limit of [`theorem2_partial`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Theorem2Limit {
    /// `ζ(X, 1/2)` with its sign.
    pub zeta_half: f64,
    pub abs_zeta_half: f64,
    /// `√2(√q − 1)|ζ(X, 1/2)|`.
    pub limit: f64,
}

pub fn theorem2_limit(zeta: &CurveZeta) -> Theorem2Limit {
    let z = zeta.eval(0.5).re;
    Theorem2Limit {
        zeta_half: z,
        abs_zeta_half: z.abs(),
        limit: SQRT_2 * ((zeta.q as f64).sqrt() - 1.0) * z.abs(),
    }
}

/// `Σ_{l≤n} q^{l/2}/l` and `(log q/(1 − 1/q)) Σ_{l≤n} f(q^l)(q^l − q^{l−1})`
/// with `f(u) = 1/(√u log u)`, computed independently.
pub fn jackson_q_integral(q: u64, n: usize) -> (f64, f64) {
    let qf = q as f64;
    let lhs = (1..=n).map(|l| qf.powf(l as f64 / 2.0) / l as f64).sum();
    let f = |u: f64| 1.0 / (u.sqrt() * u.ln());
    let integral: f64 = (1..=n as i32)
        .map(|l| {
            let u = qf.powi(l);
            f(u) * (u - qf.powi(l - 1))
        })
        .sum();
    (lhs, qf.ln() / (1.0 - 1.0 / qf) * integral)
}

/// `Π_{deg x ≤ n}(1 − N(x)^{-dim})^{-1} / (Res · e^γ · log q^n)` for a curve.
pub fn theorem3_partial(data: &CurveData, n: usize) -> Result<f64> {
    let zeta = zeta_from_counts(data)?;
    theorem3_partial_with(data, &zeta, n)
}

/// As [`theorem3_partial`], with the zeta function given explicitly; counts
/// beyond those supplied are taken from `zeta`.
pub fn theorem3_partial_with(data: &CurveData, zeta: &CurveZeta, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("degree cutoff must be at least 1".into()));
    }
    if zeta.q != data.q || zeta.dim != data.dim {
        return Err(Error::InvalidArgument("zeta function and counts disagree on q or dim".into()));
    }
    let full = if n <= data.counts.len() {
        data.extended(n)?
    } else if !zeta.numerator.is_empty() {
        CurveData::new(data.q, data.dim, data.genus, zeta.exact_counts(n)?)?
    } else {
        let mut counts = data.counts.clone();
        for l in counts.len() + 1..=n {
            let c = zeta.count(l as u32);
            if (c - c.round()).abs() > 1e-6 * c.abs().max(1.0) || c.abs() > 1e30 {
                return Err(inconsistent(format!("count at l = {l} from the roots is not an integer")));
            }
            counts.push(c.round() as i128);
        }
        CurveData::new(data.q, data.dim, data.genus, counts)?
    };
    let b = full.closed_points()?;
    let qd = (data.q as f64).powi(data.dim as i32);
    let log: f64 = (1..=n).map(|d| b[d - 1] as f64 * neg_log1m(qd.powi(-(d as i32)))).sum();
    let predicted = zeta.residue() * EULER_GAMMA.exp() * n as f64 * (data.q as f64).ln();
    Ok(log.exp() / predicted)
}

/// The field `F_{q^l}` as `F_q[T]/(m)`, elements as coefficient vectors.
struct ExtensionField {
    q: u64,
    l: usize,
    modulus: Vec<u64>,
}

impl ExtensionField {
    fn new(q: u64, l: usize) -> Result<Self> {
        let modulus = if l == 1 {
            vec![0, 1]
        } else {
            irreducibles_of_degree(q, l)?
                .into_iter()
                .next()
                .expect("irreducibles exist in every degree")
                .coeffs()
                .to_vec()
        };
        Ok(Self { q, l, modulus })
    }

    fn size(&self) -> u64 {
        self.q.pow(self.l as u32)
    }

    fn element(&self, mut index: u64) -> Vec<u64> {
        (0..self.l)
            .map(|_| {
                let c = index % self.q;
                index /= self.q;
                c
            })
            .collect()
    }

    fn index(&self, a: &[u64]) -> u64 {
        a.iter().rev().fold(0, |acc, &c| acc * self.q + c)
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (q, l) = (self.q, self.l);
        let mut prod = vec![0u64; 2 * l - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % q;
            }
        }
        // reduce by the monic modulus of degree l
        for k in (l..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for (j, &m) in self.modulus[..l].iter().enumerate() {
                let i = k - l + j;
                prod[i] = (prod[i] + q - c * m % q) % q;
            }
            prod[k] = 0;
        }
        prod.truncate(l);
        prod
    }

    fn add_const(&self, a: &mut [u64], c: u64) {
        a[0] = (a[0] + c) % self.q;
    }
}

/// Point counts of the smooth projective model of `y² = f(x)` over
/// `F_{q^l}`, `l = 1..=l_max`, for odd prime `q` and squarefree `f`.
pub fn count_hyperelliptic(f: &PolyOverFq, l_max: usize) -> Result<CurveData> {
    let q = f.q();
    if q % 2 == 0 {
        return Err(Error::InvalidArgument("hyperelliptic counting needs odd q".into()));
    }
    let deg = f
        .degree()
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::InvalidArgument("f must be nonconstant".into()))?;
    if !f.is_squarefree() {
        return Err(Error::NotSquarefree);
    }
    let mut counts = Vec::with_capacity(l_max);
    for l in 1..=l_max {
        let field = ExtensionField::new(q, l)?;
        let size = field
            .size()
            .checked_mul(deg as u64)
            .filter(|&c| c <= 1 << 26)
            .map(|_| field.size())
            .ok_or_else(|| Error::InvalidArgument(format!("F_{q}^{l} is too large to enumerate")))?;
        let mut is_square = vec![false; size as usize];
        for y in 0..size {
            let e = field.element(y);
            is_square[field.index(&field.mul(&e, &e)) as usize] = true;
        }
        // η(a) = 1 for nonzero squares, -1 for non-squares, 0 at 0
        let eta = |idx: u64| -> i128 {
            if idx == 0 {
                0
            } else if is_square[idx as usize] {
                1
            } else {
                -1
            }
        };
        let affine: i128 = (0..size)
            .into_par_iter()
            .map(|x| {
                let xe = field.element(x);
                let mut acc = vec![0u64; l];
                for &c in f.coeffs().iter().rev() {
                    acc = field.mul(&acc, &xe);
                    field.add_const(&mut acc, c);
                }
                1 + eta(field.index(&acc))
            })
            .sum();
        let infinity = if deg % 2 == 1 { 1 } else { 1 + eta(f.leading()) };
        counts.push(affine + infinity);
    }
    let genus = (deg as u32).saturating_sub(1) / 2;
    CurveData::new(q, 1, Some(genus), counts)
}
