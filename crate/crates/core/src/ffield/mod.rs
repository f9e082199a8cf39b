//! Dirichlet L-functions over `F_q[T]`: polynomial arithmetic, characters
//! modulo a monic `f`, L-polynomials and partial Euler products over monic
//! irreducibles.

mod character;
mod poly;

pub use character::{all_ff_characters, ff_character, ff_character_of_order, ff_unit_group, FFCharacter};
pub use poly::{irreducible_count, irreducibles_of_degree, PolyOverFq};

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::arith::{divisors, mobius};
use crate::characters::RootOfUnity;
use crate::error::{Error, Result};
use crate::lfunc::ComplexPoint;
use crate::roots::poly_roots;

/// `L(u, χ) = Σ_d c_d u^d` with `u = q^{-s}`.
#[derive(Debug, Clone)]
pub struct FFLPolynomial {
    pub q: u64,
    /// `c_0, c_1, ...`, trailing zeros trimmed.
    pub coefficients: Vec<Complex64>,
    /// Entry `[d][j]` counts monic `h` of degree `d` with `χ(h) = ζ^j`, for
    /// `d = 0..=deg f`.
    pub value_counts: Vec<Vec<u64>>,
    /// The `λ_j` in `L = Π(1 − λ_j u)`.
    pub roots: Vec<Complex64>,
}

impl FFLPolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn eval_u(&self, u: Complex64) -> Complex64 {
        self.coefficients.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * u + c)
    }

    /// `L_K(s, χ)`.
    pub fn eval(&self, s: ComplexPoint) -> Complex64 {
        self.eval_u(u_of(self.q, s))
    }
}

/// `q^{-s}`.
fn u_of(q: u64, s: ComplexPoint) -> Complex64 {
    let lq = (q as f64).ln();
    Complex64::from_polar((-s.sigma * lq).exp(), -s.t * lq)
}

fn root_values(order: u64) -> Vec<Complex64> {
    (0..order).map(|j| RootOfUnity::new(j, order).to_complex()).collect()
}

/// Exact L-polynomial of a nontrivial character, summing `χ` over all monic
/// polynomials of each degree up to `deg f`.
pub fn ff_l_polynomial(chi: &FFCharacter) -> Result<FFLPolynomial> {
    if chi.is_trivial() {
        return Err(Error::InvalidArgument("L-polynomial needs a nontrivial character".into()));
    }
    let q = chi.q();
    let deg_f = chi.modulus().degree().unwrap();
    let m = chi.order() as usize;
    let zeta = root_values(chi.order());
    let value_counts: Vec<Vec<u64>> = (0..=deg_f)
        .map(|d| {
            let mut counts = vec![0u64; m];
            for lower in 0..q.pow(d as u32) {
                let h = PolyOverFq::monic_from_index(q, d, lower);
                if let Some(k) = chi.exponent(&h) {
                    counts[k as usize] += 1;
                }
            }
            counts
        })
        .collect();
    let mut coefficients: Vec<Complex64> = value_counts
        .iter()
        .map(|c| c.iter().zip(&zeta).map(|(&n, z)| z * n as f64).sum())
        .collect();
    while coefficients.len() > 1 && coefficients.last().unwrap().norm() < 1e-9 {
        coefficients.pop();
    }
    let reversed: Vec<Complex64> = coefficients.iter().rev().copied().collect();
    let roots = poly_roots(&reversed)?;
    Ok(FFLPolynomial {
        q,
        coefficients,
        value_counts,
        roots,
    })
}

fn overflow(what: &str) -> Error {
    Error::InvalidArgument(format!("{what} overflows 128-bit counts; lower the degree cutoff"))
}

/// Multiply in `Z[C_m]`.
fn ring_mul(a: &[i128], b: &[i128]) -> Result<Vec<i128>> {
    let m = a.len();
    let mut out = vec![0i128; m];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            let prod = x.checked_mul(y).ok_or_else(|| overflow("class count"))?;
            let k = (i + j) % m;
            out[k] = out[k].checked_add(prod).ok_or_else(|| overflow("class count"))?;
        }
    }
    Ok(out)
}

/// Exact counts of monic irreducibles coprime to `f` by character value:
/// entry `[d][j]` (for `d = 0..=n`, row 0 empty) is the number of degree-`d`
/// irreducibles `h` with `χ(h) = ζ^j`, `ζ = e^{2πi/order}`.
///
/// Works in the group ring `Z[C_m]` from the generating function
/// `Σ_h [χ(h)] u^{deg h} = Π_P (1 − [χ(P)]u^{deg P})^{-1}`: the monic sums
/// `A_k` give power sums `P_k` through `k A_k = Σ_{i≤k} P_i A_{k−i}`, and
/// `P_k = Σ_{e|k} e·π_e^{(k/e)}` is inverted for `π_k` by Möbius-style peeling.
pub fn irreducible_counts_by_value(chi: &FFCharacter, n: usize) -> Result<Vec<Vec<i128>>> {
    let q = chi.q();
    let deg_f = chi.modulus().degree().unwrap();
    let m = chi.order() as usize;
    let unit_hist: Vec<i128> = chi.unit_histogram().into_iter().map(|c| c as i128).collect();

    let mut a: Vec<Vec<i128>> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        if k < deg_f {
            let mut counts = vec![0i128; m];
            for lower in 0..q.pow(k as u32) {
                if let Some(j) = chi.exponent(&PolyOverFq::monic_from_index(q, k, lower)) {
                    counts[j as usize] += 1;
                }
            }
            a.push(counts);
        } else {
            let scale = (q as i128)
                .checked_pow((k - deg_f) as u32)
                .ok_or_else(|| overflow("q^k"))?;
            a.push(
                unit_hist
                    .iter()
                    .map(|&w| w.checked_mul(scale).ok_or_else(|| overflow("q^k")))
                    .collect::<Result<_>>()?,
            );
        }
    }

    let mut power_sums: Vec<Vec<i128>> = vec![vec![0; m]];
    let mut pi: Vec<Vec<i128>> = vec![vec![0; m]];
    for k in 1..=n {
        let mut pk: Vec<i128> = a[k]
            .iter()
            .map(|&x| x.checked_mul(k as i128).ok_or_else(|| overflow("power sum")))
            .collect::<Result<_>>()?;
        for i in 1..k {
            let term = ring_mul(&power_sums[i], &a[k - i])?;
            for (p, t) in pk.iter_mut().zip(term) {
                *p = p.checked_sub(t).ok_or_else(|| overflow("power sum"))?;
            }
        }
        let mut rest = pk.clone();
        for e in divisors(k as u64).into_iter().map(|e| e as usize).filter(|&e| e < k) {
            let r = k / e;
            for (j, &c) in pi[e].iter().enumerate() {
                rest[j * r % m] -= e as i128 * c;
            }
        }
        let mut pik = Vec::with_capacity(m);
        for &x in &rest {
            if x % k as i128 != 0 || x < 0 {
                return Err(Error::InconsistentCounts(format!(
                    "irreducible count at degree {k} is not a nonnegative integer"
                )));
            }
            pik.push(x / k as i128);
        }
        power_sums.push(pk);
        pi.push(pik);
    }
    Ok(pi)
}

/// `−log(1 − w)`, or an error if the factor vanishes. Small `|w|` goes
/// through the power series so that huge multiplicities do not amplify
/// rounding in `1 − w`.
fn neg_log_one_minus(w: Complex64, what: impl Fn() -> String) -> Result<Complex64> {
    if w.norm() < 0.25 {
        let mut term = w;
        let mut sum = w;
        for k in 2..64 {
            term *= w;
            let t = term / k as f64;
            sum += t;
            if t.norm() <= 1e-18 * sum.norm() {
                break;
            }
        }
        return Ok(sum);
    }
    let one_minus = Complex64::new(1.0, 0.0) - w;
    if one_minus.norm() == 0.0 {
        return Err(Error::SingularFactor(what()));
    }
    Ok(-one_minus.ln())
}

/// `log E_d` for `d = 1..=n`, where `E_d = Π_{deg h ≤ d}(1 − χ(h)N(h)^{-s})^{-1}`.
///
/// Per degree, the class counts are split as `base + c_j` with `base` their
/// minimum; the `base` part collapses through `Π_j (1 − ζ^j w) = 1 − w^m`.
fn log_partial_products(chi: &FFCharacter, s: ComplexPoint, n: usize) -> Result<Vec<Complex64>> {
    let counts = irreducible_counts_by_value(chi, n)?;
    let m = chi.order();
    let zeta = root_values(m);
    let u = u_of(chi.q(), s);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut out = Vec::with_capacity(n);
    for (d, row) in counts.iter().enumerate().skip(1) {
        let ud = u.powu(d as u32);
        let base = *row.iter().min().unwrap();
        if base > 0 {
            let full = neg_log_one_minus(ud.powu(m as u32), || format!("degree {d}"))?;
            acc += full * base as f64;
        }
        for (j, &c) in row.iter().enumerate() {
            let c = c - base;
            if c == 0 {
                continue;
            }
            let term = neg_log_one_minus(zeta[j] * ud, || format!("degree {d}, χ = ζ^{j}"))?;
            acc += term * c as f64;
        }
        out.push(acc);
    }
    Ok(out)
}

/// `Π_{deg h ≤ n} (1 − χ(h)N(h)^{-s})^{-1}` over monic irreducibles `h`,
/// accumulated in log space degree by degree. Within a degree the factors
/// are grouped by the value of `χ`, using exact class counts.
pub fn ff_partial_product(chi: &FFCharacter, s: ComplexPoint, n: usize) -> Result<Complex64> {
    if n == 0 {
        return Err(Error::InvalidArgument("degree cutoff must be at least 1".into()));
    }
    Ok(log_partial_products(chi, s, n)?.last().unwrap().exp())
}

/// The same product by enumerating every irreducible in (degree, increasing) order.
pub fn ff_partial_product_enumerated(chi: &FFCharacter, s: ComplexPoint, n: usize) -> Result<Complex64> {
    let q = chi.q();
    let u = u_of(q, s);
    let mut acc = Complex64::new(0.0, 0.0);
    for d in 1..=n {
        let ud = u.powu(d as u32);
        for h in irreducibles_of_degree(q, d)? {
            let w = chi.value(&h) * ud;
            if w.norm() > 0.0 {
                acc += neg_log_one_minus(w, || h.pretty())?;
            }
        }
    }
    Ok(acc.exp())
}

/// Partial products at `s = 1/2 + it` against the predicted limit.
#[derive(Debug, Clone)]
pub struct FfDrhReport {
    pub s: ComplexPoint,
    pub l_value: Complex64,
    /// Whether the √2 factor applies (`χ² = 1` and `t ∈ (π/log q)Z`).
    pub sqrt2_branch: bool,
    pub target: Complex64,
    /// `E_n` for `n = 1..=n_max`.
    pub products: Vec<Complex64>,
    /// `|E_n/target − 1|` for `n = 1..=n_max`.
    pub deviations: Vec<f64>,
}

impl FfDrhReport {
    /// Deviation at degree cutoff `n` (1-based).
    pub fn deviation(&self, n: usize) -> f64 {
        self.deviations[n - 1]
    }

    /// The deviation at `n_max` is below the one at `n_max/2`.
    pub fn decreasing(&self) -> bool {
        let n = self.deviations.len();
        n >= 2 && self.deviation(n) < self.deviation((n / 2).max(1))
    }
}

/// Compare `E_n` with `L_K(1/2+it, χ)`, times √2 exactly when `χ² = 1` and
/// `t ∈ (π/log q)Z`.
pub fn verify_ff_drh(chi: &FFCharacter, t: f64, n_max: usize) -> Result<FfDrhReport> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("degree cutoff must be at least 1".into()));
    }
    let s = ComplexPoint::critical(t);
    let lpoly = ff_l_polynomial(chi)?;
    let l_value = lpoly.eval(s);
    let u = u_of(chi.q(), s);
    if l_value.norm() < 1e-12 || lpoly.roots.iter().any(|r| (r * u - 1.0).norm() < 1e-9) {
        return Err(Error::ZeroTarget);
    }
    let k = t * (chi.q() as f64).ln() / PI;
    let sqrt2_branch = chi.is_quadratic() && (k - k.round()).abs() < 1e-9;
    let target = if sqrt2_branch { l_value * SQRT_2 } else { l_value };
    let products: Vec<Complex64> = log_partial_products(chi, s, n_max)?.into_iter().map(|l| l.exp()).collect();
    let deviations = products.iter().map(|e| (e / target - 1.0).norm()).collect();
    Ok(FfDrhReport {
        s,
        l_value,
        sqrt2_branch,
        target,
        products,
        deviations,
    })
}

/// `Σ_{deg h < n} q^{-deg h}` over monic irreducibles, from the counting formula.
pub fn ff_mertens_sum(q: u64, n: usize) -> Result<f64> {
    poly::check_prime(q)?;
    if n < 2 {
        return Err(Error::InvalidArgument("Mertens sum needs n ≥ 2".into()));
    }
    let qf = q as f64;
    Ok((1..n as u64)
        .map(|d| {
            divisors(d)
                .into_iter()
                .map(|e| mobius(e) as f64 * qf.powf((d / e) as f64 - d as f64))
                .sum::<f64>()
                / d as f64
        })
        .sum())
}
