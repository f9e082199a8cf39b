use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::arith::{factorize, inv_mod, mobius};
use crate::error::{Error, Result};

/// A polynomial over the prime field `F_q`, coefficients lowest degree first
/// with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyOverFq {
    q: u64,
    coeffs: Vec<u64>,
}

pub(crate) fn check_prime(q: u64) -> Result<()> {
    if q < 2 || factorize(q).len() != 1 || factorize(q)[0].1 != 1 {
        return Err(Error::InvalidArgument(format!("field size {q} is not a prime")));
    }
    Ok(())
}

impl PolyOverFq {
    /// Reduces coefficients mod `q` and trims trailing zeros.
    pub fn new(q: u64, coeffs: Vec<u64>) -> Result<Self> {
        check_prime(q)?;
        Ok(Self::raw(q, coeffs))
    }

    pub(crate) fn raw(q: u64, coeffs: Vec<u64>) -> Self {
        let mut p = Self {
            q,
            coeffs: coeffs.into_iter().map(|c| c % q).collect(),
        };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn zero(q: u64) -> Self {
        Self { q, coeffs: Vec::new() }
    }

    pub fn one(q: u64) -> Self {
        Self::raw(q, vec![1])
    }

    /// The indeterminate `T`.
    pub fn t(q: u64) -> Self {
        Self::raw(q, vec![0, 1])
    }

    pub fn constant(q: u64, c: u64) -> Self {
        Self::raw(q, vec![c])
    }

    /// The polynomial whose coefficients are the base-q digits of `index`
    /// (lowest digit is the constant term).
    pub fn from_index(q: u64, mut index: u64) -> Self {
        let mut coeffs = Vec::new();
        while index > 0 {
            coeffs.push(index % q);
            index /= q;
        }
        Self { q, coeffs }
    }

    /// `Σ c_i q^i`.
    pub fn index(&self) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * self.q + c)
    }

    /// The monic polynomial `T^d + (from_index(lower))`, `lower < q^d`.
    pub fn monic_from_index(q: u64, d: usize, lower: u64) -> Self {
        let mut coeffs = Self::from_index(q, lower).coeffs;
        coeffs.resize(d, 0);
        coeffs.push(1);
        Self { q, coeffs }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let q = self.q as u128;
        self.coeffs
            .iter()
            .rev()
            .fold(0u128, |acc, &c| (acc * x as u128 + c as u128) % q) as u64
    }

    pub fn scale(&self, c: u64) -> Self {
        let q = self.q;
        Self::raw(q, self.coeffs.iter().map(|&a| a * (c % q) % q).collect())
    }

    /// Scaled to leading coefficient 1; the zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match inv_mod(self.leading(), self.q) {
            Some(inv) if !self.is_zero() => self.scale(inv),
            _ => self.clone(),
        }
    }

    pub fn derivative(&self) -> Self {
        let q = self.q;
        Self::raw(
            q,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| (k as u64 % q) * c % q)
                .collect(),
        )
    }

    fn same_field(&self, other: &Self) {
        assert_eq!(self.q, other.q, "polynomials over different fields");
    }

    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        self.same_field(d);
        let q = self.q;
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let inv = inv_mod(d.leading(), q).expect("nonzero residue mod a prime");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(q), self.clone()));
        }
        let mut quot = vec![0; r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = r[k] * inv % q;
            if c == 0 {
                continue;
            }
            quot[k - dd] = c;
            for (j, &dc) in d.coeffs.iter().enumerate() {
                let i = k - dd + j;
                r[i] = (r[i] + q - c * dc % q) % q;
            }
        }
        r.truncate(dd);
        Ok((Self::raw(q, quot), Self::raw(q, r)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.div_rem(d)?.1)
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &Self) -> Self {
        self.same_field(other);
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("b is nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn mul_mod(&self, other: &Self, m: &Self) -> Result<Self> {
        (self * other).rem(m)
    }

    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Result<Self> {
        let mut base = self.rem(m)?;
        let mut acc = Self::one(self.q).rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, m)?;
            }
            base = base.mul_mod(&base, m)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).degree() == Some(0)
    }

    /// Ben-Or test: `h` of degree `d` is irreducible iff
    /// `gcd(T^{q^i} − T, h) = 1` for every `i ≤ d/2`.
    pub fn is_irreducible(&self) -> bool {
        let d = match self.degree() {
            Some(d) if d >= 1 => d,
            _ => return false,
        };
        let t = Self::t(self.q);
        let mut frob = t.rem(self).expect("nonzero");
        for _ in 0..d / 2 {
            frob = frob.pow_mod(self.q, self).expect("nonzero");
            if !self.gcd(&(&frob - &t)).is_one() {
                return false;
            }
        }
        true
    }

    /// Polynomial in `T` notation, e.g. `T^2 + 2`.
    pub fn pretty(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(k, &c)| {
                let mono = match k {
                    0 => String::new(),
                    1 => "T".into(),
                    _ => format!("T^{k}"),
                };
                match (c, k) {
                    (c, 0) => c.to_string(),
                    (1, _) => mono,
                    (c, _) => format!("{c}{mono}"),
                }
            })
            .collect();
        terms.join(" + ")
    }
}

impl Ord for PolyOverFq {
    /// By degree, then by coefficients from the top down.
    fn cmp(&self, other: &Self) -> Ordering {
        self.q
            .cmp(&other.q)
            .then(self.coeffs.len().cmp(&other.coeffs.len()))
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for PolyOverFq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for &PolyOverFq {
    type Output = PolyOverFq;
    fn add(self, rhs: Self) -> PolyOverFq {
        self.same_field(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyOverFq::raw(self.q, (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Neg for &PolyOverFq {
    type Output = PolyOverFq;
    fn neg(self) -> PolyOverFq {
        PolyOverFq::raw(self.q, self.coeffs.iter().map(|&c| self.q - c).collect())
    }
}

impl Sub for &PolyOverFq {
    type Output = PolyOverFq;
    fn sub(self, rhs: Self) -> PolyOverFq {
        self + &(-rhs)
    }
}

impl Mul for &PolyOverFq {
    type Output = PolyOverFq;
    fn mul(self, rhs: Self) -> PolyOverFq {
        self.same_field(rhs);
        let q = self.q;
        if self.is_zero() || rhs.is_zero() {
            return PolyOverFq::zero(q);
        }
        let mut out = vec![0u64; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % q;
            }
        }
        PolyOverFq::raw(q, out)
    }
}

/// Serialized as `q:c0,c1,...,cd`; the zero polynomial is `q:`.
impl fmt::Display for PolyOverFq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "{}:{}", self.q, cs.join(","))
    }
}

impl FromStr for PolyOverFq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected q:c0,c1,...; got {s:?}"));
        let (q, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        let q: u64 = q.trim().parse().map_err(|_| bad())?;
        let coeffs = if rest.trim().is_empty() {
            Vec::new()
        } else {
            rest.split(',')
                .map(|c| c.trim().parse::<u64>().map_err(|_| bad()))
                .collect::<Result<_>>()?
        };
        Self::new(q, coeffs)
    }
}

/// Number of monic irreducibles of degree `d` over `F_q`: `(1/d)Σ_{e|d} μ(e) q^{d/e}`.
pub fn irreducible_count(q: u64, d: u32) -> u128 {
    if d == 0 {
        return 0;
    }
    let total: i128 = crate::arith::divisors(d as u64)
        .into_iter()
        .map(|e| mobius(e) as i128 * (q as i128).pow(d / e as u32))
        .sum();
    (total / d as i128) as u128
}

/// All monic irreducibles of degree exactly `d`, in increasing order.
pub fn irreducibles_of_degree(q: u64, d: usize) -> Result<Vec<PolyOverFq>> {
    check_prime(q)?;
    if d == 0 {
        return Err(Error::InvalidArgument("degree must be positive".into()));
    }
    let count = q
        .checked_pow(d as u32)
        .ok_or_else(|| Error::InvalidArgument(format!("q^d = {q}^{d} is too large to enumerate")))?;
    use rayon::prelude::*;
    Ok((0..count)
        .into_par_iter()
        .map(|lower| PolyOverFq::monic_from_index(q, d, lower))
        .filter(|h| h.is_irreducible())
        .collect())
}
