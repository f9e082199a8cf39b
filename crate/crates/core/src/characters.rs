//! Dirichlet characters modulo N with exact root-of-unity values.
//!
//! A character is stored as a table of exponents `k` (value `e^{2πik/m}`,
//! `m` the order) indexed by residue, so questions like `χ² = 1` are
//! answered on integers rather than on floats.

use std::collections::VecDeque;
use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::arith::{euler_phi, factorize, gcd, inv_mod, is_squarefree, lcm, pow_mod};
use crate::error::{Error, Result};

/// The root of unity `e^{2πi num/den}`, kept in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    num: u64,
    den: u64,
}

impl RootOfUnity {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "root of unity needs a positive denominator");
        let num = num % den;
        let g = gcd(num, den);
        if num == 0 {
            Self { num: 0, den: 1 }
        } else {
            Self {
                num: num / g,
                den: den / g,
            }
        }
    }

    pub fn one() -> Self {
        Self { num: 0, den: 1 }
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    /// Multiplicative order.
    pub fn order(self) -> u64 {
        self.den
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(1.0, TAU * self.num as f64 / self.den as f64)
    }
}

impl FromStr for RootOfUnity {
    type Err = Error;

    /// Accepts `k/m` (a fraction of a full turn), `1`, `-1`, `i`, `-i`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" => Ok(Self::one()),
            "-1" => Ok(Self::new(1, 2)),
            "i" => Ok(Self::new(1, 4)),
            "-i" => Ok(Self::new(3, 4)),
            other => {
                let (a, b) = other
                    .split_once('/')
                    .ok_or_else(|| Error::Parse(format!("root of unity '{other}'")))?;
                let num: u64 = a
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("numerator '{a}'")))?;
                let den: u64 = b
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("denominator '{b}'")))?;
                if den == 0 {
                    return Err(Error::Parse("zero denominator".into()));
                }
                Ok(Self::new(num, den))
            }
        }
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

#[derive(Debug, Clone)]
pub struct DirichletCharacter {
    modulus: u64,
    order: u64,
    exps: Vec<Option<u64>>,
    values: Vec<Complex64>,
    parity: u8,
    conductor: u64,
    label: Option<String>,
}

impl PartialEq for DirichletCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.modulus == other.modulus && self.order == other.order && self.exps == other.exps
    }
}

impl DirichletCharacter {
    /// Build from an exponent table over a common denominator, reducing to the order.
    fn from_exponents(modulus: u64, denom: u64, mut exps: Vec<Option<u64>>) -> Self {
        let g = exps
            .iter()
            .flatten()
            .fold(denom, |acc, &k| gcd(acc, k));
        let order = denom / g;
        for k in exps.iter_mut().flatten() {
            *k = (*k / g) % order;
        }
        let values = exps
            .iter()
            .map(|e| match e {
                Some(k) => RootOfUnity::new(*k, order).to_complex(),
                None => Complex64::new(0.0, 0.0),
            })
            .collect();
        let mut chi = Self {
            modulus,
            order,
            exps,
            values,
            parity: 0,
            conductor: modulus,
            label: None,
        };
        chi.parity = match chi.exponent(modulus as i64 - 1) {
            Some(k) if k != 0 => 1,
            _ => 0,
        };
        chi.conductor = chi.compute_conductor();
        chi
    }

    fn index(&self, n: i64) -> usize {
        n.rem_euclid(self.modulus as i64) as usize
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// `a` with `χ(-1) = (-1)^a`.
    pub fn parity(&self) -> u8 {
        self.parity
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.modulus
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Display name: the label if set, otherwise a description from the table.
    pub fn name(&self) -> String {
        self.label
            .clone()
            .unwrap_or_else(|| format!("chi mod {} (order {})", self.modulus, self.order))
    }

    /// Exponent `k` with `χ(n) = e^{2πik/order}`, or `None` when `gcd(n, N) > 1`.
    pub fn exponent(&self, n: i64) -> Option<u64> {
        self.exps[self.index(n)]
    }

    pub fn root(&self, n: i64) -> Option<RootOfUnity> {
        self.exponent(n).map(|k| RootOfUnity::new(k, self.order))
    }

    pub fn value(&self, n: i64) -> Complex64 {
        self.values[self.index(n)]
    }

    /// `χ(n)` for nonnegative `n`, skipping the sign handling.
    #[inline]
    pub fn value_u(&self, n: u64) -> Complex64 {
        self.values[(n % self.modulus) as usize]
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// `χ² = 1` and `χ ≠ 1`.
    pub fn is_quadratic(&self) -> bool {
        self.order == 2
    }

    /// Real-valued (trivial or quadratic).
    pub fn is_real(&self) -> bool {
        self.order <= 2
    }

    pub fn pow(&self, j: u64) -> Self {
        let exps = self
            .exps
            .iter()
            .map(|e| e.map(|k| (k * (j % self.order)) % self.order))
            .collect();
        Self::from_exponents(self.modulus, self.order, exps)
    }

    pub fn conj(&self) -> Self {
        let mut c = self.pow(self.order - 1);
        c.label = self.label.as_ref().map(|l| format!("conj({l})"));
        c
    }

    fn compute_conductor(&self) -> u64 {
        let n = self.modulus;
        let mut divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
        divisors.sort_unstable();
        for d in divisors {
            let induced = (1..n)
                .step_by(d as usize)
                .all(|m| matches!(self.exps[m as usize], None | Some(0)));
            if induced {
                return d;
            }
        }
        n
    }
}

/// Generators of `(Z/N)^×` with their orders, independent (the group is
/// their direct product). Built per prime power and lifted through CRT.
pub fn unit_group(n: u64) -> Vec<(u64, u64)> {
    assert!(n > 0);
    let mut out = Vec::new();
    for (p, e) in factorize(n) {
        let pk = p.pow(e);
        let rest = n / pk;
        let lift = |g: u64| -> u64 {
            if rest == 1 {
                return g % n;
            }
            // x ≡ g (mod p^k), x ≡ 1 (mod rest)
            let a = g as u128 * rest as u128 * inv_mod(rest % pk, pk).unwrap() as u128;
            let b = pk as u128 * inv_mod(pk % rest, rest).unwrap() as u128;
            ((a + b) % n as u128) as u64
        };
        if p == 2 {
            match e {
                1 => {}
                2 => out.push((lift(3), 2)),
                _ => {
                    out.push((lift(pk - 1), 2));
                    out.push((lift(5), pk / 4));
                }
            }
        } else {
            let g = primitive_root_prime_power(p, e);
            out.push((lift(g), pk / p * (p - 1)));
        }
    }
    out
}

fn primitive_root_prime_power(p: u64, e: u32) -> u64 {
    let phi = p - 1;
    let fac = factorize(phi);
    let g = (2..p)
        .find(|&g| fac.iter().all(|&(r, _)| pow_mod(g, phi / r, p) != 1))
        .unwrap_or(1);
    if e == 1 || pow_mod(g, p - 1, p * p) != 1 {
        g
    } else {
        g + p
    }
}

/// The unique character mod `n` taking the given values on the given elements.
///
/// The elements must generate `(Z/n)^×`; the assignment is checked for
/// consistency by walking the group from the identity.
pub fn character_mod(n: u64, assignments: &[(u64, RootOfUnity)]) -> Result<DirichletCharacter> {
    if n == 0 {
        return Err(Error::InvalidArgument("modulus must be positive".into()));
    }
    for &(g, _) in assignments {
        if gcd(g % n, n) != 1 && n > 1 {
            return Err(Error::InconsistentCharacter(format!(
                "{g} is not a unit mod {n}"
            )));
        }
    }
    let denom = assignments
        .iter()
        .fold(1, |acc, (_, r)| lcm(acc, r.den()));
    let steps: Vec<(u64, u64)> = assignments
        .iter()
        .map(|&(g, r)| (g % n, r.num() * (denom / r.den())))
        .collect();

    let mut exps: Vec<Option<u64>> = vec![None; n as usize];
    let one = 1 % n;
    exps[one as usize] = Some(0);
    let mut queue = VecDeque::from([one]);
    let mut reached = 1usize;
    while let Some(e) = queue.pop_front() {
        let k = exps[e as usize].unwrap();
        for &(g, step) in &steps {
            let next = ((e as u128 * g as u128) % n as u128) as usize;
            let val = (k + step) % denom;
            match exps[next] {
                None => {
                    exps[next] = Some(val);
                    reached += 1;
                    queue.push_back(next as u64);
                }
                Some(old) if old != val => {
                    return Err(Error::InconsistentCharacter(format!(
                        "residue {next} mod {n} would take two values"
                    )));
                }
                Some(_) => {}
            }
        }
    }
    let group_order = euler_phi(n) as usize;
    if reached != group_order {
        return Err(Error::IncompleteGenerators {
            spanned: reached,
            group_order,
        });
    }
    Ok(DirichletCharacter::from_exponents(n, denom, exps))
}

pub fn trivial_character(n: u64) -> DirichletCharacter {
    character_mod(n, &[]).unwrap_or_else(|_| {
        let gens: Vec<_> = unit_group(n)
            .into_iter()
            .map(|(g, _)| (g, RootOfUnity::one()))
            .collect();
        character_mod(n, &gens).expect("trivial assignment is consistent")
    })
}

/// Every character mod `n`, enumerated over the independent generators.
pub fn all_characters(n: u64) -> Vec<DirichletCharacter> {
    let gens = unit_group(n);
    let mut out = Vec::new();
    let mut idx = vec![0u64; gens.len()];
    loop {
        let assign: Vec<_> = gens
            .iter()
            .zip(&idx)
            .map(|(&(g, ord), &j)| (g, RootOfUnity::new(j, ord)))
            .collect();
        out.push(character_mod(n, &assign).expect("independent generators"));
        let mut pos = 0;
        loop {
            if pos == gens.len() {
                return out;
            }
            idx[pos] += 1;
            if idx[pos] < gens[pos].1 {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Kronecker symbol `(a/n)` for `n >= 1`.
pub fn kronecker(a: i64, n: u64) -> i8 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut n = n;
    let mut sign = 1i8;
    let tz = n.trailing_zeros();
    if tz > 0 {
        if a % 2 == 0 {
            return 0;
        }
        // (a/2) = 1 if a ≡ ±1 mod 8, -1 if a ≡ ±3 mod 8
        if tz % 2 == 1 && matches!(a.rem_euclid(8), 3 | 5) {
            sign = -sign;
        }
        n >>= tz;
    }
    // Jacobi symbol (a/n), n odd
    let mut a = a.rem_euclid(n as i64) as u64;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                sign = -sign;
            }
        }
        (a, n) = (n, a);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d == 0 || d == 1 {
        return false;
    }
    match d.rem_euclid(4) {
        1 => is_squarefree(d.unsigned_abs()),
        0 => {
            let m = d / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree(m.unsigned_abs())
        }
        _ => false,
    }
}

/// Fundamental discriminants with `|d| ≤ bound`, ordered by `|d|`, positive first.
pub fn fundamental_discriminants(bound: u64) -> Vec<i64> {
    (2..=bound as i64)
        .flat_map(|a| [a, -a])
        .filter(|&d| is_fundamental_discriminant(d))
        .collect()
}

/// The real character `n ↦ (d/n)` with modulus `|d|`.
pub fn kronecker_character(d: i64) -> Result<DirichletCharacter> {
    if !is_fundamental_discriminant(d) {
        return Err(Error::NotFundamental(d));
    }
    let n = d.unsigned_abs();
    let exps = (0..n)
        .map(|r| match kronecker(d, if r == 0 { n } else { r }) {
            1 => Some(0),
            -1 => Some(1),
            _ => None,
        })
        .collect();
    Ok(DirichletCharacter::from_exponents(n, 2, exps).with_label(format!("({d}/.)")))
}

/// The nontrivial character mod 3.
pub fn chi_3() -> DirichletCharacter {
    character_mod(3, &[(2, RootOfUnity::new(1, 2))])
        .unwrap()
        .with_label("chi_3")
}

/// Character mod 7 with `χ(3) = e^{πi/3}`, of order 6.
pub fn chi_7a() -> DirichletCharacter {
    character_mod(7, &[(3, RootOfUnity::new(1, 6))])
        .unwrap()
        .with_label("chi_7a")
}

/// Character mod 7 with `χ(3) = -1`, the quadratic one.
pub fn chi_7b() -> DirichletCharacter {
    character_mod(7, &[(3, RootOfUnity::new(1, 2))])
        .unwrap()
        .with_label("chi_7b")
}

/// Parse a character selector: `chi_3`, `chi_7a`, `chi_7b`, `d:-4`, `mod:3`,
/// `mod:7:a`, `mod:7:b`, or `mod:N:g=k/m,g=k/m,...`.
pub fn parse_character(spec: &str) -> Result<DirichletCharacter> {
    let spec = spec.trim();
    match spec {
        "chi_3" => return Ok(chi_3()),
        "chi_7a" => return Ok(chi_7a()),
        "chi_7b" => return Ok(chi_7b()),
        _ => {}
    }
    let bad = || Error::Parse(format!("character selector '{spec}'"));
    if let Some(d) = spec.strip_prefix("d:") {
        let d: i64 = d.trim().parse().map_err(|_| bad())?;
        return kronecker_character(d);
    }
    let rest = spec.strip_prefix("mod:").ok_or_else(bad)?;
    let mut parts = rest.splitn(2, ':');
    let n: u64 = parts
        .next()
        .and_then(|s| s.trim().parse().ok())
        .ok_or_else(bad)?;
    match (n, parts.next().map(str::trim)) {
        (3, None) => Ok(chi_3()),
        (7, Some("a")) => Ok(chi_7a()),
        (7, Some("b")) => Ok(chi_7b()),
        (_, Some(assign)) if assign.contains('=') => {
            let mut gens = Vec::new();
            for item in assign.split(',') {
                let (g, v) = item.split_once('=').ok_or_else(bad)?;
                let g: u64 = g.trim().parse().map_err(|_| bad())?;
                gens.push((g, v.parse::<RootOfUnity>()?));
            }
            Ok(character_mod(n, &gens)?.with_label(format!("mod {n} [{assign}]")))
        }
        _ => Err(bad()),
    }
}
