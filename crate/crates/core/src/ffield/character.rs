use std::collections::VecDeque;

use num_complex::Complex64;

use super::poly::PolyOverFq;
use crate::arith::{gcd, lcm};
use crate::characters::RootOfUnity;
use crate::error::{Error, Result};

/// Largest `q^{deg f}` for which residue tables are built.
const MAX_RESIDUES: u64 = 1 << 20;

/// `F_q[T]/(f)` with residues encoded as base-q integers (see [`PolyOverFq::index`]).
#[derive(Debug, Clone)]
pub(crate) struct ResidueRing {
    pub q: u64,
    pub f: PolyOverFq,
    pub size: u64,
}

impl ResidueRing {
    pub fn new(f: &PolyOverFq) -> Result<Self> {
        let d = match f.degree() {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::InvalidArgument(format!("modulus {} must be nonconstant", f.pretty()))),
        };
        if !f.is_monic() {
            return Err(Error::InvalidArgument(format!("modulus {} must be monic", f.pretty())));
        }
        let size = f
            .q()
            .checked_pow(d as u32)
            .filter(|&s| s <= MAX_RESIDUES)
            .ok_or_else(|| Error::InvalidArgument(format!("residue ring of {} is too large", f.pretty())))?;
        Ok(Self {
            q: f.q(),
            f: f.clone(),
            size,
        })
    }

    pub fn reduce(&self, h: &PolyOverFq) -> u64 {
        h.rem(&self.f).expect("modulus is nonzero").index()
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let pa = PolyOverFq::from_index(self.q, a);
        let pb = PolyOverFq::from_index(self.q, b);
        self.reduce(&(&pa * &pb))
    }

    pub fn is_unit(&self, a: u64) -> bool {
        PolyOverFq::from_index(self.q, a).gcd(&self.f).is_one()
    }

    pub fn units(&self) -> Vec<u64> {
        (0..self.size).filter(|&a| self.is_unit(a)).collect()
    }

    pub fn order_of(&self, a: u64) -> u64 {
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
}

/// Generators of `(F_q[T]/(f))^×` with their orders, forming a basis:
/// every unit is uniquely `Π g_i^{e_i}` with `0 ≤ e_i < n_i`.
pub fn ff_unit_group(f: &PolyOverFq) -> Result<Vec<(PolyOverFq, u64)>> {
    let ring = ResidueRing::new(f)?;
    let units = ring.units();
    let group_order = units.len();
    let mut in_h = vec![false; ring.size as usize];
    in_h[1] = true;
    let mut h: Vec<u64> = vec![1];
    let mut basis = Vec::new();

    while h.len() < group_order {
        // order of each unit modulo the subgroup spanned so far
        let quotient_order = |g: u64| {
            let mut x = g;
            let mut k = 1;
            while !in_h[x as usize] {
                x = ring.mul(x, g);
                k += 1;
            }
            k
        };
        let mut candidates: Vec<(u64, u64)> = units.iter().map(|&g| (quotient_order(g), g)).collect();
        let m = candidates.iter().map(|c| c.0).max().unwrap();
        candidates.retain(|c| c.0 == m);
        let lift = candidates
            .iter()
            .flat_map(|&(_, g)| h.iter().map(move |&x| (g, x)))
            .map(|(g, x)| ring.mul(g, x))
            .find(|&g| ring.order_of(g) == m)
            .ok_or_else(|| Error::InvalidArgument("unit group decomposition failed".into()))?;

        let mut next = Vec::with_capacity(h.len() * m as usize);
        let mut power = 1;
        for _ in 0..m {
            for &x in &h {
                let y = ring.mul(x, power);
                in_h[y as usize] = true;
                next.push(y);
            }
            power = ring.mul(power, lift);
        }
        h = next;
        basis.push((PolyOverFq::from_index(ring.q, lift), m));
    }
    Ok(basis)
}

/// A Dirichlet character on `(F_q[T]/(f))^×`, extended by zero to
/// polynomials sharing a factor with `f`.
#[derive(Debug, Clone)]
pub struct FFCharacter {
    ring: ResidueRing,
    order: u64,
    /// `χ(h) = e^{2πi k/order}` for the residue with index `i`, `None` off the units.
    exps: Vec<Option<u64>>,
    conductor: PolyOverFq,
}

impl PartialEq for FFCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.ring.f == other.ring.f && self.order == other.order && self.exps == other.exps
    }
}

impl FFCharacter {
    fn from_exponents(ring: ResidueRing, denom: u64, mut exps: Vec<Option<u64>>) -> Self {
        let g = exps.iter().flatten().fold(denom, |acc, &k| gcd(acc, k));
        let order = denom / g;
        for k in exps.iter_mut().flatten() {
            *k = (*k / g) % order;
        }
        let mut chi = Self {
            conductor: ring.f.clone(),
            ring,
            order,
            exps,
        };
        chi.conductor = chi.compute_conductor();
        chi
    }

    /// Smallest-degree monic `d | f` such that `χ(u) = 1` whenever `u ≡ 1 (mod d)`.
    fn compute_conductor(&self) -> PolyOverFq {
        let f = &self.ring.f;
        let q = self.ring.q;
        let deg = f.degree().unwrap();
        for e in 0..deg {
            for lower in 0..q.pow(e as u32) {
                let d = PolyOverFq::monic_from_index(q, e, lower);
                if !f.rem(&d).unwrap().is_zero() {
                    continue;
                }
                let one = PolyOverFq::one(q);
                let induced = (0..self.ring.size).all(|i| match self.exps[i as usize] {
                    Some(k) => k == 0 || !(&PolyOverFq::from_index(q, i) - &one).rem(&d).unwrap().is_zero(),
                    None => true,
                });
                if induced {
                    return d;
                }
            }
        }
        f.clone()
    }

    pub fn q(&self) -> u64 {
        self.ring.q
    }

    /// The modulus `f`.
    pub fn modulus(&self) -> &PolyOverFq {
        &self.ring.f
    }

    pub fn conductor(&self) -> &PolyOverFq {
        &self.conductor
    }

    pub fn is_primitive(&self) -> bool {
        self.conductor == self.ring.f
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// `χ² = 1` and `χ ≠ 1`.
    pub fn is_quadratic(&self) -> bool {
        self.order == 2
    }

    /// Trivial on the constants `F_q^×`.
    pub fn is_even(&self) -> bool {
        (1..self.ring.q).all(|c| self.exps[c as usize] == Some(0))
    }

    pub(crate) fn exponent_at(&self, residue: u64) -> Option<u64> {
        self.exps[residue as usize]
    }

    pub fn exponent(&self, h: &PolyOverFq) -> Option<u64> {
        self.exponent_at(self.ring.reduce(h))
    }

    pub fn root(&self, h: &PolyOverFq) -> Option<RootOfUnity> {
        self.exponent(h).map(|k| RootOfUnity::new(k, self.order))
    }

    pub fn value(&self, h: &PolyOverFq) -> Complex64 {
        self.root(h).map_or(Complex64::new(0.0, 0.0), RootOfUnity::to_complex)
    }

    pub fn pow(&self, j: u64) -> Self {
        let exps = self.exps.iter().map(|e| e.map(|k| k * j % self.order)).collect();
        Self::from_exponents(self.ring.clone(), self.order, exps)
    }

    /// Histogram of `χ` over the unit group: entry `j` counts units with `χ = ζ^j`.
    pub(crate) fn unit_histogram(&self) -> Vec<u64> {
        let mut w = vec![0u64; self.order as usize];
        for k in self.exps.iter().flatten() {
            w[*k as usize] += 1;
        }
        w
    }

    pub fn name(&self) -> String {
        format!("chi[{}; order {}]", self.ring.f, self.order)
    }
}

/// The character mod `f` taking the given values on the given units.
pub fn ff_character(f: &PolyOverFq, assignments: &[(PolyOverFq, RootOfUnity)]) -> Result<FFCharacter> {
    let ring = ResidueRing::new(f)?;
    let mut steps = Vec::with_capacity(assignments.len());
    let denom = assignments.iter().fold(1, |acc, (_, r)| lcm(acc, r.den()));
    for (g, r) in assignments {
        if g.q() != ring.q {
            return Err(Error::InvalidArgument(format!("{g} is not over F_{}", ring.q)));
        }
        let gi = ring.reduce(g);
        if !ring.is_unit(gi) {
            return Err(Error::InconsistentCharacter(format!(
                "{} is not a unit mod {}",
                g.pretty(),
                f.pretty()
            )));
        }
        steps.push((gi, r.num() * (denom / r.den())));
    }

    let mut exps: Vec<Option<u64>> = vec![None; ring.size as usize];
    exps[1] = Some(0);
    let mut queue = VecDeque::from([1u64]);
    let mut reached = 1usize;
    while let Some(e) = queue.pop_front() {
        let k = exps[e as usize].unwrap();
        for &(g, step) in &steps {
            let next = ring.mul(e, g);
            let val = (k + step) % denom;
            match exps[next as usize] {
                None => {
                    exps[next as usize] = Some(val);
                    reached += 1;
                    queue.push_back(next);
                }
                Some(old) if old != val => {
                    return Err(Error::InconsistentCharacter(format!(
                        "{} mod {} would take two values",
                        PolyOverFq::from_index(ring.q, next).pretty(),
                        f.pretty()
                    )));
                }
                Some(_) => {}
            }
        }
    }
    let group_order = ring.units().len();
    if reached != group_order {
        return Err(Error::IncompleteGenerators {
            spanned: reached,
            group_order,
        });
    }
    Ok(FFCharacter::from_exponents(ring, denom, exps))
}

/// Every character mod `f`, built on the basis from [`ff_unit_group`].
pub fn all_ff_characters(f: &PolyOverFq) -> Result<Vec<FFCharacter>> {
    let basis = ff_unit_group(f)?;
    let mut out = Vec::new();
    let mut idx = vec![0u64; basis.len()];
    loop {
        let assignments: Vec<(PolyOverFq, RootOfUnity)> = basis
            .iter()
            .zip(&idx)
            .map(|((g, n), &k)| (g.clone(), RootOfUnity::new(k, *n)))
            .collect();
        out.push(ff_character(f, &assignments)?);
        let mut i = 0;
        loop {
            if i == idx.len() {
                return Ok(out);
            }
            idx[i] += 1;
            if idx[i] < basis[i].1 {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

/// The character sending the first basis generator of `(F_q[T]/(f))^×` to
/// `e^{2πi/m}` and the others to 1.
pub fn ff_character_of_order(f: &PolyOverFq, m: u64) -> Result<FFCharacter> {
    let basis = ff_unit_group(f)?;
    let (g0, n0) = basis
        .first()
        .ok_or_else(|| Error::InvalidArgument(format!("unit group mod {} is trivial", f.pretty())))?;
    if m == 0 || n0 % m != 0 {
        return Err(Error::InvalidArgument(format!(
            "order {m} does not divide the order {n0} of the first generator {}",
            g0.pretty()
        )));
    }
    let mut assignments = vec![(g0.clone(), RootOfUnity::new(1, m))];
    assignments.extend(basis[1..].iter().map(|(g, _)| (g.clone(), RootOfUnity::one())));
    ff_character(f, &assignments)
}
