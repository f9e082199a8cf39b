//! Prime tables from a bit-packed odd-only sieve of Eratosthenes.

use std::sync::{Arc, Mutex, OnceLock};

/// All primes up to and including `limit`, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// The prefix of the table holding primes `p <= x`.
    ///
    /// `x` may exceed the table limit only if the caller knows no further
    /// primes are needed; the slice never extends past the table.
    pub fn primes_le(&self, x: f64) -> &[u64] {
        if x < 2.0 {
            return &[];
        }
        let idx = self.primes.partition_point(|&p| (p as f64) <= x);
        &self.primes[..idx]
    }

    /// Number of primes `<= x` held by the table (π(x) when `x <= limit`).
    pub fn count_le(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| p <= x)
    }

    /// `p_n`, one-based. `None` if the table is too short.
    pub fn nth(&self, n: usize) -> Option<u64> {
        n.checked_sub(1).and_then(|i| self.primes.get(i).copied())
    }
}

/// Sieve of Eratosthenes over odd integers, one bit each.
pub fn primes_up_to(x: u64) -> PrimeTable {
    if x < 2 {
        return PrimeTable {
            limit: x,
            primes: Vec::new(),
        };
    }
    // bit i stands for 2i + 1
    let half = (x as usize - 1) / 2 + 1;
    let mut composite = vec![0u64; half.div_ceil(64)];
    let mark = |bits: &mut [u64], i: usize| bits[i >> 6] |= 1 << (i & 63);
    let test = |bits: &[u64], i: usize| bits[i >> 6] >> (i & 63) & 1 == 1;

    mark(&mut composite, 0);
    let mut i = 1;
    loop {
        let p = 2 * i + 1;
        if p * p > x as usize {
            break;
        }
        if !test(&composite, i) {
            let mut j = p * p / 2;
            while j < half {
                mark(&mut composite, j);
                j += p;
            }
        }
        i += 1;
    }

    let mut primes = Vec::with_capacity(estimate_pi(x));
    primes.push(2);
    primes.extend(
        (1..half)
            .filter(|&i| !test(&composite, i))
            .map(|i| (2 * i + 1) as u64),
    );
    PrimeTable { limit: x, primes }
}

fn estimate_pi(x: u64) -> usize {
    let xf = x as f64;
    if xf < 17.0 {
        8
    } else {
        (1.26 * xf / xf.ln()) as usize
    }
}

/// Upper bound for `p_n` (Rosser), valid for n >= 6; padded below that.
fn nth_prime_bound(n: usize) -> u64 {
    if n < 6 {
        return 15;
    }
    let nf = n as f64;
    (nf * (nf.ln() + nf.ln().ln())).ceil() as u64 + 1
}

static CACHE: OnceLock<Mutex<Option<Arc<PrimeTable>>>> = OnceLock::new();

/// Process-wide table covering at least `x`. Re-sieves only when a larger
/// limit than any previous request is needed.
pub fn shared_primes(x: u64) -> Arc<PrimeTable> {
    let cell = CACHE.get_or_init(|| Mutex::new(None));
    let mut guard = cell.lock().unwrap_or_else(|e| e.into_inner());
    match guard.as_ref() {
        Some(t) if t.limit >= x => Arc::clone(t),
        _ => {
            let t = Arc::new(primes_up_to(x.max(1 << 16)));
            *guard = Some(Arc::clone(&t));
            t
        }
    }
}

/// The n-th prime, `p_1 = 2`. Panics on `n == 0`.
pub fn nth_prime(n: usize) -> u64 {
    assert!(n >= 1, "primes are indexed from 1");
    shared_primes(nth_prime_bound(n))
        .nth(n)
        .expect("Rosser bound covers p_n")
}

/// Primes `p <= x` from the shared table.
pub fn primes_le(x: f64) -> Vec<u64> {
    if x < 2.0 {
        return Vec::new();
    }
    shared_primes(x.floor() as u64).primes_le(x).to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_prime_trial(m: u64) -> bool {
        m >= 2 && (2..).take_while(|d| d * d <= m).all(|d| m % d != 0)
    }

    #[test]
    fn small_tables() {
        assert_eq!(primes_up_to(10).primes(), &[2, 3, 5, 7]);
        assert!(primes_up_to(1).is_empty());
        assert!(primes_up_to(0).is_empty());
        assert_eq!(primes_up_to(2).primes(), &[2]);
        assert_eq!(primes_up_to(3).primes(), &[2, 3]);
    }

    #[test]
    fn hundred_has_25_primes() {
        let oracle = (0..=100).filter(|&m| is_prime_trial(m)).count();
        assert_eq!(oracle, 25);
        assert_eq!(primes_up_to(100).len(), oracle);
    }

    #[test]
    fn matches_trial_division_to_20000() {
        let t = primes_up_to(20_000);
        let oracle: Vec<u64> = (0..=20_000).filter(|&m| is_prime_trial(m)).collect();
        assert_eq!(t.primes(), oracle.as_slice());
    }

    #[test]
    fn nth_prime_values() {
        assert_eq!(nth_prime(1), 2);
        assert_eq!(nth_prime(10), 29);
        assert_eq!(nth_prime(1000), 7919);
        let oracle: Vec<u64> = (0..8000).filter(|&m| is_prime_trial(m)).collect();
        assert_eq!(oracle[9], 29);
        assert_eq!(oracle[999], 7919);
        for n in 1..=50 {
            assert_eq!(nth_prime(n), oracle[n - 1]);
        }
    }

    #[test]
    fn deterministic_and_prefix_consistent() {
        let a = primes_up_to(5000);
        assert_eq!(a, primes_up_to(5000));
        let b = primes_up_to(1000);
        assert_eq!(a.primes_le(1000.0), b.primes());
        assert_eq!(a.count_le(1000), 168);
        assert!(a.primes().windows(2).all(|w| w[0] < w[1]));
    }
}
