//! Bounded witnesses on the multiplicative monoid of positive integers.
//!
//! `J` is the ideal of integers `∏ p^{v_p}` with every `v_p` either `0` or
//! at least `p`. For each `s` we exhibit a prime `p ∤ s`; then
//! `v_p(sp) = 1 < p`, so `sp ∉ J`, `p ∉ (J:s)` and `(J:s) ≠ ℕ`. This runs on
//! machine integers and is a bounded falsifier, not a proof.

use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CounterexampleError {
    #[error("bounds must be at least 2")]
    BoundTooSmall,
    #[error("no prime up to the bound works for s = {0}")]
    NoWitnessFound(u64),
    #[error("witness {p} for s = {s} fails: v_p(sp) = {valuation}")]
    BadWitness { s: u64, p: u64, valuation: u32 },
}

/// One certified pair: `p ∤ s` and `v_p(sp) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Witness {
    pub s: u64,
    pub p: u64,
    pub valuation: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessTable {
    pub max_s: u64,
    pub max_p: u64,
    pub witnesses: Vec<Witness>,
}

impl WitnessTable {
    /// Largest prime any `s` needed.
    pub fn largest_prime_used(&self) -> u64 {
        self.witnesses.iter().map(|w| w.p).max().unwrap_or(0)
    }

    /// `(p, number of s whose witness is p)`, ascending in `p`.
    pub fn histogram(&self) -> Vec<(u64, usize)> {
        let mut out: Vec<(u64, usize)> = Vec::new();
        let mut ps: Vec<u64> = self.witnesses.iter().map(|w| w.p).collect();
        ps.sort_unstable();
        for p in ps {
            match out.last_mut() {
                Some((q, c)) if *q == p => *c += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

pub fn primes_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Exponent of `p` in `n`.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut v = 0;
    while n > 0 && n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// Membership in `J` by full trial-division factorization.
pub fn in_j(mut n: u64) -> bool {
    let mut p = 2;
    while p * p <= n {
        let mut v = 0;
        while n.is_multiple_of(p) {
            n /= p;
            v += 1;
        }
        if v != 0 && v < p {
            return false;
        }
        p += 1;
    }
    // a remaining factor is a prime with exponent 1
    n == 1
}

/// Finds and certifies a witness prime for every `1 <= s <= max_s`.
pub fn nat_counterexample(max_s: u64, max_p: u64) -> Result<WitnessTable, CounterexampleError> {
    if max_s < 2 || max_p < 2 {
        return Err(CounterexampleError::BoundTooSmall);
    }
    let primes = primes_up_to(max_p);
    let witnesses: Result<Vec<Witness>, CounterexampleError> = (1..=max_s)
        .into_par_iter()
        .map(|s| {
            let p = *primes.iter().find(|&&p| s % p != 0).ok_or(CounterexampleError::NoWitnessFound(s))?;
            let valuation = valuation(s * p, p);
            if valuation != 1 || u64::from(valuation) >= p {
                return Err(CounterexampleError::BadWitness { s, p, valuation });
            }
            Ok(Witness { s, p, valuation })
        })
        .collect();
    Ok(WitnessTable { max_s, max_p, witnesses: witnesses? })
}
