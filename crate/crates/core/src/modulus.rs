//! Odd square-free moduli and arithmetic in `Z/p`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An odd square-free integer `p >= 3` together with its prime factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Modulus {
    value: u64,
    primes: Vec<u64>,
}

impl Modulus {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 {
            return Err(Error::InvalidModulus { p, reason: "must be at least 3" });
        }
        if p.is_multiple_of(2) {
            return Err(Error::InvalidModulus { p, reason: "must be odd square-free" });
        }
        let primes = factor(p);
        if primes.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidModulus { p, reason: "must be odd square-free" });
        }
        Ok(Modulus { value: p, primes })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn is_prime(&self) -> bool {
        self.primes.len() == 1
    }

    /// Units of `Z/p` in increasing order.
    pub fn units(&self) -> Vec<u64> {
        (1..self.value).filter(|&a| gcd(a, self.value) == 1).collect()
    }

    pub fn reduce(&self, x: i64) -> u64 {
        x.rem_euclid(self.value as i64) as u64
    }

    /// Combine residues modulo the prime factors into a residue mod `p`.
    pub fn crt(&self, residues: &[u64]) -> u64 {
        debug_assert_eq!(residues.len(), self.primes.len());
        let p = self.value as u128;
        let mut acc: u128 = 0;
        for (&q, &r) in self.primes.iter().zip(residues) {
            let m = self.value / q;
            let inv = inv_mod(m % q, q).expect("coprime cofactor");
            acc = (acc + (r as u128) * (m as u128) % p * (inv as u128)) % p;
        }
        acc as u64
    }
}

impl TryFrom<u64> for Modulus {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        Modulus::new(p)
    }
}

impl From<Modulus> for u64 {
    fn from(m: Modulus) -> u64 {
        m.value
    }
}

impl std::fmt::Display for Modulus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Prime factors with multiplicity, ascending.
pub fn factor(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        while n.is_multiple_of(d) {
            out.push(d);
            n /= d;
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}
