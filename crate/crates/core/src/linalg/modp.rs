//! Null spaces over `Z/p` for odd square-free `p`, assembled by CRT from the prime factors.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::IntMatrix;
use crate::error::Result;
use crate::modulus::{inv_mod, Modulus};

/// Basis of `{x : A x = 0 (mod q)}` for one prime `q`, in reduced echelon order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeKernel {
    pub prime: u64,
    pub basis: Vec<Vec<u64>>,
}

impl PrimeKernel {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }
}

/// Solution set of `A x = 0 (mod p)`: the product over prime factors `q | p` of the mod-`q` null spaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModKernel {
    pub modulus: u64,
    pub len: usize,
    pub components: Vec<PrimeKernel>,
}

impl ModKernel {
    /// Number of solutions mod `p`.
    pub fn cardinality(&self) -> u128 {
        self.components.iter().map(|c| (c.prime as u128).pow(c.dimension() as u32)).product()
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.basis.is_empty())
    }

    /// For prime `p`, the dimension of the null space.
    pub fn dimension(&self) -> Option<usize> {
        match self.components.as_slice() {
            [only] => Some(only.dimension()),
            _ => None,
        }
    }

    /// Every solution vector mod `p`, sorted lexicographically.
    pub fn enumerate(&self) -> Vec<Vec<u64>> {
        let modulus = Modulus::new(self.modulus).expect("validated at construction");
        let per_prime: Vec<Vec<Vec<u64>>> = self.components.iter().map(|c| span(c, self.len)).collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; per_prime.len()];
        loop {
            let v: Vec<u64> = (0..self.len)
                .map(|k| {
                    let residues: Vec<u64> = per_prime.iter().zip(&idx).map(|(s, &i)| s[i][k]).collect();
                    modulus.crt(&residues)
                })
                .collect();
            out.push(v);
            // odometer
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    out.sort();
                    return out;
                }
                idx[pos] += 1;
                if idx[pos] < per_prime[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }
}

/// All `q^dim` vectors of a prime kernel.
fn span(c: &PrimeKernel, len: usize) -> Vec<Vec<u64>> {
    let q = c.prime;
    let mut out = vec![vec![0u64; len]];
    for b in &c.basis {
        let mut next = Vec::with_capacity(out.len() * q as usize);
        for v in &out {
            for s in 0..q {
                next.push(v.iter().zip(b).map(|(&x, &y)| (x + s * y) % q).collect());
            }
        }
        out = next;
    }
    out
}

fn reduce(x: &BigInt, q: u64) -> u64 {
    let r = x % BigInt::from(q);
    let r = r.to_i64().expect("residue fits");
    r.rem_euclid(q as i64) as u64
}

fn prime_kernel(a: &IntMatrix, q: u64) -> PrimeKernel {
    let (m, n) = (a.rows(), a.cols());
    let mut rows: Vec<Vec<u64>> = (0..m).map(|i| a.row(i).iter().map(|x| reduce(x, q)).collect()).collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..m).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = inv_mod(rows[r][col], q).expect("prime modulus");
        for x in rows[r].iter_mut() {
            *x = *x * inv % q;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[col] != 0 {
                let f = row[col];
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + (q - f) * y) % q;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == m {
            break;
        }
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = (q - rows[row][f]) % q;
            }
            // leading entry 1
            let lead = *v.iter().find(|&&x| x != 0).expect("free column is 1");
            let inv = inv_mod(lead, q).expect("prime modulus");
            v.iter_mut().for_each(|x| *x = *x * inv % q);
            v
        })
        .collect();
    PrimeKernel { prime: q, basis }
}

/// Null space of `A` acting on column vectors mod `p`, for odd square-free `p`.
pub fn kernel_mod_p(a: &IntMatrix, p: u64) -> Result<ModKernel> {
    let modulus = Modulus::new(p)?;
    let components = modulus.primes().iter().map(|&q| prime_kernel(a, q)).collect();
    Ok(ModKernel { modulus: p, len: a.cols(), components })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn brute_force(a: &IntMatrix, p: u64) -> Vec<Vec<u64>> {
        let n = a.cols();
        let mut out = Vec::new();
        for code in 0..p.pow(n as u32) {
            let v: Vec<u64> = (0..n).map(|k| code / p.pow(k as u32) % p).collect();
            let ok = (0..a.rows()).all(|i| {
                let s: BigInt = a.row(i).iter().zip(&v).map(|(x, &y)| x * BigInt::from(y)).sum();
                reduce(&s, p) == 0
            });
            if ok {
                out.push(v);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn trefoil_form_mod_three() {
        let a = m(&[&[-2, 1], &[1, -2]]);
        let k = kernel_mod_p(&a, 3).unwrap();
        assert_eq!(k.dimension(), Some(1));
        assert_eq!(k.components[0].basis, vec![vec![1, 2]]);
        assert_eq!(k.enumerate(), brute_force(&a, 3));
    }

    #[test]
    fn identity_and_zero() {
        for p in [3, 5, 15] {
            assert!(kernel_mod_p(&IntMatrix::identity(3), p).unwrap().is_zero());
        }
        let k = kernel_mod_p(&IntMatrix::zeros(2, 2), 5).unwrap();
        assert_eq!(k.dimension(), Some(2));
        assert_eq!(k.cardinality(), 25);
    }

    #[test]
    fn rejects_bad_moduli() {
        let a = IntMatrix::identity(2);
        assert!(kernel_mod_p(&a, 4).is_err());
        assert!(kernel_mod_p(&a, 9).is_err());
    }

    #[test]
    fn composite_matches_brute_force() {
        let a = m(&[&[3, 5, 0], &[0, 6, 9], &[15, 0, 3]]);
        let k = kernel_mod_p(&a, 15).unwrap();
        assert_eq!(k.enumerate(), brute_force(&a, 15));
        assert_eq!(k.cardinality() as usize, k.enumerate().len());
    }
}
