//! Signatures of small Hermitian forms.
//!
//! An `n x n` Hermitian matrix `H = A + iB` is embedded as the real symmetric
//! `2n x 2n` matrix `[[A, -B], [B, A]]`, whose spectrum is that of `H` with every
//! eigenvalue doubled. The embedding is diagonalized by cyclic Jacobi rotations.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    data: Vec<Complex64>,
    pub tolerance: f64,
}

impl HermitianMatrix {
    /// Checks conjugate symmetry within `tolerance`.
    pub fn new(n: usize, data: Vec<Complex64>, tolerance: f64) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Dimension(format!("{} entries for a {n}x{n} matrix", data.len())));
        }
        if tolerance.is_nan() || tolerance <= 0.0 {
            return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tolerance}")));
        }
        for i in 0..n {
            for j in i..n {
                if (data[i * n + j] - data[j * n + i].conj()).norm() > tolerance {
                    return Err(Error::NotHermitian { tolerance });
                }
            }
        }
        Ok(HermitianMatrix { n, data, tolerance })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("Hermitian matrix must be square".into()));
        }
        Self::new(n, rows.concat(), DEFAULT_TOLERANCE)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn neg(&self) -> Self {
        HermitianMatrix { n: self.n, data: self.data.iter().map(|z| -z).collect(), tolerance: self.tolerance }
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let n = self.n;
        let m = 2 * n;
        let mut a = vec![0.0; m * m];
        for i in 0..n {
            for j in 0..n {
                let z = self.get(i, j);
                a[i * m + j] = z.re;
                a[(i + n) * m + (j + n)] = z.re;
                a[i * m + (j + n)] = -z.im;
                a[(i + n) * m + j] = z.im;
            }
        }
        let mut vals = jacobi_eigenvalues(&mut a, m);
        vals.sort_by(|x, y| x.total_cmp(y));
        // each eigenvalue of H appears twice; keep one of each pair
        vals.into_iter().step_by(2).collect()
    }
}

fn jacobi_eigenvalues(a: &mut [f64], m: usize) -> Vec<f64> {
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..m).flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i * m + j].powi(2)).sum();
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[p * m + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * m + p];
                let aqq = a[q * m + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..m {
                    let akp = a[k * m + p];
                    let akq = a[k * m + q];
                    a[k * m + p] = c * akp - s * akq;
                    a[k * m + q] = s * akp + c * akq;
                }
                for k in 0..m {
                    let apk = a[p * m + k];
                    let aqk = a[q * m + k];
                    a[p * m + k] = c * apk - s * aqk;
                    a[q * m + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..m).map(|i| a[i * m + i]).collect()
}

/// `#positive - #negative` eigenvalues. Any eigenvalue with `|λ| < tolerance` is an error.
pub fn hermitian_signature(h: &HermitianMatrix) -> Result<i64> {
    let mut sig = 0i64;
    for lambda in h.eigenvalues() {
        if lambda.abs() < h.tolerance {
            return Err(Error::DegenerateForm { eigenvalue: lambda, tolerance: h.tolerance });
        }
        sig += if lambda > 0.0 { 1 } else { -1 };
    }
    Ok(sig)
}
