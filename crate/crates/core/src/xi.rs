//! Characteristic classes, Tristram–Levine signatures, the `Ξ_p` certificate and
//! the homotopy-ribbon verdict.
//!
//! `Ξ_p(K) = (p²-1)/6 · L_V(κ,κ) + σ(W(K,κ)) + Σ_{i=1}^{p-1} σ_{ζ^i}(κ)`.
//! The middle term is always supplied by the caller.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_signature, kernel_mod_p, HermitianMatrix, IntMatrix, DEFAULT_TOLERANCE};
use crate::modulus::Modulus;
use crate::surfaces::SeifertData;

/// A projective class of vectors in the mod-`p` kernel of `L + Lᵀ`, lifted to `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharacteristicClass {
    pub p: u64,
    pub xi: Vec<u64>,
    #[serde(skip)]
    pub source: SeifertData,
}

/// One class per line in the kernel: scalar multiples by units are identified and the
/// lexicographically least multiple is kept. Vectors vanishing modulo some prime
/// factor of `p` are excluded, since they do not come from surjective colorings.
pub fn characteristic_classes(s: &SeifertData, p: u64) -> Result<Vec<CharacteristicClass>> {
    let m = Modulus::new(p)?;
    let kernel = kernel_mod_p(&s.symmetrized, p)?;
    let units = m.units();
    let mut reps: Vec<Vec<u64>> = kernel
        .enumerate()
        .into_iter()
        .filter(|v| m.primes().iter().all(|&q| v.iter().any(|&x| x % q != 0)))
        .map(|v| units.iter().map(|&u| v.iter().map(|&x| x * u % p).collect::<Vec<u64>>()).min().expect("1 is a unit"))
        .collect();
    reps.sort();
    reps.dedup();
    if reps.is_empty() {
        return Err(Error::NoCharacteristicClass { p });
    }
    Ok(reps.into_iter().map(|xi| CharacteristicClass { p, xi, source: s.clone() }).collect())
}

/// `ξᵀ (L + Lᵀ) ξ` for the stored lift. This is a class-level value: a curve realizing
/// the class can change it by a multiple of `p`.
pub fn linking_self_value(s: &SeifertData, cc: &CharacteristicClass) -> Result<i64> {
    let n = s.symmetrized.rows();
    if cc.xi.len() != n {
        return Err(Error::Dimension(format!("class of length {} on a {n}x{n} form", cc.xi.len())));
    }
    if cc.xi.iter().all(|&x| x % cc.p == 0) {
        return Err(Error::InvalidArgument("characteristic class must be nonzero mod p".into()));
    }
    let mut acc = BigInt::zero();
    for i in 0..n {
        for j in 0..n {
            acc += &s.symmetrized[(i, j)] * BigInt::from(cc.xi[i] * cc.xi[j]);
        }
    }
    let v = acc.to_i64().ok_or_else(|| Error::Internal("linking value exceeds i64".into()))?;
    if v.rem_euclid(cc.p as i64) != 0 {
        return Err(Error::LinkingValueNotDivisible { value: v, p: cc.p });
    }
    Ok(v)
}

/// Signature of `(1-ω)L + (1-ω̄)Lᵀ` at `ω = e^{2πi·i/p}`.
pub fn tristram_levine(l: &IntMatrix, p: u64, i: u64) -> Result<i64> {
    if !l.is_square() {
        return Err(Error::Dimension(format!("Seifert matrix is {}x{}", l.rows(), l.cols())));
    }
    if p < 2 || i == 0 || i >= p {
        return Err(Error::InvalidArgument(format!("need 1 <= i <= p-1, got i={i}, p={p}")));
    }
    let n = l.rows();
    let omega = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * i as f64 / p as f64);
    let (a, b) = (Complex64::new(1.0, 0.0) - omega, Complex64::new(1.0, 0.0) - omega.conj());
    let entry = |x: &BigInt| x.to_f64().expect("finite");
    let data = (0..n * n)
        .map(|k| {
            let (r, c) = (k / n, k % n);
            a * entry(&l[(r, c)]) + b * entry(&l[(c, r)])
        })
        .collect();
    hermitian_signature(&HermitianMatrix::new(n, data, DEFAULT_TOLERANCE)?)
}

/// `σ_{ζ^i}` for `i = 1..p-1`.
pub fn tristram_levine_family(l: &IntMatrix, p: u64) -> Result<Vec<i64>> {
    (1..p).map(|i| tristram_levine(l, p, i)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Obstructed,
    ConsistentWithRibbon,
    Indeterminate,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Obstructed => "obstructed",
            Verdict::ConsistentWithRibbon => "consistent-with-ribbon",
            Verdict::Indeterminate => "indeterminate",
        })
    }
}

/// `Ξ_p` for one coloring, with its summands. Missing inputs leave fields empty and the verdict indeterminate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct XiCertificate {
    pub p: u64,
    pub coloring_id: Option<String>,
    #[serde(rename = "L_V")]
    pub l_v: Option<i64>,
    #[serde(rename = "sigma_W")]
    pub sigma_w: Option<i64>,
    #[serde(rename = "tl")]
    pub tl_signatures: Option<Vec<i64>>,
    pub xi: Option<i64>,
    pub bound: Option<u64>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl XiCertificate {
    /// A certificate that could not be completed.
    pub fn missing(p: u64, coloring_id: Option<String>, note: impl Into<String>) -> Self {
        XiCertificate {
            p,
            coloring_id,
            l_v: None,
            sigma_w: None,
            tl_signatures: None,
            xi: None,
            bound: None,
            verdict: Verdict::Indeterminate,
            note: Some(note.into()),
        }
    }

    /// Records the bound and decides: violated means obstructed for this coloring.
    pub fn with_bound(mut self, bound: u64) -> Self {
        self.bound = Some(bound);
        self.verdict = match self.xi {
            Some(x) if x.unsigned_abs() > bound => Verdict::Obstructed,
            Some(_) => Verdict::ConsistentWithRibbon,
            None => Verdict::Indeterminate,
        };
        self
    }

    pub fn with_coloring_id(mut self, id: impl Into<String>) -> Self {
        self.coloring_id = Some(id.into());
        self
    }
}

pub fn assemble_xi(p: u64, l_v: i64, sigma_w: i64, tl: &[i64]) -> Result<XiCertificate> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(Error::InvalidModulus { p, reason: "must be odd and at least 3" });
    }
    let expected = (p - 1) as usize;
    if tl.len() != expected {
        return Err(Error::SignatureCount { expected, got: tl.len() });
    }
    if let Some(i) = (1..p as usize).find(|&i| tl[i - 1] != tl[p as usize - i - 1]) {
        return Err(Error::ConjugateSymmetry { i });
    }
    let numerator = (p as i128 * p as i128 - 1) * l_v as i128;
    if numerator % 6 != 0 {
        let g = num_integer::gcd(numerator, 6);
        return Err(Error::NonIntegral {
            numerator: (numerator / g).to_string(),
            denominator: (6 / g).to_string(),
            context: "(p^2-1)/6 * L_V",
        });
    }
    if l_v.rem_euclid(p as i64) != 0 {
        return Err(Error::LinkingValueNotDivisible { value: l_v, p });
    }
    let total = numerator / 6 + sigma_w as i128 + tl.iter().map(|&s| s as i128).sum::<i128>();
    let xi = i64::try_from(total).map_err(|_| Error::Internal("Ξ exceeds i64".into()))?;
    Ok(XiCertificate {
        p,
        coloring_id: None,
        l_v: Some(l_v),
        sigma_w: Some(sigma_w),
        tl_signatures: Some(tl.to_vec()),
        xi: Some(xi),
        bound: None,
        verdict: Verdict::Indeterminate,
        note: None,
    })
}

/// `rk H₁(M) + (p-1)/2`.
pub fn ribbon_bound(p: u64, rk_h1_m: u64) -> u64 {
    rk_h1_m + (p - 1) / 2
}

/// `(p-1)(n-1)/2` for an `n`-bridge knot.
pub fn bridge_bound(p: u64, n: usize) -> Result<u64> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("bridge number must be at least 2, got {n}")));
    }
    Ok((p - 1) * (n as u64 - 1) / 2)
}

/// Obstructed only if every candidate certificate violates its bound; one satisfied
/// bound makes the knot consistent with ribbon; otherwise indeterminate.
pub fn obstruction_verdict(p: u64, certs: &[XiCertificate]) -> Result<Verdict> {
    if certs.is_empty() {
        return Err(Error::EmptyCandidates { p });
    }
    if certs.iter().any(|c| c.verdict == Verdict::ConsistentWithRibbon) {
        Ok(Verdict::ConsistentWithRibbon)
    } else if certs.iter().any(|c| c.verdict == Verdict::Indeterminate) {
        Ok(Verdict::Indeterminate)
    } else {
        Ok(Verdict::Obstructed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParityCheck {
    Pass,
    Fail,
    Skipped,
}

/// Under the rational-homology-sphere hypothesis `Ξ₃` must be odd.
pub fn xi3_parity_check(cert: &XiCertificate, rational_homology_sphere: bool) -> Result<ParityCheck> {
    if cert.p != 3 {
        return Err(Error::InvalidArgument(format!("parity check applies to p = 3, got {}", cert.p)));
    }
    Ok(match (rational_homology_sphere, cert.xi) {
        (false, _) | (_, None) => ParityCheck::Skipped,
        (true, Some(x)) if x.rem_euclid(2) == 1 => ParityCheck::Pass,
        (true, Some(_)) => ParityCheck::Fail,
    })
}
