//! Closed-form signature and Euler characteristic formulas for branched covers.
//!
//! Every value is computed over a common denominator and rejected when it is not an
//! integer, which flags inconsistent input data rather than rounding it away.
//!
//! The dihedral signature formula uses the signature of the base `Y`, not of the
//! cover: `σ_IH = p·σ(Y) - (p-1)/4 · e(B) + Ξ_p`. At `Y = S⁴` this reduces to `Ξ_p`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Input to [`viro_signature`], and optionally to [`sashka_signature`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverSpec {
    /// Number of sheets.
    pub n: u64,
    pub sigma_y: i64,
    /// Branching index `r >= 2` to the normal Euler number of `A_r` (already halved in the non-orientable case).
    #[serde(default)]
    pub euler_numbers: BTreeMap<u32, i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dihedral: Option<DihedralSpec>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DihedralSpec {
    pub p: u64,
    pub e_b: i64,
    pub xi: i64,
}

fn integral(numerator: i128, denominator: i128, context: &'static str) -> Result<i64> {
    if numerator % denominator != 0 {
        let g = num_integer::gcd(numerator, denominator);
        return Err(Error::NonIntegral { numerator: (numerator / g).to_string(), denominator: (denominator / g).to_string(), context });
    }
    i64::try_from(numerator / denominator).map_err(|_| Error::Internal(format!("{context} exceeds i64")))
}

fn check_odd(p: u64) -> Result<()> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(Error::InvalidModulus { p, reason: "must be odd and at least 3" });
    }
    Ok(())
}

/// `σ(X) = n σ(Y) - Σ_r (r²-1)/3 · e(A_r)`.
pub fn viro_signature(spec: &CoverSpec) -> Result<i64> {
    if spec.n < 1 {
        return Err(Error::InvalidArgument("sheet count must be at least 1".into()));
    }
    let mut thrice = 3 * spec.n as i128 * spec.sigma_y as i128;
    for (&r, &e) in &spec.euler_numbers {
        if r < 2 {
            return Err(Error::InvalidArgument(format!("branching index must be at least 2, got {r}")));
        }
        thrice -= (r as i128 * r as i128 - 1) * e as i128;
    }
    integral(thrice, 3, "sum of (r^2-1)/3 e(A_r)")
}

/// `p σ(Y) - (p-1)/4 · e(B) + Ξ_p`.
pub fn sashka_signature(p: u64, sigma_y: i64, e_b: i64, xi: i64) -> Result<i64> {
    check_odd(p)?;
    let p = p as i128;
    integral(4 * p * sigma_y as i128 - (p - 1) * e_b as i128 + 4 * xi as i128, 4, "(p-1)/4 e(B)")
}

/// Evaluates the dihedral part of a spec.
pub fn sashka_from_spec(spec: &CoverSpec) -> Result<i64> {
    let d = spec.dihedral.ok_or_else(|| Error::InvalidArgument("spec has no dihedral part (p, e_b, xi)".into()))?;
    sashka_signature(d.p, spec.sigma_y, d.e_b, d.xi)
}

/// `Iχ(X) = 1 - rk H₁(M) + (p+1)/2`.
pub fn ih_euler_characteristic(p: u64, rk_h1_m: u64) -> Result<i64> {
    check_odd(p)?;
    Ok(1 - rk_h1_m as i64 + (p as i64 + 1) / 2)
}

/// Intersection-homology Euler characteristic `(p+1)/2` of the disk cover.
pub fn disk_cover_euler(p: u64) -> Result<u64> {
    check_odd(p)?;
    Ok(p.div_ceil(2))
}
