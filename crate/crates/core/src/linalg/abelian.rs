use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{invariant_factors, json_bigints, IntMatrix};

/// Finitely generated abelian group `Z^rank + Z/t_1 + ... + Z/t_k` with `t_i | t_{i+1}`, `t_i >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub rank: usize,
    #[serde(with = "json_bigints")]
    pub torsion: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup { rank: 0, torsion: Vec::new() }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroup { rank, torsion: Vec::new() }
    }

    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite().then(|| self.torsion.iter().product())
    }

    /// Group presented by a list of diagonal relation entries over `n` generators.
    pub(crate) fn from_diagonal(n: usize, diag: &[BigInt]) -> Self {
        let nonzero = diag.iter().filter(|d| !d.is_zero()).count();
        let torsion: Vec<BigInt> = diag.iter().filter(|d| !d.is_zero() && !d.abs().is_one()).map(|d| d.abs()).collect();
        AbelianGroup { rank: n - nonzero, torsion }
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// The group `Z^cols / (row space of A)`: rows of `A` are relations among the column generators.
pub fn cokernel(a: &IntMatrix) -> AbelianGroup {
    AbelianGroup::from_diagonal(a.cols(), &invariant_factors(a))
}
