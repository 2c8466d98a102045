//! Difference-free and sum-free subsets of admissible cube sets.
//!
//! A subset `B` of `A` is difference-free when `x - y` is not in `A` for
//! distinct `x, y` in `B`, and sum-free when `x + y` is not in `A` for
//! distinct `x, y` in `B`. Every admissible `A` in dimension `n` has a
//! difference-free subset of size `n + 1` and a sum-free subset of size `n`;
//! this module finds them, certifies the arrow relations behind those sizes,
//! and checks the grid lemma used for the matching lower bound.

mod arrow;
mod graph;
mod grid;
mod search;
mod witness;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ternary::{SymmetricCubeSet, TernaryVector};

pub(crate) use arrow::value_with;
pub use arrow::{
    arrow_holds, kottman_value, sumfree_value, ArrowCertificate, Counterexample, KottmanValue, Method, RandomEvidence,
    Relation, ValueStrategy, RANDOM_EVIDENCE_MAX_DIM,
};
pub use graph::ConflictGraph;
pub use grid::{grid_max_properties, grid_star_check, GridPoint, GridReport};
pub use search::{
    chain_difference_free, chain_free, extend_difference_free, extend_free, find_difference_free, find_free,
    find_sum_free, max_free_subset, max_free_subset_within, FreeSetCertificate, MaxFree,
};
pub use witness::{witness_difference, witness_sum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreeMode {
    Difference,
    Sum,
}

impl FreeMode {
    /// Whether the distinct pair `x, y` violates freeness with respect to `a`.
    #[inline]
    pub fn conflicts(self, x: &TernaryVector, y: &TernaryVector, a: &SymmetricCubeSet) -> bool {
        match self {
            FreeMode::Difference => {
                x.sub_in_cube(y).is_some_and(|d| a.contains(&d)) || y.sub_in_cube(x).is_some_and(|d| a.contains(&d))
            }
            FreeMode::Sum => x.add_in_cube(y).is_some_and(|s| a.contains(&s)),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FreeMode::Difference => "difference",
            FreeMode::Sum => "sum",
        }
    }
}

/// Whether `b` is free in `a` under `mode`. Errors when `b` is not a subset of `a`.
///
/// This check is deliberately separate from the search code: it only uses
/// vector arithmetic and membership.
pub fn is_free(b: &[TernaryVector], a: &SymmetricCubeSet, mode: FreeMode) -> Result<bool> {
    for x in b {
        if x.dim() != a.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), found: x.dim() });
        }
        if !a.contains(x) {
            return Err(Error::Precondition(format!("{x} is not a member of the ground set")));
        }
    }
    for (i, x) in b.iter().enumerate() {
        for y in &b[i + 1..] {
            if x == y {
                continue;
            }
            let bad = match mode {
                FreeMode::Difference => {
                    x.difference(y)?.is_some_and(|d| a.contains(&d)) || y.difference(x)?.is_some_and(|d| a.contains(&d))
                }
                FreeMode::Sum => x.sum(y)?.is_some_and(|s| a.contains(&s)),
            };
            if bad {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> TernaryVector {
        s.parse().unwrap()
    }

    fn set(dim: usize, items: &[&str]) -> SymmetricCubeSet {
        SymmetricCubeSet::new(dim, items.iter().map(|s| t(s))).unwrap()
    }

    #[test]
    fn is_free_examples() {
        let a = set(1, &["+", "-"]);
        assert!(is_free(&[t("+"), t("-")], &a, FreeMode::Difference).unwrap());

        let a = set(2, &["+0", "-0", "0+", "0-", "+-", "-+"]);
        assert!(!is_free(&[t("+0"), t("0+")], &a, FreeMode::Difference).unwrap());

        let a = set(2, &["+0", "-0", "0+", "0-", "00"]);
        assert!(is_free(&[t("+0"), t("0+")], &a, FreeMode::Sum).unwrap());
    }

    #[test]
    fn is_free_requires_subset() {
        let a = set(1, &["+", "-"]);
        assert!(matches!(is_free(&[t("0")], &a, FreeMode::Difference), Err(Error::Precondition(_))));
    }

    #[test]
    fn antipodal_sum_needs_zero() {
        let without = set(1, &["+", "-"]);
        let with = set(1, &["+", "-", "0"]);
        assert!(is_free(&[t("+"), t("-")], &without, FreeMode::Sum).unwrap());
        assert!(!is_free(&[t("+"), t("-")], &with, FreeMode::Sum).unwrap());
    }
}
