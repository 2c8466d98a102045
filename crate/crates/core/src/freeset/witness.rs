//! Explicit admissible sets whose free subsets are as small as possible.

use crate::error::{Error, Result};
use crate::ternary::{SymmetricCubeSet, TernaryVector};

/// `{±e_i} ∪ {e_i - e_j : i != j}` in dimension `l - 2`. Its largest
/// difference-free subset has `l - 1` elements.
pub fn witness_difference(l: usize) -> Result<SymmetricCubeSet> {
    if l < 3 {
        return Err(Error::InvalidParameter(format!("difference witness needs l >= 3, got {l}")));
    }
    let n = l - 2;
    let mut v = Vec::with_capacity(n * (n + 1));
    for i in 1..=n {
        let e = TernaryVector::basis(n, i)?;
        v.push(e);
        v.push(e.neg());
        for j in 1..=n {
            if i != j {
                let mut c = vec![0i8; n];
                c[i - 1] = 1;
                c[j - 1] = -1;
                v.push(TernaryVector::from_coords(&c)?);
            }
        }
    }
    SymmetricCubeSet::new(n, v)
}

/// `{±e_i} ∪ {0}` in dimension `l - 1`. Its largest sum-free subset has
/// `l - 1` elements.
pub fn witness_sum(l: usize) -> Result<SymmetricCubeSet> {
    if l < 2 {
        return Err(Error::InvalidParameter(format!("sum witness needs l >= 2, got {l}")));
    }
    let n = l - 1;
    let mut v = vec![TernaryVector::zero(n)?];
    for i in 1..=n {
        let e = TernaryVector::basis(n, i)?;
        v.push(e);
        v.push(e.neg());
    }
    SymmetricCubeSet::new(n, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        assert_eq!(witness_difference(3).unwrap().to_strings(), ["+", "-"]);
        assert_eq!(witness_difference(4).unwrap().to_strings(), ["+-", "+0", "-+", "-0", "0+", "0-"]);
        for l in 3..=9 {
            let a = witness_difference(l).unwrap();
            assert!(a.is_admissible());
            assert_eq!(a.len(), 2 * (l - 2) + (l - 2) * (l - 3));
        }
        assert_eq!(witness_sum(2).unwrap().to_strings(), ["+", "-", "0"]);
        assert_eq!(witness_sum(3).unwrap().to_strings(), ["+0", "-0", "0+", "0-", "00"]);
        assert!(witness_difference(2).is_err());
        assert!(witness_sum(1).is_err());
    }
}
