//! Orbit-based enumeration and sampling of admissible subsets of the cube.
//!
//! An admissible set is a union of antipodal pairs `{x, -x}` that contains
//! every pair `{e_k, -e_k}`, optionally together with the zero vector. There
//! are `(3^dim - 1) / 2` pairs, `dim` of them forced, so the search space has
//! `2^((3^dim - 1)/2 - dim + 1)` members when the zero vector is a free choice.

use std::collections::HashMap;

use rand::Rng;

use super::set::SymmetricCubeSet;
use super::vector::TernaryVector;
use crate::error::{Error, Result};

/// All vectors of `C_dim` in serialization order (`+ < - < 0`, first coordinate most significant).
pub fn cube_vectors(dim: usize) -> impl Iterator<Item = TernaryVector> {
    // digit 0 = '+', 1 = '-', 2 = '0'; the last coordinate moves fastest
    let mut digits = vec![0u8; dim];
    let mut done = dim == 0;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let mut pos = 0u64;
        let mut neg = 0u64;
        for (i, &d) in digits.iter().enumerate() {
            match d {
                0 => pos |= 1 << i,
                1 => neg |= 1 << i,
                _ => {}
            }
        }
        let out = TernaryVector::from_masks(dim, pos, neg);
        let mut i = dim;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if digits[i] < 2 {
                digits[i] += 1;
                break;
            }
            digits[i] = 0;
        }
        Some(out)
    })
}

/// `x` is the canonical member of its antipodal pair: its first nonzero coordinate is `+1`.
#[inline]
pub fn is_canonical(x: &TernaryVector) -> bool {
    let s = x.support_mask();
    s != 0 && x.pos_mask() & (s & s.wrapping_neg()) != 0
}

/// Number of admissible sets in dimension `dim`, or `None` when it overflows `u128`.
pub fn admissible_count(dim: usize, include_zero_choice: bool) -> Option<u128> {
    let orbits = 3u128.checked_pow(dim as u32)?.checked_sub(1)? / 2;
    let free = orbits - dim as u128 + u128::from(include_zero_choice);
    if free >= 128 {
        None
    } else {
        Some(1u128 << free)
    }
}

/// The admissible subsets of `C_dim`, indexed `0..count` in lexicographic order
/// of their orbit-inclusion bitmaps (first free orbit most significant, zero bit last).
#[derive(Clone, Debug)]
pub struct AdmissibleSets {
    dim: usize,
    include_zero_choice: bool,
    forced: Vec<TernaryVector>,
    free_orbits: Vec<TernaryVector>,
    count: u64,
}

impl AdmissibleSets {
    pub fn new(dim: usize, include_zero_choice: bool, budget: u64) -> Result<Self> {
        TernaryVector::zero(dim)?;
        let count = admissible_count(dim, include_zero_choice).unwrap_or(u128::MAX);
        if count > u128::from(budget) {
            return Err(Error::BudgetExceeded {
                what: "admissible-set enumeration",
                required: count,
                budget: u128::from(budget),
            });
        }
        let mut forced = Vec::with_capacity(2 * dim);
        for k in 1..=dim {
            let e = TernaryVector::basis(dim, k)?;
            forced.push(e);
            forced.push(e.neg());
        }
        let free_orbits = cube_vectors(dim).filter(|x| is_canonical(x) && x.support_mask().count_ones() > 1).collect();
        Ok(Self { dim, include_zero_choice, forced, free_orbits, count: count as u64 })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn free_orbit_count(&self) -> usize {
        self.free_orbits.len()
    }

    fn bits(&self) -> usize {
        self.free_orbits.len() + usize::from(self.include_zero_choice)
    }

    pub fn set_at(&self, index: u64) -> SymmetricCubeSet {
        assert!(index < self.count, "index {index} out of range");
        let bits = self.bits();
        let mut members = self.forced.clone();
        for (i, rep) in self.free_orbits.iter().enumerate() {
            if index >> (bits - 1 - i) & 1 == 1 {
                members.push(*rep);
                members.push(rep.neg());
            }
        }
        if self.include_zero_choice && index & 1 == 1 {
            members.push(TernaryVector::zero(self.dim).expect("valid dimension"));
        }
        members.sort_unstable();
        SymmetricCubeSet::from_sorted(self.dim, members)
    }

    pub fn iter(&self) -> impl Iterator<Item = SymmetricCubeSet> + '_ {
        (0..self.count).map(move |i| self.set_at(i))
    }
}

/// Samples an admissible subset of `C_dim`: each non-basis antipodal pair and
/// the zero vector are included independently with probability 1/2.
pub fn random_admissible<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<SymmetricCubeSet> {
    TernaryVector::zero(dim)?;
    let mut decided: HashMap<TernaryVector, bool> = HashMap::new();
    let dense = dim <= 11;
    let mut table: Vec<u8> = if dense { vec![0u8; 1usize << (2 * dim)] } else { Vec::new() };
    let mut members = Vec::new();
    for x in cube_vectors(dim) {
        let keep = if x.is_zero() {
            rng.gen_bool(0.5)
        } else if x.support_mask().count_ones() == 1 {
            true
        } else {
            let rep = if is_canonical(&x) { x } else { x.neg() };
            if dense {
                let slot = &mut table[rep.dense_key() as usize];
                if *slot == 0 {
                    *slot = if rng.gen_bool(0.5) { 2 } else { 1 };
                }
                *slot == 2
            } else {
                *decided.entry(rep).or_insert_with(|| rng.gen_bool(0.5))
            }
        };
        if keep {
            members.push(x);
        }
    }
    Ok(SymmetricCubeSet::from_sorted(dim, members))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    #[test]
    fn cube_is_sorted_and_complete() {
        for dim in 1..=4 {
            let v: Vec<_> = cube_vectors(dim).collect();
            assert_eq!(v.len(), 3usize.pow(dim as u32));
            assert!(v.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn counts_match_orbit_formula() {
        assert_eq!(AdmissibleSets::new(1, true, 1 << 20).unwrap().count(), 2);
        // 4 antipodal pairs, 2 forced, plus the zero bit: 2^3
        assert_eq!(AdmissibleSets::new(2, true, 1 << 20).unwrap().count(), 8);
        assert_eq!(AdmissibleSets::new(3, true, 1 << 20).unwrap().count(), 2048);
        assert_eq!(AdmissibleSets::new(3, false, 1 << 20).unwrap().count(), 1024);
        assert_eq!(admissible_count(4, true), Some(1 << 37));
    }

    #[test]
    fn dim_one_sets() {
        let e = AdmissibleSets::new(1, true, 16).unwrap();
        let sets: Vec<Vec<String>> = e.iter().map(|s| s.to_strings()).collect();
        assert_eq!(sets, vec![vec!["+", "-"], vec!["+", "-", "0"]]);
    }

    #[test]
    fn budget_is_reported() {
        let err = AdmissibleSets::new(4, true, 1 << 20).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn enumeration_is_exhaustive_and_unique() {
        for dim in 1..=3 {
            let e = AdmissibleSets::new(dim, true, 1 << 20).unwrap();
            let mut seen = HashSet::new();
            for s in e.iter() {
                assert!(s.is_admissible());
                assert!(seen.insert(s.to_strings()));
            }
            assert_eq!(seen.len() as u64, e.count());
        }
    }

    #[test]
    fn random_sets_are_admissible() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in [1, 3, 6, 12] {
            for _ in 0..5 {
                let s = random_admissible(dim, &mut rng).unwrap();
                assert!(s.is_admissible());
            }
        }
    }
}
