//! Free-subset search: the one-coordinate extension step, the chain built from
//! it, and the exact maximum-free-subset oracle.

use serde::{Deserialize, Serialize};

use super::graph::ConflictGraph;
use super::{is_free, FreeMode};
use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::ternary::{SymmetricCubeSet, TernaryVector};

/// A free subset together with the set it is free in. Re-verifiable from its
/// fields alone through [`FreeSetCertificate::verify`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeSetCertificate {
    pub mode: FreeMode,
    pub ground_set: SymmetricCubeSet,
    pub witness: Vec<TernaryVector>,
    pub claimed_size: usize,
    pub checked: bool,
    /// Sum mode only: whether `x + x` also avoids the ground set for every
    /// witness element, i.e. whether the witness is free under the reading
    /// that does not require `x != y`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free_including_self_pairs: Option<bool>,
}

impl FreeSetCertificate {
    pub fn new(mode: FreeMode, ground_set: SymmetricCubeSet, mut witness: Vec<TernaryVector>) -> Result<Self> {
        witness.sort_unstable();
        witness.dedup();
        let mut cert = Self {
            mode,
            claimed_size: witness.len(),
            ground_set,
            witness,
            checked: false,
            free_including_self_pairs: None,
        };
        cert.verify()?;
        cert.checked = true;
        if mode == FreeMode::Sum {
            let a = &cert.ground_set;
            cert.free_including_self_pairs =
                Some(cert.witness.iter().all(|x| x.add_in_cube(x).is_none_or(|s| !a.contains(&s))));
        }
        Ok(cert)
    }

    /// Checks subset, size and freeness. Does not trust `checked`.
    pub fn verify(&self) -> Result<()> {
        let mut sorted = self.witness.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.witness.len() || sorted.len() != self.claimed_size {
            return Err(Error::VerificationFailed(format!(
                "witness has {} distinct elements, claimed {}",
                sorted.len(),
                self.claimed_size
            )));
        }
        if !is_free(&self.witness, &self.ground_set, self.mode)? {
            return Err(Error::VerificationFailed(format!("witness is not {}-free", self.mode.label())));
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.witness.len()
    }
}

/// Result of the exact oracle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaxFree {
    pub size: usize,
    pub witness: Vec<TernaryVector>,
}

fn check_vertices(a: &SymmetricCubeSet, cap: usize, what: &'static str) -> Result<()> {
    if a.len() > cap {
        return Err(Error::BudgetExceeded { what, required: a.len() as u128, budget: cap as u128 });
    }
    Ok(())
}

/// Exact maximum free subset; the witness is the least one in serialization order.
pub fn max_free_subset(a: &SymmetricCubeSet, mode: FreeMode, budgets: &Budgets) -> Result<MaxFree> {
    check_vertices(a, budgets.mis_max_vertices, "maximum free subset")?;
    let g = ConflictGraph::for_set(a, mode);
    let mis = g.maximum_independent_set();
    let witness: Vec<TernaryVector> = mis.into_iter().map(|i| a.members()[i]).collect();
    Ok(MaxFree { size: witness.len(), witness })
}

/// The least free subset of `a` with exactly `k` elements, if any.
pub fn max_free_subset_within(
    a: &SymmetricCubeSet,
    mode: FreeMode,
    k: usize,
    budgets: &Budgets,
) -> Result<Option<Vec<TernaryVector>>> {
    check_vertices(a, budgets.search_max_vertices, "fixed-size free subset search")?;
    let g = ConflictGraph::for_set(a, mode);
    let order: Vec<usize> = (0..g.len()).collect();
    Ok(g.independent_set_of_size(k, &order).map(|s| s.into_iter().map(|i| a.members()[i]).collect()))
}

/// One extension step: from `b` free in the projection of `a` to the first
/// `dim - 1` coordinates, build a free subset of `a` with one more element.
///
/// Each element of `b` is extended by a last coordinate `+1, 0, -1` (first
/// available in that order is preferred) and one further element `z` of `a` is
/// added. Extensions of a free set are automatically pairwise free, so only the
/// pairs involving `z` need checking. The assignment is the least one for
/// which some `z` works, and `z` is the least such element.
pub fn extend_free(a: &SymmetricCubeSet, b: &[TernaryVector], mode: FreeMode) -> Result<FreeSetCertificate> {
    a.require_admissible()?;
    if a.dim() < 2 {
        return Err(Error::Precondition("extension needs a ground set of dimension at least 2".into()));
    }
    let proj = a.project(a.dim() - 1)?;
    if !is_free(b, &proj, mode)? {
        return Err(Error::Precondition(format!("the set to extend is not {}-free in the projection", mode.label())));
    }
    let witness = extend_unchecked(a, b, mode)?;
    FreeSetCertificate::new(mode, a.clone(), witness)
}

/// Difference-mode [`extend_free`].
pub fn extend_difference_free(a: &SymmetricCubeSet, b: &[TernaryVector]) -> Result<FreeSetCertificate> {
    extend_free(a, b, FreeMode::Difference)
}

const XI: [i8; 3] = [1, 0, -1];

fn extend_unchecked(a: &SymmetricCubeSet, b: &[TernaryVector], mode: FreeMode) -> Result<Vec<TernaryVector>> {
    // exts[i][s] is the extension of b[i] by XI[s] when it lies in a
    let exts: Vec<[Option<TernaryVector>; 3]> = b
        .iter()
        .map(|x| {
            let mut row = [None; 3];
            for (s, &xi) in XI.iter().enumerate() {
                let e = x.extend(xi)?;
                if a.contains(&e) {
                    row[s] = Some(e);
                }
            }
            Ok(row)
        })
        .collect::<Result<_>>()?;
    for (x, row) in b.iter().zip(&exts) {
        if row.iter().all(Option::is_none) {
            return Err(Error::Precondition(format!("{x} has no extension in the ground set")));
        }
    }
    #[cfg(debug_assertions)]
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            for e in exts[i].iter().flatten() {
                for f in exts[j].iter().flatten() {
                    debug_assert!(!mode.conflicts(e, f, a), "extensions {e} and {f} of a free pair conflict");
                }
            }
        }
    }
    // the best conceivable assignment: every element takes its first available extension
    let best: Vec<u8> = exts.iter().map(|row| 1 << row.iter().position(Option::is_some).unwrap()).collect();

    let mut candidates: Vec<(TernaryVector, Vec<u8>)> = Vec::new();
    'z: for z in a.iter() {
        let mut masks = Vec::with_capacity(b.len());
        for row in &exts {
            let mut m = 0u8;
            for (s, e) in row.iter().enumerate() {
                if let Some(e) = e {
                    if e != z && !mode.conflicts(e, z, a) {
                        m |= 1 << s;
                    }
                }
            }
            if m == 0 {
                continue 'z;
            }
            masks.push(m);
        }
        let optimal = masks.iter().zip(&best).all(|(m, b)| m & b != 0);
        candidates.push((*z, masks));
        if optimal {
            // nothing later can beat this assignment, and this z is the least with it
            let mut out: Vec<TernaryVector> =
                exts.iter().zip(&best).map(|(row, b)| row[b.trailing_zeros() as usize].unwrap()).collect();
            out.push(*z);
            return Ok(out);
        }
    }
    if candidates.is_empty() {
        return Err(Error::Defect(format!(
            "no completing element found while extending a {}-free set of size {} in dimension {}",
            mode.label(),
            b.len(),
            a.dim()
        )));
    }
    let mut out = Vec::with_capacity(b.len() + 1);
    for (i, row) in exts.iter().enumerate() {
        let s = (0..3)
            .find(|&s| candidates.iter().any(|(_, m)| m[i] >> s & 1 == 1))
            .expect("every candidate admits some extension");
        candidates.retain(|(_, m)| m[i] >> s & 1 == 1);
        out.push(row[s].unwrap());
    }
    out.push(candidates[0].0);
    Ok(out)
}

/// The chain `B_1, ..., B_N` of free sets in the successive projections of
/// `a`, each obtained from the previous one by [`extend_free`]. Difference
/// mode starts from `{+, -}`, sum mode from `{+}`.
pub fn chain_free(a: &SymmetricCubeSet, mode: FreeMode) -> Result<Vec<FreeSetCertificate>> {
    a.require_admissible()?;
    let n = a.dim();
    let projections: Vec<SymmetricCubeSet> = (1..=n).map(|k| a.project(k)).collect::<Result<_>>()?;
    let plus = TernaryVector::basis(1, 1)?;
    let start = match mode {
        FreeMode::Difference => vec![plus, plus.neg()],
        FreeMode::Sum => vec![plus],
    };
    let mut chain = vec![FreeSetCertificate::new(mode, projections[0].clone(), start)?];
    for k in 1..n {
        let prev = &chain[k - 1].witness;
        let next = extend_unchecked(&projections[k], prev, mode)?;
        let cert = FreeSetCertificate::new(mode, projections[k].clone(), next)
            .map_err(|e| Error::Defect(format!("extension step produced an invalid set: {e}")))?;
        chain.push(cert);
    }
    Ok(chain)
}

/// Difference-mode [`chain_free`].
pub fn chain_difference_free(a: &SymmetricCubeSet) -> Result<Vec<FreeSetCertificate>> {
    chain_free(a, FreeMode::Difference)
}

/// A free subset of the guaranteed size: `dim + 1` for differences, `dim` for sums.
///
/// Uses the chain; falls back to an exact fixed-size search when the chain
/// fails, which would indicate a defect. Failure of both is reported as a
/// defect, never as an empty answer.
pub fn find_free(a: &SymmetricCubeSet, mode: FreeMode, budgets: &Budgets) -> Result<FreeSetCertificate> {
    a.require_admissible()?;
    let target = match mode {
        FreeMode::Difference => a.dim() + 1,
        FreeMode::Sum => a.dim(),
    };
    let chain_err = match chain_free(a, mode) {
        Ok(mut chain) => {
            let last = chain.pop().expect("chain has one entry per dimension");
            if last.size() == target {
                return Ok(last);
            }
            Error::Defect(format!("chain ended with {} elements instead of {target}", last.size()))
        }
        Err(e) => e,
    };
    match max_free_subset_within(a, mode, target, budgets)? {
        Some(w) => FreeSetCertificate::new(mode, a.clone(), w),
        None => Err(Error::Defect(format!(
            "no {}-free subset of size {target} exists in an admissible set ({chain_err})",
            mode.label()
        ))),
    }
}

pub fn find_difference_free(a: &SymmetricCubeSet, budgets: &Budgets) -> Result<FreeSetCertificate> {
    find_free(a, FreeMode::Difference, budgets)
}

pub fn find_sum_free(a: &SymmetricCubeSet, budgets: &Budgets) -> Result<FreeSetCertificate> {
    find_free(a, FreeMode::Sum, budgets)
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

    fn strings(v: &[TernaryVector]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    fn full_minus_zero(dim: usize) -> SymmetricCubeSet {
        let full = SymmetricCubeSet::full_cube(dim).unwrap();
        SymmetricCubeSet::new(dim, full.iter().copied().filter(|x| !x.is_zero())).unwrap()
    }

    #[test]
    fn extend_examples() {
        let full = SymmetricCubeSet::full_cube(2).unwrap();
        let c = extend_difference_free(&full, &[t("+"), t("-")]).unwrap();
        assert_eq!(strings(&c.witness), ["++", "+-", "-+"]);

        let axes = set(2, &["+0", "-0", "0+", "0-"]);
        let c = extend_difference_free(&axes, &[t("+"), t("-")]).unwrap();
        assert_eq!(strings(&c.witness), ["+0", "-0", "0+"]);

        let axes3 = set(3, &["+00", "-00", "0+0", "0-0", "00+", "00-"]);
        let err = extend_difference_free(&axes3, &[t("++")]).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn find_examples() {
        let b = Budgets::default();
        let c = find_difference_free(&set(1, &["+", "-"]), &b).unwrap();
        assert_eq!(strings(&c.witness), ["+", "-"]);

        let c = find_difference_free(&full_minus_zero(2), &b).unwrap();
        assert_eq!(c.size(), 3);

        let c = find_difference_free(&set(3, &["+00", "-00", "0+0", "0-0", "00+", "00-"]), &b).unwrap();
        assert_eq!(c.size(), 4);

        let c = find_sum_free(&set(2, &["+0", "-0", "0+", "0-", "00"]), &b).unwrap();
        assert_eq!(strings(&c.witness), ["+0", "0+"]);
        assert_eq!(c.free_including_self_pairs, Some(true));

        let c = find_sum_free(&set(1, &["+", "-"]), &b).unwrap();
        assert_eq!(strings(&c.witness), ["+"]);

        let c = find_sum_free(&full_minus_zero(3), &b).unwrap();
        assert_eq!(c.size(), 3);
    }

    #[test]
    fn chain_sizes_grow_by_one() {
        let full = SymmetricCubeSet::full_cube(3).unwrap();
        let chain = chain_difference_free(&full).unwrap();
        assert_eq!(chain.iter().map(|c| c.size()).collect::<Vec<_>>(), [2, 3, 4]);
        for (k, c) in chain.iter().enumerate() {
            assert_eq!(c.ground_set, full.project(k + 1).unwrap());
            c.verify().unwrap();
        }
        for w in chain.windows(2) {
            for x in &w[0].witness {
                assert!(w[1].witness.iter().any(|y| y.prefix(x.dim()) == *x));
            }
        }
        let chain = chain_difference_free(&set(1, &["+", "-"])).unwrap();
        assert_eq!(chain.len(), 1);
    }

    #[test]
    fn oracle_examples() {
        let b = Budgets::default();
        let a = set(1, &["+", "-"]);
        let m = max_free_subset(&a, FreeMode::Difference, &b).unwrap();
        assert_eq!((m.size, strings(&m.witness)), (2, vec!["+".to_string(), "-".to_string()]));

        let a = set(2, &["+0", "-0", "0+", "0-", "00"]);
        assert_eq!(max_free_subset(&a, FreeMode::Sum, &b).unwrap().size, 2);

        let big = SymmetricCubeSet::full_cube(4).unwrap();
        assert!(max_free_subset(&big, FreeMode::Difference, &b).unwrap_err().is_budget());
    }

    #[test]
    fn certificates_detect_tampering() {
        let b = Budgets::default();
        let mut c = find_difference_free(&full_minus_zero(2), &b).unwrap();
        c.witness[0] = t("0+");
        c.witness.sort();
        assert!(c.verify().is_err());
        let mut c = find_difference_free(&full_minus_zero(2), &b).unwrap();
        c.claimed_size += 1;
        assert!(c.verify().is_err());
    }
}
