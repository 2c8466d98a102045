//! Re-checks that work from raw set data only: membership lookups and
//! coordinatewise arithmetic. Nothing here calls the search code, so a bug
//! in a finder cannot vouch for its own output.

use kottsep_core::freeset::{ConflictGraph, GridPoint};
use kottsep_core::{FreeMode, GaussianSet, GaussianVector, SymmetricCubeSet, TernaryVector};

/// Signature shared by the freeness predicates the acceptance suite can run with.
pub type FreeCheck = fn(&[TernaryVector], &SymmetricCubeSet, FreeMode) -> bool;

/// Whether the distinct pair `x, y` violates freeness in `a`.
pub fn pair_conflict(x: &TernaryVector, y: &TernaryVector, a: &SymmetricCubeSet, mode: FreeMode) -> bool {
    let hit = |v: Option<TernaryVector>| v.is_some_and(|v| a.contains(&v));
    match mode {
        FreeMode::Difference => {
            hit(x.raw_difference(y).ok().and_then(|d| d.to_ternary()))
                || hit(y.raw_difference(x).ok().and_then(|d| d.to_ternary()))
        }
        FreeMode::Sum => hit(x.raw_sum(y).ok().and_then(|s| s.to_ternary())),
    }
}

/// `b` is a set of distinct members of `a` with no conflicting pair.
pub fn raw_is_free(b: &[TernaryVector], a: &SymmetricCubeSet, mode: FreeMode) -> bool {
    if b.iter().any(|x| x.dim() != a.dim() || !a.contains(x)) {
        return false;
    }
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            if b[i] == b[j] || pair_conflict(&b[i], &b[j], a, mode) {
                return false;
            }
        }
    }
    true
}

/// A deliberately broken predicate whose inner loop stops one element early.
/// Used to show that the acceptance suite notices a faulty freeness check.
pub fn off_by_one_is_free(b: &[TernaryVector], a: &SymmetricCubeSet, mode: FreeMode) -> bool {
    if b.iter().any(|x| x.dim() != a.dim() || !a.contains(x)) {
        return false;
    }
    for i in 0..b.len() {
        for j in i + 1..b.len().saturating_sub(1) {
            if b[i] == b[j] || pair_conflict(&b[i], &b[j], a, mode) {
                return false;
            }
        }
    }
    true
}

/// Compares `check` with a direct pair scan on every subset of every
/// admissible set in dimension 2. Returns the first disagreement.
pub fn calibrate(check: FreeCheck) -> Result<(), String> {
    let sets = kottsep_core::ternary::AdmissibleSets::new(2, true, 64).map_err(|e| e.to_string())?;
    for a in sets.iter() {
        let m = a.members();
        for mode in [FreeMode::Difference, FreeMode::Sum] {
            for mask in 0u32..1 << m.len() {
                let b: Vec<TernaryVector> = (0..m.len()).filter(|i| mask >> i & 1 == 1).map(|i| m[i]).collect();
                let direct = b.iter().enumerate().all(|(i, x)| b[i + 1..].iter().all(|y| !mode.conflicts(x, y, &a)));
                if check(&b, &a, mode) != direct {
                    let shown: Vec<String> = b.iter().map(|x| x.to_string()).collect();
                    return Err(format!(
                        "freeness predicate disagrees with a direct scan on {shown:?} in {a:?} ({})",
                        mode.label()
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Independence number of the conflict graph built from [`pair_conflict`].
pub fn max_free_size(a: &SymmetricCubeSet, mode: FreeMode, cap: usize) -> Result<usize, String> {
    if a.len() > cap {
        return Err(format!("{} vertices exceed the cap of {cap}", a.len()));
    }
    let m = a.members();
    Ok(ConflictGraph::build(m.len(), |i, j| pair_conflict(&m[i], &m[j], a, mode)).independence_number())
}

fn gaussian_pair_conflict(x: &GaussianVector, y: &GaussianVector, a: &GaussianSet) -> bool {
    let hit = |d: Option<GaussianVector>| d.is_some_and(|d| a.contains(&d));
    hit(x.difference(y).ok().flatten()) || hit(y.difference(x).ok().flatten())
}

pub fn raw_is_gaussian_free(b: &[GaussianVector], a: &GaussianSet) -> bool {
    if b.iter().any(|x| x.dim() != a.dim() || !a.contains(x)) {
        return false;
    }
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            if b[i] == b[j] || gaussian_pair_conflict(&b[i], &b[j], a) {
                return false;
            }
        }
    }
    true
}

pub fn max_gaussian_free_size(a: &GaussianSet, cap: usize) -> Result<usize, String> {
    if a.len() > cap {
        return Err(format!("{} vertices exceed the cap of {cap}", a.len()));
    }
    let m = a.members();
    Ok(ConflictGraph::build(m.len(), |i, j| gaussian_pair_conflict(&m[i], &m[j], a)).independence_number())
}

/// The crossed-support condition, restated from its definition.
pub fn grid_pair_ok(p: &GridPoint, q: &GridPoint) -> bool {
    let shared = [p.k, p.m].into_iter().filter(|&i| i == q.k || i == q.m);
    shared.into_iter().all(|i| (p.k == i && q.m == i) || (p.m == i && q.k == i))
}

pub fn grid_set_ok(b: &[GridPoint], n: usize) -> bool {
    let in_range = |c: usize| (1..=n).contains(&c);
    b.iter().all(|p| p.k != p.m && in_range(p.k) && in_range(p.m))
        && b.iter().enumerate().all(|(i, p)| b[i + 1..].iter().all(|q| p != q && grid_pair_ok(p, q)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use kottsep_core::freeset::{witness_difference, witness_sum};

    fn v(s: &str) -> TernaryVector {
        s.parse().unwrap()
    }

    #[test]
    fn predicates() {
        let a = witness_difference(4).unwrap();
        assert!(raw_is_free(&[v("+0"), v("-0")], &a, FreeMode::Difference));
        assert!(!raw_is_free(&[v("+0"), v("0+")], &a, FreeMode::Difference));
        assert!(!raw_is_free(&[v("+0"), v("+0")], &a, FreeMode::Difference));
        assert_eq!(max_free_size(&a, FreeMode::Difference, 64).unwrap(), 3);
        assert_eq!(max_free_size(&witness_sum(4).unwrap(), FreeMode::Sum, 64).unwrap(), 3);
    }

    #[test]
    fn calibration_separates_the_mutant() {
        calibrate(raw_is_free).unwrap();
        assert!(calibrate(off_by_one_is_free).is_err());
    }

    #[test]
    fn grid_condition() {
        let p = |k, m| GridPoint { k, m };
        assert!(grid_set_ok(&[p(1, 2), p(2, 3), p(3, 1)], 3));
        assert!(!grid_set_ok(&[p(1, 2), p(1, 3)], 3));
        assert!(!grid_set_ok(&[p(1, 2), p(2, 1), p(1, 3)], 3));
        assert!(grid_set_ok(&[p(1, 2), p(2, 1)], 2));
    }
}
