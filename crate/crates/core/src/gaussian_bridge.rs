//! The Gaussian cube `V_n = {0, ±1, ±i}^n` and its link to the real cube.
//!
//! An admissible Gaussian set contains every `e_k` and is closed under
//! multiplication by `i`. Such a set always has a difference-free subset of
//! size `2n + 2`, one more than the `2n + 1` obtained by running the real
//! engine on its real-ification.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::freeset::{
    find_difference_free, witness_difference, ArrowCertificate, ConflictGraph, Counterexample, KottmanValue, Method,
    Relation, ValueStrategy,
};
use crate::ternary::{GaussianSet, GaussianVector, SymmetricCubeSet, TernaryVector};

/// Real-ification `(a_1 + b_1 i, ...) -> (a_1, b_1, ...)`.
pub fn embed_real(x: &GaussianVector) -> TernaryVector {
    x.embed_real()
}

/// The real vector `x` viewed as a Gaussian vector with zero imaginary parts.
pub fn real_to_gaussian(x: &TernaryVector) -> GaussianVector {
    let parts: Vec<(i8, i8)> = x.coords().into_iter().map(|c| (c, 0)).collect();
    GaussianVector::from_parts(&parts).expect("dimension already validated")
}

/// `A ∪ iA` for a real admissible `A` without the zero vector. Every member
/// is purely real or purely imaginary.
pub fn delta_construction(a: &SymmetricCubeSet) -> Result<GaussianSet> {
    a.require_admissible()?;
    if a.contains_zero() {
        return Err(Error::Precondition("the zero vector must not belong to the real set".into()));
    }
    let real: Vec<GaussianVector> = a.iter().map(real_to_gaussian).collect();
    let imag: Vec<GaussianVector> = real.iter().map(|x| x.i_multiply()).collect();
    GaussianSet::new(a.dim(), real.into_iter().chain(imag))
}

/// All of `V_dim` in serialization order.
pub fn gaussian_cube(dim: usize) -> Result<Vec<GaussianVector>> {
    GaussianVector::zero(dim)?;
    const DIGITS: [(i8, i8); 5] = [(1, 0), (-1, 0), (0, 0), (0, 1), (0, -1)];
    let total = 5usize.checked_pow(dim as u32).ok_or(Error::UnsupportedDimension(dim))?;
    let mut out = Vec::with_capacity(total);
    let mut parts = vec![(0i8, 0i8); dim];
    for mut idx in 0..total {
        for k in (0..dim).rev() {
            parts[k] = DIGITS[idx % 5];
            idx /= 5;
        }
        out.push(GaussianVector::from_parts(&parts)?);
    }
    Ok(out)
}

fn orbit(x: &GaussianVector) -> [GaussianVector; 4] {
    let a = *x;
    let b = a.i_multiply();
    let c = b.i_multiply();
    let d = c.i_multiply();
    [a, b, c, d]
}

fn canonical(x: &GaussianVector) -> GaussianVector {
    orbit(x).into_iter().min().expect("orbit is nonempty")
}

fn is_basis_orbit(x: &GaussianVector) -> bool {
    x.parts().iter().filter(|p| **p != (0, 0)).count() == 1
}

/// Admissible Gaussian sets of a fixed dimension, indexed like the real
/// enumeration: one bit per non-basis `i`-orbit (first orbit most
/// significant), then one bit for the zero vector.
#[derive(Clone, Debug)]
pub struct GaussianAdmissibleSets {
    dim: usize,
    forced: Vec<GaussianVector>,
    free_orbits: Vec<GaussianVector>,
    count: u64,
}

impl GaussianAdmissibleSets {
    pub fn new(dim: usize, budget: u64) -> Result<Self> {
        let count = gaussian_admissible_count(dim).unwrap_or(u128::MAX);
        if count > u128::from(budget) {
            return Err(Error::BudgetExceeded {
                what: "admissible Gaussian set enumeration",
                required: count,
                budget: u128::from(budget),
            });
        }
        let cube = gaussian_cube(dim)?;
        let mut forced = Vec::new();
        let mut free_orbits = Vec::new();
        for x in cube.iter().filter(|x| !x.is_zero() && canonical(x) == **x) {
            if is_basis_orbit(x) {
                forced.extend(orbit(x));
            } else {
                free_orbits.push(*x);
            }
        }
        Ok(Self { dim, forced, free_orbits, count: count as u64 })
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn orbit_count(&self) -> usize {
        self.free_orbits.len() + self.forced.len() / 4
    }

    pub fn set_at(&self, index: u64) -> GaussianSet {
        assert!(index < self.count, "index {index} out of range");
        let bits = self.free_orbits.len() + 1;
        let mut members = self.forced.clone();
        for (i, rep) in self.free_orbits.iter().enumerate() {
            if index >> (bits - 1 - i) & 1 == 1 {
                members.extend(orbit(rep));
            }
        }
        if index & 1 == 1 {
            members.push(GaussianVector::zero(self.dim).expect("valid dimension"));
        }
        GaussianSet::new(self.dim, members).expect("valid dimension")
    }

    pub fn iter(&self) -> impl Iterator<Item = GaussianSet> + '_ {
        (0..self.count).map(move |i| self.set_at(i))
    }
}

/// `2^((5^dim - 1)/4 - dim + 1)`, or `None` on overflow.
pub fn gaussian_admissible_count(dim: usize) -> Option<u128> {
    let orbits = (5u128.checked_pow(dim as u32)? - 1) / 4;
    let free = orbits - dim as u128 + 1;
    if free >= 128 {
        None
    } else {
        Some(1 << free)
    }
}

/// Each non-basis `i`-orbit and the zero vector are included independently with probability 1/2.
pub fn random_gaussian_admissible<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<GaussianSet> {
    let mut members = Vec::new();
    for x in gaussian_cube(dim)? {
        let take = if x.is_zero() {
            rng.gen_bool(0.5)
        } else if canonical(&x) != x {
            continue;
        } else {
            is_basis_orbit(&x) || rng.gen_bool(0.5)
        };
        if take {
            if x.is_zero() {
                members.push(x);
            } else {
                members.extend(orbit(&x));
            }
        }
    }
    GaussianSet::new(dim, members)
}

/// Whether `b ⊆ a` is difference-free, with differences taken in Gaussian coordinates.
pub fn is_gaussian_free(b: &[GaussianVector], a: &GaussianSet) -> Result<bool> {
    for x in b {
        if !a.contains(x) {
            return Err(Error::Precondition(format!("{x} is not a member of the ground set")));
        }
    }
    for (i, x) in b.iter().enumerate() {
        for y in &b[i + 1..] {
            if x != y
                && (x.difference(y)?.is_some_and(|d| a.contains(&d))
                    || y.difference(x)?.is_some_and(|d| a.contains(&d)))
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaussianFreeCertificate {
    pub ground_set: GaussianSet,
    pub witness: Vec<GaussianVector>,
    pub claimed_size: usize,
    pub checked: bool,
    /// Size of the set obtained through the real-ification before augmentation.
    pub embedded_size: usize,
}

impl GaussianFreeCertificate {
    fn new(ground_set: GaussianSet, mut witness: Vec<GaussianVector>, embedded_size: usize) -> Result<Self> {
        witness.sort_unstable();
        witness.dedup();
        let mut c = Self { claimed_size: witness.len(), ground_set, witness, checked: false, embedded_size };
        c.verify()?;
        c.checked = true;
        Ok(c)
    }

    pub fn verify(&self) -> Result<()> {
        let distinct: HashSet<_> = self.witness.iter().collect();
        if distinct.len() != self.witness.len() || self.witness.len() != self.claimed_size {
            return Err(Error::VerificationFailed(format!(
                "witness has {} distinct elements, claimed {}",
                distinct.len(),
                self.claimed_size
            )));
        }
        if !is_gaussian_free(&self.witness, &self.ground_set)? {
            return Err(Error::VerificationFailed("witness is not difference-free".into()));
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.witness.len()
    }
}

fn gaussian_conflicts(x: &GaussianVector, y: &GaussianVector, a: &GaussianSet) -> bool {
    x.sub_in_cube(y).is_some_and(|d| a.contains(&d)) || y.sub_in_cube(x).is_some_and(|d| a.contains(&d))
}

/// A difference-free subset of size `2n + 2`.
///
/// The real engine on the real-ification gives `2n + 1` elements, which are
/// also free in Gaussian coordinates. One more element is then sought by a
/// single addition, and failing that by an exact fixed-size search that tries
/// the embedded solution first.
pub fn find_gaussian_difference_free(a: &GaussianSet, budgets: &Budgets) -> Result<GaussianFreeCertificate> {
    a.require_admissible()?;
    let n = a.dim();
    let target = 2 * n + 2;
    let real = find_difference_free(&a.embed_real(), budgets).map_err(Error::at("real-ification"))?;
    let seed: Vec<GaussianVector> = real
        .witness
        .iter()
        .map(|x| GaussianVector::from_embedded(*x).expect("members of the embedded set are valid"))
        .collect();
    let embedded_size = seed.len();
    if embedded_size >= target {
        return GaussianFreeCertificate::new(a.clone(), seed[..target].to_vec(), embedded_size);
    }
    if embedded_size + 1 == target {
        let in_seed: HashSet<_> = seed.iter().collect();
        if let Some(z) =
            a.members().iter().find(|z| !in_seed.contains(z) && seed.iter().all(|x| !gaussian_conflicts(x, z, a)))
        {
            let mut w = seed.clone();
            w.push(*z);
            return GaussianFreeCertificate::new(a.clone(), w, embedded_size);
        }
    }
    if a.len() > budgets.search_max_vertices {
        return Err(Error::BudgetExceeded {
            what: "Gaussian augmentation search",
            required: a.len() as u128,
            budget: budgets.search_max_vertices as u128,
        });
    }
    let g = ConflictGraph::for_gaussian(a);
    let members = a.members();
    let mut order: Vec<usize> = seed.iter().map(|x| members.binary_search(x).expect("seed is in the set")).collect();
    let first: HashSet<usize> = order.iter().copied().collect();
    order.extend((0..members.len()).filter(|i| !first.contains(i)));
    match g.independent_set_of_size(target, &order) {
        Some(s) => GaussianFreeCertificate::new(a.clone(), s.into_iter().map(|i| members[i]).collect(), embedded_size),
        None => Err(Error::Defect(format!(
            "admissible Gaussian set in dimension {n} without a difference-free subset of size {target}: {:?}",
            a.to_strings()
        ))),
    }
}

/// Exact maximum difference-free subset of a Gaussian set; the witness is least in serialization order.
pub fn max_gaussian_free_subset(a: &GaussianSet, budgets: &Budgets) -> Result<(usize, Vec<GaussianVector>)> {
    if a.len() > budgets.mis_max_vertices {
        return Err(Error::BudgetExceeded {
            what: "maximum Gaussian free subset",
            required: a.len() as u128,
            budget: budgets.mis_max_vertices as u128,
        });
    }
    let g = ConflictGraph::for_gaussian(a);
    let w: Vec<GaussianVector> = g.maximum_independent_set().into_iter().map(|i| a.members()[i]).collect();
    Ok((w.len(), w))
}

fn has_gaussian_free_subset(a: &GaussianSet, l: usize, budgets: &Budgets) -> Result<bool> {
    if l > a.len() {
        return Ok(false);
    }
    if let Ok(c) = find_gaussian_difference_free(a, budgets) {
        if c.size() >= l {
            return Ok(true);
        }
    }
    if a.len() > budgets.search_max_vertices {
        return Err(Error::BudgetExceeded {
            what: "Gaussian free subset search",
            required: a.len() as u128,
            budget: budgets.search_max_vertices as u128,
        });
    }
    let g = ConflictGraph::for_gaussian(a);
    let order: Vec<usize> = (0..g.len()).collect();
    Ok(g.independent_set_of_size(l, &order).is_some())
}

fn counterexample(a: &GaussianSet, budgets: &Budgets) -> Result<Counterexample> {
    let (size, w) = max_gaussian_free_subset(a, budgets)?;
    Ok(Counterexample {
        dim: a.dim(),
        members: a.to_strings(),
        max_free: size,
        max_free_witness: w.iter().map(|x| x.to_string()).collect(),
    })
}

pub(crate) fn counterexample_max_free(c: &Counterexample, budgets: &Budgets) -> Result<usize> {
    let v = c.members.iter().map(|s| s.parse()).collect::<Result<Vec<GaussianVector>>>()?;
    let a = GaussianSet::new(c.dim, v)?;
    a.require_admissible()?;
    Ok(max_gaussian_free_subset(&a, budgets)?.0)
}

/// Certifies or refutes `N -> l` for Gaussian difference-free sets.
pub fn gaussian_arrow_holds(
    n: usize,
    l: usize,
    method: Method,
    budgets: &Budgets,
    seed: u64,
) -> Result<ArrowCertificate> {
    let relation = Relation::ComplexDifference;
    if n == 0 || l == 0 {
        return Err(Error::InvalidParameter("N and l must be positive".into()));
    }
    match method {
        Method::Exhaustive => {
            let sets = GaussianAdmissibleSets::new(n, budgets.enumeration_max_sets)?;
            let count = sets.count();
            let bad: Vec<Result<Option<u64>>> = (0..count)
                .into_par_iter()
                .map(|i| Ok((!has_gaussian_free_subset(&sets.set_at(i), l, budgets)?).then_some(i)))
                .collect();
            let mut first_bad = None;
            for b in bad {
                first_bad = first_bad.or(b?);
            }
            let mut cert = ArrowCertificate::bare(relation, n, l, first_bad.is_none(), method);
            cert.sets_examined = Some(count);
            cert.predicted_sets = Some(count);
            if let Some(i) = first_bad {
                cert.counterexample = Some(counterexample(&sets.set_at(i), budgets)?);
            }
            Ok(cert)
        }
        Method::Witness => {
            if n >= relation.threshold(l) {
                return Err(Error::InvalidParameter(format!(
                    "no counterexample exists for N = {n}, l = {l} ({})",
                    relation.citation()
                )));
            }
            // the tight real set in dimension n has maximum free size n + 1,
            // and the doubled set has twice that
            let delta = delta_construction(&witness_difference(n + 2)?)?;
            let mut cert = ArrowCertificate::bare(relation, n, l, false, method);
            cert.counterexample = Some(counterexample(&delta, budgets)?);
            cert.citation = Some(relation.citation().to_string());
            Ok(cert)
        }
        Method::TheoremBacked => {
            let holds = n >= relation.threshold(l);
            let mut cert = ArrowCertificate::bare(relation, n, l, holds, method);
            cert.citation = Some(relation.citation().to_string());
            if holds && n <= GAUSSIAN_EVIDENCE_MAX_DIM && budgets.random_trials > 0 {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let mut successes = 0;
                for _ in 0..budgets.random_trials {
                    let a = random_gaussian_admissible(n, &mut rng)?;
                    if find_gaussian_difference_free(&a, budgets).is_ok_and(|c| c.size() >= l) {
                        successes += 1;
                    }
                }
                cert.seed = Some(seed);
                cert.random_evidence =
                    Some(crate::freeset::RandomEvidence { dim: n, trials: budgets.random_trials, successes });
            }
            Ok(cert)
        }
    }
}

/// Largest dimension used for random Gaussian evidence.
pub const GAUSSIAN_EVIDENCE_MAX_DIM: usize = 4;

/// `K_C(l)`: 1 for `l <= 4`, and `n` for `l = 2n + 1, 2n + 2`.
pub fn gaussian_kottman_value(l: usize, strategy: ValueStrategy, budgets: &Budgets, seed: u64) -> Result<KottmanValue> {
    crate::freeset::value_with(Relation::ComplexDifference, l, strategy, budgets, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GaussianVector {
        s.parse().unwrap()
    }

    fn gset(dim: usize, items: &[&str]) -> GaussianSet {
        GaussianSet::new(dim, items.iter().map(|s| g(s))).unwrap()
    }

    #[test]
    fn embedding_examples() {
        assert_eq!(embed_real(&g("+i")).to_string(), "+00+");
        assert_eq!(embed_real(&g("j")).to_string(), "0-");
    }

    #[test]
    fn delta_examples() {
        let a = SymmetricCubeSet::new(1, ["+".parse().unwrap(), "-".parse().unwrap()]).unwrap();
        assert_eq!(delta_construction(&a).unwrap().to_strings(), ["+", "-", "i", "j"]);
        let d = delta_construction(&witness_difference(5).unwrap()).unwrap();
        assert_eq!(d.len(), 24);
        assert!(d.is_admissible());
        assert!(!d.contains(&g("+i0")));
        let with_zero = SymmetricCubeSet::new(1, ["+", "-", "0"].map(|s| s.parse().unwrap())).unwrap();
        assert!(delta_construction(&with_zero).is_err());
    }

    #[test]
    fn orbit_counts() {
        assert_eq!(GaussianAdmissibleSets::new(1, 4096).unwrap().count(), 2);
        let e2 = GaussianAdmissibleSets::new(2, 4096).unwrap();
        assert_eq!((e2.count(), e2.orbit_count()), (32, 6));
        for s in e2.iter() {
            assert!(s.is_admissible());
        }
        assert!(GaussianAdmissibleSets::new(3, 4096).unwrap_err().is_budget());
    }

    #[test]
    fn finder_examples() {
        let b = Budgets::default();
        let a = gset(1, &["+", "-", "i", "j"]);
        let c = find_gaussian_difference_free(&a, &b).unwrap();
        assert_eq!(c.witness, a.members());

        let v1 = gset(1, &["+", "-", "0", "i", "j"]);
        let c = find_gaussian_difference_free(&v1, &b).unwrap();
        assert_eq!(c.witness, a.members());

        let a = GaussianSet::i_closure(2, [g("+0"), g("0+")]).unwrap();
        let c = find_gaussian_difference_free(&a, &b).unwrap();
        assert_eq!(c.size(), 6);
        assert_eq!(c.embedded_size, 5);
    }

    #[test]
    fn gaussian_values() {
        let b = Budgets::default();
        for l in 1..=4 {
            assert_eq!(gaussian_kottman_value(l, ValueStrategy::Auto, &b, 3).unwrap().value, 1);
        }
        let k5 = gaussian_kottman_value(5, ValueStrategy::Auto, &b, 3).unwrap();
        assert_eq!(k5.value, 2);
        assert_eq!(k5.upper.sets_examined, Some(32));
        let lower = k5.lower.unwrap();
        assert_eq!(lower.counterexample.as_ref().unwrap().max_free, 4);
        lower.verify(&b).unwrap();
    }
}
