use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::vector::TernaryVector;
use crate::error::{Error, Result};

/// Largest dimension that uses a dense bit table (`4^dim` bits) for membership.
const DENSE_MAX_DIM: usize = 11;

/// Exact membership index over ternary vectors of one dimension.
#[derive(Clone)]
pub(crate) enum Lookup {
    Dense(Vec<u64>),
    Hashed(HashSet<TernaryVector>),
}

impl Lookup {
    pub(crate) fn build<'a>(dim: usize, members: impl IntoIterator<Item = &'a TernaryVector>) -> Self {
        if dim <= DENSE_MAX_DIM {
            let mut bits = vec![0u64; (1usize << (2 * dim)).div_ceil(64)];
            for x in members {
                let k = x.dense_key() as usize;
                bits[k >> 6] |= 1 << (k & 63);
            }
            Lookup::Dense(bits)
        } else {
            Lookup::Hashed(members.into_iter().copied().collect())
        }
    }

    #[inline]
    pub(crate) fn contains(&self, x: &TernaryVector) -> bool {
        match self {
            Lookup::Dense(bits) => {
                let k = x.dense_key() as usize;
                bits[k >> 6] >> (k & 63) & 1 == 1
            }
            Lookup::Hashed(set) => set.contains(x),
        }
    }
}

/// A finite subset `A` of the cube `C_dim` with exact membership.
///
/// The two flags record the admissibility conditions: `contains_basis`
/// (every `e_k` is a member) and `symmetric` (`x` in `A` iff `-x` in `A`).
/// They are computed from the members, never asserted by the caller.
#[derive(Clone)]
pub struct SymmetricCubeSet {
    dim: usize,
    members: Vec<TernaryVector>,
    lookup: Lookup,
    contains_basis: bool,
    symmetric: bool,
}

impl SymmetricCubeSet {
    pub fn new(dim: usize, members: impl IntoIterator<Item = TernaryVector>) -> Result<Self> {
        TernaryVector::zero(dim)?;
        let mut members: Vec<TernaryVector> = members.into_iter().collect();
        if let Some(bad) = members.iter().find(|x| x.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.dim() });
        }
        members.sort_unstable();
        members.dedup();
        Ok(Self::from_sorted(dim, members))
    }

    /// `members` must be sorted, free of duplicates and all of dimension `dim`.
    pub(crate) fn from_sorted(dim: usize, members: Vec<TernaryVector>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        let lookup = Lookup::build(dim, &members);
        let contains_basis =
            (1..=dim).all(|k| lookup.contains(&TernaryVector::basis(dim, k).expect("dimension already validated")));
        let symmetric = members.iter().all(|x| lookup.contains(&x.neg()));
        Self { dim, members, lookup, contains_basis, symmetric }
    }

    pub fn empty(dim: usize) -> Result<Self> {
        Self::new(dim, [])
    }

    pub fn full_cube(dim: usize) -> Result<Self> {
        TernaryVector::zero(dim)?;
        Ok(Self::from_sorted(dim, super::enumerate::cube_vectors(dim).collect()))
    }

    /// `S ∪ (-S)`.
    pub fn symmetric_closure(dim: usize, vectors: impl IntoIterator<Item = TernaryVector>) -> Result<Self> {
        let mut all = Vec::new();
        for x in vectors {
            all.push(x);
            all.push(x.neg());
        }
        Self::new(dim, all)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in serialization order.
    pub fn members(&self) -> &[TernaryVector] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = &TernaryVector> + '_ {
        self.members.iter()
    }

    #[inline]
    pub fn contains(&self, x: &TernaryVector) -> bool {
        x.dim() == self.dim && self.lookup.contains(x)
    }

    pub fn contains_basis(&self) -> bool {
        self.contains_basis
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// Both admissibility conditions hold.
    pub fn is_admissible(&self) -> bool {
        self.contains_basis && self.symmetric
    }

    pub fn contains_zero(&self) -> bool {
        self.members.last().is_some_and(|x| x.is_zero())
    }

    pub fn require_admissible(&self) -> Result<()> {
        if !self.contains_basis {
            return Err(Error::Precondition(format!(
                "set in dimension {} does not contain every basis vector",
                self.dim
            )));
        }
        if !self.symmetric {
            return Err(Error::Precondition(format!("set in dimension {} is not symmetric", self.dim)));
        }
        Ok(())
    }

    /// Projection onto the first `n` coordinates.
    pub fn project(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.dim {
            return Err(Error::IndexOutOfRange { index: n, dim: self.dim });
        }
        // prefixes of a sorted list stay sorted, so only adjacent duplicates remain
        let mut out: Vec<TernaryVector> = Vec::with_capacity(self.members.len());
        for x in &self.members {
            let p = x.prefix(n);
            if out.last() != Some(&p) {
                out.push(p);
            }
        }
        Ok(Self::from_sorted(n, out))
    }

    /// All extensions `(x, xi)` of `x` in this set, in the order `xi = +1, 0, -1`.
    pub fn extensions_of(&self, x: &TernaryVector) -> Result<Vec<TernaryVector>> {
        if x.dim() + 1 != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim - 1, found: x.dim() });
        }
        let mut out = Vec::with_capacity(3);
        for xi in [1, 0, -1] {
            let ext = x.extend(xi)?;
            if self.lookup.contains(&ext) {
                out.push(ext);
            }
        }
        Ok(out)
    }

    /// Image of the set under a coordinate permutation (`i -> perm[i]`, 0-based).
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut members: Vec<TernaryVector> = self.members.iter().map(|x| x.permute(perm)).collect();
        members.sort_unstable();
        Self::from_sorted(self.dim, members)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.members.iter().map(|x| x.to_string()).collect()
    }
}

impl PartialEq for SymmetricCubeSet {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.members == other.members
    }
}

impl Eq for SymmetricCubeSet {}

impl fmt::Debug for SymmetricCubeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymmetricCubeSet(dim={}, {{", self.dim)?;
        for (i, x) in self.members.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}})")
    }
}

/// Wire form of any cube set: `{"dim": n, "members": [...]}` with sorted members.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetRecord<T> {
    pub dim: usize,
    pub members: Vec<T>,
}

impl Serialize for SymmetricCubeSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SetRecord { dim: self.dim, members: self.members.clone() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SymmetricCubeSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rec = SetRecord::<TernaryVector>::deserialize(deserializer)?;
        SymmetricCubeSet::new(rec.dim, rec.members).map_err(serde::de::Error::custom)
    }
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
    fn flags() {
        let a = set(2, &["+0", "-0", "0+", "0-"]);
        assert!(a.is_admissible());
        let b = set(2, &["+0", "0+", "0-"]);
        assert!(b.contains_basis() && !b.is_symmetric());
        let c = set(2, &["+0", "-0"]);
        assert!(!c.contains_basis() && c.is_symmetric());
    }

    #[test]
    fn project_examples() {
        let a = set(2, &["+0", "-0", "0+", "0-"]);
        assert_eq!(a.project(1).unwrap(), set(1, &["+", "-", "0"]));
        assert_eq!(
            SymmetricCubeSet::full_cube(2).unwrap().project(1).unwrap(),
            SymmetricCubeSet::full_cube(1).unwrap()
        );
        let b = set(1, &["+", "-"]);
        assert_eq!(b.project(1).unwrap(), b);
        assert!(b.project(2).is_err());
    }

    #[test]
    fn projection_keeps_flags() {
        let a = set(3, &["+00", "-00", "0+0", "0-0", "00+", "00-", "+-+", "-+-"]);
        let p = a.project(2).unwrap();
        assert!(p.is_admissible());
        assert!(p.contains_zero());
    }

    #[test]
    fn extension_examples() {
        let full = SymmetricCubeSet::full_cube(2).unwrap();
        assert_eq!(full.extensions_of(&t("+")).unwrap(), vec![t("++"), t("+0"), t("+-")]);
        let a = set(2, &["+0", "-0", "0+", "0-"]);
        assert_eq!(a.extensions_of(&t("+")).unwrap(), vec![t("+0")]);
        assert_eq!(a.extensions_of(&t("0")).unwrap(), vec![t("0+"), t("0-")]);
        assert!(a.extensions_of(&t("+0")).is_err());
    }

    #[test]
    fn closure_examples() {
        let c = SymmetricCubeSet::symmetric_closure(1, [t("+")]).unwrap();
        assert_eq!(c, set(1, &["+", "-"]));
        let again = SymmetricCubeSet::symmetric_closure(1, c.members().to_vec()).unwrap();
        assert_eq!(again, c);
        let empty = SymmetricCubeSet::symmetric_closure(3, []).unwrap();
        assert!(empty.is_empty() && empty.is_symmetric());
        assert!(SymmetricCubeSet::symmetric_closure(2, [t("+")]).is_err());
    }

    #[test]
    fn hashed_lookup_agrees() {
        let x = TernaryVector::basis(14, 3).unwrap();
        let a = SymmetricCubeSet::symmetric_closure(14, [x]).unwrap();
        assert!(a.contains(&x) && a.contains(&x.neg()));
        assert!(!a.contains(&TernaryVector::basis(14, 4).unwrap()));
    }

    #[test]
    fn json_shape() {
        let a = set(2, &["0+", "+0", "-0", "0-"]);
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"dim":2,"members":["+0","-0","0+","0-"]}"#);
        let back: SymmetricCubeSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
    }
}
