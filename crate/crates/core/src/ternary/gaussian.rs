use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::set::{Lookup, SetRecord, SymmetricCubeSet};
use super::vector::TernaryVector;
use crate::error::{Error, Result};

const EVEN: u64 = 0x5555_5555_5555_5555;
const ODD: u64 = 0xAAAA_AAAA_AAAA_AAAA;

/// A point of the Gaussian cube `{0, ±1, ±i}^dim`.
///
/// Stored as its real-ification `(re_1, im_1, ..., re_n, im_n)`, a ternary
/// vector of twice the dimension in which no coordinate pair has both parts
/// nonzero.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct GaussianVector {
    inner: TernaryVector,
}

#[inline]
fn pairs_valid(x: &TernaryVector) -> bool {
    let nz = x.support_mask();
    nz & EVEN & (nz >> 1) == 0
}

impl GaussianVector {
    pub fn zero(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { inner: TernaryVector::zero(2 * dim)? })
    }

    /// `e_k`, 1-based.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        check_dim(dim)?;
        if k == 0 || k > dim {
            return Err(Error::IndexOutOfRange { index: k, dim });
        }
        Ok(Self { inner: TernaryVector::basis(2 * dim, 2 * k - 1)? })
    }

    /// Builds a vector from `(re, im)` parts; each pair must be one of the five letters.
    pub fn from_parts(parts: &[(i8, i8)]) -> Result<Self> {
        check_dim(parts.len())?;
        let mut flat = Vec::with_capacity(parts.len() * 2);
        for &(re, im) in parts {
            if re != 0 && im != 0 {
                return Err(Error::Parse(format!("({re}, {im}) is not in {{0, ±1, ±i}}")));
            }
            flat.push(re);
            flat.push(im);
        }
        Ok(Self { inner: TernaryVector::from_coords(&flat)? })
    }

    /// Inverse of [`GaussianVector::embed_real`] on its image.
    pub fn from_embedded(x: TernaryVector) -> Option<Self> {
        if x.dim().is_multiple_of(2) && pairs_valid(&x) {
            Some(Self { inner: x })
        } else {
            None
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.inner.dim() / 2
    }

    /// `(re, im)` of coordinate `k` (0-based).
    pub fn coord(&self, k: usize) -> (i8, i8) {
        (self.inner.coord(2 * k), self.inner.coord(2 * k + 1))
    }

    pub fn parts(&self) -> Vec<(i8, i8)> {
        (0..self.dim()).map(|k| self.coord(k)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.inner.is_zero()
    }

    /// Real-ification `(a_1 + b_1 i, ...) -> (a_1, b_1, ...)`.
    #[inline]
    pub fn embed_real(&self) -> TernaryVector {
        self.inner
    }

    #[inline]
    pub fn neg(&self) -> Self {
        Self { inner: self.inner.neg() }
    }

    /// Coordinatewise multiplication by `i`: `a + b i -> -b + a i`.
    #[inline]
    pub fn i_multiply(&self) -> Self {
        let pos = self.inner.pos_mask();
        let neg = self.inner.neg_mask();
        let new_pos = ((neg & ODD) >> 1) | ((pos & EVEN) << 1);
        let new_neg = ((pos & ODD) >> 1) | ((neg & EVEN) << 1);
        Self { inner: TernaryVector::from_masks(self.inner.dim(), new_pos, new_neg) }
    }

    /// `self - other` when it lies in the Gaussian cube.
    #[inline]
    pub fn sub_in_cube(&self, other: &Self) -> Option<Self> {
        let d = self.inner.sub_in_cube(&other.inner)?;
        pairs_valid(&d).then_some(Self { inner: d })
    }

    pub fn difference(&self, other: &Self) -> Result<Option<Self>> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.sub_in_cube(other))
    }

    #[inline]
    fn rank(&self, k: usize) -> u8 {
        match self.coord(k) {
            (1, _) => 0,
            (-1, _) => 1,
            (0, 0) => 2,
            (_, 1) => 3,
            _ => 4,
        }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || 2 * dim > super::vector::MAX_DIM {
        Err(Error::UnsupportedDimension(dim))
    } else {
        Ok(())
    }
}

/// String order over the alphabet `+ < - < 0 < i < j`.
impl Ord for GaussianVector {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = (self.inner.pos_mask() ^ other.inner.pos_mask()) | (self.inner.neg_mask() ^ other.inner.neg_mask());
        if diff == 0 || self.dim() != other.dim() {
            return self.dim().cmp(&other.dim()).then_with(|| self.to_string().cmp(&other.to_string()));
        }
        let k = diff.trailing_zeros() as usize / 2;
        self.rank(k).cmp(&other.rank(k))
    }
}

impl PartialOrd for GaussianVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GaussianVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.dim() {
            let c = match self.coord(k) {
                (1, _) => '+',
                (-1, _) => '-',
                (_, 1) => 'i',
                (_, -1) => 'j',
                _ => '0',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for GaussianVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G({self})")
    }
}

impl FromStr for GaussianVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .chars()
            .map(|c| match c {
                '+' => Ok((1, 0)),
                '-' => Ok((-1, 0)),
                '0' => Ok((0, 0)),
                'i' => Ok((0, 1)),
                'j' => Ok((0, -1)),
                other => Err(Error::Parse(format!("invalid Gaussian digit {other:?} in {s:?}"))),
            })
            .collect::<Result<Vec<(i8, i8)>>>()?;
        Self::from_parts(&parts)
    }
}

impl Serialize for GaussianVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GaussianVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A finite subset of `V_dim` with exact membership; flags record whether all
/// `e_k` are members and whether the set is closed under multiplication by `i`.
#[derive(Clone)]
pub struct GaussianSet {
    dim: usize,
    members: Vec<GaussianVector>,
    lookup: Lookup,
    contains_basis: bool,
    i_closed: bool,
}

impl GaussianSet {
    pub fn new(dim: usize, members: impl IntoIterator<Item = GaussianVector>) -> Result<Self> {
        check_dim(dim)?;
        let mut members: Vec<GaussianVector> = members.into_iter().collect();
        if let Some(bad) = members.iter().find(|x| x.dim() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.dim() });
        }
        members.sort_unstable();
        members.dedup();
        let embedded: Vec<TernaryVector> = members.iter().map(|x| x.inner).collect();
        let lookup = Lookup::build(2 * dim, &embedded);
        let contains_basis =
            (1..=dim).all(|k| lookup.contains(&GaussianVector::basis(dim, k).expect("valid dimension").inner));
        let i_closed = members.iter().all(|x| lookup.contains(&x.i_multiply().inner));
        Ok(Self { dim, members, lookup, contains_basis, i_closed })
    }

    /// Smallest `i`-closed superset of `vectors`: adds `ix`, `-x` and `-ix` for each member.
    pub fn i_closure(dim: usize, vectors: impl IntoIterator<Item = GaussianVector>) -> Result<Self> {
        let mut all = Vec::new();
        for x in vectors {
            let mut y = x;
            for _ in 0..4 {
                all.push(y);
                y = y.i_multiply();
            }
        }
        Self::new(dim, all)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[GaussianVector] {
        &self.members
    }

    #[inline]
    pub fn contains(&self, x: &GaussianVector) -> bool {
        x.dim() == self.dim && self.lookup.contains(&x.inner)
    }

    pub fn contains_basis(&self) -> bool {
        self.contains_basis
    }

    pub fn is_i_closed(&self) -> bool {
        self.i_closed
    }

    pub fn is_admissible(&self) -> bool {
        self.contains_basis && self.i_closed
    }

    pub fn contains_zero(&self) -> bool {
        self.members.iter().any(|x| x.is_zero())
    }

    pub fn require_admissible(&self) -> Result<()> {
        if !self.contains_basis {
            return Err(Error::Precondition("Gaussian set does not contain every basis vector".into()));
        }
        if !self.i_closed {
            return Err(Error::Precondition("Gaussian set is not closed under multiplication by i".into()));
        }
        Ok(())
    }

    /// Image under the real-ification map, a subset of `C_{2 dim}`.
    pub fn embed_real(&self) -> SymmetricCubeSet {
        SymmetricCubeSet::new(2 * self.dim, self.members.iter().map(|x| x.inner))
            .expect("embedding preserves dimension")
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.members.iter().map(|x| x.to_string()).collect()
    }
}

impl PartialEq for GaussianSet {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.members == other.members
    }
}

impl Eq for GaussianSet {}

impl fmt::Debug for GaussianSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GaussianSet(dim={}, {:?})", self.dim, self.to_strings())
    }
}

impl Serialize for GaussianSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SetRecord { dim: self.dim, members: self.members.clone() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GaussianSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rec = SetRecord::<GaussianVector>::deserialize(deserializer)?;
        GaussianSet::new(rec.dim, rec.members).map_err(serde::de::Error::custom)
    }
}
