use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported dimension of a packed ternary vector.
pub const MAX_DIM: usize = 64;

/// A point of the ternary cube `{-1, 0, +1}^dim`.
///
/// Coordinates are packed into two bit masks: bit `i` of `pos` is set when
/// coordinate `i` equals `+1`, bit `i` of `neg` when it equals `-1`. The masks
/// are always disjoint.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct TernaryVector {
    dim: u8,
    pos: u64,
    neg: u64,
}

/// Integer-valued difference or sum of two ternary vectors. Coordinates lie
/// in `-2..=2`. Only produced by the raw diagnostic operations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntegerVector {
    coords: Vec<i8>,
}

impl IntegerVector {
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i8] {
        &self.coords
    }

    /// The vector as a cube point, if every coordinate lies in `{-1, 0, 1}`.
    pub fn to_ternary(&self) -> Option<TernaryVector> {
        if self.coords.iter().all(|c| c.abs() <= 1) {
            TernaryVector::from_coords(&self.coords).ok()
        } else {
            None
        }
    }
}

#[inline]
fn dim_mask(dim: usize) -> u64 {
    if dim == 64 {
        u64::MAX
    } else {
        (1u64 << dim) - 1
    }
}

impl TernaryVector {
    pub fn zero(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { dim: dim as u8, pos: 0, neg: 0 })
    }

    /// Standard basis vector `e_k` with 1-based index `k`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        check_dim(dim)?;
        if k == 0 || k > dim {
            return Err(Error::IndexOutOfRange { index: k, dim });
        }
        Ok(Self { dim: dim as u8, pos: 1 << (k - 1), neg: 0 })
    }

    pub fn from_coords(coords: &[i8]) -> Result<Self> {
        let dim = coords.len();
        check_dim(dim)?;
        let mut pos = 0u64;
        let mut neg = 0u64;
        for (i, &c) in coords.iter().enumerate() {
            match c {
                1 => pos |= 1 << i,
                -1 => neg |= 1 << i,
                0 => {}
                other => return Err(Error::InvalidCoordinate(other as i64)),
            }
        }
        Ok(Self { dim: dim as u8, pos, neg })
    }

    /// Builds a vector from raw masks. The masks must be disjoint and fit in `dim` bits.
    pub(crate) fn from_masks(dim: usize, pos: u64, neg: u64) -> Self {
        debug_assert!((1..=MAX_DIM).contains(&dim));
        debug_assert_eq!(pos & neg, 0);
        debug_assert_eq!((pos | neg) & !dim_mask(dim), 0);
        Self { dim: dim as u8, pos, neg }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    #[inline]
    pub fn pos_mask(&self) -> u64 {
        self.pos
    }

    #[inline]
    pub fn neg_mask(&self) -> u64 {
        self.neg
    }

    #[inline]
    pub fn support_mask(&self) -> u64 {
        self.pos | self.neg
    }

    /// Coordinate `i` (0-based).
    #[inline]
    pub fn coord(&self, i: usize) -> i8 {
        if self.pos >> i & 1 == 1 {
            1
        } else if self.neg >> i & 1 == 1 {
            -1
        } else {
            0
        }
    }

    pub fn coords(&self) -> Vec<i8> {
        (0..self.dim()).map(|i| self.coord(i)).collect()
    }

    /// 1-based indices of the nonzero coordinates.
    pub fn support(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.support_mask() >> i & 1 == 1).map(|i| i + 1).collect()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.pos | self.neg == 0
    }

    #[inline]
    pub fn neg(&self) -> Self {
        Self { dim: self.dim, pos: self.neg, neg: self.pos }
    }

    /// `self - other` when it stays inside the cube.
    ///
    /// Callers must guarantee equal dimensions; see [`TernaryVector::difference`]
    /// for the checked form.
    #[inline]
    pub fn sub_in_cube(&self, other: &Self) -> Option<Self> {
        debug_assert_eq!(self.dim, other.dim);
        if (self.pos & other.neg) | (self.neg & other.pos) != 0 {
            return None;
        }
        let pos = (self.pos & !other.pos) | (other.neg & !self.neg);
        let neg = (self.neg & !other.neg) | (other.pos & !self.pos);
        Some(Self { dim: self.dim, pos, neg })
    }

    /// `self + other` when it stays inside the cube.
    #[inline]
    pub fn add_in_cube(&self, other: &Self) -> Option<Self> {
        self.sub_in_cube(&other.neg())
    }

    pub fn difference(&self, other: &Self) -> Result<Option<Self>> {
        check_same_dim(self, other)?;
        Ok(self.sub_in_cube(other))
    }

    pub fn sum(&self, other: &Self) -> Result<Option<Self>> {
        check_same_dim(self, other)?;
        Ok(self.add_in_cube(other))
    }

    pub fn raw_difference(&self, other: &Self) -> Result<IntegerVector> {
        check_same_dim(self, other)?;
        Ok(IntegerVector { coords: (0..self.dim()).map(|i| self.coord(i) - other.coord(i)).collect() })
    }

    pub fn raw_sum(&self, other: &Self) -> Result<IntegerVector> {
        check_same_dim(self, other)?;
        Ok(IntegerVector { coords: (0..self.dim()).map(|i| self.coord(i) + other.coord(i)).collect() })
    }

    /// Prefix of length `n`.
    pub fn project(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.dim() {
            return Err(Error::IndexOutOfRange { index: n, dim: self.dim() });
        }
        Ok(self.prefix(n))
    }

    #[inline]
    pub(crate) fn prefix(&self, n: usize) -> Self {
        let m = dim_mask(n);
        Self { dim: n as u8, pos: self.pos & m, neg: self.neg & m }
    }

    /// `(self, xi)`: the vector prolonged by one coordinate.
    pub fn extend(&self, xi: i8) -> Result<Self> {
        let dim = self.dim() + 1;
        check_dim(dim)?;
        let bit = 1u64 << self.dim();
        match xi {
            1 => Ok(Self { dim: dim as u8, pos: self.pos | bit, neg: self.neg }),
            -1 => Ok(Self { dim: dim as u8, pos: self.pos, neg: self.neg | bit }),
            0 => Ok(Self { dim: dim as u8, pos: self.pos, neg: self.neg }),
            other => Err(Error::InvalidCoordinate(other as i64)),
        }
    }

    /// Apply a coordinate permutation: coordinate `i` moves to `perm[i]` (0-based).
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.dim());
        let mut pos = 0u64;
        let mut neg = 0u64;
        for (i, &target) in perm.iter().enumerate() {
            pos |= (self.pos >> i & 1) << target;
            neg |= (self.neg >> i & 1) << target;
        }
        Self { dim: self.dim, pos, neg }
    }

    /// Key for dense membership tables, valid when `2 * dim <= 64`.
    #[inline]
    pub(crate) fn dense_key(&self) -> u64 {
        self.pos | (self.neg << self.dim)
    }

    /// Rank of a coordinate under the serialization order `+ < - < 0`.
    #[inline]
    fn rank(&self, i: usize) -> u8 {
        if self.pos >> i & 1 == 1 {
            0
        } else if self.neg >> i & 1 == 1 {
            1
        } else {
            2
        }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        Err(Error::UnsupportedDimension(dim))
    } else {
        Ok(())
    }
}

fn check_same_dim(a: &TernaryVector, b: &TernaryVector) -> Result<()> {
    if a.dim != b.dim {
        Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() })
    } else {
        Ok(())
    }
}

/// Lexicographic order of the serialized strings: first coordinate most
/// significant, and `'+' < '-' < '0'` as in ASCII.
impl Ord for TernaryVector {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = (self.pos ^ other.pos) | (self.neg ^ other.neg);
        if diff == 0 {
            return self.dim.cmp(&other.dim);
        }
        let i = diff.trailing_zeros() as usize;
        if i >= self.dim().min(other.dim()) {
            return self.dim.cmp(&other.dim);
        }
        self.rank(i).cmp(&other.rank(i))
    }
}

impl PartialOrd for TernaryVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for TernaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim() {
            let c = match self.coord(i) {
                1 => '+',
                -1 => '-',
                _ => '0',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TernaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T({self})")
    }
}

impl FromStr for TernaryVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coords = s
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                '0' => Ok(0),
                other => Err(Error::Parse(format!("invalid ternary digit {other:?} in {s:?}"))),
            })
            .collect::<Result<Vec<i8>>>()?;
        Self::from_coords(&coords)
    }
}

impl Serialize for TernaryVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TernaryVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
