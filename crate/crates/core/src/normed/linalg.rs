//! Dense Gauss-Jordan routines shared by the exact, real float and complex paths.

#![allow(clippy::needless_range_loop)]

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::Q;

pub(crate) trait Entry:
    Clone
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Exact entries take the first nonzero pivot; inexact ones the largest.
    const EXACT: bool;

    /// Size used for pivot choice; only compared, never trusted as a value.
    fn magnitude(&self) -> f64;

    /// Whether a pivot of this size counts as zero.
    fn negligible(&self) -> bool;
}

impl Entry for Q {
    const EXACT: bool = true;

    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }

    fn negligible(&self) -> bool {
        self.is_zero()
    }
}

impl Entry for f64 {
    const EXACT: bool = false;

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn negligible(&self) -> bool {
        self.abs() < 1e-13
    }
}

impl Entry for Complex64 {
    const EXACT: bool = false;

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn negligible(&self) -> bool {
        self.norm() < 1e-13
    }
}

/// Row-major matrix.
pub(crate) type Matrix<T> = Vec<Vec<T>>;

fn pivot_row<T: Entry>(m: &Matrix<T>, col: usize, from: usize) -> Option<usize> {
    if T::EXACT {
        return (from..m.len()).find(|&r| !m[r][col].negligible());
    }
    (from..m.len())
        .filter(|&r| !m[r][col].negligible())
        .max_by(|&a, &b| m[a][col].magnitude().total_cmp(&m[b][col].magnitude()))
}

/// Determinant by elimination.
pub(crate) fn determinant<T: Entry>(m: &Matrix<T>) -> T {
    let n = m.len();
    let mut a = m.clone();
    let mut det = T::one();
    for c in 0..n {
        let Some(p) = pivot_row(&a, c, c) else { return T::zero() };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let piv = a[c][c].clone();
        det = det * piv.clone();
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone() / piv.clone();
            for k in c..n {
                let v = a[c][k].clone() * f.clone();
                a[r][k] = a[r][k].clone() - v;
            }
        }
    }
    det
}

/// Inverse by Gauss-Jordan, `None` when singular.
pub(crate) fn inverse<T: Entry>(m: &Matrix<T>) -> Option<Matrix<T>> {
    let n = m.len();
    let mut a: Matrix<T> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = pivot_row(&a, c, c)?;
        a.swap(p, c);
        let piv = a[c][c].clone();
        for k in 0..2 * n {
            a[c][k] = a[c][k].clone() / piv.clone();
        }
        for r in 0..n {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for k in 0..2 * n {
                let v = a[c][k].clone() * f.clone();
                a[r][k] = a[r][k].clone() - v;
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Rank of a list of rows.
pub(crate) fn rank<T: Entry>(rows: &Matrix<T>) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut a = rows.clone();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = pivot_row(&a, c, r) else { continue };
        a.swap(p, r);
        let piv = a[r][c].clone();
        for i in r + 1..a.len() {
            if a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone() / piv.clone();
            for k in c..cols {
                let v = a[r][k].clone() * f.clone();
                a[i][k] = a[i][k].clone() - v;
            }
        }
        r += 1;
    }
    r
}

pub(crate) fn dot<T: Entry>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Matrix whose columns are `cols`.
pub(crate) fn from_columns<T: Entry>(cols: &[Vec<T>]) -> Matrix<T> {
    let n = cols.first().map_or(0, |c| c.len());
    (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}
