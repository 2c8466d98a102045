//! Off-diagonal grid points `(k, m)` and the crossed-support condition:
//! two points either have disjoint supports `{k, m}`, or every shared index
//! is the first coordinate of one and the second coordinate of the other.
//! Such sets have at most `n` points, and a set with exactly `n` points uses
//! every index twice.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GridPoint {
    pub k: usize,
    pub m: usize,
}

impl GridPoint {
    pub fn new(k: usize, m: usize, n: usize) -> Result<Self> {
        if k == m {
            return Err(Error::InvalidParameter(format!("({k},{m}) lies on the diagonal")));
        }
        for c in [k, m] {
            if c == 0 || c > n {
                return Err(Error::IndexOutOfRange { index: c, dim: n });
            }
        }
        Ok(Self { k, m })
    }

    fn validate(&self, n: usize) -> Result<()> {
        Self::new(self.k, self.m, n).map(|_| ())
    }

    fn touches(&self, i: usize) -> bool {
        self.k == i || self.m == i
    }

    /// The pairwise condition for two distinct points.
    pub fn compatible(&self, other: &GridPoint) -> bool {
        [self.k, self.m]
            .into_iter()
            .filter(|&i| other.touches(i))
            .all(|i| (self.k == i && other.m == i) || (self.m == i && other.k == i))
    }
}

/// Whether every distinct pair in `b` satisfies the crossed-support condition.
pub fn grid_star_check(b: &[GridPoint], n: usize) -> Result<bool> {
    for p in b {
        p.validate(n)?;
    }
    for (i, x) in b.iter().enumerate() {
        for y in &b[i + 1..] {
            if x != y && !x.compatible(y) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridReport {
    pub n: usize,
    /// Number of sets satisfying the condition, the empty set included.
    pub sets_examined: u64,
    pub max_size: usize,
    pub maximum_sets: u64,
    pub max_size_at_most_n: bool,
    /// Every maximum set with `n` points covers each index exactly twice,
    /// once as a first and once as a second coordinate.
    pub maximum_sets_cover_twice: bool,
    pub example: Vec<GridPoint>,
}

/// Enumerates every set satisfying the condition on the `n x n` grid and
/// checks the size bound and the covering property.
pub fn grid_max_properties(n: usize, max_n: usize) -> Result<GridReport> {
    if n == 0 {
        return Err(Error::InvalidParameter("grid size must be positive".into()));
    }
    if n > max_n {
        return Err(Error::BudgetExceeded { what: "grid enumeration", required: n as u128, budget: max_n as u128 });
    }
    let cells: Vec<GridPoint> =
        (1..=n).flat_map(|k| (1..=n).filter(move |&m| m != k).map(move |m| GridPoint { k, m })).collect();
    // compat[i] has bit j set when cells i and j may coexist
    let compat: Vec<u64> = cells
        .iter()
        .map(|x| {
            cells.iter().enumerate().filter(|(_, y)| x != *y && x.compatible(y)).fold(0, |acc, (j, _)| acc | 1 << j)
        })
        .collect();
    let mut report = GridReport {
        n,
        sets_examined: 0,
        max_size: 0,
        maximum_sets: 0,
        max_size_at_most_n: true,
        maximum_sets_cover_twice: true,
        example: Vec::new(),
    };
    let mut chosen = Vec::new();
    let all = if cells.len() == 64 { u64::MAX } else { (1u64 << cells.len()) - 1 };
    walk(&cells, &compat, all, 0, &mut chosen, &mut report);
    Ok(report)
}

fn walk(cells: &[GridPoint], compat: &[u64], allowed: u64, from: usize, chosen: &mut Vec<usize>, r: &mut GridReport) {
    r.sets_examined += 1;
    let size = chosen.len();
    if size > r.n {
        r.max_size_at_most_n = false;
    }
    if size > r.max_size {
        r.max_size = size;
        r.maximum_sets = 0;
        r.example = chosen.iter().map(|&i| cells[i]).collect();
    }
    if size == r.max_size {
        r.maximum_sets += 1;
    }
    if size == r.n && !covers_twice(cells, chosen, r.n) {
        r.maximum_sets_cover_twice = false;
    }
    for j in from..cells.len() {
        if allowed >> j & 1 == 1 {
            chosen.push(j);
            walk(cells, compat, allowed & compat[j], j + 1, chosen, r);
            chosen.pop();
        }
    }
}

fn covers_twice(cells: &[GridPoint], chosen: &[usize], n: usize) -> bool {
    (1..=n).all(|i| {
        let first = chosen.iter().filter(|&&c| cells[c].k == i).count();
        let second = chosen.iter().filter(|&&c| cells[c].m == i).count();
        first == 1 && second == 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(usize, usize)]) -> Vec<GridPoint> {
        v.iter().map(|&(k, m)| GridPoint { k, m }).collect()
    }

    #[test]
    fn star_examples() {
        assert!(grid_star_check(&pts(&[(1, 2), (2, 3), (3, 1)]), 3).unwrap());
        assert!(!grid_star_check(&pts(&[(1, 2), (1, 3)]), 3).unwrap());
        assert!(grid_star_check(&pts(&[(1, 2), (3, 4)]), 4).unwrap());
        assert!(grid_star_check(&pts(&[(1, 1)]), 3).is_err());
        assert!(grid_star_check(&pts(&[(1, 5)]), 3).is_err());
    }

    #[test]
    fn small_grids() {
        let r = grid_max_properties(2, 5).unwrap();
        assert_eq!((r.max_size, r.example.clone()), (2, pts(&[(1, 2), (2, 1)])));
        let r = grid_max_properties(3, 5).unwrap();
        assert_eq!(r.max_size, 3);
        assert!(r.maximum_sets_cover_twice);
        assert_eq!(grid_max_properties(4, 5).unwrap().max_size, 4);
        assert!(grid_max_properties(6, 5).unwrap_err().is_budget());
    }
}
