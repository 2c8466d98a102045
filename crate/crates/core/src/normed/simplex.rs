//! Exact rational simplex for support functions of symmetric polyhedra.
//!
//! `support(rows, c)` solves `max <c, y>` subject to `|<r, y>| <= 1` for every
//! row `r`. The gauge of `conv(±p_i)` at `v` and the dual norm of a facet
//! description at `φ` are both of this form. Free variables are split as
//! `y = u - w`, the all-slack basis is feasible, and Bland's rule guarantees
//! termination.

#![allow(clippy::needless_range_loop, clippy::while_let_loop)]

use num_traits::{One, Signed, Zero};

use super::Q;
use crate::error::{Error, Result};

/// Optimal value and an optimal vertex.
pub(crate) fn support(rows: &[Vec<Q>], c: &[Q]) -> Result<(Q, Vec<Q>)> {
    let n = c.len();
    let m = rows.len();
    let rc = 2 * m; // constraint rows
    let vars = 2 * n + rc; // u, w, slacks
                           // tableau rows: constraints then the objective row (reduced costs, negated convention below)
    let mut t: Vec<Vec<Q>> = Vec::with_capacity(rc + 1);
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: r.len() });
        }
        for sign in [1i32, -1] {
            let mut row = vec![Q::zero(); vars + 1];
            for j in 0..n {
                let a = if sign == 1 { r[j].clone() } else { -r[j].clone() };
                row[n + j] = -a.clone();
                row[j] = a;
            }
            let slack = 2 * n + 2 * i + usize::from(sign == -1);
            row[slack] = Q::one();
            row[vars] = Q::one();
            t.push(row);
        }
    }
    // objective row holds c_j - z_j for the maximization
    let mut obj = vec![Q::zero(); vars + 1];
    for j in 0..n {
        obj[j] = c[j].clone();
        obj[n + j] = -c[j].clone();
    }
    t.push(obj);
    let mut basis: Vec<usize> = (0..rc).map(|i| 2 * n + i).collect();

    loop {
        let Some(enter) = (0..vars).find(|&j| t[rc][j].is_positive()) else { break };
        let mut leave: Option<(usize, Q)> = None;
        for i in 0..rc {
            if t[i][enter].is_positive() {
                let ratio = t[i][vars].clone() / t[i][enter].clone();
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((p, _)) = leave else {
            return Err(Error::DegenerateNorm("the rows do not span the space (unbounded support)".into()));
        };
        let piv = t[p][enter].clone();
        for v in t[p].iter_mut() {
            *v = v.clone() / piv.clone();
        }
        let prow = t[p].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i == p || row[enter].is_zero() {
                continue;
            }
            let f = row[enter].clone();
            for (v, pv) in row.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v = v.clone() - pv.clone() * f.clone();
                }
            }
        }
        basis[p] = enter;
    }
    let mut x = vec![Q::zero(); vars];
    for (i, &b) in basis.iter().enumerate() {
        x[b] = t[i][vars].clone();
    }
    let y: Vec<Q> = (0..n).map(|j| x[j].clone() - x[n + j].clone()).collect();
    let value = y.iter().zip(c).fold(Q::zero(), |acc, (a, b)| acc + a * b);
    Ok((value, y))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn rows(v: &[&[i64]]) -> Vec<Vec<Q>> {
        v.iter().map(|r| r.iter().map(|&a| q(a, 1)).collect()).collect()
    }

    #[test]
    fn square_and_diamond() {
        // |y1| <= 1, |y2| <= 1: support of (1, -1) is 2 at (1, -1)
        let (v, y) = support(&rows(&[&[1, 0], &[0, 1]]), &[q(1, 1), q(-1, 1)]).unwrap();
        assert_eq!(v, q(2, 1));
        assert_eq!(y, vec![q(1, 1), q(-1, 1)]);
        // |y1 + y2| <= 1, |y1 - y2| <= 1 is the l1 ball; support of (3, 1) is 3
        let (v, _) = support(&rows(&[&[1, 1], &[1, -1]]), &[q(3, 1), q(1, 1)]).unwrap();
        assert_eq!(v, q(3, 1));
    }

    #[test]
    fn hexagon() {
        // |x| <= 1, |y| <= 1, |x + y| <= 1: vertices ±(1,0), ±(0,1), ±(1,-1)
        let r = rows(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(support(&r, &[q(1, 1), q(1, 1)]).unwrap().0, q(1, 1));
        let (v, y) = support(&r, &[q(1, 1), q(-1, 1)]).unwrap();
        assert_eq!((v, y), (q(2, 1), vec![q(1, 1), q(-1, 1)]));
        assert_eq!(support(&r, &[q(1, 2), q(1, 3)]).unwrap().0, q(1, 2));
    }

    #[test]
    fn unbounded_is_degenerate() {
        assert!(support(&rows(&[&[1, 0]]), &[q(0, 1), q(1, 1)]).is_err());
    }
}
