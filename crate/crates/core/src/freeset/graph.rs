//! Conflict graphs and exact independent-set search over word bitsets.
//!
//! Free subsets of a ground set are exactly the independent sets of its
//! conflict graph, so the maximum-free-subset oracle is a maximum independent
//! set solver. Vertex `i` is the `i`-th ground-set member in serialization
//! order.

use super::FreeMode;
use crate::ternary::{GaussianSet, SymmetricCubeSet};

type Word = u64;

#[inline]
fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

#[inline]
fn test(bits: &[Word], i: usize) -> bool {
    bits[i >> 6] >> (i & 63) & 1 == 1
}

#[inline]
fn set(bits: &mut [Word], i: usize) {
    bits[i >> 6] |= 1 << (i & 63);
}

#[inline]
fn clear(bits: &mut [Word], i: usize) {
    bits[i >> 6] &= !(1 << (i & 63));
}

#[inline]
fn count(bits: &[Word]) -> usize {
    bits.iter().map(|w| w.count_ones() as usize).sum()
}

#[inline]
fn first(bits: &[Word]) -> Option<usize> {
    bits.iter().enumerate().find(|(_, w)| **w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn ones(bits: &[Word]) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + b)
            }
        })
    })
}

/// Undirected graph without self-loops, adjacency stored as bit rows.
#[derive(Clone, Debug)]
pub struct ConflictGraph {
    n: usize,
    words: usize,
    adj: Vec<Word>,
}

impl ConflictGraph {
    /// Builds the graph from a symmetric predicate evaluated on pairs `i < j`.
    pub fn build(n: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Self {
        let words = words_for(n);
        let mut adj = vec![0; n * words];
        for i in 0..n {
            for j in i + 1..n {
                if adjacent(i, j) {
                    set(&mut adj[i * words..(i + 1) * words], j);
                    set(&mut adj[j * words..(j + 1) * words], i);
                }
            }
        }
        Self { n, words, adj }
    }

    /// `u ~ v` iff the difference (either order) or the sum of `u, v` lies in `a`.
    pub fn for_set(a: &SymmetricCubeSet, mode: FreeMode) -> Self {
        let m = a.members();
        Self::build(m.len(), |i, j| mode.conflicts(&m[i], &m[j], a))
    }

    /// `u ~ v` iff `u - v` or `v - u` lies in `a` (Gaussian coordinates).
    pub fn for_gaussian(a: &GaussianSet) -> Self {
        let m = a.members();
        Self::build(m.len(), |i, j| {
            m[i].sub_in_cube(&m[j]).is_some_and(|d| a.contains(&d))
                || m[j].sub_in_cube(&m[i]).is_some_and(|d| a.contains(&d))
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    fn row(&self, v: usize) -> &[Word] {
        &self.adj[v * self.words..(v + 1) * self.words]
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        test(self.row(u), v)
    }

    pub fn degree(&self, v: usize) -> usize {
        count(self.row(v))
    }

    pub fn is_independent(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(i, &u)| vertices[i + 1..].iter().all(|&v| u != v && !self.adjacent(u, v)))
    }

    fn all(&self) -> Vec<Word> {
        let mut bits = vec![0; self.words];
        for i in 0..self.n {
            set(&mut bits, i);
        }
        bits
    }

    /// Upper bound on the independence number of the subgraph induced by
    /// `cand`: the size of a greedy clique cover (an independent set meets
    /// each clique at most once).
    fn clique_cover_bound(&self, cand: &[Word], scratch: &mut Vec<Word>, limit: usize) -> usize {
        scratch.clear();
        scratch.extend_from_slice(cand);
        let mut cliques = 0;
        while let Some(u) = first(scratch) {
            cliques += 1;
            if cliques > limit {
                return cliques;
            }
            clear(scratch, u);
            let mut common: Vec<Word> = scratch.iter().zip(self.row(u)).map(|(a, b)| a & b).collect();
            while let Some(w) = first(&common) {
                clear(scratch, w);
                clear(&mut common, w);
                for (c, r) in common.iter_mut().zip(self.row(w)) {
                    *c &= r;
                }
            }
        }
        cliques
    }

    /// Independence number, by branch and bound on a maximum-degree vertex
    /// with a greedy clique-cover bound.
    pub fn independence_number(&self) -> usize {
        let mut best = 0;
        let mut scratch = Vec::with_capacity(self.words);
        self.branch_max(self.all(), 0, &mut best, &mut scratch);
        best
    }

    fn branch_max(&self, mut cand: Vec<Word>, mut size: usize, best: &mut usize, scratch: &mut Vec<Word>) {
        // isolated candidates always belong to some maximum solution
        let mut pivot = None;
        let mut pivot_deg = 0;
        for v in ones(&cand.clone()).collect::<Vec<_>>() {
            let deg = self.row(v).iter().zip(&cand).map(|(a, b)| (a & b).count_ones() as usize).sum::<usize>();
            if deg == 0 {
                clear(&mut cand, v);
                size += 1;
            } else if deg > pivot_deg {
                pivot_deg = deg;
                pivot = Some(v);
            }
        }
        if size > *best {
            *best = size;
        }
        let Some(v) = pivot else { return };
        let remaining = count(&cand);
        if size + remaining <= *best {
            return;
        }
        if size + self.clique_cover_bound(&cand, scratch, *best - size + 1) <= *best {
            return;
        }
        let mut with = cand.clone();
        clear(&mut with, v);
        for (c, r) in with.iter_mut().zip(self.row(v)) {
            *c &= !r;
        }
        self.branch_max(with, size + 1, best, scratch);
        clear(&mut cand, v);
        self.branch_max(cand, size, best, scratch);
    }

    /// The lexicographically least independent set of size `k` with respect to
    /// `order` (a permutation of the vertices), or `None` if there is none.
    ///
    /// Vertices are tried in `order`, include-before-exclude, so the first hit
    /// is least in that order.
    pub fn independent_set_of_size(&self, k: usize, order: &[usize]) -> Option<Vec<usize>> {
        debug_assert_eq!(order.len(), self.n);
        if k == 0 {
            return Some(Vec::new());
        }
        // relabel so that position in `order` is the vertex index
        let relabeled = if order.iter().enumerate().all(|(i, &v)| i == v) {
            None
        } else {
            Some(Self::build(self.n, |i, j| self.adjacent(order[i], order[j])))
        };
        let g = relabeled.as_ref().unwrap_or(self);
        let mut chosen = Vec::with_capacity(k);
        let mut scratch = Vec::with_capacity(self.words);
        if g.branch_fixed(g.all(), k, &mut chosen, &mut scratch) {
            Some(chosen.into_iter().map(|i| order[i]).collect())
        } else {
            None
        }
    }

    fn branch_fixed(&self, mut cand: Vec<Word>, k: usize, chosen: &mut Vec<usize>, scratch: &mut Vec<Word>) -> bool {
        loop {
            if chosen.len() == k {
                return true;
            }
            let need = k - chosen.len();
            if count(&cand) < need || self.clique_cover_bound(&cand, scratch, need) < need {
                return false;
            }
            let v = first(&cand).expect("nonempty candidates");
            clear(&mut cand, v);
            let mut with = cand.clone();
            for (c, r) in with.iter_mut().zip(self.row(v)) {
                *c &= !r;
            }
            chosen.push(v);
            if self.branch_fixed(with, k, chosen, scratch) {
                return true;
            }
            chosen.pop();
        }
    }

    /// A maximum independent set, least in vertex order among all maximum ones.
    pub fn maximum_independent_set(&self) -> Vec<usize> {
        let alpha = self.independence_number();
        let order: Vec<usize> = (0..self.n).collect();
        self.independent_set_of_size(alpha, &order).expect("independence number is attained")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_alpha(g: &ConflictGraph) -> usize {
        let n = g.len();
        (0u32..1 << n)
            .filter(|mask| {
                let vs: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                g.is_independent(&vs)
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn cycle_and_complete_graphs() {
        let c7 = ConflictGraph::build(7, |i, j| j == i + 1 || (i == 0 && j == 6));
        assert_eq!(c7.independence_number(), 3);
        assert_eq!(c7.maximum_independent_set(), vec![0, 2, 4]);
        let k5 = ConflictGraph::build(5, |_, _| true);
        assert_eq!(k5.independence_number(), 1);
        let empty = ConflictGraph::build(4, |_, _| false);
        assert_eq!(empty.maximum_independent_set(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn random_graphs_match_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.gen_range(1..14);
            let p: f64 = rng.gen_range(0.1..0.9);
            let edges: Vec<Vec<bool>> = (0..n).map(|_| (0..n).map(|_| rng.gen_bool(p)).collect()).collect();
            let g = ConflictGraph::build(n, |i, j| edges[i][j]);
            let alpha = brute_alpha(&g);
            assert_eq!(g.independence_number(), alpha);
            let mis = g.maximum_independent_set();
            assert_eq!(mis.len(), alpha);
            assert!(g.is_independent(&mis));
            // least in vertex order: brute force over all sets of that size
            let least = (0u32..1 << n)
                .filter(|m| m.count_ones() as usize == alpha)
                .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>())
                .filter(|vs| g.is_independent(vs))
                .min()
                .unwrap();
            assert_eq!(mis, least);
        }
    }

    #[test]
    fn custom_order_is_respected() {
        let g = ConflictGraph::build(4, |i, j| (i, j) == (0, 1) || (i, j) == (2, 3));
        let s = g.independent_set_of_size(2, &[3, 1, 0, 2]).unwrap();
        assert_eq!(s, vec![3, 1]);
    }

    #[test]
    fn wide_graphs_use_several_words() {
        // perfect matching on 150 vertices: alpha = 75
        let g = ConflictGraph::build(150, |i, j| j == i + 1 && i % 2 == 0);
        assert_eq!(g.independence_number(), 75);
        let order: Vec<usize> = (0..150).rev().collect();
        let s = g.independent_set_of_size(75, &order).unwrap();
        assert!(g.is_independent(&s));
    }
}
