//! Exact minimum spanning trees and brute-force oracles for tiny instances.
//!
//! [`mst`] is the seed of every edge-swap algorithm. [`exact_dmst`] and
//! [`exact_hampath`] are exhaustive and only meant for checking heuristics on
//! instances small enough to enumerate.

use std::cmp::Ordering;

use crate::tree::cmp_keyed;
use crate::{DegreeBound, Edge, Error, Objective, PointSet, Result, Tree};

/// Largest instance [`exact_dmst`] enumerates by default.
pub const DEFAULT_TREE_CAP: usize = 8;
/// Largest instance [`exact_hampath`] solves by default.
pub const DEFAULT_PATH_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct MstResult {
    pub tree: Tree,
    pub max_degree: usize,
}

/// Prim's algorithm with a full O(n²) scan.
///
/// Edges are totally ordered by `(length, u, v)`, so the minimum spanning tree
/// is unique under that order and the result does not depend on the start.
pub fn mst(ps: &PointSet) -> Result<MstResult> {
    let n = ps.len();
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    let mut in_tree = vec![false; n];
    // best connection of each outside vertex into the tree
    let mut best: Vec<(f64, Edge)> = (0..n)
        .map(|v| {
            if v == 0 {
                (0.0, Edge { u: 0, v: 0 })
            } else {
                (ps.dist(0, v), Edge::new(0, v))
            }
        })
        .collect();
    in_tree[0] = true;
    let mut edges = Vec::with_capacity(n - 1);
    for _ in 1..n {
        let next = (0..n)
            .filter(|&v| !in_tree[v])
            .min_by(|&a, &b| cmp_keyed(best[a].0, best[a].1, best[b].0, best[b].1))
            .expect("an outside vertex remains");
        in_tree[next] = true;
        edges.push(best[next].1);
        for v in 0..n {
            if !in_tree[v] {
                let cand = (ps.dist(next, v), Edge::new(next, v));
                if cmp_keyed(cand.0, cand.1, best[v].0, best[v].1) == Ordering::Less {
                    best[v] = cand;
                }
            }
        }
    }
    let tree = Tree::new(n, edges)?;
    let max_degree = tree.max_degree();
    Ok(MstResult { tree, max_degree })
}

/// Decodes a Prüfer sequence over `0..n` (length `n − 2`) into tree edges.
pub fn prufer_decode(seq: &[usize], n: usize) -> Vec<Edge> {
    debug_assert_eq!(seq.len() + 2, n);
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &x in seq {
        let leaf = (0..n).find(|&j| degree[j] == 1).expect("a leaf always exists");
        edges.push(Edge::new(leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let mut rest = (0..n).filter(|&j| degree[j] == 1);
    let (a, b) = (rest.next().unwrap(), rest.next().unwrap());
    edges.push(Edge::new(a, b));
    edges
}

/// Calls `f` with every labelled spanning tree on `n ≥ 2` vertices (all
/// `n^(n−2)` of them) and its Prüfer sequence.
pub fn for_each_labeled_tree(n: usize, mut f: impl FnMut(&[usize], &[Edge])) {
    assert!(n >= 2);
    let mut seq = vec![0usize; n - 2];
    loop {
        f(&seq, &prufer_decode(&seq, n));
        // odometer increment
        let mut i = seq.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            seq[i] += 1;
            if seq[i] < n {
                break;
            }
            seq[i] = 0;
        }
    }
}

fn objective_value(edges: &[Edge], ps: &PointSet, objective: Objective) -> f64 {
    let lengths = edges.iter().map(|e| e.length(ps));
    match objective {
        Objective::Weight => lengths.sum(),
        Objective::Bottleneck => lengths.fold(0.0, f64::max),
    }
}

/// Optimal degree-bounded spanning tree by exhaustive Prüfer enumeration.
///
/// Ties on the objective go to the lexicographically smallest sorted edge list.
pub fn exact_dmst(ps: &PointSet, d: DegreeBound, objective: Objective) -> Result<Tree> {
    exact_dmst_capped(ps, d, objective, DEFAULT_TREE_CAP)
}

pub fn exact_dmst_capped(ps: &PointSet, d: DegreeBound, objective: Objective, cap: usize) -> Result<Tree> {
    let n = ps.len();
    if n > cap {
        return Err(Error::OracleCap { n, cap });
    }
    let mut best: Option<(f64, Vec<Edge>)> = None;
    let mut counts = vec![0usize; n];
    for_each_labeled_tree(n, |seq, edges| {
        counts.iter_mut().for_each(|c| *c = 0);
        for &x in seq {
            counts[x] += 1;
        }
        // vertex degree is one more than its number of occurrences
        if counts.iter().any(|&c| c + 1 > d.get()) {
            return;
        }
        let value = objective_value(edges, ps, objective);
        let replace = match &best {
            None => true,
            Some((bv, be)) => match value.total_cmp(bv) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => {
                    let mut sorted = edges.to_vec();
                    sorted.sort_unstable();
                    sorted < *be
                }
            },
        };
        if replace {
            let mut sorted = edges.to_vec();
            sorted.sort_unstable();
            best = Some((value, sorted));
        }
    });
    let (_, edges) = best.ok_or_else(|| Error::Internal("no degree-feasible spanning tree".into()))?;
    Tree::new(n, edges)
}

/// Optimal Hamiltonian path by dynamic programming over vertex subsets.
pub fn exact_hampath(ps: &PointSet, objective: Objective) -> Result<Tree> {
    exact_hampath_capped(ps, objective, DEFAULT_PATH_CAP)
}

pub fn exact_hampath_capped(ps: &PointSet, objective: Objective, cap: usize) -> Result<Tree> {
    let n = ps.len();
    if n > cap {
        return Err(Error::OracleCap { n, cap });
    }
    let full = (1usize << n) - 1;
    let combine = |acc: f64, step: f64| match objective {
        Objective::Weight => acc + step,
        Objective::Bottleneck => acc.max(step),
    };
    // best[mask * n + v]: cheapest path over `mask` ending at v
    let mut best = vec![f64::INFINITY; (full + 1) * n];
    let mut prev = vec![usize::MAX; (full + 1) * n];
    for v in 0..n {
        best[(1 << v) * n + v] = 0.0;
    }
    for mask in 1..=full {
        for v in 0..n {
            let cur = best[mask * n + v];
            if cur.is_infinite() {
                continue;
            }
            for w in 0..n {
                if mask & (1 << w) != 0 {
                    continue;
                }
                let next = mask | (1 << w);
                let cost = combine(cur, ps.dist(v, w));
                if cost < best[next * n + w] {
                    best[next * n + w] = cost;
                    prev[next * n + w] = v;
                }
            }
        }
    }
    let mut end = 0;
    for v in 1..n {
        if best[full * n + v] < best[full * n + end] {
            end = v;
        }
    }
    let mut order = Vec::with_capacity(n);
    let (mut mask, mut v) = (full, end);
    loop {
        order.push(v);
        let p = prev[mask * n + v];
        if p == usize::MAX {
            break;
        }
        mask &= !(1 << v);
        v = p;
    }
    Tree::from_path(&order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::total_weight;

    fn ps(coords: &[(f64, f64)]) -> PointSet {
        PointSet::from_xy(coords, "t").unwrap()
    }

    fn unit_square() -> PointSet {
        ps(&[(0.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, 0.0)])
    }

    #[test]
    fn square_mst_is_three_sides() {
        let r = mst(&unit_square()).unwrap();
        assert_eq!(total_weight(&r.tree, &unit_square()).unwrap(), 3.0);
        // ties broken by (length, u, v): (0,1), (0,3), then (1,2)
        assert_eq!(r.tree.edges(), &[Edge::new(0, 1), Edge::new(0, 3), Edge::new(1, 2)]);
        assert_eq!(r.max_degree, 2);
    }

    #[test]
    fn two_point_mst() {
        let p = ps(&[(0.0, 0.0), (3.0, 4.0)]);
        let r = mst(&p).unwrap();
        assert_eq!(r.tree.edges(), &[Edge::new(0, 1)]);
        assert_eq!(total_weight(&r.tree, &p).unwrap(), 5.0);
    }

    #[test]
    fn labeled_tree_count_is_cayley() {
        for n in 2..=6 {
            let mut count = 0;
            for_each_labeled_tree(n, |_, edges| {
                assert!(Tree::new(n, edges.to_vec()).is_ok());
                count += 1;
            });
            assert_eq!(count, n.pow(n as u32 - 2));
        }
    }

    #[test]
    fn exact_dmst_square_path() {
        let p = unit_square();
        let t = exact_dmst(&p, DegreeBound::new(2).unwrap(), Objective::Weight).unwrap();
        assert_eq!(total_weight(&t, &p).unwrap(), 3.0);
    }

    #[test]
    fn exact_dmst_symmetric_cross() {
        let p = ps(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]);
        let t = exact_dmst(&p, DegreeBound::new(3).unwrap(), Objective::Weight).unwrap();
        let w = total_weight(&t, &p).unwrap();
        assert!(w >= 4.0);
        assert!(t.max_degree() <= 3);
        // one arm rerouted through its neighbour: 3 + √2
        assert!((w - (3.0 + 2f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn exact_dmst_respects_cap() {
        let coords: Vec<(f64, f64)> = (0..9).map(|i| (i as f64, (i * i) as f64)).collect();
        assert!(matches!(
            exact_dmst(&ps(&coords), DegreeBound::new(3).unwrap(), Objective::Weight),
            Err(Error::OracleCap { n: 9, cap: 8 })
        ));
        let coords: Vec<(f64, f64)> = (0..13).map(|i| (i as f64, (i * i) as f64)).collect();
        assert!(exact_hampath(&ps(&coords), Objective::Weight).is_err());
    }

    #[test]
    fn hampath_examples() {
        let p = unit_square();
        let t = exact_hampath(&p, Objective::Weight).unwrap();
        assert_eq!(total_weight(&t, &p).unwrap(), 3.0);
        let line = ps(&[(1.0, 0.0), (0.0, 0.0), (2.0, 0.0)]);
        let t = exact_hampath(&line, Objective::Weight).unwrap();
        assert_eq!(t.edges(), &[Edge::new(0, 1), Edge::new(0, 2)]);
        assert_eq!(total_weight(&t, &line).unwrap(), 2.0);
        let t = exact_hampath(&line, Objective::Bottleneck).unwrap();
        assert_eq!(crate::bottleneck(&t, &line).unwrap(), 1.0);
    }
}
