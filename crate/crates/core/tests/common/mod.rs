#![allow(dead_code)]

use dmst_core::gen::seeded_rng;
use dmst_core::{Edge, PointSet, Tree};
use rand::Rng;

/// `n` distinct points with real coordinates in `[0, 1000)²`.
pub fn real_points(n: usize, seed: u64) -> PointSet {
    let mut rng = seeded_rng(seed ^ 0x5eed);
    let xy: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.random_range(0.0..1000.0), rng.random_range(0.0..1000.0)))
        .collect();
    PointSet::from_xy(&xy, format!("real-{n}-{seed}")).unwrap()
}

/// `n` distinct points on a small integer grid, so equal lengths are common.
pub fn grid_points(n: usize, side: i64, seed: u64) -> PointSet {
    let mut rng = seeded_rng(seed ^ 0x9e1d);
    let mut seen = std::collections::HashSet::new();
    let mut xy = Vec::new();
    while xy.len() < n {
        let p = (rng.random_range(0..=side), rng.random_range(0..=side));
        if seen.insert(p) {
            xy.push((p.0 as f64, p.1 as f64));
        }
    }
    PointSet::from_xy(&xy, format!("grid-{n}-{seed}")).unwrap()
}

pub fn weight(t: &Tree, ps: &PointSet) -> f64 {
    t.edges().iter().map(|e| ps.dist(e.u, e.v)).sum()
}

pub fn bottleneck(t: &Tree, ps: &PointSet) -> f64 {
    t.edges().iter().map(|e| ps.dist(e.u, e.v)).fold(0.0, f64::max)
}

pub fn excess(t: &Tree, delta: usize) -> usize {
    (0..t.n()).map(|v| t.degree(v).saturating_sub(delta)).sum()
}

/// Every edge of the complete graph on `n` vertices.
pub fn all_edges(n: usize) -> Vec<Edge> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| Edge::new(a, b))).collect()
}

/// BFS distances in `t` from `s`.
pub fn tree_distances(t: &Tree, s: usize) -> Vec<usize> {
    let adj = t.adjacency();
    let mut dist = vec![usize::MAX; t.n()];
    dist[s] = 0;
    let mut queue = std::collections::VecDeque::from([s]);
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if dist[w] == usize::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Is `order` a permutation of `0..n` and `t` the path through it?
pub fn is_path_of(t: &Tree, order: &[usize]) -> bool {
    Tree::from_path(order).map(|p| &p == t).unwrap_or(false)
}

/// Vertex sequence of a path tree, starting from its lower endpoint.
pub fn path_order(t: &Tree) -> Vec<usize> {
    let adj = t.adjacency();
    let start = (0..t.n()).find(|&v| adj[v].len() <= 1).unwrap();
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while let Some(&next) = adj[cur].iter().find(|&&w| w != prev) {
        order.push(next);
        prev = cur;
        cur = next;
    }
    order
}
