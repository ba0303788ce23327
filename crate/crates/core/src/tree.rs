//! Spanning trees over the vertices of a [`PointSet`] and the metrics shared by
//! every algorithm: total weight, bottleneck and feasibility error.

use std::cmp::Ordering;

use crate::{Error, PointSet, Result};

/// An undirected edge stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    /// Canonical edge between `a` and `b`.
    ///
    /// Panics if `a == b`.
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "self-loop edge ({a}, {a})");
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn length(&self, ps: &PointSet) -> f64 {
        ps.dist(self.u, self.v)
    }

    pub fn touches(&self, x: usize) -> bool {
        self.u == x || self.v == x
    }

    /// The endpoint that is not `x`.
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

impl std::fmt::Display for Edge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.u, self.v)
    }
}

/// Total order on edges used for every tie-break: length, then `u`, then `v`.
#[inline]
pub(crate) fn cmp_keyed(la: f64, a: Edge, lb: f64, b: Edge) -> Ordering {
    la.total_cmp(&lb).then(a.cmp(&b))
}

/// Maximum vertex degree δ.
///
/// The problems of interest have 2 ≤ δ ≤ 4; [`DegreeBound::relaxed`] admits
/// larger caps for comparisons against the unconstrained MST.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DegreeBound(usize);

impl DegreeBound {
    pub fn new(delta: usize) -> Result<Self> {
        if (2..=4).contains(&delta) {
            Ok(DegreeBound(delta))
        } else {
            Err(Error::BadDegreeBound(delta))
        }
    }

    /// Any cap of at least 2.
    pub fn relaxed(delta: usize) -> Result<Self> {
        if delta >= 2 {
            Ok(DegreeBound(delta))
        } else {
            Err(Error::BadDegreeBound(delta))
        }
    }

    pub fn get(self) -> usize {
        self.0
    }
}

impl std::fmt::Display for DegreeBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A spanning tree on vertices `0..n`.
///
/// Edges are kept sorted so two trees with the same edge set compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tree {
    n: usize,
    edges: Vec<Edge>,
    degree: Vec<usize>,
}

impl Tree {
    /// Validates that `edges` form a spanning tree on `n` vertices.
    pub fn new(n: usize, mut edges: Vec<Edge>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidTree("no vertices".into()));
        }
        if edges.len() != n - 1 {
            return Err(Error::InvalidTree(format!("{} edges for {n} vertices", edges.len())));
        }
        edges.sort_unstable();
        let mut degree = vec![0; n];
        let mut uf = UnionFind::new(n);
        for e in &edges {
            if e.u >= e.v || e.v >= n {
                return Err(Error::InvalidTree(format!("bad edge {e}")));
            }
            if !uf.union(e.u, e.v) {
                return Err(Error::InvalidTree(format!("edge {e} closes a cycle")));
            }
            degree[e.u] += 1;
            degree[e.v] += 1;
        }
        Ok(Tree { n, edges, degree })
    }

    /// The path visiting `order` in sequence; `order` must be a permutation of `0..n`.
    pub fn from_path(order: &[usize]) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for &v in order {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::InvalidTree(format!("{order:?} is not a permutation")));
            }
        }
        let edges = order.windows(2).map(|w| Edge::new(w[0], w[1])).collect();
        Tree::new(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.degree[v]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degree
    }

    pub fn max_degree(&self) -> usize {
        self.degree.iter().copied().max().unwrap_or(0)
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.binary_search(&e).is_ok()
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Replaces `remove` by `add`, updating the degree cache at the touched
    /// endpoints only. The caller guarantees the result is a tree.
    pub(crate) fn swap_unchecked(&mut self, remove: Edge, add: Edge) {
        let at = self
            .edges
            .binary_search(&remove)
            .expect("removed edge must be in the tree");
        self.edges.remove(at);
        let at = self
            .edges
            .binary_search(&add)
            .expect_err("added edge must not be in the tree");
        self.edges.insert(at, add);
        self.degree[remove.u] -= 1;
        self.degree[remove.v] -= 1;
        self.degree[add.u] += 1;
        self.degree[add.v] += 1;
        debug_assert!(self.check_invariants().is_ok());
    }

    /// Re-verifies connectivity, acyclicity and the degree cache by traversal.
    pub fn check_invariants(&self) -> Result<()> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut visited = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    visited += 1;
                    stack.push(w);
                }
            }
        }
        if visited != self.n || self.edges.len() != self.n - 1 {
            return Err(Error::InvalidTree("not spanning".into()));
        }
        if adj.iter().map(Vec::len).ne(self.degree.iter().copied()) {
            return Err(Error::InvalidTree("stale degree cache".into()));
        }
        Ok(())
    }

    fn check_size(&self, ps: &PointSet) -> Result<()> {
        if self.n != ps.len() {
            return Err(Error::SizeMismatch {
                tree: self.n,
                points: ps.len(),
            });
        }
        Ok(())
    }
}

/// Sum of edge lengths.
pub fn total_weight(t: &Tree, ps: &PointSet) -> Result<f64> {
    t.check_size(ps)?;
    Ok(t.edges.iter().map(|e| e.length(ps)).sum())
}

/// Length of the longest edge.
pub fn bottleneck(t: &Tree, ps: &PointSet) -> Result<f64> {
    t.check_size(ps)?;
    Ok(t.edges.iter().map(|e| e.length(ps)).fold(0.0, f64::max))
}

/// Σ_v max(deg(v) − δ, 0); zero exactly when the tree respects the bound.
pub fn feasibility_error(t: &Tree, d: DegreeBound) -> usize {
    t.degree.iter().map(|&k| k.saturating_sub(d.get())).sum()
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            Ordering::Less => self.parent[ra] = rb,
            Ordering::Greater => self.parent[rb] = ra,
            Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}
