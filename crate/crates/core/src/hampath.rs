//! Hamiltonian paths from supergraphs of the MST: double tree (DT), the
//! path variant of Christofides, and a Hamiltonian path of the cube of the
//! MST (Cube2).

use rustworkx_core::max_weight_matching::max_weight_matching;
use rustworkx_core::petgraph::graph::UnGraph;

use crate::approx::RootedTree;
use crate::mst::mst;
use crate::tree::cmp_keyed;
use crate::{Edge, Error, Outcome, PointSet, Result, Tree};

/// Undirected multigraph; parallel edges allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MultiGraph {
    pub n: usize,
    pub edges: Vec<Edge>,
}

impl MultiGraph {
    pub fn new(n: usize) -> Self {
        MultiGraph { n, edges: Vec::new() }
    }

    pub fn from_tree(t: &Tree) -> Self {
        MultiGraph {
            n: t.n(),
            edges: t.edges().to_vec(),
        }
    }

    pub fn add(&mut self, e: Edge) {
        self.edges.push(e);
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }

    pub fn odd_vertices(&self) -> Vec<usize> {
        self.degrees()
            .iter()
            .enumerate()
            .filter(|(_, &d)| d % 2 == 1)
            .map(|(v, _)| v)
            .collect()
    }
}

/// Hierholzer's algorithm. Starts at the lower odd vertex when there are
/// two, otherwise at the lowest vertex with an edge; neighbours are tried in
/// ascending order.
pub fn euler_trail(g: &MultiGraph) -> Result<Vec<usize>> {
    let odd = g.odd_vertices();
    let start = match odd.len() {
        0 => match g.edges.iter().map(|e| e.u).min() {
            Some(v) => v,
            None => return Ok(if g.n > 0 { vec![0] } else { vec![] }),
        },
        2 => odd[0],
        k => return Err(Error::Parity(format!("{k} odd-degree vertices"))),
    };
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); g.n];
    for (id, e) in g.edges.iter().enumerate() {
        adj[e.u].push((e.v, id));
        adj[e.v].push((e.u, id));
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    let mut used = vec![false; g.edges.len()];
    let mut next = vec![0usize; g.n];
    let mut stack = vec![start];
    let mut out = Vec::with_capacity(g.edges.len() + 1);
    while let Some(&v) = stack.last() {
        while next[v] < adj[v].len() && used[adj[v][next[v]].1] {
            next[v] += 1;
        }
        if let Some(&(w, id)) = adj[v].get(next[v]) {
            used[id] = true;
            stack.push(w);
        } else {
            out.push(v);
            stack.pop();
        }
    }
    if out.len() != g.edges.len() + 1 {
        return Err(Error::Parity("edges do not form one connected component".into()));
    }
    out.reverse();
    Ok(out)
}

/// Keeps the first occurrence of each vertex.
pub fn shortcut(seq: &[usize]) -> Vec<usize> {
    let cap = seq.iter().copied().max().map_or(0, |m| m + 1);
    let mut seen = vec![false; cap];
    seq.iter()
        .copied()
        .filter(|&v| !std::mem::replace(&mut seen[v], true))
        .collect()
}

/// Double tree: Euler circuit of the doubled MST from vertex 0, shortcut to
/// a Hamiltonian cycle, minus its longest edge.
pub fn double_tree(ps: &PointSet) -> Result<Outcome> {
    let t = mst(ps)?.tree;
    if ps.len() == 2 {
        return Ok(Outcome::single_pass(t));
    }
    let mut g = MultiGraph::from_tree(&t);
    g.edges.extend_from_slice(t.edges());
    let cycle = shortcut(&euler_trail(&g)?);
    let n = cycle.len();
    let cut = (0..n)
        .max_by(|&i, &j| {
            let (a, b) = (
                Edge::new(cycle[i], cycle[(i + 1) % n]),
                Edge::new(cycle[j], cycle[(j + 1) % n]),
            );
            cmp_keyed(a.length(ps), a, b.length(ps), b)
        })
        .expect("non-empty cycle");
    let order: Vec<usize> = (1..=n).map(|k| cycle[(cut + k) % n]).collect();
    Ok(Outcome::single_pass(Tree::from_path(&order)?))
}

/// A matching on real vertices where some vertices are instead matched to
/// zero-cost dummies.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Matching {
    /// Real pairs, each `(a, b)` with `a < b`, sorted.
    pub pairs: Vec<(usize, usize)>,
    /// Vertices matched to a dummy, sorted.
    pub to_dummy: Vec<usize>,
}

impl Matching {
    pub fn cost(&self, ps: &PointSet) -> f64 {
        self.pairs.iter().map(|&(a, b)| ps.dist(a, b)).sum()
    }
}

const SCALE: f64 = 1e9;

/// Exact minimum-weight perfect matching of `vertices` plus `dummies` extra
/// vertices, each joined to every real vertex at zero cost and not to each
/// other.
pub fn min_weight_perfect_matching(vertices: &[usize], ps: &PointSet, dummies: usize) -> Result<Matching> {
    let k = vertices.len();
    if (k + dummies) % 2 == 1 || dummies > k {
        return Err(Error::Matching(format!(
            "{k} vertices and {dummies} dummies admit no perfect matching"
        )));
    }
    let scaled = |i: usize, j: usize| (ps.dist(vertices[i], vertices[j]) * SCALE).round() as i128;
    let mut big: i128 = 1;
    for i in 0..k {
        for j in i + 1..k {
            big = big.max(scaled(i, j) + 1);
        }
    }
    let mut g: UnGraph<(), i128> = UnGraph::default();
    let nodes: Vec<_> = (0..k + dummies).map(|_| g.add_node(())).collect();
    for i in 0..k {
        for j in i + 1..k {
            g.add_edge(nodes[i], nodes[j], big - scaled(i, j));
        }
        for d in 0..dummies {
            g.add_edge(nodes[i], nodes[k + d], big);
        }
    }
    let mate = max_weight_matching(&g, true, |e| Ok::<i128, std::convert::Infallible>(*e.weight()), false)
        .unwrap_or_else(|never| match never {});
    if 2 * mate.len() != k + dummies {
        return Err(Error::Matching(format!(
            "matched {} of {} vertices",
            2 * mate.len(),
            k + dummies
        )));
    }
    let mut out = Matching::default();
    for (a, b) in mate {
        let (a, b) = (a.min(b), a.max(b));
        if b >= k {
            out.to_dummy.push(vertices[a]);
        } else {
            let (x, y) = (vertices[a], vertices[b]);
            out.pairs.push((x.min(y), x.max(y)));
        }
    }
    out.pairs.sort_unstable();
    out.to_dummy.sort_unstable();
    Ok(out)
}

/// Path variant of Christofides: the odd MST vertices are matched together
/// with two dummies, the real matched pairs are added to the MST, and the
/// Euler trail between the two remaining odd vertices is shortcut.
pub fn christofides_path(ps: &PointSet) -> Result<Outcome> {
    let t = mst(ps)?.tree;
    let mut g = MultiGraph::from_tree(&t);
    let odd = g.odd_vertices();
    let m = min_weight_perfect_matching(&odd, ps, 2)?;
    for &(a, b) in &m.pairs {
        g.add(Edge::new(a, b));
    }
    let trail = euler_trail(&g)?;
    Ok(Outcome::single_pass(Tree::from_path(&shortcut(&trail))?))
}

/// Hamiltonian path of the cube of the MST rooted at vertex 0.
///
/// `P(x)` starts at `x` and ends at `x` or a child of `x`; `Q(x)` starts at
/// `x` or a child and ends at `x`:
///
/// ```text
/// P(x) = x, Q(c_1), …, Q(c_m)
/// Q(x) = P(c_m), …, P(c_1), x
/// ```
///
/// with children in ascending order, so consecutive vertices are at most
/// three tree edges apart.
pub fn cube2(ps: &PointSet) -> Result<Outcome> {
    let rt = RootedTree::new(mst(ps)?.tree, 0)?;
    Ok(Outcome::single_pass(Tree::from_path(&cube_order(&rt))?))
}

/// Vertex order of the `P(root)` construction.
pub fn cube_order(rt: &RootedTree) -> Vec<usize> {
    enum Task {
        Emit(usize),
        P(usize),
        Q(usize),
    }
    let mut out = Vec::with_capacity(rt.tree().n());
    let mut stack = vec![Task::P(rt.root())];
    while let Some(task) = stack.pop() {
        match task {
            Task::Emit(v) => out.push(v),
            Task::P(x) => {
                // pushed in reverse so x comes out first
                stack.extend(rt.children(x).iter().rev().map(|&c| Task::Q(c)));
                out.push(x);
            }
            Task::Q(x) => {
                stack.push(Task::Emit(x));
                stack.extend(rt.children(x).iter().map(|&c| Task::P(c)));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::total_weight;

    fn square() -> PointSet {
        PointSet::from_xy(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)], "square").unwrap()
    }

    fn graph(n: usize, pairs: &[(usize, usize)]) -> MultiGraph {
        MultiGraph {
            n,
            edges: pairs.iter().map(|&(a, b)| Edge::new(a, b)).collect(),
        }
    }

    #[test]
    fn euler_examples() {
        assert_eq!(
            euler_trail(&graph(3, &[(0, 1), (1, 2), (0, 1), (1, 2)])).unwrap(),
            vec![0, 1, 2, 1, 0]
        );
        assert_eq!(euler_trail(&graph(3, &[(0, 1), (1, 2)])).unwrap(), vec![0, 1, 2]);
        assert_eq!(euler_trail(&graph(3, &[(1, 2), (0, 1)])).unwrap(), vec![0, 1, 2]);
        assert!(matches!(
            euler_trail(&graph(4, &[(0, 1), (0, 2), (0, 3)])),
            Err(Error::Parity(_))
        ));
        assert!(euler_trail(&graph(4, &[(0, 1), (0, 1), (2, 3), (2, 3)])).is_err());
    }

    #[test]
    fn shortcut_examples() {
        assert_eq!(shortcut(&[1, 2, 3, 2, 1]), vec![1, 2, 3]);
        assert_eq!(shortcut(&[1, 2, 1, 3, 1, 4]), vec![1, 2, 3, 4]);
        assert_eq!(shortcut(&[4, 0, 2]), vec![4, 0, 2]);
    }

    #[test]
    fn square_paths() {
        let ps = square();
        for algo in [double_tree, christofides_path] {
            let t = algo(&ps).unwrap().tree;
            assert_eq!(total_weight(&t, &ps).unwrap(), 3.0);
            assert_eq!(t.max_degree(), 2);
        }
        // P(0) = 0, Q(1), Q(3) = 0, 2, 1, 3
        let t = cube2(&ps).unwrap().tree;
        assert_eq!(t, Tree::from_path(&[0, 2, 1, 3]).unwrap());
    }

    #[test]
    fn two_points() {
        let ps = PointSet::from_xy(&[(0.0, 0.0), (3.0, 4.0)], "pair").unwrap();
        for algo in [double_tree, christofides_path, cube2] {
            assert_eq!(algo(&ps).unwrap().tree.edges(), &[Edge::new(0, 1)]);
        }
    }

    #[test]
    fn matching_examples() {
        let ps = square();
        let m = min_weight_perfect_matching(&[1, 3], &ps, 2).unwrap();
        assert_eq!(
            m,
            Matching {
                pairs: vec![],
                to_dummy: vec![1, 3]
            }
        );
        let m = min_weight_perfect_matching(&[0, 1, 2, 3], &ps, 2).unwrap();
        assert_eq!(m.pairs.len(), 1);
        assert_eq!(m.cost(&ps), 1.0);
        let m = min_weight_perfect_matching(&[0, 1, 2, 3], &ps, 0).unwrap();
        assert_eq!(m.cost(&ps), 2.0);
        assert!(min_weight_perfect_matching(&[0, 1, 2], &ps, 0).is_err());
    }

    #[test]
    fn cube_order_on_a_star_and_a_path() {
        let star = Tree::new(4, vec![Edge::new(0, 1), Edge::new(0, 2), Edge::new(0, 3)]).unwrap();
        assert_eq!(cube_order(&RootedTree::new(star, 0).unwrap()), vec![0, 1, 2, 3]);
        let path = Tree::from_path(&[0, 1, 2, 3, 4]).unwrap();
        // P(0) = 0, Q(1) = 0, P(2), 1 = 0, 2, Q(3), 1 = 0, 2, P(4), 3, 1
        assert_eq!(cube_order(&RootedTree::new(path, 0).unwrap()), vec![0, 2, 4, 3, 1]);
    }
}
