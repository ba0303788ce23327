//! Recursive local-swap approximations on a rooted MST: KRY and KRY-B for
//! δ = 3, Chan4 for δ = 4.

use itertools::Itertools;

use crate::mst::mst;
use crate::{Edge, Error, Objective, Outcome, PointSet, Result, Tree};

/// A tree with a designated root; children are listed in ascending order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedTree {
    tree: Tree,
    root: usize,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
}

impl RootedTree {
    pub fn new(tree: Tree, root: usize) -> Result<Self> {
        let n = tree.n();
        if root >= n {
            return Err(Error::InvalidTree(format!("root {root} outside 0..{n}")));
        }
        let adj = tree.adjacency();
        let mut parent = vec![None; n];
        let mut children = vec![Vec::new(); n];
        let mut seen = vec![false; n];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(v);
                    children[v].push(w);
                    stack.push(w);
                }
            }
        }
        Ok(RootedTree {
            tree,
            root,
            parent,
            children,
        })
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent[v]
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }
}

/// Path order over `kids` and its cost key.
fn best_path(ps: &PointSet, v: usize, kids: &[usize], objective: Objective) -> Vec<usize> {
    let key = |perm: &[usize]| {
        let (mut sum, mut max) = (0.0f64, 0.0f64);
        for w in perm.windows(2) {
            let l = ps.dist(w[0], w[1]);
            sum += l;
            max = max.max(l);
        }
        let head = ps.dist(v, perm[0]);
        match objective {
            Objective::Weight => [sum, head, 0.0],
            Objective::Bottleneck => [max, sum, head],
        }
    };
    let mut best: Option<([f64; 3], Vec<usize>)> = None;
    for perm in kids.iter().copied().permutations(kids.len()) {
        let k = key(&perm);
        let better = best.as_ref().is_none_or(|(bk, _)| {
            k.iter().zip(bk).map(|(a, b)| a.total_cmp(b)).find(|o| o.is_ne()) == Some(std::cmp::Ordering::Less)
        });
        if better {
            best = Some((k, perm));
        }
    }
    best.map(|(_, p)| p).unwrap_or_default()
}

/// KRY (weight) or KRY-B (bottleneck) on the MST rooted at vertex 0.
pub fn kry(ps: &PointSet, objective: Objective) -> Result<Outcome> {
    kry_rooted(ps, objective, 0)
}

/// At each vertex `v` with children `v_1..v_k`, keeps `(v, v_1)` and replaces
/// the other child edges by the path `v_1 → … → v_k`, with the child order
/// minimising the path weight (or bottleneck, then weight); then recurses
/// into every child's original subtree.
pub fn kry_rooted(ps: &PointSet, objective: Objective, root: usize) -> Result<Outcome> {
    let rt = RootedTree::new(mst(ps)?.tree, root)?;
    let mut edges = Vec::with_capacity(ps.len() - 1);
    let mut stack = vec![rt.root()];
    while let Some(v) = stack.pop() {
        let kids = rt.children(v);
        stack.extend(kids.iter().rev());
        if kids.is_empty() {
            continue;
        }
        let order = if kids.len() == 1 {
            kids.to_vec()
        } else {
            best_path(ps, v, kids, objective)
        };
        edges.push(Edge::new(v, order[0]));
        edges.extend(order.windows(2).map(|w| Edge::new(w[0], w[1])));
    }
    Ok(Outcome::single_pass(Tree::new(ps.len(), edges)?))
}

/// `(added weight, added bottleneck)` and the `(host, child)` pairs.
type Arrangement = ((f64, f64), Vec<(usize, usize)>);

/// Ways of splitting `kids` into at most `chains` ordered chains, each chain
/// hanging off `v` by its first member with the rest linked sibling to
/// sibling. Returns the cheapest arrangement as `(host, child)` pairs.
fn best_chains(ps: &PointSet, v: usize, kids: &[usize], chains: usize) -> Vec<(usize, usize)> {
    let k = kids.len();
    let mut best: Option<Arrangement> = None;
    for perm in kids.iter().copied().permutations(k) {
        // bit i of `cuts` set: perm[i + 1] starts a new chain
        for cuts in 0u32..(1 << (k - 1)) {
            if cuts.count_ones() as usize + 1 > chains {
                continue;
            }
            let (mut added, mut worst) = (0.0f64, 0.0f64);
            let mut links = Vec::with_capacity(k);
            links.push((v, perm[0]));
            for i in 1..k {
                if cuts >> (i - 1) & 1 == 1 {
                    links.push((v, perm[i]));
                } else {
                    let l = ps.dist(perm[i - 1], perm[i]);
                    added += l - ps.dist(v, perm[i]);
                    worst = worst.max(l);
                    links.push((perm[i - 1], perm[i]));
                }
            }
            let better = best
                .as_ref()
                .is_none_or(|((ba, bw), _)| added.total_cmp(ba).then(worst.total_cmp(bw)).is_lt());
            if better {
                best = Some(((added, worst), links));
            }
        }
    }
    best.map(|(_, l)| l).unwrap_or_default()
}

/// Chan's 4-MST restructure on the MST rooted at vertex 0.
pub fn chan4(ps: &PointSet) -> Result<Outcome> {
    chan4_rooted(ps, 0)
}

/// Top-down over the rooted MST. A vertex already carrying `load` edges from
/// above (its parent or predecessor sibling, plus a successor sibling) keeps
/// all child edges when they fit within degree 4; otherwise its children are
/// arranged into at most `4 − load` chains hanging off it, choosing the
/// arrangement of least added weight, then least added bottleneck.
pub fn chan4_rooted(ps: &PointSet, root: usize) -> Result<Outcome> {
    let rt = RootedTree::new(mst(ps)?.tree, root)?;
    let mut edges = Vec::with_capacity(ps.len() - 1);
    let mut stack = vec![(rt.root(), 0usize)];
    while let Some((v, load)) = stack.pop() {
        let kids = rt.children(v);
        let capacity = 4 - load;
        if kids.len() <= capacity {
            for &c in kids.iter().rev() {
                edges.push(Edge::new(v, c));
                stack.push((c, 1));
            }
            continue;
        }
        let links = best_chains(ps, v, kids, capacity);
        let hosts: Vec<usize> = links.iter().map(|&(h, _)| h).filter(|&h| h != v).collect();
        for &(host, c) in links.iter().rev() {
            edges.push(Edge::new(host, c));
            stack.push((c, 1 + usize::from(hosts.contains(&c))));
        }
    }
    Ok(Outcome::single_pass(Tree::new(ps.len(), edges)?))
}
