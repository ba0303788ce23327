//! Edge-swap neighbourhoods and the local searches built on them.
//!
//! Every search starts from the tie-broken MST and repeatedly moves to a
//! neighbour (one edge removed, one non-tree edge added) until the tree meets
//! the degree bound. The whole neighbourhood is re-enumerated each iteration:
//! `O(n)` cycle edges for each of the `O(n²)` non-tree edges, each candidate
//! scored in constant time from the degree cache.

use std::cmp::Ordering;

use crate::geom::DistMatrix;
use crate::mst::mst;
use crate::{feasibility_error, DegreeBound, Edge, Error, Objective, Outcome, PointSet, Result, Tree};

/// Replace `remove` (a tree edge) by `add` (a non-tree edge whose cycle contains `remove`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSwap {
    pub remove: Edge,
    pub add: Edge,
}

impl EdgeSwap {
    pub fn inverse(self) -> EdgeSwap {
        EdgeSwap {
            remove: self.add,
            add: self.remove,
        }
    }
}

impl std::fmt::Display for EdgeSwap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "-{} +{}", self.remove, self.add)
    }
}

/// Parent pointers of a tree rooted at vertex 0.
struct Rooted {
    parent: Vec<usize>,
    depth: Vec<usize>,
}

impl Rooted {
    fn new(t: &Tree) -> Self {
        let n = t.n();
        let adj = t.adjacency();
        let mut parent = vec![usize::MAX; n];
        let mut depth = vec![0; n];
        let mut queue = std::collections::VecDeque::from([0]);
        parent[0] = 0;
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if parent[w] == usize::MAX {
                    parent[w] = v;
                    depth[w] = depth[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        Rooted { parent, depth }
    }

    /// Tree edges on the path between `a` and `b`.
    fn path(&self, mut a: usize, mut b: usize, out: &mut Vec<Edge>) {
        out.clear();
        while a != b {
            if self.depth[a] >= self.depth[b] {
                out.push(Edge::new(a, self.parent[a]));
                a = self.parent[a];
            } else {
                out.push(Edge::new(b, self.parent[b]));
                b = self.parent[b];
            }
        }
    }
}

/// Calls `f` on every swap of `t`: each non-tree edge paired with each edge
/// on the cycle it closes.
pub fn for_each_swap(t: &Tree, mut f: impl FnMut(EdgeSwap)) {
    let n = t.n();
    if n < 3 {
        return;
    }
    let rooted = Rooted::new(t);
    let mut in_tree = vec![false; n * n];
    for e in t.edges() {
        in_tree[e.u * n + e.v] = true;
    }
    let mut cycle = Vec::with_capacity(n);
    for a in 0..n {
        for b in a + 1..n {
            if in_tree[a * n + b] {
                continue;
            }
            rooted.path(a, b, &mut cycle);
            let add = Edge::new(a, b);
            for &remove in &cycle {
                f(EdgeSwap { remove, add });
            }
        }
    }
}

/// All swaps of `t`, sorted by `(remove, add)`.
pub fn neighbourhood(t: &Tree) -> Vec<EdgeSwap> {
    let mut out = Vec::new();
    for_each_swap(t, |s| out.push(s));
    out.sort_unstable();
    out
}

/// Applies `s` to a copy of `t`, rejecting swaps that would not give a tree.
pub fn apply_swap(t: &Tree, s: EdgeSwap) -> Result<Tree> {
    let n = t.n();
    if s.add.v >= n {
        return Err(Error::InvalidSwap(format!("{s}: vertex out of range")));
    }
    if !t.contains(s.remove) {
        return Err(Error::InvalidSwap(format!("{s}: {} is not a tree edge", s.remove)));
    }
    if t.contains(s.add) {
        return Err(Error::InvalidSwap(format!("{s}: {} is already a tree edge", s.add)));
    }
    let mut cycle = Vec::new();
    Rooted::new(t).path(s.add.u, s.add.v, &mut cycle);
    if !cycle.contains(&s.remove) {
        return Err(Error::InvalidSwap(format!("{s}: {} is not on the cycle", s.remove)));
    }
    let mut out = t.clone();
    out.swap_unchecked(s.remove, s.add);
    Ok(out)
}

// ---------------------------------------------------------------------------
// DNLS vertex states

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lock {
    Unlocked,
    Locked,
    SemiLocked,
}

/// Partition of the vertices into unlocked, locked and semi-locked sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LockState {
    state: Vec<Lock>,
}

impl LockState {
    pub fn new(n: usize) -> Self {
        LockState {
            state: vec![Lock::Unlocked; n],
        }
    }

    pub fn get(&self, v: usize) -> Lock {
        self.state[v]
    }

    fn with(&self, which: Lock) -> Vec<usize> {
        (0..self.state.len()).filter(|&v| self.state[v] == which).collect()
    }

    pub fn unlocked(&self) -> Vec<usize> {
        self.with(Lock::Unlocked)
    }

    pub fn locked(&self) -> Vec<usize> {
        self.with(Lock::Locked)
    }

    pub fn semi_locked(&self) -> Vec<usize> {
        self.with(Lock::SemiLocked)
    }

    pub fn unlocked_count(&self) -> usize {
        self.state.iter().filter(|&&s| s == Lock::Unlocked).count()
    }

    pub fn locked_degree_sum(&self, t: &Tree) -> usize {
        (0..self.state.len())
            .filter(|&v| self.state[v] == Lock::Locked)
            .map(|v| t.degree(v))
            .sum()
    }

    /// Termination measure; decreases lexicographically with every DNLS step.
    pub fn measure(&self, t: &Tree) -> (usize, usize) {
        (self.unlocked_count(), self.locked_degree_sum(t))
    }

    /// Locked vertices exceed the bound, semi-locked ones respect it.
    pub fn is_consistent(&self, t: &Tree, d: DegreeBound) -> bool {
        self.state.iter().enumerate().all(|(v, s)| match s {
            Lock::Unlocked => true,
            Lock::Locked => t.degree(v) > d.get(),
            Lock::SemiLocked => t.degree(v) <= d.get(),
        })
    }
}

// ---------------------------------------------------------------------------
// Candidate scoring

/// Net degree change of a swap at each touched vertex.
#[derive(Clone, Copy)]
struct DegreeDelta {
    entries: [(usize, i8); 4],
    len: usize,
}

impl DegreeDelta {
    fn of(s: EdgeSwap) -> Self {
        let mut d = DegreeDelta {
            entries: [(0, 0); 4],
            len: 0,
        };
        for (v, dv) in [(s.remove.u, -1), (s.remove.v, -1), (s.add.u, 1), (s.add.v, 1)] {
            match d.entries[..d.len].iter_mut().find(|(w, _)| *w == v) {
                Some(e) => e.1 += dv,
                None => {
                    d.entries[d.len] = (v, dv);
                    d.len += 1;
                }
            }
        }
        d
    }

    fn iter(&self) -> impl Iterator<Item = (usize, i8)> + '_ {
        self.entries[..self.len].iter().copied().filter(|&(_, dv)| dv != 0)
    }
}

fn excess(degree: usize, d: usize) -> i64 {
    degree.saturating_sub(d) as i64
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    swap: EdgeSwap,
    f: usize,
    /// Weight change `len(add) − len(remove)`.
    dw: f64,
    bottleneck: f64,
}

/// Per-iteration context for scoring swaps of the current tree.
struct Scorer<'a> {
    tree: &'a Tree,
    dm: &'a DistMatrix,
    d: usize,
    f: usize,
    top: [(f64, Option<Edge>); 2],
}

impl<'a> Scorer<'a> {
    fn new(tree: &'a Tree, dm: &'a DistMatrix, d: DegreeBound) -> Self {
        let mut top = [(f64::NEG_INFINITY, None), (f64::NEG_INFINITY, None)];
        for &e in tree.edges() {
            let l = dm.get(e.u, e.v);
            if l > top[0].0 {
                top[1] = top[0];
                top[0] = (l, Some(e));
            } else if l > top[1].0 {
                top[1] = (l, Some(e));
            }
        }
        Scorer {
            tree,
            dm,
            d: d.get(),
            f: feasibility_error(tree, d),
            top,
        }
    }

    fn score(&self, swap: EdgeSwap, delta: &DegreeDelta) -> Candidate {
        let mut f = self.f as i64;
        for (v, dv) in delta.iter() {
            let deg = self.tree.degree(v);
            f += excess((deg as i64 + dv as i64) as usize, self.d) - excess(deg, self.d);
        }
        let la = self.dm.get(swap.add.u, swap.add.v);
        let lr = self.dm.get(swap.remove.u, swap.remove.v);
        let rest = if self.top[0].1 == Some(swap.remove) {
            self.top[1].0
        } else {
            self.top[0].0
        };
        Candidate {
            swap,
            f: f as usize,
            dw: la - lr,
            bottleneck: rest.max(la),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rule {
    /// Minimum feasibility error.
    Fls,
    /// Strictly smaller feasibility error, best objective.
    Strict(Objective),
    /// Feasibility error no larger, minimum weight.
    Bcls,
    /// Lock-respecting degree decrease of an overloaded vertex, minimum weight.
    Dnls,
}

fn by_objective(a: &Candidate, b: &Candidate, objective: Objective) -> Ordering {
    let (w, bn) = (a.dw.total_cmp(&b.dw), a.bottleneck.total_cmp(&b.bottleneck));
    let primary = match objective {
        Objective::Weight => w.then(bn),
        Objective::Bottleneck => bn.then(w),
    };
    primary.then_with(|| a.swap.cmp(&b.swap))
}

fn rank(rule: Rule, a: &Candidate, b: &Candidate) -> Ordering {
    match rule {
        Rule::Fls => a.f.cmp(&b.f).then_with(|| by_objective(a, b, Objective::Weight)),
        Rule::Strict(obj) => by_objective(a, b, obj),
        Rule::Bcls | Rule::Dnls => by_objective(a, b, Objective::Weight),
    }
}

fn dnls_allows(scorer: &Scorer, locks: &LockState, delta: &DegreeDelta) -> bool {
    let mut relieves = false;
    for (v, dv) in delta.iter() {
        let deg = scorer.tree.degree(v);
        if dv < 0 {
            relieves |= deg > scorer.d;
        } else {
            match locks.get(v) {
                Lock::Locked => return false,
                Lock::SemiLocked if deg >= scorer.d => return false,
                _ => {}
            }
        }
    }
    relieves
}

fn best_swap(scorer: &Scorer, rule: Rule, locks: Option<&LockState>) -> Option<Candidate> {
    let mut best: Option<Candidate> = None;
    for_each_swap(scorer.tree, |swap| {
        let delta = DegreeDelta::of(swap);
        if rule == Rule::Dnls && !dnls_allows(scorer, locks.expect("lock state"), &delta) {
            return;
        }
        let c = scorer.score(swap, &delta);
        let admissible = match rule {
            Rule::Fls | Rule::Dnls => true,
            Rule::Strict(_) => c.f < scorer.f,
            Rule::Bcls => c.f <= scorer.f,
        };
        if admissible && best.as_ref().is_none_or(|b| rank(rule, &c, b) == Ordering::Less) {
            best = Some(c);
        }
    });
    best
}

// ---------------------------------------------------------------------------
// Searches

/// The five edge-swap local searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SwapSearch {
    Fls,
    Fwls,
    FwlsB,
    Bcls,
    Dnls,
}

impl SwapSearch {
    pub const ALL: [SwapSearch; 5] = [
        SwapSearch::Fls,
        SwapSearch::Fwls,
        SwapSearch::FwlsB,
        SwapSearch::Bcls,
        SwapSearch::Dnls,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SwapSearch::Fls => "FLS",
            SwapSearch::Fwls => "FWLS",
            SwapSearch::FwlsB => "FWLS-B",
            SwapSearch::Bcls => "BCLS",
            SwapSearch::Dnls => "DNLS",
        }
    }

    pub fn run(self, ps: &PointSet, d: DegreeBound) -> Result<Outcome> {
        self.run_observed(ps, d, |_| {})
    }

    /// Runs the search, calling `observe` after every applied swap.
    pub fn run_observed(self, ps: &PointSet, d: DegreeBound, mut observe: impl FnMut(&Step)) -> Result<Outcome> {
        let dm = DistMatrix::new(ps);
        let mut tree = mst(ps)?.tree;
        let mut locks = (self == SwapSearch::Dnls).then(|| LockState::new(ps.len()));
        let mut weight = crate::total_weight(&tree, ps)?;
        let mut iterations = 0;
        loop {
            let scorer = Scorer::new(&tree, &dm, d);
            let f = scorer.f;
            if f == 0 {
                break;
            }
            let pick = match self {
                SwapSearch::Fls => best_swap(&scorer, Rule::Fls, None).filter(|c| c.f < f),
                SwapSearch::Fwls => best_swap(&scorer, Rule::Strict(Objective::Weight), None),
                SwapSearch::FwlsB => best_swap(&scorer, Rule::Strict(Objective::Bottleneck), None),
                SwapSearch::Bcls => {
                    let relaxed = best_swap(&scorer, Rule::Bcls, None);
                    let stalled = relaxed.is_none_or(|c| c.f == f && weight + c.dw >= weight * (1.0 - 1e-12));
                    if stalled {
                        best_swap(&scorer, Rule::Strict(Objective::Weight), None)
                    } else {
                        relaxed
                    }
                }
                SwapSearch::Dnls => best_swap(&scorer, Rule::Dnls, locks.as_ref()),
            };
            let c = pick.ok_or_else(|| {
                Error::Internal(format!("{}: no admissible swap at feasibility error {f}", self.name()))
            })?;
            let relieved: Vec<usize> = DegreeDelta::of(c.swap)
                .iter()
                .filter(|&(v, dv)| dv < 0 && tree.degree(v) > d.get())
                .map(|(v, _)| v)
                .collect();
            tree.swap_unchecked(c.swap.remove, c.swap.add);
            weight = crate::total_weight(&tree, ps)?;
            iterations += 1;
            if let Some(locks) = locks.as_mut() {
                for v in relieved {
                    let over = tree.degree(v) > d.get();
                    locks.state[v] = match locks.state[v] {
                        Lock::Unlocked if over => Lock::Locked,
                        Lock::Locked if over => Lock::Locked,
                        _ => Lock::SemiLocked,
                    };
                }
            }
            observe(&Step {
                iteration: iterations,
                swap: c.swap,
                tree: &tree,
                feasibility_error: feasibility_error(&tree, d),
                locks: locks.as_ref(),
            });
        }
        Ok(Outcome { tree, iterations })
    }
}

impl std::fmt::Display for SwapSearch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// State after one applied swap.
#[derive(Debug)]
pub struct Step<'a> {
    pub iteration: usize,
    pub swap: EdgeSwap,
    pub tree: &'a Tree,
    pub feasibility_error: usize,
    /// Present for DNLS only.
    pub locks: Option<&'a LockState>,
}

/// Feasibility local search: minimum-error neighbour each step.
pub fn fls(ps: &PointSet, d: DegreeBound) -> Result<Outcome> {
    SwapSearch::Fls.run(ps, d)
}

/// Best-objective neighbour among those with strictly smaller feasibility error.
pub fn fwls(ps: &PointSet, d: DegreeBound, objective: Objective) -> Result<Outcome> {
    match objective {
        Objective::Weight => SwapSearch::Fwls.run(ps, d),
        Objective::Bottleneck => SwapSearch::FwlsB.run(ps, d),
    }
}

/// Minimum-weight neighbour with feasibility error no larger, falling back to
/// the strict step when the search stalls.
pub fn bcls(ps: &PointSet, d: DegreeBound) -> Result<Outcome> {
    SwapSearch::Bcls.run(ps, d)
}

/// Degree-decreasing search with vertex locks.
pub fn dnls(ps: &PointSet, d: DegreeBound) -> Result<Outcome> {
    SwapSearch::Dnls.run(ps, d)
}
