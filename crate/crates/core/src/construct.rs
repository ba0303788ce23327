//! Prim-style constructions: δ-Prim's, the randomised primal method (RPM)
//! driven by a tabular chromosome, and multistart hillclimbing (MHC) over
//! chromosomes.

use std::cmp::Ordering;

use rand::Rng;

use crate::gen::seeded_rng;
use crate::geom::DistMatrix;
use crate::tree::cmp_keyed;
use crate::{DegreeBound, Edge, Error, Outcome, PointSet, Result, Tree};

fn check_start(ps: &PointSet, start: usize) -> Result<()> {
    if ps.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: ps.len(),
        });
    }
    if start >= ps.len() {
        return Err(Error::Parse(format!("start vertex {start} out of range")));
    }
    Ok(())
}

/// Prim's algorithm restricted to tree vertices of degree below `d`.
pub fn delta_prim(ps: &PointSet, d: DegreeBound, start: usize) -> Result<Tree> {
    check_start(ps, start)?;
    let n = ps.len();
    let delta = d.get();
    let mut in_tree = vec![false; n];
    let mut degree = vec![0usize; n];
    // cheapest admissible attachment of each outside vertex
    let mut best: Vec<Option<(f64, Edge)>> = vec![None; n];
    let offer = |best: &mut Vec<Option<(f64, Edge)>>, u: usize, v: usize| {
        let cand = (ps.dist(u, v), Edge::new(u, v));
        if best[v].is_none_or(|(l, e)| cmp_keyed(cand.0, cand.1, l, e) == Ordering::Less) {
            best[v] = Some(cand);
        }
    };
    in_tree[start] = true;
    for v in 0..n {
        if v != start {
            offer(&mut best, start, v);
        }
    }
    let mut edges = Vec::with_capacity(n - 1);
    for _ in 1..n {
        let (v, (_, e)) = (0..n)
            .filter(|&v| !in_tree[v])
            .map(|v| (v, best[v].expect("admissible attachment")))
            .min_by(|a, b| cmp_keyed(a.1 .0, a.1 .1, b.1 .0, b.1 .1))
            .expect("outside vertex");
        let u = e.other(v);
        edges.push(e);
        in_tree[v] = true;
        degree[u] += 1;
        degree[v] += 1;
        for w in 0..n {
            if in_tree[w] {
                continue;
            }
            if degree[u] >= delta && best[w].is_some_and(|(_, e)| e.touches(u)) {
                best[w] = None;
                for x in (0..n).filter(|&x| in_tree[x] && degree[x] < delta) {
                    offer(&mut best, x, w);
                }
            } else if degree[v] < delta {
                offer(&mut best, v, w);
            }
        }
    }
    Tree::new(n, edges)
}

// ---------------------------------------------------------------------------
// Chromosomes

/// Default parameter of the truncated geometric allele law.
pub const DEFAULT_ALLELE_P: f64 = 0.5;

/// `n × δ` table of alleles in `[1, n]`; column `j` is used while the row's
/// vertex has tree degree `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chromosome {
    n: usize,
    delta: usize,
    alleles: Vec<usize>,
}

impl Chromosome {
    pub fn new(n: usize, delta: usize, alleles: Vec<usize>) -> Result<Self> {
        if alleles.len() != n * delta || delta == 0 {
            return Err(Error::ChromosomeShape {
                rows: n,
                cols: delta,
                n: alleles.len(),
                delta,
            });
        }
        if let Some(a) = alleles.iter().find(|&&a| a == 0 || a > n) {
            return Err(Error::Parse(format!("allele {a} outside [1, {n}]")));
        }
        Ok(Chromosome { n, delta, alleles })
    }

    /// Every allele one; RPM then reproduces δ-Prim's.
    pub fn ones(n: usize, d: DegreeBound) -> Self {
        Chromosome {
            n,
            delta: d.get(),
            alleles: vec![1; n * d.get()],
        }
    }

    pub fn rows(&self) -> usize {
        self.n
    }

    pub fn cols(&self) -> usize {
        self.delta
    }

    pub fn get(&self, row: usize, col: usize) -> usize {
        self.alleles[row * self.delta + col]
    }

    pub fn set(&mut self, row: usize, col: usize, allele: usize) -> Result<()> {
        if allele == 0 || allele > self.n {
            return Err(Error::Parse(format!("allele {allele} outside [1, {}]", self.n)));
        }
        self.alleles[row * self.delta + col] = allele;
        Ok(())
    }

    /// Number of cells that differ from `other`.
    pub fn distance(&self, other: &Chromosome) -> usize {
        self.alleles.iter().zip(&other.alleles).filter(|(a, b)| a != b).count()
    }
}

/// Draw from `P(k) ∝ (1 − p)·p^(k−1)` on `1..=n` by inversion.
pub fn sample_allele<R: Rng + ?Sized>(n: usize, p: f64, rng: &mut R) -> usize {
    let u: f64 = rng.random();
    let x = (1.0 - u * (1.0 - p.powi(n as i32))).ln() / p.ln();
    (x.floor() as usize + 1).clamp(1, n)
}

pub fn chromosome_init<R: Rng + ?Sized>(n: usize, d: DegreeBound, rng: &mut R) -> Chromosome {
    chromosome_init_with(n, d, DEFAULT_ALLELE_P, rng)
}

pub fn chromosome_init_with<R: Rng + ?Sized>(n: usize, d: DegreeBound, p: f64, rng: &mut R) -> Chromosome {
    let alleles = (0..n * d.get()).map(|_| sample_allele(n, p, rng)).collect();
    Chromosome {
        n,
        delta: d.get(),
        alleles,
    }
}

/// Copy of `c` with one uniformly chosen cell redrawn.
pub fn chromosome_neighbour<R: Rng + ?Sized>(c: &Chromosome, rng: &mut R) -> Chromosome {
    chromosome_neighbour_with(c, DEFAULT_ALLELE_P, rng)
}

pub fn chromosome_neighbour_with<R: Rng + ?Sized>(c: &Chromosome, p: f64, rng: &mut R) -> Chromosome {
    let mut out = c.clone();
    let cell = rng.random_range(0..out.alleles.len());
    out.alleles[cell] = sample_allele(c.n, p, rng);
    out
}

// ---------------------------------------------------------------------------
// RPM

/// Per-vertex neighbour lists sorted by `(length, edge)`, shared by every RPM
/// evaluation on one instance.
#[derive(Debug, Clone)]
pub struct SortedLists {
    dm: DistMatrix,
    lists: Vec<Vec<usize>>,
}

impl SortedLists {
    pub fn new(ps: &PointSet) -> Self {
        let dm = DistMatrix::new(ps);
        let n = ps.len();
        let lists = (0..n)
            .map(|i| {
                let mut l: Vec<usize> = (0..n).filter(|&j| j != i).collect();
                // for a fixed endpoint the edge order is the order of the other endpoint
                l.sort_by(|&a, &b| dm.get(i, a).total_cmp(&dm.get(i, b)).then(a.cmp(&b)));
                l
            })
            .collect();
        SortedLists { dm, lists }
    }
}

pub fn rpm(ps: &PointSet, d: DegreeBound, c: &Chromosome, start: usize) -> Result<Tree> {
    rpm_with(&SortedLists::new(ps), ps, d, c, start)
}

/// RPM reusing precomputed sorted lists.
pub fn rpm_with(lists: &SortedLists, ps: &PointSet, d: DegreeBound, c: &Chromosome, start: usize) -> Result<Tree> {
    check_start(ps, start)?;
    let n = ps.len();
    let delta = d.get();
    if c.n != n || c.delta != delta {
        return Err(Error::ChromosomeShape {
            rows: c.n,
            cols: c.delta,
            n,
            delta,
        });
    }
    let mut in_tree = vec![false; n];
    let mut degree = vec![0usize; n];
    // first list position that may still be outside the tree
    let mut head = vec![0usize; n];
    let mut members = vec![start];
    in_tree[start] = true;
    let mut edges = Vec::with_capacity(n - 1);
    let mut outside = n - 1;
    while outside > 0 {
        let mut pick: Option<(f64, Edge, usize)> = None;
        for &i in &members {
            if degree[i] >= delta {
                continue;
            }
            let list = &lists.lists[i];
            while in_tree[list[head[i]]] {
                head[i] += 1;
            }
            let want = c.get(i, degree[i]).min(outside);
            let mut seen = 0;
            let mut nominee = list[head[i]];
            for &j in &list[head[i]..] {
                if !in_tree[j] {
                    seen += 1;
                    nominee = j;
                    if seen == want {
                        break;
                    }
                }
            }
            let (l, e) = (lists.dm.get(i, nominee), Edge::new(i, nominee));
            if pick.is_none_or(|(pl, pe, _)| cmp_keyed(l, e, pl, pe) == Ordering::Less) {
                pick = Some((l, e, nominee));
            }
        }
        let (_, e, v) = pick.ok_or_else(|| Error::Internal("RPM ran out of open vertices".into()))?;
        edges.push(e);
        degree[e.u] += 1;
        degree[e.v] += 1;
        in_tree[v] = true;
        members.push(v);
        outside -= 1;
    }
    Tree::new(n, edges)
}

// ---------------------------------------------------------------------------
// MHC

#[derive(Debug, Clone, PartialEq)]
pub struct MhcParams {
    /// Evaluation limit.
    pub m: usize,
    /// Consecutive non-improving evaluations before a restart.
    pub r: usize,
    pub seed: u64,
    /// Allele law parameter.
    pub p: f64,
    pub start: usize,
}

impl Default for MhcParams {
    fn default() -> Self {
        MhcParams {
            m: 5000,
            r: 250,
            seed: 0,
            p: DEFAULT_ALLELE_P,
            start: 0,
        }
    }
}

impl MhcParams {
    pub fn with_seed(seed: u64) -> Self {
        MhcParams {
            seed,
            ..MhcParams::default()
        }
    }
}

/// Multistart hillclimbing over chromosomes. `Outcome::iterations` counts
/// RPM evaluations, restarts included.
pub fn mhc(ps: &PointSet, d: DegreeBound, p: &MhcParams) -> Result<Outcome> {
    mhc_observed(ps, d, p, |_| {})
}

/// As [`mhc`], reporting the weight of every evaluated tree.
pub fn mhc_observed(ps: &PointSet, d: DegreeBound, p: &MhcParams, mut observe: impl FnMut(f64)) -> Result<Outcome> {
    if p.m == 0 || p.r == 0 {
        return Err(Error::Parse("MHC needs m ≥ 1 and r ≥ 1".into()));
    }
    if !(p.p > 0.0 && p.p < 1.0) {
        return Err(Error::Parse(format!("allele parameter {} outside (0, 1)", p.p)));
    }
    let n = ps.len();
    let lists = SortedLists::new(ps);
    let mut rng = seeded_rng(p.seed);
    let mut evaluations = 0usize;
    let mut evaluate = |c: &Chromosome| -> Result<(Tree, f64)> {
        let t = rpm_with(&lists, ps, d, c, p.start)?;
        let w = crate::total_weight(&t, ps)?;
        evaluations += 1;
        observe(w);
        Ok((t, w))
    };

    let mut a = chromosome_init_with(n, d, p.p, &mut rng);
    let (mut best, mut best_w) = evaluate(&a)?;
    let (mut cur, mut cur_w) = (best.clone(), best_w);
    let mut failures = 1;
    for _ in 0..p.m {
        let a2 = chromosome_neighbour_with(&a, p.p, &mut rng);
        let (t2, w2) = evaluate(&a2)?;
        if w2 < cur_w {
            (cur, cur_w, a) = (t2, w2, a2);
            failures = 1;
        } else {
            failures += 1;
            if failures > p.r {
                a = chromosome_init_with(n, d, p.p, &mut rng);
                (cur, cur_w) = evaluate(&a)?;
                failures = 1;
            }
        }
        if cur_w < best_w {
            (best, best_w) = (cur.clone(), cur_w);
        }
    }
    Ok(Outcome {
        tree: best,
        iterations: evaluations,
    })
}
