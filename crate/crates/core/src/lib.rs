//! Degree-bounded Euclidean spanning trees.
//!
//! Heuristics and approximation algorithms for the minimum-weight (δ-MST) and
//! minimum-bottleneck (δ-MBST) spanning tree problems on planar point sets
//! with maximum degree δ ∈ {2, 3, 4}, together with the instance generators,
//! exact oracles for tiny instances and the benchmark harness used to compare
//! them.
//!
//! Every algorithm takes a [`PointSet`] (the complete Euclidean graph on its
//! points is implied) and returns a [`Tree`]. All algorithms are deterministic
//! given their inputs and seed; equal-length edges are always ordered by
//! `(length, u, v)`.

pub mod approx;
pub mod bench;
pub mod construct;
mod error;
pub mod gen;
pub mod geom;
pub mod hampath;
pub mod mst;
pub mod swap;
pub mod tree;

pub use error::{Error, Result};
pub use geom::{distance, Point, PointSet};
pub use tree::{bottleneck, feasibility_error, total_weight, DegreeBound, Edge, Tree};

/// Objective a search or oracle optimises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Objective {
    /// Sum of edge lengths.
    Weight,
    /// Length of the longest edge.
    Bottleneck,
}

impl std::fmt::Display for Objective {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Objective::Weight => f.write_str("weight"),
            Objective::Bottleneck => f.write_str("bottleneck"),
        }
    }
}

impl std::str::FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weight" => Ok(Objective::Weight),
            "bottleneck" => Ok(Objective::Bottleneck),
            other => Err(Error::Parse(format!("unknown objective `{other}`"))),
        }
    }
}

/// A tree returned by an algorithm together with the number of main-loop
/// iterations it took (edge swaps for local searches, RPM evaluations for
/// MHC, zero for single-pass constructions).
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub tree: Tree,
    pub iterations: usize,
}

impl Outcome {
    pub fn single_pass(tree: Tree) -> Self {
        Outcome { tree, iterations: 0 }
    }
}
