//! Python module `dmst`: instances, trees and every algorithm of `dmst-core`.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use dmst_core::bench::{Algorithm, RunConfig};
use dmst_core::construct::MhcParams;
use dmst_core::gen::{self, GenConfig, InstanceKind};
use dmst_core::{mst as core_mst, DegreeBound, Objective};

fn err(e: dmst_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse<T: std::str::FromStr<Err = dmst_core::Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(err)
}

/// A set of distinct points in the plane.
#[pyclass(module = "dmst", frozen)]
pub struct PointSet {
    inner: dmst_core::PointSet,
}

#[pymethods]
impl PointSet {
    #[new]
    #[pyo3(signature = (coords, id = "points".to_owned()))]
    fn new(coords: Vec<(f64, f64)>, id: String) -> PyResult<Self> {
        Ok(PointSet {
            inner: dmst_core::PointSet::from_xy(&coords, id).map_err(err)?,
        })
    }

    #[getter]
    fn id(&self) -> &str {
        self.inner.id()
    }

    fn coords(&self) -> Vec<(f64, f64)> {
        self.inner.points().iter().map(|p| (p.x, p.y)).collect()
    }

    fn dist(&self, i: usize, j: usize) -> PyResult<f64> {
        if i >= self.inner.len() || j >= self.inner.len() {
            return Err(PyValueError::new_err("vertex out of range"));
        }
        Ok(self.inner.dist(i, j))
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("PointSet(id={:?}, n={})", self.inner.id(), self.inner.len())
    }
}

/// A spanning tree over vertices `0..n`.
#[pyclass(module = "dmst", frozen)]
pub struct Tree {
    inner: dmst_core::Tree,
}

#[pymethods]
impl Tree {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        let edges = edges.into_iter().map(|(u, v)| dmst_core::Edge::new(u, v)).collect();
        Ok(Tree {
            inner: dmst_core::Tree::new(n, edges).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().iter().map(|e| (e.u, e.v)).collect()
    }

    fn degree(&self, v: usize) -> PyResult<usize> {
        if v >= self.inner.n() {
            return Err(PyValueError::new_err("vertex out of range"));
        }
        Ok(self.inner.degree(v))
    }

    fn max_degree(&self) -> usize {
        self.inner.max_degree()
    }

    fn weight(&self, ps: &PointSet) -> PyResult<f64> {
        dmst_core::total_weight(&self.inner, &ps.inner).map_err(err)
    }

    fn bottleneck(&self, ps: &PointSet) -> PyResult<f64> {
        dmst_core::bottleneck(&self.inner, &ps.inner).map_err(err)
    }

    /// Σ max(deg(v) − δ, 0).
    fn feasibility_error(&self, delta: usize) -> PyResult<usize> {
        Ok(dmst_core::feasibility_error(
            &self.inner,
            DegreeBound::relaxed(delta).map_err(err)?,
        ))
    }

    fn __eq__(&self, other: &Tree) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("Tree(n={}, max_degree={})", self.inner.n(), self.inner.max_degree())
    }
}

/// Generates a `uniform` or `special` instance.
#[pyfunction]
#[pyo3(signature = (kind, n, seed = 0, grid = 10_000.0))]
fn generate(kind: &str, n: usize, seed: u64, grid: f64) -> PyResult<PointSet> {
    let cfg = GenConfig {
        grid,
        ..GenConfig::new(n, seed)
    };
    Ok(PointSet {
        inner: gen::generate(parse::<InstanceKind>(kind)?, &cfg).map_err(err)?,
    })
}

#[pyfunction]
fn save_instance(path: std::path::PathBuf, ps: &PointSet, seed: u64, kind: &str) -> PyResult<()> {
    gen::save_instance(&path, &ps.inner, seed, parse(kind)?).map_err(err)
}

#[pyfunction]
fn load_instance(path: std::path::PathBuf) -> PyResult<PointSet> {
    Ok(PointSet {
        inner: gen::load_instance(&path).map_err(err)?.1,
    })
}

/// The minimum spanning tree under the `(length, u, v)` edge order.
#[pyfunction]
fn mst(ps: &PointSet) -> PyResult<Tree> {
    Ok(Tree {
        inner: core_mst::mst(&ps.inner).map_err(err)?.tree,
    })
}

/// Names of the algorithms that handle `delta`, or of all of them.
#[pyfunction]
#[pyo3(signature = (delta = None))]
fn algorithms(delta: Option<usize>) -> Vec<&'static str> {
    Algorithm::ALL
        .iter()
        .filter(|a| delta.is_none_or(|d| a.supports(d)))
        .map(|a| a.name())
        .collect()
}

/// Runs one algorithm; returns the tree and its iteration count.
#[pyfunction]
#[pyo3(signature = (algorithm, ps, delta, seed = 0, mhc_m = 5000, mhc_r = 250))]
fn run(
    py: Python<'_>,
    algorithm: &str,
    ps: &PointSet,
    delta: usize,
    seed: u64,
    mhc_m: usize,
    mhc_r: usize,
) -> PyResult<(Tree, usize)> {
    let alg: Algorithm = parse(algorithm)?;
    let d = DegreeBound::new(delta).map_err(err)?;
    let cfg = RunConfig {
        mhc: MhcParams {
            m: mhc_m,
            r: mhc_r,
            ..MhcParams::default()
        },
    };
    let inner = ps.inner.clone();
    let out = py.detach(move || alg.run(&inner, d, seed, &cfg)).map_err(err)?;
    Ok((Tree { inner: out.tree }, out.iterations))
}

/// Optimal degree-bounded tree by enumeration (n ≤ cap).
#[pyfunction]
#[pyo3(signature = (ps, delta, objective = "weight", cap = core_mst::DEFAULT_TREE_CAP))]
fn exact_dmst(ps: &PointSet, delta: usize, objective: &str, cap: usize) -> PyResult<Tree> {
    let d = DegreeBound::relaxed(delta).map_err(err)?;
    let t = core_mst::exact_dmst_capped(&ps.inner, d, parse::<Objective>(objective)?, cap).map_err(err)?;
    Ok(Tree { inner: t })
}

/// Optimal Hamiltonian path by subset dynamic programming (n ≤ cap).
#[pyfunction]
#[pyo3(signature = (ps, objective = "weight", cap = core_mst::DEFAULT_PATH_CAP))]
fn exact_hampath(ps: &PointSet, objective: &str, cap: usize) -> PyResult<Tree> {
    let t = core_mst::exact_hampath_capped(&ps.inner, parse::<Objective>(objective)?, cap).map_err(err)?;
    Ok(Tree { inner: t })
}

#[pymodule]
pub fn dmst(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PointSet>()?;
    m.add_class::<Tree>()?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(save_instance, m)?)?;
    m.add_function(wrap_pyfunction!(load_instance, m)?)?;
    m.add_function(wrap_pyfunction!(mst, m)?)?;
    m.add_function(wrap_pyfunction!(algorithms, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(exact_dmst, m)?)?;
    m.add_function(wrap_pyfunction!(exact_hampath, m)?)?;
    Ok(())
}
