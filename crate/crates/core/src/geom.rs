//! Points and point sets in the Euclidean plane.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point { x, y }
    }
}

/// Euclidean distance.
pub fn distance(p: Point, q: Point) -> f64 {
    (p.x - q.x).hypot(p.y - q.y)
}

/// An instance: at least two pairwise distinct points.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Point>,
    id: String,
}

impl PointSet {
    pub fn new(points: Vec<Point>, id: impl Into<String>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::TooFewPoints {
                needed: 2,
                got: points.len(),
            });
        }
        if let Some(i) = points.iter().position(|p| !p.x.is_finite() || !p.y.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        // adding 0.0 folds -0.0 into 0.0 so equal points sort adjacently
        let key = |p: &Point| (p.x + 0.0, p.y + 0.0);
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| {
            let (ax, ay) = key(&points[a]);
            let (bx, by) = key(&points[b]);
            ax.total_cmp(&bx).then(ay.total_cmp(&by))
        });
        for w in order.windows(2) {
            if points[w[0]] == points[w[1]] {
                return Err(Error::DuplicatePoint(w[0].min(w[1]), w[0].max(w[1])));
            }
        }
        Ok(PointSet { points, id: id.into() })
    }

    pub fn from_xy(coords: &[(f64, f64)], id: impl Into<String>) -> Result<Self> {
        Self::new(coords.iter().copied().map(Point::from).collect(), id)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> Point {
        self.points[i]
    }

    /// Distance between points `i` and `j`.
    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        distance(self.points[i], self.points[j])
    }

    /// The same points under a new identifier.
    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }
}

/// Dense distance cache for the algorithms that evaluate many edges repeatedly.
#[derive(Debug, Clone)]
pub(crate) struct DistMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistMatrix {
    pub(crate) fn new(ps: &PointSet) -> Self {
        let n = ps.len();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let w = ps.dist(i, j);
                d[i * n + j] = w;
                d[j * n + i] = w;
            }
        }
        DistMatrix { n, d }
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }
}
