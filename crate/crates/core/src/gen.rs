//! Instance generation: uniform random instances, star points whose MST is a
//! star `S_D`, special instances with planted stars, and the instance file
//! format.

use std::io::{BufRead, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::mst::mst;
use crate::{Edge, Error, Point, PointSet, Result};

/// Deterministic RNG for a seed.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream seed for item `index` under `master` (splitmix64 finaliser).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(0x9E37_79B9_7F4A_7C15)
        .wrapping_add(index.wrapping_mul(0xBF58_476D_1CE4_E5B9));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

// ---------------------------------------------------------------------------
// Star points

/// A star around `center`: arm `i` leaves at `orientation + Σ_{j<i} angles[j]`
/// degrees with length `radii[i]`, so `angles[i]` separates arms `i` and `i+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct StarSpec {
    pub angles: Vec<f64>,
    pub radii: Vec<f64>,
    pub center: Point,
    pub orientation: f64,
}

/// Multiplicative limit on a single augmentation along an unbounded side of
/// the allowable range.
const UNBOUNDED_STEP: f64 = 2.0;

impl StarSpec {
    pub fn arms(&self) -> usize {
        self.angles.len()
    }

    /// Centre followed by the radial points in arm order.
    pub fn points(&self) -> Vec<Point> {
        let mut out = Vec::with_capacity(self.arms() + 1);
        out.push(self.center);
        let mut heading = self.orientation;
        for (theta, r) in self.angles.iter().zip(&self.radii) {
            let (s, c) = heading.to_radians().sin_cos();
            out.push(Point::new(self.center.x + r * c, self.center.y + r * s));
            heading += theta;
        }
        out
    }

    pub fn longest_arm(&self) -> f64 {
        self.radii.iter().copied().fold(0.0, f64::max)
    }

    /// Checks the angle, radius and adjacent-arm star conditions.
    pub fn validate(&self) -> Result<()> {
        let d = self.arms();
        if d < 2 || self.radii.len() != d {
            return Err(Error::Star(format!("{d} angles for {} radii", self.radii.len())));
        }
        let sum: f64 = self.angles.iter().sum();
        if (sum - 360.0).abs() > 1e-9 {
            return Err(Error::Star(format!("angles sum to {sum}")));
        }
        if let Some(t) = self.angles.iter().find(|&&t| t < 60.0 - 1e-9) {
            return Err(Error::Star(format!("angle {t} below 60 degrees")));
        }
        if let Some(r) = self
            .radii
            .iter()
            .find(|&&r| r.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater))
        {
            return Err(Error::Star(format!("radius {r} is not positive")));
        }
        let pts = self.points();
        for i in 0..d {
            let j = (i + 1) % d;
            let side = crate::distance(pts[1 + i], pts[1 + j]);
            let arm = self.radii[i].max(self.radii[j]);
            if side < arm * (1.0 - 1e-9) {
                return Err(Error::Star(format!(
                    "arms {i} and {j}: opposite side {side} shorter than arm {arm}"
                )));
            }
        }
        Ok(())
    }

    /// Runs the four generation stages: random angles, `D − 2` rounds of
    /// augmentation, scaling to `longest` and a random rotation. The centre is
    /// at the origin.
    pub fn sample<R: Rng + ?Sized>(arms: usize, longest: f64, rng: &mut R) -> Result<StarSpec> {
        if !(4..=5).contains(&arms) {
            return Err(Error::Star(format!("stars have 4 or 5 arms, not {arms}")));
        }
        if !(longest > 0.0 && longest.is_finite()) {
            return Err(Error::Star(format!("longest edge {longest} must be positive")));
        }
        let angles = sample_angles(arms, rng);
        let mut radii = vec![1.0; arms];
        for _round in 0..arms - 2 {
            for i in 0..arms {
                let prev = (i + arms - 1) % arms;
                let next = (i + 1) % arms;
                let range = allowable_range(angles[prev], angles[i], radii[prev], radii[next])?;
                radii[i] = range.sample_around(radii[i], rng);
            }
        }
        let scale = longest / radii.iter().copied().fold(0.0, f64::max);
        radii.iter_mut().for_each(|r| *r *= scale);
        // pin the longest arm so the scaled maximum is exactly `longest`
        let top = (0..arms).max_by(|&a, &b| radii[a].total_cmp(&radii[b])).unwrap();
        radii[top] = longest;
        let orientation = rng.random_range(0.0..360.0);
        let spec = StarSpec {
            angles,
            radii,
            center: Point::new(0.0, 0.0),
            orientation,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Angles `60° + s_i` with `s` uniform on the simplex summing to `360° − 60°·D`.
fn sample_angles<R: Rng + ?Sized>(arms: usize, rng: &mut R) -> Vec<f64> {
    let slack = 360.0 - 60.0 * arms as f64;
    let spacings: Vec<f64> = (0..arms).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let total: f64 = spacings.iter().sum();
    let mut angles: Vec<f64> = spacings.iter().map(|s| 60.0 + slack * s / total).collect();
    // absorb rounding so the angles sum to 360 exactly
    let drift: f64 = angles.iter().sum::<f64>() - 360.0;
    let widest = (0..arms).max_by(|&a, &b| angles[a].total_cmp(&angles[b])).unwrap();
    angles[widest] -= drift;
    angles
}

/// Closed interval of radial distances; `lo == 0` and `hi == ∞` mean unbounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    fn sample_around<R: Rng + ?Sized>(&self, current: f64, rng: &mut R) -> f64 {
        let lo = if self.lo > 0.0 {
            self.lo
        } else {
            current / UNBOUNDED_STEP
        };
        let hi = if self.hi.is_finite() {
            self.hi
        } else {
            current * UNBOUNDED_STEP
        };
        if lo < hi {
            rng.random_range(lo..=hi)
        } else {
            lo
        }
    }
}

/// Twice the cosine of an angle in `[60°, 90°)`, never above one so 60°
/// arms give the exact ratio 1.
fn ratio_limit(theta: f64) -> f64 {
    (2.0 * theta.to_radians().cos()).min(1.0)
}

fn side_range(theta: f64, d: f64) -> Interval {
    if theta >= 90.0 {
        Interval {
            lo: 0.0,
            hi: f64::INFINITY,
        }
    } else {
        let c = ratio_limit(theta);
        Interval { lo: c * d, hi: d / c }
    }
}

/// Radial distances a point may take while its neighbours stay fixed: the
/// intersection of the range imposed by the previous arm (angle `theta_prev`,
/// distance `d_prev`) and the one imposed by the next arm.
pub fn allowable_range(theta_prev: f64, theta_next: f64, d_prev: f64, d_next: f64) -> Result<Interval> {
    if theta_prev < 60.0 - 1e-9 || theta_next < 60.0 - 1e-9 {
        return Err(Error::Star(format!(
            "angles {theta_prev}, {theta_next} below 60 degrees"
        )));
    }
    if !(d_prev > 0.0 && d_next > 0.0) {
        return Err(Error::Star(format!("distances {d_prev}, {d_next} must be positive")));
    }
    let left = side_range(theta_prev, d_prev);
    let right = side_range(theta_next, d_next);
    let out = Interval {
        lo: left.lo.max(right.lo),
        hi: left.hi.min(right.hi),
    };
    if out.lo > out.hi {
        return Err(Error::Star(format!("empty allowable range [{}, {}]", out.lo, out.hi)));
    }
    Ok(out)
}

/// `D + 1` points (centre first) whose MST is the star `S_D` with longest
/// edge `longest`.
pub fn generate_star<R: Rng + ?Sized>(arms: usize, longest: f64, rng: &mut R) -> Result<Vec<Point>> {
    Ok(StarSpec::sample(arms, longest, rng)?.points())
}

// ---------------------------------------------------------------------------
// Instances

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    Uniform,
    Special,
}

impl std::fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            InstanceKind::Uniform => "uniform",
            InstanceKind::Special => "special",
        })
    }
}

impl std::str::FromStr for InstanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(InstanceKind::Uniform),
            "special" => Ok(InstanceKind::Special),
            other => Err(Error::Parse(format!("unknown instance kind `{other}`"))),
        }
    }
}

/// Identifier shared by generated instances and their files.
pub fn instance_id(kind: InstanceKind, n: usize, seed: u64) -> String {
    format!("{kind}-n{n}-s{seed}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub n: usize,
    /// Side of the square grid `[0, grid]²`.
    pub grid: f64,
    pub seed: u64,
    /// Longest star edge as a fraction of its subgrid side; the edge is drawn
    /// uniformly from `[cap·side/2, cap·side)`. Must lie in `(0, 0.5)`.
    pub star_edge_cap: f64,
}

impl GenConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        GenConfig {
            n,
            grid: 10_000.0,
            seed,
            star_edge_cap: 0.25,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::TooFewPoints { needed: 2, got: self.n });
        }
        if !(self.grid > 0.0 && self.grid.is_finite()) {
            return Err(Error::Parse(format!("grid side {} must be positive", self.grid)));
        }
        if !(self.star_edge_cap > 0.0 && self.star_edge_cap < 0.5) {
            return Err(Error::Parse(format!(
                "star edge cap {} outside (0, 0.5)",
                self.star_edge_cap
            )));
        }
        Ok(())
    }
}

/// `n` distinct integer points drawn uniformly from `[0, grid]²`.
pub fn generate_uniform<R: Rng + ?Sized>(cfg: &GenConfig, rng: &mut R) -> Result<PointSet> {
    cfg.validate()?;
    let side = cfg.grid.floor() as i64;
    let cells = (side as f64 + 1.0).powi(2);
    if cfg.n as f64 > cells {
        return Err(Error::Parse(format!("{} distinct points do not fit the grid", cfg.n)));
    }
    let mut seen = std::collections::HashSet::with_capacity(cfg.n);
    let mut points = Vec::with_capacity(cfg.n);
    while points.len() < cfg.n {
        let (x, y) = (rng.random_range(0..=side), rng.random_range(0..=side));
        if seen.insert((x, y)) {
            points.push(Point::new(x as f64, y as f64));
        }
    }
    PointSet::new(points, instance_id(InstanceKind::Uniform, cfg.n, cfg.seed))
}

/// Axis-aligned square `[x, x + side] × [y, y + side]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Square {
    pub x: f64,
    pub y: f64,
    pub side: f64,
}

impl Square {
    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.x && p.x <= self.x + self.side && p.y >= self.y && p.y <= self.y + self.side
    }

    pub fn overlaps(&self, o: &Square) -> bool {
        self.x <= o.x + o.side && o.x <= self.x + self.side && self.y <= o.y + o.side && o.y <= self.y + self.side
    }

    pub fn center(&self) -> Point {
        Point::new(self.x + self.side / 2.0, self.y + self.side / 2.0)
    }
}

/// A star planted in a special instance.
#[derive(Debug, Clone, PartialEq)]
pub struct PlacedStar {
    pub arms: usize,
    pub square: Square,
    /// Indices of the centre and then the radial points in the final instance.
    pub indices: Vec<usize>,
}

/// A special instance together with the layout that produced it.
#[derive(Debug, Clone)]
pub struct SpecialLayout {
    pub points: PointSet,
    pub stars: Vec<PlacedStar>,
}

const PLACEMENT_RETRIES: usize = 200;
const LAYOUT_RETRIES: usize = 20;
const FREE_POINT_RETRIES: usize = 20;

fn round_half_up(x: f64) -> usize {
    (x + 0.5).floor() as usize
}

/// Numbers of `S_4` and `S_5` stars planted in a special instance of size `n`.
pub fn star_counts(n: usize) -> (usize, usize) {
    (round_half_up(0.10 * n as f64), round_half_up(0.05 * n as f64))
}

/// Special instance; see [`generate_special_layout`].
pub fn generate_special<R: Rng + ?Sized>(cfg: &GenConfig, rng: &mut R) -> Result<PointSet> {
    Ok(generate_special_layout(cfg, rng)?.points)
}

/// Plants `round(0.10·n)` stars `S_4` and `round(0.05·n)` stars `S_5`, each in
/// its own blocked square subgrid with the centre at the square's centre, and
/// fills the rest with integer points drawn uniformly outside every square.
///
/// The tie-broken MST of the result is checked to contain every planted star
/// with its centre at exactly degree `D`; free points are redrawn (and after
/// that the whole layout) until it does.
pub fn generate_special_layout<R: Rng + ?Sized>(cfg: &GenConfig, rng: &mut R) -> Result<SpecialLayout> {
    cfg.validate()?;
    let n = cfg.n;
    let (n4, n5) = star_counts(n);
    let star_points = 5 * n4 + 6 * n5;
    if n < 11 || star_points > n {
        return Err(Error::TooFewPoints {
            needed: 11.max(star_points),
            got: n,
        });
    }
    let arms: Vec<usize> = std::iter::repeat_n(4, n4).chain(std::iter::repeat_n(5, n5)).collect();
    let per_side = (arms.len() as f64).sqrt().ceil();
    let side_max = cfg.grid / (2.0 * per_side);
    let side_min = side_max / 2.0;

    for _ in 0..LAYOUT_RETRIES {
        let mut squares: Vec<Square> = Vec::with_capacity(arms.len());
        let mut points: Vec<Point> = Vec::with_capacity(n);
        for &d in &arms {
            let square = place_square(&squares, side_min, side_max, cfg.grid, rng)?;
            let c = cfg.star_edge_cap * square.side;
            let longest = rng.random_range(c / 2.0..c);
            let mut spec = StarSpec::sample(d, longest, rng)?;
            spec.center = square.center();
            points.extend(spec.points());
            squares.push(square);
        }
        for _ in 0..FREE_POINT_RETRIES {
            let mut all = points.clone();
            fill_free_points(&mut all, &squares, n, cfg.grid, rng)?;
            let candidate = PointSet::new(all, instance_id(InstanceKind::Special, n, cfg.seed))?;
            if stars_survive(&candidate, &arms)? {
                return Ok(shuffle_layout(candidate, &arms, &squares, rng));
            }
        }
    }
    Err(Error::Placement(LAYOUT_RETRIES * FREE_POINT_RETRIES))
}

fn place_square<R: Rng + ?Sized>(
    taken: &[Square],
    side_min: f64,
    side_max: f64,
    grid: f64,
    rng: &mut R,
) -> Result<Square> {
    for _ in 0..PLACEMENT_RETRIES {
        let side = rng.random_range(side_min..=side_max);
        let x = rng.random_range(0.0..=grid - side);
        let y = rng.random_range(0.0..=grid - side);
        let sq = Square { x, y, side };
        if taken.iter().all(|t| !t.overlaps(&sq)) {
            return Ok(sq);
        }
    }
    Err(Error::Placement(PLACEMENT_RETRIES))
}

fn fill_free_points<R: Rng + ?Sized>(
    points: &mut Vec<Point>,
    squares: &[Square],
    n: usize,
    grid: f64,
    rng: &mut R,
) -> Result<()> {
    let side = grid.floor() as i64;
    let mut seen: std::collections::HashSet<(i64, i64)> = std::collections::HashSet::new();
    let mut attempts = 0usize;
    while points.len() < n {
        attempts += 1;
        if attempts > 1000 * n {
            return Err(Error::Placement(attempts));
        }
        let (x, y) = (rng.random_range(0..=side), rng.random_range(0..=side));
        let p = Point::new(x as f64, y as f64);
        if squares.iter().any(|s| s.contains(p)) || !seen.insert((x, y)) {
            continue;
        }
        points.push(p);
    }
    Ok(())
}

/// Stars occupy consecutive index blocks (centre first) in `ps`.
fn stars_survive(ps: &PointSet, arms: &[usize]) -> Result<bool> {
    let tree = mst(ps)?.tree;
    let mut start = 0;
    for &d in arms {
        if tree.degree(start) != d {
            return Ok(false);
        }
        if !(1..=d).all(|k| tree.contains(Edge::new(start, start + k))) {
            return Ok(false);
        }
        start += d + 1;
    }
    Ok(true)
}

fn shuffle_layout<R: Rng + ?Sized>(ps: PointSet, arms: &[usize], squares: &[Square], rng: &mut R) -> SpecialLayout {
    let n = ps.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    // order[new] = old
    let mut position = vec![0; n];
    for (new, &old) in order.iter().enumerate() {
        position[old] = new;
    }
    let id = ps.id().to_owned();
    let points: Vec<Point> = order.iter().map(|&old| ps.point(old)).collect();
    let mut stars = Vec::with_capacity(arms.len());
    let mut start = 0;
    for (&d, &square) in arms.iter().zip(squares) {
        stars.push(PlacedStar {
            arms: d,
            square,
            indices: (start..=start + d).map(|old| position[old]).collect(),
        });
        start += d + 1;
    }
    let points = PointSet::new(points, id).expect("a permutation of valid points");
    SpecialLayout { points, stars }
}

/// Keeps the instances whose tie-broken MST has a vertex of degree at least 4.
pub fn filter_degree4(instances: Vec<PointSet>) -> Vec<PointSet> {
    instances
        .into_iter()
        .filter(|ps| mst(ps).map(|r| r.max_degree >= 4).unwrap_or(false))
        .collect()
}

/// Generates an instance of `kind` from `cfg.seed`.
pub fn generate(kind: InstanceKind, cfg: &GenConfig) -> Result<PointSet> {
    let mut rng = seeded_rng(cfg.seed);
    match kind {
        InstanceKind::Uniform => generate_uniform(cfg, &mut rng),
        InstanceKind::Special => generate_special(cfg, &mut rng),
    }
}

// ---------------------------------------------------------------------------
// Instance files
//
//   # dmst-instance v1 n=<n> seed=<seed> kind=<uniform|special>
//   <x> <y>            (n lines, 17 significant digits)

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceHeader {
    pub n: usize,
    pub seed: u64,
    pub kind: InstanceKind,
}

impl InstanceHeader {
    pub fn id(&self) -> String {
        instance_id(self.kind, self.n, self.seed)
    }
}

pub fn write_instance<W: Write>(mut out: W, ps: &PointSet, seed: u64, kind: InstanceKind) -> Result<()> {
    writeln!(out, "# dmst-instance v1 n={} seed={seed} kind={kind}", ps.len())?;
    for p in ps.points() {
        writeln!(out, "{:.16e} {:.16e}", p.x, p.y)?;
    }
    Ok(())
}

pub fn save_instance(path: &Path, ps: &PointSet, seed: u64, kind: InstanceKind) -> Result<()> {
    let file = std::io::BufWriter::new(std::fs::File::create(path)?);
    write_instance(file, ps, seed, kind)
}

fn parse_header(line: &str) -> Result<InstanceHeader> {
    let bad = || Error::Parse(format!("malformed instance header `{line}`"));
    let mut fields = line.split_whitespace();
    if fields.next() != Some("#") || fields.next() != Some("dmst-instance") || fields.next() != Some("v1") {
        return Err(bad());
    }
    let mut value = |key: &str| -> Result<String> {
        let field = fields.next().ok_or_else(bad)?;
        field
            .strip_prefix(key)
            .and_then(|rest| rest.strip_prefix('='))
            .map(str::to_owned)
            .ok_or_else(bad)
    };
    let n = value("n")?.parse().map_err(|_| bad())?;
    let seed = value("seed")?.parse().map_err(|_| bad())?;
    let kind = value("kind")?.parse()?;
    if fields.next().is_some() {
        return Err(bad());
    }
    Ok(InstanceHeader { n, seed, kind })
}

/// Parses an instance; rejects malformed lines, wrong point counts and
/// duplicate points.
pub fn read_instance<R: BufRead>(input: R) -> Result<(InstanceHeader, PointSet)> {
    let mut lines = input.lines();
    let header = parse_header(&lines.next().ok_or_else(|| Error::Parse("empty instance".into()))??)?;
    let mut points = Vec::with_capacity(header.n);
    for (lineno, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let bad = || Error::Parse(format!("line {}: malformed point `{line}`", lineno + 2));
        let mut it = line.split_whitespace();
        let x: f64 = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        let y: f64 = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if it.next().is_some() {
            return Err(bad());
        }
        points.push(Point::new(x, y));
    }
    if points.len() != header.n {
        return Err(Error::Parse(format!(
            "header announces {} points, found {}",
            header.n,
            points.len()
        )));
    }
    let ps = PointSet::new(points, header.id())?;
    Ok((header, ps))
}

pub fn load_instance(path: &Path) -> Result<(InstanceHeader, PointSet)> {
    read_instance(std::io::BufReader::new(std::fs::File::open(path)?))
}
