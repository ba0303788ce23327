//! Benchmark harness: runs algorithms over instance suites, records per-run
//! results, aggregates mean ratios against the MST and writes CSV and
//! plot data.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::approx::{chan4, kry};
use crate::construct::{delta_prim, mhc, MhcParams};
use crate::gen::{derive_seed, filter_degree4, generate, GenConfig, InstanceKind};
use crate::hampath::{christofides_path, cube2, double_tree};
use crate::mst::mst;
use crate::swap::SwapSearch;
use crate::{bottleneck, feasibility_error, total_weight, DegreeBound, Error, Objective, Outcome, PointSet, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Fls,
    Fwls,
    FwlsB,
    Bcls,
    Dnls,
    Prim,
    Mhc,
    Kry,
    KryB,
    Chan4,
    Dt,
    Christofides,
    Cube2,
}

impl Algorithm {
    /// Every algorithm; the position in this list feeds the per-run seed.
    pub const ALL: [Algorithm; 13] = [
        Algorithm::Fls,
        Algorithm::Fwls,
        Algorithm::FwlsB,
        Algorithm::Bcls,
        Algorithm::Dnls,
        Algorithm::Prim,
        Algorithm::Mhc,
        Algorithm::Kry,
        Algorithm::KryB,
        Algorithm::Chan4,
        Algorithm::Dt,
        Algorithm::Christofides,
        Algorithm::Cube2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Fls => "FLS",
            Algorithm::Fwls => "FWLS",
            Algorithm::FwlsB => "FWLS-B",
            Algorithm::Bcls => "BCLS",
            Algorithm::Dnls => "DNLS",
            Algorithm::Prim => "Prim",
            Algorithm::Mhc => "MHC",
            Algorithm::Kry => "KRY",
            Algorithm::KryB => "KRY-B",
            Algorithm::Chan4 => "Chan4",
            Algorithm::Dt => "DT",
            Algorithm::Christofides => "Christofides",
            Algorithm::Cube2 => "Cube2",
        }
    }

    fn index(self) -> u64 {
        Algorithm::ALL.iter().position(|&a| a == self).unwrap() as u64
    }

    pub fn is_swap_search(self) -> bool {
        self.swap_search().is_some()
    }

    fn swap_search(self) -> Option<SwapSearch> {
        Some(match self {
            Algorithm::Fls => SwapSearch::Fls,
            Algorithm::Fwls => SwapSearch::Fwls,
            Algorithm::FwlsB => SwapSearch::FwlsB,
            Algorithm::Bcls => SwapSearch::Bcls,
            Algorithm::Dnls => SwapSearch::Dnls,
            _ => return None,
        })
    }

    /// Whether the algorithm targets degree bound `delta`.
    pub fn supports(self, delta: usize) -> bool {
        match self {
            Algorithm::Fls
            | Algorithm::Fwls
            | Algorithm::FwlsB
            | Algorithm::Bcls
            | Algorithm::Dnls
            | Algorithm::Prim
            | Algorithm::Mhc => (2..=4).contains(&delta),
            Algorithm::Dt | Algorithm::Christofides | Algorithm::Cube2 => delta == 2,
            Algorithm::Kry | Algorithm::KryB => delta == 3,
            Algorithm::Chan4 => delta == 4,
        }
    }

    pub fn for_delta(delta: usize) -> Vec<Algorithm> {
        Algorithm::ALL.into_iter().filter(|a| a.supports(delta)).collect()
    }

    /// Runs on `ps`; `seed` only matters for MHC.
    pub fn run(self, ps: &PointSet, d: DegreeBound, seed: u64, cfg: &RunConfig) -> Result<Outcome> {
        if !self.supports(d.get()) {
            return Err(Error::Incompatible {
                algorithm: self.name().into(),
                delta: d.get(),
            });
        }
        if let Some(search) = self.swap_search() {
            return search.run(ps, d);
        }
        match self {
            Algorithm::Prim => Ok(Outcome::single_pass(delta_prim(ps, d, 0)?)),
            Algorithm::Mhc => mhc(
                ps,
                d,
                &MhcParams {
                    seed,
                    ..cfg.mhc.clone()
                },
            ),
            Algorithm::Kry => kry(ps, Objective::Weight),
            Algorithm::KryB => kry(ps, Objective::Bottleneck),
            Algorithm::Chan4 => chan4(ps),
            Algorithm::Dt => double_tree(ps),
            Algorithm::Christofides => christofides_path(ps),
            Algorithm::Cube2 => cube2(ps),
            _ => unreachable!("swap searches handled above"),
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        let key = key.trim_start_matches(|c: char| c.is_ascii_digit() || c == '-' || c == 'δ');
        let alias = match key {
            "prim" | "prim's" | "prims" | "delta-prim" | "delta-prims" => Some(Algorithm::Prim),
            "fwlsb" => Some(Algorithm::FwlsB),
            "kryb" => Some(Algorithm::KryB),
            "double-tree" => Some(Algorithm::Dt),
            _ => None,
        };
        alias
            .or_else(|| Algorithm::ALL.into_iter().find(|a| a.name().eq_ignore_ascii_case(key)))
            .ok_or_else(|| Error::Parse(format!("unknown algorithm `{s}`")))
    }
}

/// Parses `all` or a comma-separated list of algorithm names.
pub fn parse_algorithms(list: &str) -> Result<Vec<Algorithm>> {
    if list.trim().eq_ignore_ascii_case("all") {
        return Ok(Algorithm::ALL.to_vec());
    }
    let mut out: Vec<Algorithm> = list
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    out.sort();
    out.dedup();
    Ok(out)
}

/// Settings shared by every run in a suite.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    /// MHC parameters; the seed is replaced per run.
    pub mhc: MhcParams,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub algorithm: String,
    pub instance_id: String,
    pub n: usize,
    pub delta: usize,
    pub seed: u64,
    pub weight: f64,
    pub bottleneck: f64,
    pub mst_weight: f64,
    pub mst_bottleneck: f64,
    pub iterations: usize,
    pub elapsed_ms: f64,
}

impl RunRecord {
    pub fn weight_ratio(&self) -> f64 {
        self.weight / self.mst_weight
    }

    pub fn bottleneck_ratio(&self) -> f64 {
        self.bottleneck / self.mst_bottleneck
    }

    /// Instance kind encoded as the prefix of the instance id.
    pub fn kind(&self) -> String {
        self.instance_id.split('-').next().unwrap_or_default().to_owned()
    }
}

const GUARD: f64 = 1e-9;

/// Runs one algorithm on one instance and validates the output tree.
pub fn run_one(alg: Algorithm, ps: &PointSet, d: DegreeBound, seed: u64, cfg: &RunConfig) -> Result<RunRecord> {
    let base = mst(ps)?.tree;
    let (mst_weight, mst_bottleneck) = (total_weight(&base, ps)?, bottleneck(&base, ps)?);
    let clock = Instant::now();
    let out = alg.run(ps, d, seed, cfg)?;
    let elapsed_ms = clock.elapsed().as_secs_f64() * 1e3;
    let t = &out.tree;
    t.check_invariants()?;
    if t.n() != ps.len() || feasibility_error(t, d) != 0 {
        return Err(Error::Internal(format!(
            "{alg} returned an infeasible tree on {}",
            ps.id()
        )));
    }
    let (weight, bn) = (total_weight(t, ps)?, bottleneck(t, ps)?);
    if weight < mst_weight - GUARD || bn < mst_bottleneck - GUARD {
        return Err(Error::Internal(format!("{alg} beat the MST on {}", ps.id())));
    }
    Ok(RunRecord {
        algorithm: alg.name().to_owned(),
        instance_id: ps.id().to_owned(),
        n: ps.len(),
        delta: d.get(),
        seed,
        weight,
        bottleneck: bn,
        mst_weight,
        mst_bottleneck,
        iterations: out.iterations,
        elapsed_ms,
    })
}

fn sort_records(records: &mut [RunRecord]) {
    let order = |r: &RunRecord| {
        r.algorithm
            .parse::<Algorithm>()
            .map(Algorithm::index)
            .unwrap_or(u64::MAX)
    };
    records.sort_by(|a, b| {
        (a.delta, a.n, &a.instance_id, order(a), &a.algorithm).cmp(&(
            b.delta,
            b.n,
            &b.instance_id,
            order(b),
            &b.algorithm,
        ))
    });
}

/// Runs every algorithm on every instance (in parallel) and returns the
/// records in a deterministic order. Instance `i` and algorithm `a` run with
/// seed `derive_seed(derive_seed(master, i), index of a)`.
pub fn run_instances(
    instances: &[PointSet],
    d: DegreeBound,
    algorithms: &[Algorithm],
    master_seed: u64,
    cfg: &RunConfig,
) -> Result<Vec<RunRecord>> {
    if let Some(a) = algorithms.iter().find(|a| !a.supports(d.get())) {
        return Err(Error::Incompatible {
            algorithm: a.name().into(),
            delta: d.get(),
        });
    }
    let cells: Vec<(usize, Algorithm)> = (0..instances.len())
        .flat_map(|i| algorithms.iter().map(move |&a| (i, a)))
        .collect();
    let mut records = cells
        .into_par_iter()
        .map(|(i, a)| {
            let seed = derive_seed(derive_seed(master_seed, i as u64), a.index());
            run_one(a, &instances[i], d, seed, cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    sort_records(&mut records);
    Ok(records)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SuiteKind {
    Uniform,
    Special,
    /// Uniform instances whose MST has a vertex of degree ≥ 4.
    UniformFiltered,
}

impl std::str::FromStr for SuiteKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(SuiteKind::Uniform),
            "special" => Ok(SuiteKind::Special),
            "uniform-filtered" => Ok(SuiteKind::UniformFiltered),
            other => Err(Error::Parse(format!("unknown suite kind `{other}`"))),
        }
    }
}

/// Instances of one suite cell. Uniform-filtered draws one candidate per
/// seed and keeps those passing [`filter_degree4`].
pub fn suite_instances(kind: SuiteKind, n: usize, seeds: &[u64]) -> Result<Vec<PointSet>> {
    let gen_kind = match kind {
        SuiteKind::Special => InstanceKind::Special,
        _ => InstanceKind::Uniform,
    };
    let pool = seeds
        .par_iter()
        .map(|&s| generate(gen_kind, &GenConfig::new(n, s)))
        .collect::<Result<Vec<_>>>()?;
    Ok(match kind {
        SuiteKind::UniformFiltered => filter_degree4(pool),
        _ => pool,
    })
}

/// Generates the instances of every `(n, δ)` cell and runs the algorithms
/// compatible with `δ` among `algorithms`.
pub fn run_suite(
    kind: SuiteKind,
    deltas: &[usize],
    n_values: &[usize],
    seeds: &[u64],
    algorithms: &[Algorithm],
    master_seed: u64,
    cfg: &RunConfig,
) -> Result<Vec<RunRecord>> {
    let mut records = Vec::new();
    for &n in n_values {
        let instances = suite_instances(kind, n, seeds)?;
        for &delta in deltas {
            let d = DegreeBound::new(delta)?;
            records.extend(run_instances(&instances, d, algorithms, master_seed, cfg)?);
        }
    }
    sort_records(&mut records);
    Ok(records)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub algorithm: String,
    pub n: usize,
    pub mean_weight_ratio: f64,
    pub mean_bottleneck_ratio: f64,
    pub count: usize,
    pub delta: usize,
    pub kind: String,
}

type GroupKey = (String, usize, String, usize);

/// Mean ratios grouped by `(kind, δ, algorithm, n)`.
pub fn aggregate(records: &[RunRecord]) -> Vec<AggregateRow> {
    let mut groups: BTreeMap<GroupKey, (f64, f64, usize)> = BTreeMap::new();
    for r in records {
        let g = groups.entry((r.kind(), r.delta, r.algorithm.clone(), r.n)).or_default();
        g.0 += r.weight_ratio();
        g.1 += r.bottleneck_ratio();
        g.2 += 1;
    }
    groups
        .into_iter()
        .map(|((kind, delta, algorithm, n), (w, b, count))| AggregateRow {
            algorithm,
            n,
            mean_weight_ratio: w / count as f64,
            mean_bottleneck_ratio: b / count as f64,
            count,
            delta,
            kind,
        })
        .collect()
}

const RECORD_HEADER: [&str; 11] = [
    "algorithm",
    "instance_id",
    "n",
    "delta",
    "seed",
    "weight",
    "bottleneck",
    "mst_weight",
    "mst_bottleneck",
    "iterations",
    "elapsed_ms",
];
const ROW_HEADER: [&str; 7] = [
    "algorithm",
    "n",
    "mean_weight_ratio",
    "mean_bottleneck_ratio",
    "count",
    "delta",
    "kind",
];

fn write_csv<T: Serialize, W: std::io::Write>(out: W, header: &[&str], items: &[T]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(header)?;
    for item in items {
        w.serialize(item)?;
    }
    w.flush()?;
    Ok(())
}

fn read_csv<T: for<'de> Deserialize<'de>, R: std::io::Read>(input: R) -> Result<Vec<T>> {
    csv::Reader::from_reader(input)
        .deserialize()
        .map(|r| r.map_err(Error::from))
        .collect()
}

pub fn write_records<W: std::io::Write>(out: W, records: &[RunRecord]) -> Result<()> {
    write_csv(out, &RECORD_HEADER, records)
}

pub fn read_records<R: std::io::Read>(input: R) -> Result<Vec<RunRecord>> {
    read_csv(input)
}

pub fn write_rows<W: std::io::Write>(out: W, rows: &[AggregateRow]) -> Result<()> {
    write_csv(out, &ROW_HEADER, rows)
}

pub fn read_rows<R: std::io::Read>(input: R) -> Result<Vec<AggregateRow>> {
    read_csv(input)
}

pub fn save_records(path: &Path, records: &[RunRecord]) -> Result<()> {
    write_records(std::fs::File::create(path)?, records)
}

pub fn load_records(path: &Path) -> Result<Vec<RunRecord>> {
    read_records(std::fs::File::open(path)?)
}

pub fn save_rows(path: &Path, rows: &[AggregateRow]) -> Result<()> {
    write_rows(std::fs::File::create(path)?, rows)
}

/// One `<n> <ratio>` line per row, per `(kind, δ, metric, algorithm)`.
pub fn plot_data(rows: &[AggregateRow]) -> BTreeMap<String, String> {
    let mut files: BTreeMap<String, String> = BTreeMap::new();
    for r in rows {
        for (metric, value) in [("weight", r.mean_weight_ratio), ("bottleneck", r.mean_bottleneck_ratio)] {
            let name = format!("{}-d{}-{metric}-{}.dat", r.kind, r.delta, r.algorithm);
            files.entry(name).or_default().push_str(&format!("{} {value}\n", r.n));
        }
    }
    files
}

/// Writes [`plot_data`] into `dir`, returning the file names.
pub fn write_plot_data(dir: &Path, rows: &[AggregateRow]) -> Result<Vec<String>> {
    std::fs::create_dir_all(dir)?;
    let files = plot_data(rows);
    for (name, body) in &files {
        std::fs::write(dir.join(name), body)?;
    }
    Ok(files.into_keys().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(alg: &str, n: usize, weight: f64, bottleneck: f64) -> RunRecord {
        RunRecord {
            algorithm: alg.into(),
            instance_id: format!("uniform-n{n}-s0"),
            n,
            delta: 2,
            seed: 0,
            weight,
            bottleneck,
            mst_weight: 10.0,
            mst_bottleneck: 2.0,
            iterations: 0,
            elapsed_ms: 0.0,
        }
    }

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert_eq!("2-Prim's".parse::<Algorithm>().unwrap(), Algorithm::Prim);
        assert_eq!("fwls-b".parse::<Algorithm>().unwrap(), Algorithm::FwlsB);
        assert!("nope".parse::<Algorithm>().is_err());
        assert_eq!(parse_algorithms("all").unwrap().len(), 13);
        assert_eq!(
            parse_algorithms("DT,Cube2,DT").unwrap(),
            vec![Algorithm::Dt, Algorithm::Cube2]
        );
    }

    #[test]
    fn compatibility_sets() {
        assert_eq!(Algorithm::for_delta(2).len(), 10);
        assert_eq!(Algorithm::for_delta(3).len(), 9);
        assert_eq!(Algorithm::for_delta(4).len(), 8);
        let ps = PointSet::from_xy(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)], "t").unwrap();
        let err = Algorithm::Kry.run(&ps, DegreeBound::new(2).unwrap(), 0, &RunConfig::default());
        assert!(matches!(err, Err(Error::Incompatible { .. })));
    }

    #[test]
    fn aggregation_means() {
        let rows = aggregate(&[record("DT", 10, 10.0, 2.0), record("DT", 10, 12.0, 2.0)]);
        assert_eq!(rows.len(), 1);
        assert!((rows[0].mean_weight_ratio - 1.1).abs() < 1e-12);
        assert_eq!(rows[0].count, 2);
        assert_eq!(rows[0].kind, "uniform");
        let rows = aggregate(&[record("DT", 10, 13.0, 3.0)]);
        assert_eq!((rows[0].mean_weight_ratio, rows[0].mean_bottleneck_ratio), (1.3, 1.5));
    }

    #[test]
    fn csv_round_trip_and_empty_header() {
        let records = vec![record("DT", 10, 10.5, 2.25), record("Cube2", 20, 11.0, 3.0)];
        let mut buf = Vec::new();
        write_records(&mut buf, &records).unwrap();
        assert_eq!(read_records(&buf[..]).unwrap(), records);

        let mut buf = Vec::new();
        write_records(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), RECORD_HEADER.join(",") + "\n");

        let rows = aggregate(&records);
        let mut buf = Vec::new();
        write_rows(&mut buf, &rows).unwrap();
        assert!(String::from_utf8(buf.clone())
            .unwrap()
            .starts_with("algorithm,n,mean_weight_ratio,"));
        assert_eq!(read_rows(&buf[..]).unwrap(), rows);
    }

    #[test]
    fn plot_lines() {
        let rows = aggregate(&[record("DT", 10, 10.0, 2.0), record("DT", 20, 12.0, 3.0)]);
        let files = plot_data(&rows);
        assert_eq!(files["uniform-d2-weight-DT.dat"], "10 1\n20 1.2\n");
        assert_eq!(files["uniform-d2-bottleneck-DT.dat"], "10 1\n20 1.5\n");
    }

    #[test]
    fn suite_counts_and_determinism() {
        let cfg = RunConfig {
            mhc: MhcParams {
                m: 50,
                r: 10,
                ..MhcParams::default()
            },
        };
        let algos = Algorithm::for_delta(2);
        let a = run_suite(SuiteKind::Uniform, &[2], &[10], &[1, 2, 3], &algos, 7, &cfg).unwrap();
        assert_eq!(a.len(), 30);
        let b = run_suite(SuiteKind::Uniform, &[2], &[10], &[1, 2, 3], &algos, 7, &cfg).unwrap();
        let strip = |rs: &[RunRecord]| {
            rs.iter()
                .map(|r| RunRecord {
                    elapsed_ms: 0.0,
                    ..r.clone()
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(&a), strip(&b));
        let one = run_suite(SuiteKind::Special, &[4], &[11], &[5], &[Algorithm::Chan4], 7, &cfg).unwrap();
        assert_eq!(one.len(), 1);
        assert!(run_suite(SuiteKind::Uniform, &[3], &[10], &[1], &[Algorithm::Dt], 7, &cfg).is_err());
    }
}
