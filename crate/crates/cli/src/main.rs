use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use dmst_core::bench::{self, parse_algorithms, RunConfig, SuiteKind};
use dmst_core::construct::MhcParams;
use dmst_core::gen::{self, GenConfig, InstanceKind};
use dmst_core::mst::{exact_dmst_capped, exact_hampath_capped, mst, DEFAULT_PATH_CAP, DEFAULT_TREE_CAP};
use dmst_core::{bottleneck, total_weight, DegreeBound, Objective, PointSet};

#[derive(Parser)]
#[command(name = "dmst", version, about = "Degree-bounded Euclidean spanning tree heuristics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate instance files.
    Gen(GenArgs),
    /// Run algorithms over instance files and write per-run records.
    Run(RunArgs),
    /// Average ratios per (kind, delta, algorithm, n).
    Aggregate(AggregateArgs),
    /// Exact optimum on tiny instances.
    Oracle(OracleArgs),
    /// Generate and run a whole suite in memory.
    Suite(SuiteArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    kind: InstanceKind,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Seed of the first instance; instance i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 10_000.0)]
    grid: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MhcArgs {
    /// MHC evaluation limit.
    #[arg(long, default_value_t = 5000)]
    mhc_m: usize,
    /// MHC reset number.
    #[arg(long, default_value_t = 250)]
    mhc_r: usize,
}

impl MhcArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            mhc: MhcParams {
                m: self.mhc_m,
                r: self.mhc_r,
                ..MhcParams::default()
            },
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Instance file or directory of instance files.
    #[arg(long)]
    instances: PathBuf,
    #[arg(long)]
    delta: usize,
    /// Comma-separated algorithm names, or `all` for every algorithm supporting delta.
    #[arg(long, default_value = "all")]
    algos: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    mhc: MhcArgs,
}

#[derive(Args)]
struct AggregateArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Directory for `<kind>-d<delta>-<metric>-<algorithm>.dat` files.
    #[arg(long)]
    plot_data: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    instances: PathBuf,
    #[arg(long)]
    delta: usize,
    #[arg(long, default_value = "weight")]
    objective: Objective,
    /// Largest n for the tree enumeration.
    #[arg(long, default_value_t = DEFAULT_TREE_CAP)]
    cap: usize,
}

#[derive(Args)]
struct SuiteArgs {
    /// uniform, special or uniform-filtered.
    #[arg(long)]
    kind: SuiteKind,
    #[arg(long, value_delimiter = ',', default_value = "2")]
    deltas: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "100")]
    n: Vec<usize>,
    /// Instances per n (seeds 0..count).
    #[arg(long, default_value_t = 30)]
    count: u64,
    #[arg(long, default_value = "all")]
    algos: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    mhc: MhcArgs,
}

fn instance_files(path: &Path) -> Result<Vec<PathBuf>> {
    if path.is_file() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(path)
        .with_context(|| format!("reading {}", path.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    files.retain(|p| p.extension().is_some_and(|e| e == "txt"));
    files.sort();
    if files.is_empty() {
        bail!("no instance files (*.txt) in {}", path.display());
    }
    Ok(files)
}

fn load_all(path: &Path) -> Result<Vec<PointSet>> {
    instance_files(path)?
        .iter()
        .map(|f| {
            Ok(gen::load_instance(f)
                .with_context(|| format!("loading {}", f.display()))?
                .1)
        })
        .collect()
}

fn algorithms_for(list: &str, delta: usize) -> Result<Vec<bench::Algorithm>> {
    let all = list.trim().eq_ignore_ascii_case("all");
    let algos = parse_algorithms(list)?;
    Ok(if all {
        algos.into_iter().filter(|a| a.supports(delta)).collect()
    } else {
        algos
    })
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    std::fs::create_dir_all(&a.out)?;
    for i in 0..a.count as u64 {
        let seed = a.seed + i;
        let cfg = GenConfig {
            grid: a.grid,
            ..GenConfig::new(a.n, seed)
        };
        let ps = gen::generate(a.kind, &cfg)?;
        let path = a.out.join(format!("{}.txt", ps.id()));
        gen::save_instance(&path, &ps, seed, a.kind)?;
    }
    println!(
        "wrote {} {} instance(s) with n = {} to {}",
        a.count,
        a.kind,
        a.n,
        a.out.display()
    );
    Ok(())
}

fn cmd_run(a: RunArgs) -> Result<()> {
    let d = DegreeBound::new(a.delta)?;
    let instances = load_all(&a.instances)?;
    let algos = algorithms_for(&a.algos, a.delta)?;
    let records = bench::run_instances(&instances, d, &algos, a.seed, &a.mhc.config())?;
    bench::save_records(&a.out, &records)?;
    println!("wrote {} record(s) to {}", records.len(), a.out.display());
    Ok(())
}

fn cmd_aggregate(a: AggregateArgs) -> Result<()> {
    let records = bench::load_records(&a.input)?;
    let rows = bench::aggregate(&records);
    bench::save_rows(&a.out, &rows)?;
    if let Some(dir) = a.plot_data {
        let files = bench::write_plot_data(&dir, &rows)?;
        println!("wrote {} plot file(s) to {}", files.len(), dir.display());
    }
    println!("wrote {} row(s) to {}", rows.len(), a.out.display());
    Ok(())
}

fn cmd_oracle(a: OracleArgs) -> Result<()> {
    let d = DegreeBound::relaxed(a.delta)?;
    println!("instance_id,n,objective,weight,bottleneck,mst_weight,mst_bottleneck");
    for ps in load_all(&a.instances)? {
        let t = if a.delta == 2 && ps.len() > a.cap {
            exact_hampath_capped(&ps, a.objective, DEFAULT_PATH_CAP.max(a.cap))?
        } else {
            exact_dmst_capped(&ps, d, a.objective, a.cap)?
        };
        let m = mst(&ps)?.tree;
        println!(
            "{},{},{},{},{},{},{}",
            ps.id(),
            ps.len(),
            a.objective,
            total_weight(&t, &ps)?,
            bottleneck(&t, &ps)?,
            total_weight(&m, &ps)?,
            bottleneck(&m, &ps)?
        );
    }
    Ok(())
}

fn cmd_suite(a: SuiteArgs) -> Result<()> {
    let seeds: Vec<u64> = (0..a.count).collect();
    let mut records = Vec::new();
    for &delta in &a.deltas {
        let algos = algorithms_for(&a.algos, delta)?;
        records.extend(bench::run_suite(
            a.kind,
            &[delta],
            &a.n,
            &seeds,
            &algos,
            a.seed,
            &a.mhc.config(),
        )?);
    }
    bench::save_records(&a.out, &records)?;
    for row in bench::aggregate(&records) {
        println!(
            "{:<8} d={} n={:<4} {:<13} weight {:.4}  bottleneck {:.4}  ({} runs)",
            row.kind, row.delta, row.n, row.algorithm, row.mean_weight_ratio, row.mean_bottleneck_ratio, row.count
        );
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Run(a) => cmd_run(a),
        Command::Aggregate(a) => cmd_aggregate(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Suite(a) => cmd_suite(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
