use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qbkm_core::dataspace::{
    generate_synthetic, load_iris, read_csv, subset_balanced, to_csv_writer, Dataset, SyntheticSpec,
};
use serde::Serialize;

use qbkm_bench::ari::{run_ari, AriSpec, DataSource, DEFAULT_METHODS, IRIS_SIZES, SYNTH_SIZES};
use qbkm_bench::output::{sink, write_ari_csv, write_json, write_scale_csv, Format};
use qbkm_bench::parse::{parse_size, parse_synthetic, ProblemSize, SyntheticShape};
use qbkm_bench::scale::{run_scale, Axis, ScaleSpec};
use qbkm_bench::{BenchError, Method, Result};

/// Balanced k-means as a QUBO: clustering runs and benchmark sweeps.
#[derive(Parser)]
#[command(name = "qbkm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster one dataset with one method and print the assignment and report as JSON.
    Cluster(ClusterArgs),
    /// Mean ARI per method over seeded synthetic datasets.
    SynthAri(SynthArgs),
    /// Mean ARI per method over random balanced Iris subsets.
    IrisAri(IrisArgs),
    /// Timing sweep over the number of points.
    ScaleN(ScaleArgs),
    /// Timing sweep over the number of clusters.
    ScaleK(ScaleArgs),
    /// Timing sweep over the number of features.
    ScaleD(ScaleArgs),
    /// Write a synthetic dataset or an Iris subset as CSV.
    Gen(GenArgs),
}

#[derive(Args)]
#[group(id = "source", required = true, multiple = false)]
struct SourceArgs {
    /// CSV file with feature columns and an optional trailing `label` column.
    #[arg(long, group = "source")]
    data: Option<PathBuf>,
    /// Synthetic dataset shape, e.g. `N=8,k=4,d=2`.
    #[arg(long, group = "source", value_parser = parse_synthetic)]
    synthetic: Option<SyntheticShape>,
    /// The bundled Iris dataset.
    #[arg(long, group = "source")]
    iris: bool,
}

#[derive(Args)]
struct DataShapeArgs {
    #[arg(long, default_value_t = 2.0)]
    side_length: f64,
    #[arg(long, default_value_t = 1.0)]
    std_dev: f64,
}

#[derive(Args)]
struct ClusterArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Number of clusters; defaults to the number of label classes.
    #[arg(long, value_parser = qbkm_bench::parse::positive)]
    k: Option<usize>,
    #[arg(long, value_enum, default_value_t = Method::QuboAnneal)]
    method: Method,
    #[command(flatten)]
    shape: DataShapeArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CommonArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    trials: Option<usize>,
    /// Comma-separated subset of kmeans, balanced, qubo-exact, qubo-anneal.
    #[arg(long, value_enum, value_delimiter = ',')]
    methods: Vec<Method>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct SynthArgs {
    /// Comma-separated `NxK` problem types.
    #[arg(long, value_delimiter = ',', value_parser = parse_size)]
    sizes: Vec<ProblemSize>,
    #[arg(long, default_value_t = 2, value_parser = qbkm_bench::parse::positive)]
    dim: usize,
    #[command(flatten)]
    shape: DataShapeArgs,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct IrisArgs {
    /// Comma-separated `NxK` problem types with k <= 3.
    #[arg(long, value_delimiter = ',', value_parser = parse_size)]
    sizes: Vec<ProblemSize>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct ScaleArgs {
    /// Comma-separated, strictly increasing sweep values.
    #[arg(long, value_delimiter = ',', value_parser = qbkm_bench::parse::positive)]
    values: Vec<usize>,
    /// Fixed number of points (ignored by scale-n).
    #[arg(long, value_parser = qbkm_bench::parse::positive)]
    n: Option<usize>,
    /// Fixed number of clusters (ignored by scale-k).
    #[arg(long, value_parser = qbkm_bench::parse::positive)]
    k: Option<usize>,
    /// Fixed number of features (ignored by scale-d).
    #[arg(long, value_parser = qbkm_bench::parse::positive)]
    d: Option<usize>,
    #[command(flatten)]
    shape: DataShapeArgs,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Keep a balanced `NxK` subset (labelled data only).
    #[arg(long, value_parser = parse_size)]
    subset: Option<ProblemSize>,
    #[command(flatten)]
    shape: DataShapeArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct ClusterOutput<'a> {
    dataset: &'a str,
    n: usize,
    k: usize,
    method: Method,
    seed: u64,
    assignment: &'a [usize],
    report: &'a qbkm_core::report::RunReport,
}

fn load(source: &SourceArgs, shape: &DataShapeArgs, seed: u64) -> Result<Dataset> {
    if let Some(path) = &source.data {
        return Ok(read_csv(path)?);
    }
    if let Some(s) = source.synthetic {
        let spec = SyntheticSpec::new(s.n, s.k, s.d, seed)
            .with_side_length(shape.side_length)
            .with_std_dev(shape.std_dev);
        return Ok(generate_synthetic(&spec)?);
    }
    Ok(load_iris())
}

fn cluster(args: ClusterArgs) -> Result<()> {
    let ds = load(&args.source, &args.shape, args.seed)?;
    let k = match (args.k, args.source.synthetic, ds.n_classes()) {
        (Some(k), _, _) => k,
        (None, Some(shape), _) => shape.k,
        (None, None, Some(classes)) => classes,
        (None, None, None) => {
            return Err(BenchError::Usage(
                "--k is required when the dataset has no labels".into(),
            ))
        }
    };
    let (asg, report) = args.method.run(&ds, k, args.seed)?;
    let out = ClusterOutput {
        dataset: ds.name(),
        n: ds.len(),
        k,
        method: args.method,
        seed: args.seed,
        assignment: asg.labels(),
        report: &report,
    };
    write_json(&out, sink(args.out.as_deref())?)
}

fn methods_or(common: &CommonArgs, default: &[Method]) -> Vec<Method> {
    if common.methods.is_empty() {
        default.to_vec()
    } else {
        common.methods.clone()
    }
}

fn ari(
    source: DataSource,
    sizes: Vec<ProblemSize>,
    defaults: &[ProblemSize],
    common: CommonArgs,
) -> Result<()> {
    let spec = AriSpec {
        source,
        sizes: if sizes.is_empty() {
            defaults.to_vec()
        } else {
            sizes
        },
        methods: methods_or(&common, &DEFAULT_METHODS),
        trials: common.trials.unwrap_or(50),
        seed: common.seed,
    };
    let table = run_ari(&spec)?;
    let w = sink(common.out.as_deref())?;
    match common.format {
        Format::Json => write_json(&table, w),
        Format::Csv => write_ari_csv(&table, w),
    }
}

fn scale(axis: Axis, args: ScaleArgs) -> Result<()> {
    let mut spec = ScaleSpec::with_defaults(axis);
    if !args.values.is_empty() {
        spec.values = args.values;
    }
    spec.n = args.n.unwrap_or(spec.n);
    spec.k = args.k.unwrap_or(spec.k);
    spec.d = args.d.unwrap_or(spec.d);
    spec.side_length = args.shape.side_length;
    spec.std_dev = args.shape.std_dev;
    spec.methods = methods_or(&args.common, &[Method::QuboAnneal]);
    spec.trials = args.common.trials.unwrap_or(spec.trials);
    spec.seed = args.common.seed;
    let table = run_scale(&spec)?;
    let w = sink(args.common.out.as_deref())?;
    match args.common.format {
        Format::Json => write_json(&table, w),
        Format::Csv => write_scale_csv(&table, w),
    }
}

fn gen(args: GenArgs) -> Result<()> {
    let mut ds = load(&args.source, &args.shape, args.seed)?;
    if let Some(size) = args.subset {
        ds = subset_balanced(&ds, size.n, size.k, args.seed)?;
    }
    let mut w = sink(args.out.as_deref())?;
    to_csv_writer(&ds, &mut w)?;
    w.flush()?;
    Ok(())
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var("QB_THREADS") else {
        return Ok(());
    };
    let threads = qbkm_bench::parse::positive(&raw)
        .map_err(|e| BenchError::Usage(format!("QB_THREADS: {e}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| BenchError::Usage(format!("QB_THREADS: {e}")))
}

fn run(cli: Cli) -> Result<()> {
    configure_threads()?;
    match cli.command {
        Command::Cluster(a) => cluster(a),
        Command::SynthAri(a) => ari(
            DataSource::Synthetic {
                dim: a.dim,
                side_length: a.shape.side_length,
                std_dev: a.shape.std_dev,
            },
            a.sizes,
            &SYNTH_SIZES,
            a.common,
        ),
        Command::IrisAri(a) => ari(DataSource::Iris, a.sizes, &IRIS_SIZES, a.common),
        Command::ScaleN(a) => scale(Axis::N, a),
        Command::ScaleK(a) => scale(Axis::K, a),
        Command::ScaleD(a) => scale(Axis::D, a),
        Command::Gen(a) => gen(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qbkm: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
