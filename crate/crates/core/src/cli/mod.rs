//! Command-line surface: CSV in, statistics out.
//!
//! Single-value results are printed as one flat JSON record per run; tables
//! are CSV with a header row. Floats are printed with 17 significant digits
//! so that output files round-trip to the exact in-memory f64 values and can
//! serve as byte-exact regression fixtures.

mod dataset;

pub use dataset::{parse_column_selection, read_csv, select_columns, Dataset};

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use ndarray::Array2;

use crate::distance::{PairedSample, Sample};
use crate::eigen::{sym_eigen, top_eigen, EigenResult};
use crate::error::{Error, Result};
use crate::estimators::{dcor, EstimatorVariant};
use crate::inference::{permutation_test, PermTestConfig, TestStatistic};
use crate::matrix::dcor_matrix;
use crate::simulation::{
    bias_study, generate, generate_matrix, power_study, BiasStudyConfig, GeneratorKind,
    GeneratorParams, GeneratorSpec, PowerStudyConfig,
};

#[derive(Parser)]
#[command(
    name = "dcor",
    version,
    about = "Distance covariance and correlation toolkit",
    max_term_width = 100
)]
struct Cli {
    /// Cap the number of worker threads
    #[arg(long, global = true, value_name = "K")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distance correlation between two column sets or two files
    Dcor(DcorArgs),
    /// Permutation test of independence
    Test(TestArgs),
    /// Pairwise distance-correlation matrix over all columns
    Matrix(MatrixArgs),
    /// Eigendecomposition of a symmetric matrix or of a dcor matrix pipeline
    Eigen(EigenArgs),
    /// Monte Carlo bias study over an (n, p) grid of independent data
    BiasStudy(BiasStudyArgs),
    /// Monte Carlo rejection-rate study for the permutation test
    PowerStudy(PowerStudyArgs),
    /// Generate a synthetic dataset as CSV
    Generate(GenerateArgs),
}

#[derive(Args)]
struct InputOpts {
    /// Input file has no header row
    #[arg(long)]
    no_header: bool,

    /// Transpose the input (for files with variables as rows)
    #[arg(long)]
    transpose: bool,
}

#[derive(Args)]
struct PairInput {
    /// CSV holding both X and Y columns (select with --x/--y)
    #[arg(long, value_name = "PATH", conflicts_with_all = ["x_file", "y_file"],
          required_unless_present = "x_file")]
    file: Option<PathBuf>,

    /// CSV holding the X sample
    #[arg(long, value_name = "PATH", requires = "y_file")]
    x_file: Option<PathBuf>,

    /// CSV holding the Y sample
    #[arg(long, value_name = "PATH", requires = "x_file")]
    y_file: Option<PathBuf>,

    /// X columns: names, indices, or half-open ranges (e.g. "a,b" or "0..3")
    #[arg(long, value_name = "COLS")]
    x: Option<String>,

    /// Y columns: names, indices, or half-open ranges
    #[arg(long, value_name = "COLS")]
    y: Option<String>,

    #[command(flatten)]
    input: InputOpts,
}

impl PairInput {
    fn load(&self) -> Result<PairedSample> {
        let (x, y) = if let Some(file) = &self.file {
            let ds = read_csv(file, !self.input.no_header, self.input.transpose)?;
            let x_sel = self.x.as_deref().ok_or_else(|| {
                Error::InvalidParameter("single-file input needs --x columns".into())
            })?;
            let y_sel = self.y.as_deref().ok_or_else(|| {
                Error::InvalidParameter("single-file input needs --y columns".into())
            })?;
            let xi = parse_column_selection(x_sel, &ds.column_names)?;
            let yi = parse_column_selection(y_sel, &ds.column_names)?;
            (
                select_columns(&ds.matrix, &xi),
                select_columns(&ds.matrix, &yi),
            )
        } else {
            let xf = self.x_file.as_ref().expect("clap enforces x_file");
            let yf = self.y_file.as_ref().expect("clap enforces y_file");
            let dx = read_csv(xf, !self.input.no_header, self.input.transpose)?;
            let dy = read_csv(yf, !self.input.no_header, self.input.transpose)?;
            let x = match &self.x {
                Some(sel) => {
                    let idx = parse_column_selection(sel, &dx.column_names)?;
                    select_columns(&dx.matrix, &idx)
                }
                None => dx.matrix,
            };
            let y = match &self.y {
                Some(sel) => {
                    let idx = parse_column_selection(sel, &dy.column_names)?;
                    select_columns(&dy.matrix, &idx)
                }
                None => dy.matrix,
            };
            (x, y)
        };
        PairedSample::new(Sample::new(x)?, Sample::new(y)?)
    }
}

#[derive(Args)]
struct DcorArgs {
    #[command(flatten)]
    pair: PairInput,

    /// Estimator variant
    #[arg(long, default_value = "naive")]
    variant: EstimatorVariant,

    /// Write the result here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TestArgs {
    #[command(flatten)]
    pair: PairInput,

    #[arg(long, default_value = "naive")]
    variant: EstimatorVariant,

    /// Statistic compared across permutations
    #[arg(long, default_value = "dcor")]
    statistic: TestStatistic,

    /// Number of permutation replicates
    #[arg(long, default_value_t = 999, value_name = "B")]
    replicates: usize,

    /// RNG seed (auto-chosen and reported if omitted)
    #[arg(long)]
    seed: Option<u64>,

    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MatrixArgs {
    /// Data CSV: columns are variables, rows are observations
    #[arg(long, value_name = "PATH")]
    file: PathBuf,

    #[arg(long, default_value = "naive")]
    variant: EstimatorVariant,

    #[command(flatten)]
    input: InputOpts,

    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EigenArgs {
    /// Symmetric matrix CSV (e.g. the output of `matrix`)
    #[arg(long, value_name = "PATH", conflicts_with = "data",
          required_unless_present = "data")]
    file: Option<PathBuf>,

    /// Data CSV: build the pairwise dcor matrix first, then decompose
    #[arg(long, value_name = "PATH")]
    data: Option<PathBuf>,

    /// Estimator variant for the --data pipeline
    #[arg(long, default_value = "naive")]
    variant: EstimatorVariant,

    /// Keep only the leading K eigenpairs
    #[arg(long, value_name = "K")]
    top: Option<usize>,

    #[command(flatten)]
    input: InputOpts,

    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct StudyGrid {
    /// Comma-separated sample sizes
    #[arg(long, value_delimiter = ',', required = true, value_name = "N,...")]
    n_grid: Vec<usize>,

    /// Comma-separated dimensions
    #[arg(long, value_delimiter = ',', required = true, value_name = "P,...")]
    p_grid: Vec<usize>,

    /// Monte Carlo replicates per cell
    #[arg(long, default_value_t = 500)]
    replicates: usize,

    /// Estimator variants to evaluate
    #[arg(long, value_delimiter = ',', default_value = "naive,nodiag")]
    variant: Vec<EstimatorVariant>,

    /// RNG seed (auto-chosen and reported if omitted)
    #[arg(long)]
    seed: Option<u64>,

    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BiasStudyArgs {
    #[command(flatten)]
    grid: StudyGrid,
}

#[derive(Args)]
struct PowerStudyArgs {
    #[command(flatten)]
    grid: StudyGrid,

    /// Data-generating kind: independent, orthogonal, monotone, nonmonotone
    #[arg(long, default_value = "independent")]
    kind: GeneratorKind,

    /// Test level
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,

    /// Permutation replicates per test
    #[arg(long, default_value_t = 199, value_name = "B")]
    test_replicates: usize,

    #[arg(long, default_value = "dcor")]
    statistic: TestStatistic,

    #[command(flatten)]
    params: ParamOpts,
}

#[derive(Args)]
struct ParamOpts {
    /// Scale applied by the orthogonal generator
    #[arg(long, default_value_t = 1.0)]
    scale: f64,

    /// Shift applied by the orthogonal generator
    #[arg(long, default_value_t = 0.0)]
    shift: f64,

    /// Frequency of the nonmonotone generator
    #[arg(long, default_value_t = 4.0)]
    frequency: f64,
}

impl ParamOpts {
    fn to_params(&self) -> GeneratorParams {
        GeneratorParams {
            scale: self.scale,
            shift: self.shift,
            frequency: self.frequency,
        }
    }
}

#[derive(Args)]
struct GenerateArgs {
    /// Generator kind: gaussian, independent, orthogonal, monotone, nonmonotone
    #[arg(long)]
    kind: GeneratorKind,

    /// Number of observations
    #[arg(long)]
    n: usize,

    /// X dimension
    #[arg(long, default_value_t = 1)]
    dx: usize,

    /// Y dimension
    #[arg(long, default_value_t = 1)]
    dy: usize,

    #[command(flatten)]
    params: ParamOpts,

    /// RNG seed (auto-chosen and reported if omitted)
    #[arg(long)]
    seed: Option<u64>,

    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

/// 17 significant digits: enough to reproduce any f64 exactly on re-parse.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

enum Field {
    Num(f64),
    Count(u64),
    Text(&'static str),
}

fn write_json_record(w: &mut dyn Write, fields: &[(&str, Field)]) -> io::Result<()> {
    let mut parts = Vec::with_capacity(fields.len());
    for (key, value) in fields {
        let rendered = match value {
            Field::Num(v) => fmt_f64(*v),
            Field::Count(v) => v.to_string(),
            Field::Text(s) => format!("\"{s}\""),
        };
        parts.push(format!("\"{key}\":{rendered}"));
    }
    writeln!(w, "{{{}}}", parts.join(","))
}

fn output_writer(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    match seed {
        Some(s) => s,
        None => {
            let s: u64 = rand::random();
            eprintln!("auto-selected seed: {s}");
            s
        }
    }
}

fn write_csv_table(
    out: &Option<PathBuf>,
    header: &[String],
    rows: impl Iterator<Item = Vec<String>>,
) -> Result<()> {
    let writer = output_writer(out)?;
    let mut csv_writer = csv::Writer::from_writer(writer);
    csv_writer.write_record(header)?;
    for row in rows {
        csv_writer.write_record(&row)?;
    }
    csv_writer.flush()?;
    Ok(())
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::Io(io),
            other => Error::InvalidParameter(format!("csv: {other:?}")),
        }
    }
}

fn run_dcor(args: &DcorArgs) -> Result<()> {
    let pair = args.pair.load()?;
    let est = dcor(&pair, args.variant)?;
    let mut w = output_writer(&args.out)?;
    write_json_record(
        &mut w,
        &[
            ("dcov2", Field::Num(est.dcov2)),
            ("dcor", Field::Num(est.dcor)),
            ("dvar2_x", Field::Num(est.dvar2_x)),
            ("dvar2_y", Field::Num(est.dvar2_y)),
            ("variant", Field::Text(est.variant.name())),
            ("n", Field::Count(est.n as u64)),
            ("dx", Field::Count(est.dx as u64)),
            ("dy", Field::Count(est.dy as u64)),
        ],
    )?;
    Ok(())
}

fn run_test(args: &TestArgs) -> Result<()> {
    let pair = args.pair.load()?;
    let cfg = PermTestConfig {
        replicates: args.replicates,
        seed: resolve_seed(args.seed),
        variant: args.variant,
        statistic: args.statistic,
    };
    let result = permutation_test(&pair, &cfg)?;
    let mut w = output_writer(&args.out)?;
    write_json_record(
        &mut w,
        &[
            ("observed", Field::Num(result.observed)),
            ("p_value", Field::Num(result.p_value)),
            ("replicates", Field::Count(result.replicates as u64)),
            ("exceed_count", Field::Count(result.exceed_count as u64)),
            ("seed", Field::Count(result.seed)),
            ("variant", Field::Text(cfg.variant.name())),
            ("statistic", Field::Text(cfg.statistic.name())),
            ("n", Field::Count(pair.n() as u64)),
        ],
    )?;
    Ok(())
}

fn run_matrix(args: &MatrixArgs) -> Result<()> {
    let ds = read_csv(&args.file, !args.input.no_header, args.input.transpose)?;
    let m = dcor_matrix(&ds.matrix, args.variant)?;
    if !m.degenerate_columns().is_empty() {
        let names: Vec<&str> = m
            .degenerate_columns()
            .iter()
            .map(|&j| ds.column_names[j].as_str())
            .collect();
        eprintln!("warning: constant columns with zero dependence: {}", names.join(", "));
    }
    write_csv_table(
        &args.out,
        &ds.column_names,
        m.values()
            .rows()
            .into_iter()
            .map(|row| row.iter().map(|&v| fmt_f64(v)).collect()),
    )
}

fn write_eigen_csv(out: &Option<PathBuf>, names: &[String], eig: &EigenResult) -> Result<()> {
    let mut header = Vec::with_capacity(names.len() + 1);
    header.push("eigenvalue".to_string());
    header.extend(names.iter().cloned());
    let rows = (0..eig.eigenvalues.len()).map(|j| {
        let mut row = Vec::with_capacity(names.len() + 1);
        row.push(fmt_f64(eig.eigenvalues[j]));
        for i in 0..eig.eigenvectors.nrows() {
            row.push(fmt_f64(eig.eigenvectors[[i, j]]));
        }
        row
    });
    write_csv_table(out, &header, rows)
}

fn run_eigen(args: &EigenArgs) -> Result<()> {
    if let Some(data_path) = &args.data {
        let ds = read_csv(data_path, !args.input.no_header, args.input.transpose)?;
        let m = dcor_matrix(&ds.matrix, args.variant)?;
        let k = args.top.unwrap_or(m.p());
        let eig = top_eigen(&m, k)?;
        write_eigen_csv(&args.out, &ds.column_names, &eig)
    } else {
        let path = args.file.as_ref().expect("clap enforces file");
        let ds = read_csv(path, !args.input.no_header, args.input.transpose)?;
        let full = sym_eigen(&ds.matrix)?;
        let p = full.eigenvalues.len();
        let k = args.top.unwrap_or(p);
        if k < 1 || k > p {
            return Err(Error::InvalidParameter(format!(
                "k must be between 1 and {p}, got {k}"
            )));
        }
        let eig = EigenResult {
            eigenvalues: full.eigenvalues[..k].to_vec(),
            eigenvectors: full.eigenvectors.slice(ndarray::s![.., ..k]).to_owned(),
        };
        write_eigen_csv(&args.out, &ds.column_names, &eig)
    }
}

fn run_bias_study(args: &BiasStudyArgs) -> Result<()> {
    let cfg = BiasStudyConfig {
        n_grid: args.grid.n_grid.clone(),
        p_grid: args.grid.p_grid.clone(),
        replicates: args.grid.replicates,
        variants: args.grid.variant.clone(),
        seed: resolve_seed(args.grid.seed),
    };
    let result = bias_study(&cfg)?;
    let header: Vec<String> = ["n", "p", "variant", "mean_dcor", "mean_dcov2", "sd_dcov2", "replicates"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    write_csv_table(
        &args.grid.out,
        &header,
        result.rows.iter().map(|r| {
            vec![
                r.n.to_string(),
                r.p.to_string(),
                r.variant.name().to_string(),
                fmt_f64(r.mean_dcor),
                fmt_f64(r.mean_dcov2),
                fmt_f64(r.sd_dcov2),
                r.replicates.to_string(),
            ]
        }),
    )
}

fn run_power_study(args: &PowerStudyArgs) -> Result<()> {
    let cfg = PowerStudyConfig {
        n_grid: args.grid.n_grid.clone(),
        p_grid: args.grid.p_grid.clone(),
        replicates: args.grid.replicates,
        variants: args.grid.variant.clone(),
        seed: resolve_seed(args.grid.seed),
        kind: args.kind,
        params: args.params.to_params(),
        alpha: args.alpha,
        test_replicates: args.test_replicates,
        statistic: args.statistic,
    };
    let rows = power_study(&cfg)?;
    let header: Vec<String> = ["n", "p", "variant", "rejection_rate", "replicates"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    write_csv_table(
        &args.grid.out,
        &header,
        rows.iter().map(|r| {
            vec![
                r.n.to_string(),
                r.p.to_string(),
                r.variant.name().to_string(),
                fmt_f64(r.rejection_rate),
                r.replicates.to_string(),
            ]
        }),
    )
}

fn run_generate(args: &GenerateArgs) -> Result<()> {
    let spec = GeneratorSpec {
        kind: args.kind,
        n: args.n,
        dx: args.dx,
        dy: args.dy,
        params: args.params.to_params(),
        seed: resolve_seed(args.seed),
    };
    let (matrix, names): (Array2<f64>, Vec<String>) = if args.kind == GeneratorKind::GaussianIid {
        let sample = generate_matrix(&spec)?;
        let names = (0..sample.dim()).map(|j| format!("x{j}")).collect();
        (sample.data().clone(), names)
    } else {
        let pair = generate(&spec)?;
        let (dx, dy) = (pair.x().dim(), pair.y().dim());
        let mut names: Vec<String> = (0..dx).map(|j| format!("x{j}")).collect();
        names.extend((0..dy).map(|j| format!("y{j}")));
        let mut matrix = Array2::<f64>::zeros((pair.n(), dx + dy));
        for j in 0..dx {
            matrix.column_mut(j).assign(&pair.x().data().column(j));
        }
        for j in 0..dy {
            matrix.column_mut(dx + j).assign(&pair.y().data().column(j));
        }
        (matrix, names)
    };
    write_csv_table(
        &args.out,
        &names,
        matrix
            .rows()
            .into_iter()
            .map(|row| row.iter().map(|&v| fmt_f64(v)).collect()),
    )
}

fn dispatch(command: &Command) -> Result<()> {
    match command {
        Command::Dcor(args) => run_dcor(args),
        Command::Test(args) => run_test(args),
        Command::Matrix(args) => run_matrix(args),
        Command::Eigen(args) => run_eigen(args),
        Command::BiasStudy(args) => run_bias_study(args),
        Command::PowerStudy(args) => run_power_study(args),
        Command::Generate(args) => run_generate(args),
    }
}

/// Parse and execute a full CLI invocation, returning the process exit code:
/// 0 on success, 1 on a computation or I/O error (one diagnostic line on
/// stderr), 2 on a usage error (clap prints the usage text).
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    if let Some(threads) = cli.threads {
        // Already-initialized is fine: the cap then has no effect in-process.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match dispatch(&cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
