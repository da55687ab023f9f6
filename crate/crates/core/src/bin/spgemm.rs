use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use spgemm::apps::{count_triangles_with_report, make_tall_skinny, symmetrize_pattern, triangle_decompose};
use spgemm::bench::{
    self, default_thread_sweep, density_suite, emit_csv, file_suite, performance_profile, profile_samples,
    read_profile_samples, run_scenario, size_suite, time_cell, write_curves_csv, BenchRecord, BenchSettings,
    ScenarioKind, SweepSpec,
};
use spgemm::recipe::{DegreePattern, InputStats};
use spgemm::{
    generate, read_matrix_market, reference_spgemm, select_algorithm, write_matrix_market, Algorithm, CsrMatrix,
    RecipeQuery, RmatKind, RmatSpec, Scenario, SpgemmConfig, SpgemmError,
};

#[derive(Parser)]
#[command(name = "spgemm", version, about = "Sparse matrix-matrix multiplication runs and benchmarks")]
struct Cli {
    /// key=value settings file (repetitions, threads, verify_max_scale, hash_multiplier, chunk_width, warmup)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct RunOpts {
    #[arg(long, default_value = "hash")]
    algo: Algorithm,
    /// Keep output rows unsorted.
    #[arg(long)]
    unsorted: bool,
    #[arg(long)]
    threads: Option<usize>,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct GenOpts {
    #[arg(long, default_value = "g500")]
    kind: RmatKind,
    #[arg(long, default_value_t = 10)]
    scale: u32,
    #[arg(long, default_value_t = 16)]
    ef: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Density,
    Size,
    Threads,
    Suitesparse,
    Profile,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an R-MAT matrix and write it as Matrix Market.
    Gen {
        #[command(flatten)]
        gen: GenOpts,
        #[arg(long)]
        out: PathBuf,
    },
    /// C = A * B from two Matrix Market files.
    Multiply {
        a: PathBuf,
        b: PathBuf,
        #[command(flatten)]
        run: RunOpts,
        /// Also write C as Matrix Market.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// C = A * A for a file or a generated matrix.
    Square {
        matrix: Option<PathBuf>,
        #[command(flatten)]
        gen: GenOpts,
        #[command(flatten)]
        run: RunOpts,
    },
    /// A times 2^short randomly chosen columns of A.
    Tallskinny {
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[command(flatten)]
        gen: GenOpts,
        #[arg(long, default_value_t = 6)]
        short: u32,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Count triangles of an undirected graph with L * U.
    Triangle {
        graph: Option<PathBuf>,
        #[command(flatten)]
        gen: GenOpts,
        #[command(flatten)]
        run: RunOpts,
    },
    /// Run a benchmark sweep.
    Bench {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Matrix files (suitesparse) or records CSVs (profile).
        files: Vec<PathBuf>,
        #[arg(long, value_delimiter = ',', default_value = "hash,hashchunked,heap")]
        algos: Vec<Algorithm>,
        /// Only sorted (true) or only unsorted (false) cells.
        #[arg(long)]
        sorted: Option<bool>,
        #[arg(long, default_value_t = 12)]
        scale: u32,
        #[arg(long, value_delimiter = ',', default_value = "2,4,8,16,32")]
        efs: Vec<usize>,
        #[arg(long, default_value_t = 14)]
        max_scale: u32,
        /// Scenario for file inputs: axa, lxu or tallskinny.
        #[arg(long, default_value = "axa")]
        scenario: Scenario,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Look up the recommended kernel.
    Recipe {
        #[arg(long, default_value = "axa")]
        scenario: Scenario,
        #[arg(long)]
        unsorted: bool,
        /// Compression ratio of a real input.
        #[arg(long, conflicts_with_all = ["ef", "matrix"])]
        cr: Option<f64>,
        /// Edge factor of a synthetic input.
        #[arg(long, requires = "pattern")]
        ef: Option<f64>,
        #[arg(long)]
        pattern: Option<DegreePattern>,
        /// Measure the compression ratio of this file.
        #[arg(long)]
        matrix: Option<PathBuf>,
    },
}

fn settings(cli: &Cli) -> spgemm::Result<BenchSettings> {
    cli.config.as_ref().map_or_else(|| Ok(BenchSettings::default()), BenchSettings::from_file)
}

fn config(run: &RunOpts, s: &BenchSettings) -> SpgemmConfig {
    SpgemmConfig {
        algorithm: run.algo,
        sort_output: !run.unsorted,
        nworkers: run.threads.unwrap_or(s.threads[0]),
        chunk_width: s.chunk_width,
        hash_multiplier: s.hash_multiplier,
        ..SpgemmConfig::default()
    }
}

fn load(path: Option<&Path>, gen: &GenOpts) -> spgemm::Result<(CsrMatrix, String)> {
    match path {
        Some(p) => Ok((read_matrix_market(p)?, p.display().to_string())),
        None => {
            let spec = RmatSpec::new(gen.kind, gen.scale, gen.ef, gen.seed);
            Ok((generate(&spec)?, format!("{}-s{}-ef{}-seed{}", gen.kind, gen.scale, gen.ef, gen.seed)))
        }
    }
}

/// Times one product, checking it against the reference when small enough.
fn single_run(
    scenario: &str,
    name: String,
    a: &CsrMatrix,
    b: &CsrMatrix,
    cfg: &SpgemmConfig,
    s: &BenchSettings,
) -> spgemm::Result<BenchRecord> {
    let reference = if a.nrows().max(b.ncols()) <= 1usize << s.verify_max_scale {
        Some(reference_spgemm(a, b)?)
    } else {
        None
    };
    let mut rec = time_cell(a, b, cfg, s.repetitions, s.warmup, reference.as_ref())?;
    rec.scenario = scenario.into();
    rec.matrix = name;
    Ok(rec)
}

fn run(cli: Cli) -> spgemm::Result<bool> {
    let s = settings(&cli)?;
    match cli.command {
        Command::Gen { gen, out } => {
            let m = generate(&RmatSpec::new(gen.kind, gen.scale, gen.ef, gen.seed))?;
            write_matrix_market(&out, &m)?;
            eprintln!("wrote {} ({} x {}, {} nonzeros)", out.display(), m.nrows(), m.ncols(), m.nnz());
        }
        Command::Multiply { a, b, run, out } => {
            let (ma, mb) = (read_matrix_market(&a)?, read_matrix_market(&b)?);
            let cfg = config(&run, &s);
            let name = format!("{}*{}", a.display(), b.display());
            let rec = single_run("AxB", name, &ma, &mb, &cfg, &s)?;
            if let Some(out) = out {
                write_matrix_market(out, &spgemm::spgemm(&ma, &mb, &cfg)?)?;
            }
            emit_csv(&[rec], run.csv.as_deref())?;
        }
        Command::Square { matrix, gen, run } => {
            let (a, name) = load(matrix.as_deref(), &gen)?;
            if !a.is_square() {
                return Err(SpgemmError::InvalidArgument("A x A needs a square matrix".into()));
            }
            let rec = single_run("AxA", name, &a, &a, &config(&run, &s), &s)?;
            emit_csv(&[rec], run.csv.as_deref())?;
        }
        Command::Tallskinny { matrix, gen, short, run } => {
            let (a, name) = load(matrix.as_deref(), &gen)?;
            let b = make_tall_skinny(&a, (1usize << short).min(a.ncols()), gen.seed)?;
            let rec = single_run(&format!("TallSkinny-k{short}"), name, &a, &b, &config(&run, &s), &s)?;
            emit_csv(&[rec], run.csv.as_deref())?;
        }
        Command::Triangle { graph, gen, run } => {
            let (mut a, name) = load(graph.as_deref(), &gen)?;
            if graph.is_none() {
                a = symmetrize_pattern(&a)?;
            }
            let d = triangle_decompose(&a)?;
            let cfg = config(&run, &s);
            let mut rec = single_run("LxU", name, &d.lower, &d.upper, &cfg, &s)?;
            rec.triangles = Some(count_triangles_with_report(&d, &cfg)?.0);
            emit_csv(&[rec], run.csv.as_deref())?;
        }
        Command::Bench { suite, files, algos, sorted, scale, efs, max_scale, scenario, seed, out } => {
            if let Suite::Profile = suite {
                let samples = if files.is_empty() {
                    let spec = SweepSpec::new(density_suite(scale, &efs, seed), s.clone());
                    profile_samples(&run_scenario(&spec)?)
                } else {
                    let mut all = Vec::new();
                    for f in &files {
                        all.extend(read_profile_samples(std::fs::File::open(f)?)?);
                    }
                    all
                };
                let curves = performance_profile(&samples)?;
                match out {
                    Some(p) => write_curves_csv(std::fs::File::create(p)?, &curves)?,
                    None => write_curves_csv(std::io::stdout().lock(), &curves)?,
                }
                return Ok(true);
            }
            let mut settings = s.clone();
            let problems = match suite {
                Suite::Density => density_suite(scale, &efs, seed),
                Suite::Size => size_suite(7..=max_scale, 7..=max_scale, seed),
                Suite::Threads => {
                    if settings.threads == BenchSettings::default().threads {
                        settings.threads = default_thread_sweep();
                    }
                    density_suite(scale, &[16], seed)
                }
                Suite::Suitesparse => {
                    if files.is_empty() {
                        return Err(SpgemmError::InvalidArgument("suitesparse suite needs matrix files".into()));
                    }
                    let kind = match scenario {
                        Scenario::AxA => ScenarioKind::Square,
                        Scenario::LxU => ScenarioKind::Triangle,
                        Scenario::TallSkinny => ScenarioKind::TallSkinny { short_scale: 6 },
                    };
                    file_suite(&files, kind)
                }
                Suite::Profile => unreachable!(),
            };
            let spec = SweepSpec {
                algorithms: algos,
                sorted: sorted.map_or_else(|| vec![true, false], |b| vec![b]),
                ..SweepSpec::new(problems, settings)
            };
            let records = run_scenario(&spec)?;
            emit_csv(&records, out.as_deref())?;
            return Ok(!bench::any_verification_failure(&records));
        }
        Command::Recipe { scenario, unsorted, cr, ef, pattern, matrix } => {
            let stats = match (cr, ef, pattern, matrix) {
                (Some(compression_ratio), ..) => InputStats::Real { compression_ratio },
                (None, Some(edge_factor), Some(pattern), _) => InputStats::Synthetic { edge_factor, pattern },
                (None, None, _, Some(p)) => {
                    let a = read_matrix_market(&p)?;
                    let (x, y) = match scenario {
                        Scenario::LxU => {
                            let d = triangle_decompose(&a)?;
                            (d.lower, d.upper)
                        }
                        _ => (a.clone(), a),
                    };
                    let c = spgemm::spgemm(&x, &y, &SpgemmConfig::new(Algorithm::Hash).sorted(false))?;
                    let profile = spgemm::count_flop(&x, &y)?;
                    InputStats::Real { compression_ratio: spgemm::partition::compression_ratio(&profile, &c)? }
                }
                _ => return Err(SpgemmError::InvalidArgument("give --cr, --ef with --pattern, or --matrix".into())),
            };
            let entry = select_algorithm(&RecipeQuery { scenario, sorted: !unsorted, stats })?;
            let stat = match stats {
                InputStats::Real { compression_ratio } => format!("cr={compression_ratio:.6}"),
                InputStats::Synthetic { edge_factor, pattern } => format!("ef={edge_factor} {pattern:?}"),
            };
            println!("cell,kernel,sort_output,input");
            println!("{},{},{},{}", entry.cell, entry.kernel, entry.sort_output, stat);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: a benchmark cell failed verification");
            ExitCode::from(2)
        }
        Err(e @ SpgemmError::Verification(_)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
