//! Scenario sweeps, timing and reporting.
//!
//! A sweep is a list of problems crossed with algorithms, sortedness and
//! worker counts. Each cell runs once untimed (warm-up, and the correctness
//! check for small problems), then `repetitions` timed runs whose mean is
//! reported. Cells run one after another.

mod config;
mod profile;
mod report;

use std::path::PathBuf;
use std::time::Instant;

pub use config::{default_thread_sweep, BenchSettings};
pub use profile::{performance_profile, performance_ratios, ProfileCurve, ProfileSample};
pub use report::{emit_csv, read_profile_samples, write_curves_csv, write_records_csv, CURVE_HEADER, RECORD_HEADER};

use crate::apps::{make_tall_skinny, symmetrize_pattern, triangle_decompose};
use crate::csr::CsrMatrix;
use crate::engine::{spgemm_with_report, Algorithm, SpgemmConfig};
use crate::error::{Result, SpgemmError};
use crate::mtx::read_matrix_market;
use crate::reference::reference_spgemm;
use crate::rmat::{generate, RmatKind, RmatSpec};

#[derive(Clone, Debug, PartialEq)]
pub enum MatrixSource {
    Rmat { kind: RmatKind, scale: u32, edge_factor: usize, seed: u64 },
    File(PathBuf),
}

impl MatrixSource {
    pub fn describe(&self) -> String {
        match self {
            Self::Rmat { kind, scale, edge_factor, seed } => format!("{kind}-s{scale}-ef{edge_factor}-seed{seed}"),
            Self::File(p) => p.file_stem().map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned()),
        }
    }

    pub fn load(&self) -> Result<CsrMatrix> {
        match self {
            Self::Rmat { kind, scale, edge_factor, seed } => generate(&RmatSpec::new(*kind, *scale, *edge_factor, *seed)),
            Self::File(p) => read_matrix_market(p),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScenarioKind {
    Square,
    /// Square times `2^short_scale` randomly chosen columns of itself.
    TallSkinny { short_scale: u32 },
    /// Lower times upper triangle of the degree-ordered adjacency.
    Triangle,
}

impl ScenarioKind {
    pub fn label(&self) -> String {
        match self {
            Self::Square => "AxA".into(),
            Self::TallSkinny { short_scale } => format!("TallSkinny-k{short_scale}"),
            Self::Triangle => "LxU".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub scenario: ScenarioKind,
    pub source: MatrixSource,
}

impl Problem {
    pub fn new(scenario: ScenarioKind, source: MatrixSource) -> Self {
        Self { scenario, source }
    }

    pub fn id(&self) -> String {
        format!("{}:{}", self.scenario.label(), self.source.describe())
    }

    /// Materializes the two operands.
    pub fn operands(&self) -> Result<(CsrMatrix, CsrMatrix)> {
        let a = self.source.load()?;
        match self.scenario {
            ScenarioKind::Square => {
                if !a.is_square() {
                    return Err(SpgemmError::InvalidArgument("A x A needs a square matrix".into()));
                }
                Ok((a.clone(), a))
            }
            ScenarioKind::TallSkinny { short_scale } => {
                let k = (1usize << short_scale).min(a.ncols());
                let b = make_tall_skinny(&a, k, 0x7a11)?;
                Ok((a, b))
            }
            ScenarioKind::Triangle => {
                // generated graphs are directed; files are expected to be symmetric
                let a = match self.source {
                    MatrixSource::Rmat { .. } => symmetrize_pattern(&a)?,
                    MatrixSource::File(_) => a,
                };
                let d = triangle_decompose(&a)?;
                Ok((d.lower, d.upper))
            }
        }
    }

    fn verify(&self, a: &CsrMatrix, threshold_scale: u32) -> bool {
        match &self.source {
            MatrixSource::Rmat { scale, .. } => *scale <= threshold_scale,
            MatrixSource::File(_) => a.nrows() <= 1usize << threshold_scale,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CellStatus {
    Ok,
    VerificationFailed(String),
    Failed(String),
}

impl std::fmt::Display for CellStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Ok => f.write_str("ok"),
            Self::VerificationFailed(m) => write!(f, "verify-fail: {m}"),
            Self::Failed(m) => write!(f, "error: {m}"),
        }
    }
}

/// One timed cell. Times are seconds; the phase columns are means over
/// the timed repetitions.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub scenario: String,
    pub matrix: String,
    pub algorithm: Algorithm,
    pub sorted: bool,
    pub nworkers: usize,
    pub flop: u64,
    pub nnz_c: usize,
    pub compression_ratio: f64,
    pub setup_s: f64,
    pub symbolic_s: f64,
    pub numeric_s: f64,
    pub total_s: f64,
    pub min_total_s: f64,
    pub max_total_s: f64,
    pub repetitions: usize,
    pub collision_factor: Option<f64>,
    pub triangles: Option<u64>,
    pub status: CellStatus,
}

impl BenchRecord {
    /// Two floating-point operations (multiply and add) per flop.
    pub fn gflops(&self) -> f64 {
        if self.total_s > 0.0 {
            2.0 * self.flop as f64 / self.total_s / 1e9
        } else {
            0.0
        }
    }

    pub fn solver_label(&self) -> String {
        format!("{}-{}", self.algorithm, if self.sorted { "sorted" } else { "unsorted" })
    }

    fn failed(problem: &Problem, algorithm: Algorithm, sorted: bool, nworkers: usize, status: CellStatus) -> Self {
        Self {
            scenario: problem.scenario.label(),
            matrix: problem.source.describe(),
            algorithm,
            sorted,
            nworkers,
            flop: 0,
            nnz_c: 0,
            compression_ratio: 0.0,
            setup_s: 0.0,
            symbolic_s: 0.0,
            numeric_s: 0.0,
            total_s: 0.0,
            min_total_s: 0.0,
            max_total_s: 0.0,
            repetitions: 0,
            collision_factor: None,
            triangles: None,
            status,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub problems: Vec<Problem>,
    pub algorithms: Vec<Algorithm>,
    pub sorted: Vec<bool>,
    pub settings: BenchSettings,
}

impl SweepSpec {
    pub fn new(problems: Vec<Problem>, settings: BenchSettings) -> Self {
        Self { problems, algorithms: Algorithm::KERNELS.to_vec(), sorted: vec![true, false], settings }
    }
}

/// Times one `(A, B, cfg)` cell. `reference`, when given, is compared with
/// the untimed first run and a mismatch aborts the cell.
pub fn time_cell(
    a: &CsrMatrix,
    b: &CsrMatrix,
    cfg: &SpgemmConfig,
    repetitions: usize,
    warmup: bool,
    reference: Option<&CsrMatrix>,
) -> Result<BenchRecord> {
    let repetitions = repetitions.max(1);
    let mut first = None;
    if warmup || reference.is_some() {
        let r = spgemm_with_report(a, b, cfg)?;
        if let Some(expect) = reference {
            match r.matrix.max_relative_error(expect) {
                None => return Err(SpgemmError::Verification("pattern differs from reference".into())),
                Some(e) if e > 1e-10 => {
                    return Err(SpgemmError::Verification(format!("relative error {e:.3e} exceeds 1e-10")))
                }
                Some(_) => {}
            }
            if cfg.sort_output && !r.matrix.rows_are_increasing() {
                return Err(SpgemmError::Verification("sorted output has unsorted rows".into()));
            }
        }
        first = Some(r);
    }
    let mut sums = [0.0f64; 4];
    let (mut min_t, mut max_t) = (f64::INFINITY, 0.0f64);
    let mut last = None;
    for _ in 0..repetitions {
        let t = Instant::now();
        let r = spgemm_with_report(a, b, cfg)?;
        let wall = t.elapsed().as_secs_f64().max(1e-9);
        sums[0] += r.times.setup.as_secs_f64();
        sums[1] += r.times.symbolic.as_secs_f64();
        sums[2] += r.times.numeric.as_secs_f64();
        sums[3] += wall;
        min_t = min_t.min(wall);
        max_t = max_t.max(wall);
        last = Some(r);
    }
    let r = last.or(first).expect("at least one run");
    let n = repetitions as f64;
    let nnz_c = r.matrix.nnz();
    Ok(BenchRecord {
        scenario: String::new(),
        matrix: String::new(),
        algorithm: r.algorithm,
        sorted: cfg.sort_output,
        nworkers: cfg.nworkers,
        flop: r.flop,
        nnz_c,
        compression_ratio: if nnz_c > 0 { r.flop as f64 / nnz_c as f64 } else { 0.0 },
        setup_s: sums[0] / n,
        symbolic_s: sums[1] / n,
        numeric_s: sums[2] / n,
        total_s: sums[3] / n,
        min_total_s: min_t,
        max_total_s: max_t,
        repetitions,
        collision_factor: r.collision_factor,
        triangles: None,
        status: CellStatus::Ok,
    })
}

pub fn run_scenario(spec: &SweepSpec) -> Result<Vec<BenchRecord>> {
    spec.settings.validate()?;
    let s = &spec.settings;
    let mut records = Vec::new();
    for (pi, problem) in spec.problems.iter().enumerate() {
        let operands = problem.operands();
        let (a, b) = match operands {
            Ok(ab) => ab,
            Err(e) => {
                log::warn!("{}: {e}", problem.id());
                for &alg in &spec.algorithms {
                    for &sorted in &spec.sorted {
                        for &t in &s.threads {
                            records.push(BenchRecord::failed(problem, alg, sorted, t, CellStatus::Failed(e.to_string())));
                        }
                    }
                }
                continue;
            }
        };
        let verify = problem.verify(&a, s.verify_max_scale);
        for &sorted in &spec.sorted {
            // unsorted cells see the same operands with rows stored out of order
            let (a_in, b_in) = if sorted {
                (a.clone(), b.clone())
            } else {
                let seed = 0x5eed ^ pi as u64;
                (a.shuffle_rows(seed), b.shuffle_rows(seed.wrapping_add(1)))
            };
            let reference = if verify { Some(reference_spgemm(&a_in, &b_in)?) } else { None };
            for &alg in &spec.algorithms {
                if alg == Algorithm::Heap && !sorted {
                    continue;
                }
                for &t in &s.threads {
                    let cfg = SpgemmConfig {
                        algorithm: alg,
                        sort_output: sorted,
                        nworkers: t,
                        chunk_width: s.chunk_width,
                        hash_multiplier: s.hash_multiplier,
                        ..SpgemmConfig::default()
                    };
                    let rec = match time_cell(&a_in, &b_in, &cfg, s.repetitions, s.warmup, reference.as_ref()) {
                        Ok(mut r) => {
                            r.scenario = problem.scenario.label();
                            r.matrix = problem.source.describe();
                            r
                        }
                        Err(SpgemmError::Verification(m)) => {
                            log::error!("{} {alg} t={t}: {m}", problem.id());
                            BenchRecord::failed(problem, alg, sorted, t, CellStatus::VerificationFailed(m))
                        }
                        Err(e) => BenchRecord::failed(problem, alg, sorted, t, CellStatus::Failed(e.to_string())),
                    };
                    log::info!("{} {} t={} {:.6}s {}", problem.id(), rec.solver_label(), t, rec.total_s, rec.status);
                    records.push(rec);
                }
            }
        }
    }
    Ok(records)
}

/// Profile samples: problems are `(scenario, matrix, nworkers)`, solvers are
/// `algorithm-sortedness`.
pub fn profile_samples(records: &[BenchRecord]) -> Vec<ProfileSample> {
    records
        .iter()
        .map(|r| {
            let elapsed = (r.status == CellStatus::Ok).then_some(r.total_s);
            ProfileSample::new(format!("{}:{}:t{}", r.scenario, r.matrix, r.nworkers), r.solver_label(), elapsed)
        })
        .collect()
}

pub fn any_verification_failure(records: &[BenchRecord]) -> bool {
    records.iter().any(|r| matches!(r.status, CellStatus::VerificationFailed(_)))
}

/// Edge-factor sweep at a fixed scale, ER and G500.
pub fn density_suite(scale: u32, edge_factors: &[usize], seed: u64) -> Vec<Problem> {
    [RmatKind::Er, RmatKind::G500]
        .into_iter()
        .flat_map(|kind| {
            edge_factors.iter().map(move |&edge_factor| {
                Problem::new(ScenarioKind::Square, MatrixSource::Rmat { kind, scale, edge_factor, seed })
            })
        })
        .collect()
}

/// Scale sweep at edge factor 16 (`scales` given per generator kind).
pub fn size_suite(er_scales: std::ops::RangeInclusive<u32>, g500_scales: std::ops::RangeInclusive<u32>, seed: u64) -> Vec<Problem> {
    let er = er_scales.map(|scale| MatrixSource::Rmat { kind: RmatKind::Er, scale, edge_factor: 16, seed });
    let g = g500_scales.map(|scale| MatrixSource::Rmat { kind: RmatKind::G500, scale, edge_factor: 16, seed });
    er.chain(g).map(|s| Problem::new(ScenarioKind::Square, s)).collect()
}

pub fn file_suite(paths: &[PathBuf], scenario: ScenarioKind) -> Vec<Problem> {
    paths.iter().map(|p| Problem::new(scenario, MatrixSource::File(p.clone()))).collect()
}
