//! Command-line interface.

use std::fs;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gmedim_core::combinatorics::{self, PartySubset};
use gmedim_core::criteria::{self, CriterionReport, DEFAULT_CERTIFY_TOL};
use gmedim_core::oracle::{self, PureDimensionality, SchmidtProfile, DEFAULT_RANK_TOL, MAX_TWO_COPY_DIM};
use gmedim_core::scan::{self, Bisection, Detector, FMode, RegionFamily, TableCriterion};
use gmedim_core::states::{NamedState, NamedStateSpec, StateKind};
use gmedim_core::tensor::{DensityMatrix, Diagnostics, ElementProvider, NoisyMixture, PureState};
use gmedim_core::Error as CoreError;
use rayon::prelude::*;
use serde::Serialize;

use crate::io::{self, IoError, StateFile};
use crate::report::{self, RegionRecord, ThresholdRecord};

/// Largest state-vector length a named state may have.
pub const MAX_STATE_DIM: usize = 1 << 22;

#[derive(Debug, thiserror::Error)]
pub enum AppError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{0}")]
    Input(String),
    #[error("cannot write output: {0}")]
    Output(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl AppError {
    /// 2 for invalid input, 3 for size-guard refusals, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Core(CoreError::TooLarge(_)) | AppError::Io(IoError::State(CoreError::TooLarge(_))) => 3,
            AppError::Core(CoreError::Unsupported(_)) | AppError::Io(IoError::Read { .. }) => 1,
            AppError::Core(_) | AppError::Io(_) | AppError::Input(_) => 2,
            AppError::Output(_) | AppError::Csv(_) | AppError::Json(_) => 1,
        }
    }
}

type Result<T> = std::result::Result<T, AppError>;

#[derive(Debug, Parser)]
#[command(name = "gmedim", version, about = "Certify the dimensionality of genuine multipartite entanglement")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate Q_m on a state and report the certified dimensionality.
    Evaluate(EvaluateArgs),
    /// Schmidt ranks of a pure state across every bipartition.
    Schmidt(SchmidtArgs),
    /// White-noise threshold of a single pure state.
    Threshold(ThresholdArgs),
    /// White-noise thresholds over a grid of (n, d).
    ThresholdTable(TableArgs),
    /// Scan α|GHZ_4⟩⟨GHZ_4| + β|W_4⟩⟨W_4| + noise on three parties.
    RegionScan(RegionArgs),
    /// Print enumerated index sets as party lists.
    Enumerate(EnumerateArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Named state, e.g. `ghz:n=3,d=3,f=3`, `w:n=3,d=3`, `rhoc`.
    #[arg(long)]
    pub state: Option<NamedStateSpec>,
    /// JSON state file (dense, sparse or pure).
    #[arg(long)]
    pub input: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    #[command(flatten)]
    pub source: Source,
    /// Criteria to evaluate; defaults to every m in 0..=n/2.
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<usize>,
    /// Certification margin.
    #[arg(long, default_value_t = DEFAULT_CERTIFY_TOL)]
    pub tol: f64,
    /// Include the per-term breakdown.
    #[arg(long)]
    pub terms: bool,
    /// Also evaluate the two-copy expectation values.
    #[arg(long)]
    pub oracle: bool,
    /// Report hermiticity, trace and smallest eigenvalue.
    #[arg(long)]
    pub check_psd: bool,
    /// Accepted for symmetry; sums are always accumulated sequentially.
    #[arg(long)]
    pub deterministic_sum: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SchmidtArgs {
    #[command(flatten)]
    pub source: Source,
    /// Singular values at or below this count as zero.
    #[arg(long, default_value_t = DEFAULT_RANK_TOL)]
    pub tol: f64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DetectorArg {
    Criterion,
    GhzFidelity,
    WFidelity,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    #[command(flatten)]
    pub source: Source,
    /// Criterion index; defaults to 0 for GHZ, 1 for W, the Dicke m otherwise.
    #[arg(long)]
    pub m: Option<usize>,
    /// Target dimensionality; defaults to d.
    #[arg(long)]
    pub f: Option<usize>,
    #[arg(long, value_enum, default_value_t = DetectorArg::Criterion)]
    pub detector: DetectorArg,
    /// Bisection bracket width.
    #[arg(long, default_value_t = Bisection::default().tol)]
    pub tol: f64,
    #[arg(long, default_value_t = Bisection::default().max_iter)]
    pub max_iter: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Qm,
    Fidelity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FModeArg {
    /// f = 2
    Gme,
    /// f = d
    Full,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Party counts, `lo-hi` or a single value.
    #[arg(long, default_value = "3-6", value_parser = parse_range)]
    pub n: RangeInclusive<usize>,
    /// Local dimensions, `lo-hi` or a single value.
    #[arg(long, default_value = "2-5", value_parser = parse_range)]
    pub d: RangeInclusive<usize>,
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    #[arg(long, value_enum, default_value_t = CriterionArg::Qm)]
    pub criterion: CriterionArg,
    #[arg(long, value_enum, default_value_t = FModeArg::Full)]
    pub f_mode: FModeArg,
    #[arg(long, default_value_t = Bisection::default().tol)]
    pub tol: f64,
    #[arg(long, default_value_t = Bisection::default().max_iter)]
    pub max_iter: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RegionArgs {
    /// Grid points per axis.
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    /// Evaluate grid points on one thread.
    #[arg(long)]
    pub deterministic_sum: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SetKind {
    Bipartitions,
    MSubsets,
    Sigma,
    Delta,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(value_enum)]
    pub kind: SetKind,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Parties of α (delta only), e.g. `1,2`.
    #[arg(long, value_delimiter = ',')]
    pub alpha: Vec<usize>,
    /// Parties of β (delta only).
    #[arg(long, value_delimiter = ',')]
    pub beta: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub l: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn parse_range(s: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let bad = || format!("expected `lo-hi` or a single integer, got '{s}'");
    let (lo, hi) = match s.split_once('-') {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {lo}-{hi}"));
    }
    Ok(lo..=hi)
}

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Evaluate(a) => evaluate(&a),
        Command::Schmidt(a) => schmidt(&a),
        Command::Threshold(a) => threshold(&a),
        Command::ThresholdTable(a) => threshold_table(&a),
        Command::RegionScan(a) => region_scan(&a),
        Command::Enumerate(a) => enumerate(&a),
    }
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_json<T: Serialize>(output: &Option<PathBuf>, value: &T) -> Result<()> {
    let mut text = report::to_report_json(value)?;
    text.push('\n');
    emit(output, &text)
}

/// Loads `--state` or `--input`, with a label for reports.
fn load(source: &Source) -> Result<(String, StateFile)> {
    if let Some(spec) = &source.state {
        let dim = spec.shape.dim();
        if dim > MAX_STATE_DIM {
            return Err(CoreError::TooLarge(format!("d^n = {dim} exceeds {MAX_STATE_DIM}")).into());
        }
        let state = match spec.build()? {
            NamedState::Pure(p) => StateFile::Pure(p),
            NamedState::Mixed(r) => StateFile::Dense(r),
        };
        return Ok((spec.to_string(), state));
    }
    let path = source.input.as_ref().expect("clap requires a source");
    Ok((path.display().to_string(), io::read_state(path)?))
}

/// Runs `f` against the state without densifying pure states.
fn with_provider<R>(state: &StateFile, f: impl FnOnce(&dyn ElementProvider) -> R) -> R {
    match state {
        StateFile::Dense(r) => f(r),
        StateFile::Sparse(s) => f(s),
        StateFile::Pure(p) => f(&NoisyMixture::white_noise(p.clone(), 0.0).expect("zero noise is valid")),
    }
}

fn to_dense(state: &StateFile) -> Result<DensityMatrix> {
    let dim = state.shape().dim();
    if dim.checked_mul(dim).is_none_or(|d2| d2 > MAX_TWO_COPY_DIM) {
        return Err(CoreError::TooLarge(format!("two-copy dimension {dim}^2 exceeds {MAX_TWO_COPY_DIM}")).into());
    }
    Ok(match state {
        StateFile::Dense(r) => r.clone(),
        StateFile::Pure(p) => DensityMatrix::from_pure(p),
        StateFile::Sparse(s) => {
            let entries = (0..dim * dim).map(|i| s.entry(i / dim, i % dim)).collect();
            DensityMatrix::new(s.shape(), entries)?
        }
    })
}

#[derive(Debug, Serialize)]
struct OracleValue {
    m: usize,
    value: f64,
}

#[derive(Debug, Serialize)]
struct EvaluateReport {
    state: String,
    n: usize,
    d: usize,
    reports: Vec<CriterionReport>,
    best_f: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<Vec<OracleValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    diagnostics: Option<Diagnostics>,
}

fn evaluate(a: &EvaluateArgs) -> Result<()> {
    if a.tol.is_nan() || a.tol < 0.0 {
        return Err(AppError::Input(format!("--tol must be nonnegative, got {}", a.tol)));
    }
    let (label, state) = load(&a.source)?;
    let shape = state.shape();
    let m_list: Vec<usize> = if a.m.is_empty() { (0..=shape.n() / 2).collect() } else { a.m.clone() };
    let mut verdict = with_provider(&state, |rho| criteria::verdict(rho, &m_list, a.terms))?;
    for r in &mut verdict.reports {
        r.certified_f = criteria::certify(r.value, shape.d(), a.tol);
    }
    let best_f = verdict.reports.iter().map(|r| r.certified_f).max().unwrap_or(0);
    let oracle = if a.oracle {
        let dense = to_dense(&state)?;
        let values = m_list
            .iter()
            .map(|&m| {
                let value = if m == 0 { oracle::q0_two_copy(&dense)? } else { oracle::qm_two_copy(&dense, m)? };
                Ok(OracleValue { m, value })
            })
            .collect::<Result<Vec<_>>>()?;
        Some(values)
    } else {
        None
    };
    let diagnostics = if a.check_psd { Some(to_dense(&state)?.validate(true)) } else { None };
    emit_json(
        &a.output,
        &EvaluateReport {
            state: label,
            n: shape.n(),
            d: shape.d(),
            reports: verdict.reports,
            best_f,
            oracle,
            diagnostics,
        },
    )
}

#[derive(Debug, Serialize)]
struct SchmidtReport {
    state: String,
    #[serde(flatten)]
    profile: SchmidtProfile,
    #[serde(flatten)]
    dimensionality: PureDimensionality,
}

fn pure_input(label: &str, state: StateFile, command: &str) -> Result<PureState> {
    match state {
        StateFile::Pure(p) => Ok(p),
        _ => Err(AppError::Input(format!(
            "{label} is a mixed state; `{command}` needs a pure state (use `evaluate` for mixed states)"
        ))),
    }
}

fn schmidt(a: &SchmidtArgs) -> Result<()> {
    let (label, state) = load(&a.source)?;
    let psi = pure_input(&label, state, "schmidt")?;
    let profile = oracle::schmidt_profile(&psi, a.tol)?;
    let dimensionality = oracle::dimensionality_of(&profile);
    emit_json(&a.output, &SchmidtReport { state: label, profile, dimensionality })
}

#[derive(Debug, Serialize)]
struct ThresholdReport {
    state: String,
    detector: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    f: usize,
    p_star: f64,
}

fn default_m(spec: Option<&NamedStateSpec>) -> usize {
    match spec {
        Some(s) if s.kind == StateKind::W => 1,
        Some(s) if s.kind == StateKind::Dicke => s.m(),
        _ => 0,
    }
}

fn threshold(a: &ThresholdArgs) -> Result<()> {
    let (label, state) = load(&a.source)?;
    let psi = pure_input(&label, state, "threshold")?;
    let f = a.f.unwrap_or(psi.shape().d());
    let (detector, m, name) = match a.detector {
        DetectorArg::Criterion => {
            let m = a.m.unwrap_or_else(|| default_m(a.source.state.as_ref()));
            (Detector::Criterion { m }, Some(m), "criterion")
        }
        DetectorArg::GhzFidelity => (Detector::GhzFidelity, None, "ghz-fidelity"),
        DetectorArg::WFidelity => (Detector::WFidelity, None, "w-fidelity"),
    };
    let bisection = Bisection { tol: a.tol, max_iter: a.max_iter };
    let p_star = scan::noise_threshold(&psi, detector, f, bisection)?;
    emit_json(&a.output, &ThresholdReport { state: label, detector: name, m, f, p_star })
}

#[derive(Debug, Serialize)]
struct SkippedCell {
    n: usize,
    d: usize,
    reason: String,
}

#[derive(Debug, Serialize)]
struct TableReport {
    rows: Vec<ThresholdRecord>,
    skipped: Vec<SkippedCell>,
}

fn threshold_table(a: &TableArgs) -> Result<()> {
    let criterion = match a.criterion {
        CriterionArg::Qm => TableCriterion::Qm,
        CriterionArg::Fidelity => TableCriterion::Fidelity,
    };
    let f_mode = match a.f_mode {
        FModeArg::Gme => FMode::Gme,
        FModeArg::Full => FMode::Full,
    };
    let bisection = Bisection { tol: a.tol, max_iter: a.max_iter };
    let table = scan::threshold_table(a.n.clone(), a.d.clone(), a.m, criterion, f_mode, bisection);
    for (n, d, reason) in &table.skipped {
        eprintln!("warning: skipped n={n}, d={d}: {reason}");
    }
    let rows: Vec<ThresholdRecord> = table.rows.iter().map(ThresholdRecord::from).collect();
    match a.format {
        Format::Csv => {
            let mut buf = Vec::new();
            report::write_csv(&rows, &mut buf)?;
            emit(&a.output, &String::from_utf8(buf).expect("csv is utf-8"))
        }
        Format::Json => {
            let skipped = table
                .skipped
                .into_iter()
                .map(|(n, d, reason)| SkippedCell { n, d, reason })
                .collect();
            emit_json(&a.output, &TableReport { rows, skipped })
        }
    }
}

/// Region scan in grid order, optionally across threads.
pub fn region_points(steps: usize, parallel: bool) -> Result<Vec<scan::RegionPoint>> {
    let grid = scan::region_grid(steps)?;
    let family = RegionFamily::new();
    let points: std::result::Result<Vec<_>, CoreError> = if parallel {
        grid.par_iter().map(|&(a, b)| family.point(a, b)).collect()
    } else {
        grid.iter().map(|&(a, b)| family.point(a, b)).collect()
    };
    Ok(points?)
}

fn region_scan(a: &RegionArgs) -> Result<()> {
    let points = region_points(a.grid, !a.deterministic_sum)?;
    let rows: Vec<RegionRecord> = points.iter().map(RegionRecord::from).collect();
    match a.format {
        Format::Csv => {
            let mut buf = Vec::new();
            report::write_csv(&rows, &mut buf)?;
            emit(&a.output, &String::from_utf8(buf).expect("csv is utf-8"))
        }
        Format::Json => emit_json(&a.output, &rows),
    }
}

fn enumerate(a: &EnumerateArgs) -> Result<()> {
    let n = a.n;
    match a.kind {
        SetKind::Bipartitions => emit_json(&a.output, &combinatorics::bipartitions(n)?),
        SetKind::MSubsets => emit_json(&a.output, &combinatorics::m_subsets(n, a.m)?),
        SetKind::Sigma => emit_json(&a.output, &combinatorics::sigma_pairs(n, a.m)?),
        SetKind::Delta => {
            let alpha = PartySubset::from_parties(&a.alpha, n)?;
            let beta = PartySubset::from_parties(&a.beta, n)?;
            emit_json(&a.output, &combinatorics::delta_sets(alpha, beta, a.k, a.l, n)?)
        }
    }
}
