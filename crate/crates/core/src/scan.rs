//! White-noise thresholds and the two-parameter GHZ/W region scan.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::criteria;
use crate::states::{self, NamedStateSpec};
use crate::tensor::{ElementProvider, NoisyMixture, PureState, SystemShape};
use crate::{Error, Result};

/// Largest `d^n` a table cell may have.
pub const MAX_TABLE_DIM: usize = 4096;

/// What decides detection as the noise level varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Detector {
    /// `Q_m > f - 2`.
    Criterion { m: usize },
    /// `⟨GHZ_f|ρ|GHZ_f⟩ > (f - 1)/f`.
    GhzFidelity,
    /// `⟨W_f|ρ|W_f⟩ > (n(f - 1) - 1)/(n(f - 1))`.
    WFidelity,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bisection {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for Bisection {
    fn default() -> Self {
        Self { tol: 1e-7, max_iter: 60 }
    }
}

/// Signed detection margin: positive means detected.
pub fn margin<P: ElementProvider + ?Sized>(rho: &P, detector: Detector, f_target: usize) -> Result<f64> {
    Ok(match detector {
        Detector::Criterion { m } => criteria::criterion(rho, m, false)?.value - (f_target as f64 - 2.0),
        Detector::GhzFidelity => {
            let r = criteria::ghz_fidelity_witness(rho, f_target)?;
            r.fidelity - r.bound
        }
        Detector::WFidelity => {
            let r = criteria::w_fidelity_witness(rho, f_target)?;
            r.fidelity - r.bound
        }
    })
}

/// Noise level `p*` at which `p/D · 1 + (1 - p)|ψ⟩⟨ψ|` stops being detected.
///
/// Returns 0 if the pure state is not detected and 1 if even the maximally
/// mixed end is; otherwise bisects `[0, 1]` until the bracket is narrower
/// than `tol` and returns its midpoint.
pub fn noise_threshold(psi: &PureState, detector: Detector, f_target: usize, bisection: Bisection) -> Result<f64> {
    if bisection.tol.is_nan() || bisection.tol <= 0.0 {
        return Err(Error::Parameter(format!("bisection tolerance {} must be positive", bisection.tol)));
    }
    let shape = psi.shape();
    if f_target < 2 || f_target > shape.d() {
        return Err(Error::Parameter(format!("f={f_target} outside 2..={}", shape.d())));
    }
    let at = |p: f64| -> Result<f64> {
        margin(&NoisyMixture::white_noise(psi.clone(), p)?, detector, f_target)
    };
    if at(0.0)? <= 0.0 {
        return Ok(0.0);
    }
    if at(1.0)? > 0.0 {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..bisection.max_iter {
        if hi - lo < bisection.tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if at(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// [`noise_threshold`] for a named pure state.
pub fn noise_threshold_for(spec: &NamedStateSpec, detector: Detector, f_target: usize, bisection: Bisection) -> Result<f64> {
    noise_threshold(&spec.build_pure()?, detector, f_target, bisection)
}

/// Criterion used for a threshold table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableCriterion {
    Qm,
    Fidelity,
}

/// Target dimensionality for a threshold table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FMode {
    /// Plain GME, `f = 2`.
    Gme,
    /// Full dimensionality, `f = d`.
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdRow {
    pub n: usize,
    pub d: usize,
    pub p_star: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ThresholdTable {
    pub rows: Vec<ThresholdRow>,
    /// Cells left out, with the reason.
    pub skipped: Vec<(usize, usize, String)>,
}

/// Family state for a table cell: `GHZ_d` for `m = 0`, `D^m_d` otherwise.
pub fn family_state(shape: SystemShape, m: usize) -> Result<PureState> {
    if m == 0 {
        states::ghz(shape, shape.d())
    } else {
        states::dicke(shape, m, shape.d())
    }
}

fn table_cell(n: usize, d: usize, m: usize, criterion: TableCriterion, f_mode: FMode, bisection: Bisection) -> Result<f64> {
    let shape = SystemShape::new(n, d)?;
    if shape.dim() > MAX_TABLE_DIM {
        return Err(Error::TooLarge(format!("d^n = {} exceeds {MAX_TABLE_DIM}", shape.dim())));
    }
    if m > n / 2 {
        return Err(Error::Parameter(format!("m={m} outside 0..={}", n / 2)));
    }
    let f_target = match f_mode {
        FMode::Gme => 2,
        FMode::Full => d,
    };
    let detector = match (criterion, m) {
        (TableCriterion::Qm, m) => Detector::Criterion { m },
        (TableCriterion::Fidelity, _) if f_mode == FMode::Gme && d > 2 => {
            return Err(Error::Unsupported(
                "fidelity baselines are defined for f = d only".into(),
            ));
        }
        (TableCriterion::Fidelity, 0) => Detector::GhzFidelity,
        (TableCriterion::Fidelity, 1) => Detector::WFidelity,
        (TableCriterion::Fidelity, _) => {
            return Err(Error::Unsupported("fidelity baselines exist for m = 0 and m = 1".into()));
        }
    };
    noise_threshold(&family_state(shape, m)?, detector, f_target, bisection)
}

/// One noise threshold per `(n, d)` cell; cells that are too large or have
/// no valid criterion are recorded in `skipped`.
pub fn threshold_table(
    n_range: core::ops::RangeInclusive<usize>,
    d_range: core::ops::RangeInclusive<usize>,
    m: usize,
    criterion: TableCriterion,
    f_mode: FMode,
    bisection: Bisection,
) -> ThresholdTable {
    let mut table = ThresholdTable::default();
    for n in n_range {
        for d in d_range.clone() {
            match table_cell(n, d, m, criterion, f_mode, bisection) {
                Ok(p_star) => table.rows.push(ThresholdRow { n, d, p_star }),
                Err(e) => table.skipped.push((n, d, format!("{e}"))),
            }
        }
    }
    table
}

/// `α |GHZ_4⟩⟨GHZ_4| + β |W_4⟩⟨W_4| + (1 - α - β)/64 · 1` on three parties.
#[derive(Debug, Clone)]
pub struct RegionFamily {
    ghz: PureState,
    w: PureState,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionPoint {
    pub alpha: f64,
    pub beta: f64,
    /// Best `f` certified by `Q_0` or `Q_1`.
    pub f_q: usize,
    /// 4 if either fidelity witness fires, else 0.
    pub f_fid: usize,
}

impl RegionFamily {
    pub const N: usize = 3;
    pub const D: usize = 4;

    pub fn new() -> Self {
        let shape = SystemShape::new(Self::N, Self::D).expect("valid shape");
        Self {
            ghz: states::ghz(shape, Self::D).expect("valid f"),
            w: states::w_state(shape, Self::D).expect("valid f"),
        }
    }

    pub fn state(&self, alpha: f64, beta: f64) -> Result<NoisyMixture> {
        if !(alpha >= 0.0 && beta >= 0.0 && alpha + beta <= 1.0 + 1e-12) {
            return Err(Error::Parameter(format!("({alpha}, {beta}) outside the simplex")));
        }
        let noise = (1.0 - alpha - beta).max(0.0);
        NoisyMixture::new(noise, alloc::vec![(alpha, self.ghz.clone()), (beta, self.w.clone())])
    }

    pub fn point(&self, alpha: f64, beta: f64) -> Result<RegionPoint> {
        let rho = self.state(alpha, beta)?;
        let q0 = criteria::q0(&rho)?;
        let q1 = criteria::qm(&rho, 1)?;
        let f_q = q0.certified_f.max(q1.certified_f);
        let fid = criteria::ghz_fidelity_witness(&rho, Self::D)?.detected
            || criteria::w_fidelity_witness(&rho, Self::D)?.detected;
        Ok(RegionPoint { alpha, beta, f_q, f_fid: if fid { Self::D } else { 0 } })
    }
}

impl Default for RegionFamily {
    fn default() -> Self {
        Self::new()
    }
}

/// Grid coordinates `(α, β)` with `α + β <= 1`, `steps` values per axis
/// spaced evenly over `[0, 1]`, `α` outermost.
pub fn region_grid(steps: usize) -> Result<Vec<(f64, f64)>> {
    if steps < 2 {
        return Err(Error::Parameter(format!("grid needs at least 2 steps, got {steps}")));
    }
    let h = (steps - 1) as f64;
    let mut out = Vec::new();
    for i in 0..steps {
        for j in 0..steps - i {
            out.push((i as f64 / h, j as f64 / h));
        }
    }
    Ok(out)
}

/// Serial region scan over [`region_grid`].
pub fn region_scan(steps: usize) -> Result<Vec<RegionPoint>> {
    let family = RegionFamily::new();
    region_grid(steps)?
        .into_iter()
        .map(|(a, b)| family.point(a, b))
        .collect()
}
