use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{subset_offsets, PureState, SystemShape};
use crate::combinatorics::PartySubset;
use crate::linalg;
use crate::{Error, Result};

/// Maximum entrywise deviation from `ρ = ρ†` accepted at construction.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Maximum `|tr ρ - 1|` accepted at construction.
pub const TRACE_TOL: f64 = 1e-10;

/// Dense row-major density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    shape: SystemShape,
    entries: Vec<Complex64>,
}

/// Numeric deviations of a candidate density matrix. Pass/fail is left to
/// the caller.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Diagnostics {
    pub hermiticity_deviation: f64,
    pub trace_deviation: f64,
    /// Only present when the eigenvalue check was requested.
    pub min_eigenvalue: Option<f64>,
}

/// Measures hermiticity, trace and (optionally) the smallest eigenvalue of
/// a row-major `dim × dim` matrix.
pub fn measure(dim: usize, entries: &[Complex64], check_psd: bool) -> Diagnostics {
    debug_assert_eq!(entries.len(), dim * dim);
    let mut herm = 0.0f64;
    let mut trace = Complex64::new(0.0, 0.0);
    for r in 0..dim {
        trace += entries[r * dim + r];
        for c in r..dim {
            let dev = (entries[r * dim + c] - entries[c * dim + r].conj()).norm();
            herm = herm.max(dev);
        }
    }
    let min_eigenvalue = check_psd.then(|| {
        linalg::hermitian_eigenvalues(dim, entries)
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    });
    Diagnostics {
        hermiticity_deviation: herm,
        trace_deviation: (trace - Complex64::new(1.0, 0.0)).norm(),
        min_eigenvalue,
    }
}

impl DensityMatrix {
    /// Validates hermiticity and unit trace. Positivity is not checked; use
    /// [`DensityMatrix::validate`] with `check_psd` for that.
    pub fn new(shape: SystemShape, entries: Vec<Complex64>) -> Result<Self> {
        let dim = shape.dim();
        if entries.len() != dim * dim {
            return Err(Error::InvalidState(format!(
                "expected {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        let diag = measure(dim, &entries, false);
        if diag.hermiticity_deviation > HERMITICITY_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {:e})",
                diag.hermiticity_deviation
            )));
        }
        if diag.trace_deviation > TRACE_TOL {
            return Err(Error::InvalidState(format!(
                "trace deviates from 1 by {:e}",
                diag.trace_deviation
            )));
        }
        Ok(Self { shape, entries })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn from_pure(psi: &PureState) -> Self {
        Self::mixture_of_pure(psi.shape(), 0.0, &[(1.0, psi)])
    }

    /// `noise/D · 1 + Σ w_i |ψ_i⟩⟨ψ_i|`. Callers guarantee the weights sum
    /// to one and all states share `shape`.
    pub(crate) fn mixture_of_pure(shape: SystemShape, noise: f64, parts: &[(f64, &PureState)]) -> Self {
        let dim = shape.dim();
        let mut entries = alloc::vec![Complex64::new(0.0, 0.0); dim * dim];
        for &(w, psi) in parts {
            let amps = psi.amplitudes();
            for (r, ar) in amps.iter().enumerate() {
                if ar.norm_sqr() == 0.0 {
                    continue;
                }
                let row = &mut entries[r * dim..(r + 1) * dim];
                for (slot, ac) in row.iter_mut().zip(amps) {
                    *slot += w * ar * ac.conj();
                }
            }
        }
        let diag = noise / dim as f64;
        for i in 0..dim {
            entries[i * dim + i] += diag;
        }
        Self { shape, entries }
    }

    /// Convex combination `Σ w_i ρ_i`.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Parameter("empty mixture".into()))?;
        let shape = first.1.shape;
        let mut entries = alloc::vec![Complex64::new(0.0, 0.0); first.1.entries.len()];
        for &(w, rho) in parts {
            shape.check(&rho.shape)?;
            if w < 0.0 {
                return Err(Error::Parameter(format!("negative mixture weight {w}")));
            }
            for (e, x) in entries.iter_mut().zip(&rho.entries) {
                *e += w * x;
            }
        }
        Self::new(shape, entries)
    }

    #[inline]
    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row * self.dim() + col]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Complex64> {
        self.entries
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn validate(&self, check_psd: bool) -> Diagnostics {
        measure(self.dim(), &self.entries, check_psd)
    }

    /// Numerical rank: eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        linalg::hermitian_eigenvalues(self.dim(), &self.entries)
            .into_iter()
            .filter(|&x| x > tol)
            .count()
    }

    /// Traces out every party not in `keep`; the result lives on the kept
    /// parties in their original order.
    pub fn partial_trace(&self, keep: PartySubset) -> Result<DensityMatrix> {
        let n = self.shape.n();
        keep.check_bipartition(n)?;
        let kept = subset_offsets(&self.shape, keep);
        let traced = subset_offsets(&self.shape, keep.complement(n));
        let k = kept.len();
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); k * k];
        for (i, &ri) in kept.iter().enumerate() {
            for (j, &cj) in kept.iter().enumerate() {
                out[i * k + j] = traced.iter().map(|&t| self.get(ri + t, cj + t)).sum();
            }
        }
        DensityMatrix::new(SystemShape::subsystem(keep.len(), self.shape.d())?, out)
    }
}
