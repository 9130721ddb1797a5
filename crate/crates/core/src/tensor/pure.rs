use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{subset_offsets, DensityMatrix, SystemShape};
use crate::combinatorics::PartySubset;
use crate::{Error, Result};

/// Tolerance on `| ⟨ψ|ψ⟩ - 1 |`.
pub const NORM_TOL: f64 = 1e-12;

/// A normalized state vector over the `d^n` product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    shape: SystemShape,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(shape: SystemShape, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != shape.dim() {
            return Err(Error::InvalidState(format!(
                "expected {} amplitudes, got {}",
                shape.dim(),
                amplitudes.len()
            )));
        }
        let norm_sqr: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!(
                "squared norm {norm_sqr} differs from 1"
            )));
        }
        Ok(Self { shape, amplitudes })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(shape: SystemShape, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = libm::sqrt(amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>());
        if !norm.is_finite() || norm <= 0.0 {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::new(shape, amplitudes)
    }

    /// The basis vector with flat index `index`.
    pub fn basis(shape: SystemShape, index: usize) -> Result<Self> {
        if index >= shape.dim() {
            return Err(Error::Parameter(format!("basis index {index} out of range")));
        }
        let mut amps = alloc::vec![Complex64::new(0.0, 0.0); shape.dim()];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { shape, amplitudes: amps })
    }

    #[inline]
    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    #[inline]
    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    /// Number of amplitudes with modulus above `tol`.
    pub fn support_size(&self, tol: f64) -> usize {
        self.amplitudes.iter().filter(|a| a.norm() > tol).count()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        self.shape.check(&other.shape)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Tensor product `self ⊗ other` with `self`'s parties first.
    pub fn tensor(&self, other: &PureState) -> Result<PureState> {
        if self.shape.d() != other.shape.d() {
            return Err(Error::Parameter("tensor factors need equal local dimension".into()));
        }
        let shape = SystemShape::new(self.shape.n() + other.shape.n(), self.shape.d())?;
        let mut amps = Vec::with_capacity(shape.dim());
        for a in &self.amplitudes {
            amps.extend(other.amplitudes.iter().map(|b| a * b));
        }
        Ok(Self { shape, amplitudes: amps })
    }

    /// Coefficient matrix across the cut `(A | complement)`, row-major with
    /// rows indexed by the digits of `A` and columns by the rest.
    pub fn coefficient_matrix(&self, a: PartySubset) -> Result<(usize, usize, Vec<Complex64>)> {
        a.check_bipartition(self.shape.n())?;
        let rows = subset_offsets(&self.shape, a);
        let cols = subset_offsets(&self.shape, a.complement(self.shape.n()));
        let mut m = Vec::with_capacity(rows.len() * cols.len());
        for &r in &rows {
            m.extend(cols.iter().map(|&c| self.amplitudes[r + c]));
        }
        Ok((rows.len(), cols.len(), m))
    }

    /// Reduced density matrix on the parties in `keep`.
    pub fn reduced(&self, keep: PartySubset) -> Result<DensityMatrix> {
        let (r, c, m) = self.coefficient_matrix(keep)?;
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); r * r];
        for i in 0..r {
            for j in 0..r {
                out[i * r + j] = (0..c).map(|t| m[i * c + t] * m[j * c + t].conj()).sum();
            }
        }
        DensityMatrix::new(SystemShape::subsystem(keep.len(), self.shape.d())?, out)
    }
}
