use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::{basis_index, BasisLabel, DensityMatrix, PureState, SystemShape};
use crate::{Error, Result};

/// Agreement required between backends describing the same state.
pub const BACKEND_TOL: f64 = 1e-14;

/// Read-only access to density-matrix elements `⟨row|ρ|col⟩`.
///
/// The criteria only ever read a handful of elements, so a backend does not
/// need to materialize the full matrix.
pub trait ElementProvider {
    fn shape(&self) -> SystemShape;

    /// Element at flat indices. Panics if either index is out of range.
    fn entry(&self, row: usize, col: usize) -> Complex64;

    /// Element addressed by basis labels.
    fn element(&self, row: &BasisLabel, col: &BasisLabel) -> Result<Complex64> {
        let shape = self.shape();
        let (r, c) = (label_index(row, &shape)?, label_index(col, &shape)?);
        Ok(self.entry(r, c))
    }
}

fn label_index(label: &BasisLabel, shape: &SystemShape) -> Result<usize> {
    if label.digits().len() != shape.n() {
        return Err(Error::ShapeMismatch {
            expected_n: shape.n(),
            expected_d: shape.d(),
            n: label.digits().len(),
            d: shape.d(),
        });
    }
    basis_index(label, shape)
}

impl<P: ElementProvider + ?Sized> ElementProvider for &P {
    fn shape(&self) -> SystemShape {
        (**self).shape()
    }

    fn entry(&self, row: usize, col: usize) -> Complex64 {
        (**self).entry(row, col)
    }
}

impl ElementProvider for DensityMatrix {
    fn shape(&self) -> SystemShape {
        DensityMatrix::shape(self)
    }

    fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.get(row, col)
    }
}

/// Sparse Hermitian element map. Absent keys read as zero; inserting
/// `(r, c)` also stores the conjugate at `(c, r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseElements {
    shape: SystemShape,
    elements: BTreeMap<(usize, usize), Complex64>,
}

impl SparseElements {
    pub fn new(shape: SystemShape) -> Self {
        Self {
            shape,
            elements: BTreeMap::new(),
        }
    }

    /// Keeps every upper-triangle entry of `rho` whose modulus exceeds
    /// `threshold`, mirrored so the map is exactly Hermitian.
    pub fn from_dense(rho: &DensityMatrix, threshold: f64) -> Self {
        let dim = rho.dim();
        let mut elements = BTreeMap::new();
        for r in 0..dim {
            for c in r..dim {
                let v = rho.get(r, c);
                if v.norm() > threshold {
                    let v = if r == c { Complex64::new(v.re, 0.0) } else { v };
                    elements.insert((r, c), v);
                    elements.insert((c, r), v.conj());
                }
            }
        }
        Self {
            shape: rho.shape(),
            elements,
        }
    }

    /// Inserts `⟨row|ρ|col⟩ = value` together with its Hermitian partner.
    /// Fails if this contradicts an element already present.
    pub fn insert(&mut self, row: &BasisLabel, col: &BasisLabel, value: Complex64) -> Result<()> {
        let shape = self.shape;
        let (r, c) = (label_index(row, &shape)?, label_index(col, &shape)?);
        self.insert_index(r, c, value)
    }

    pub fn insert_index(&mut self, r: usize, c: usize, value: Complex64) -> Result<()> {
        let dim = self.shape.dim();
        if r >= dim || c >= dim {
            return Err(Error::InvalidLabel(format!("index ({r}, {c}) out of range")));
        }
        if r == c && value.im.abs() > BACKEND_TOL {
            return Err(Error::InvalidState(format!(
                "diagonal element at {r} has imaginary part {}",
                value.im
            )));
        }
        for (key, v) in [((r, c), value), ((c, r), value.conj())] {
            if let Some(old) = self.elements.get(&key) {
                if (old - v).norm() > BACKEND_TOL {
                    return Err(Error::InvalidState(format!(
                        "conflicting values for element {key:?}: {old} vs {v}"
                    )));
                }
            }
        }
        let v = if r == c { Complex64::new(value.re, 0.0) } else { value };
        self.elements.insert((r, c), v);
        self.elements.insert((c, r), v.conj());
        Ok(())
    }

    /// Stored elements in `(row, col)` order, flat-indexed.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.elements.iter().map(|(&(r, c), &v)| (r, c, v))
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Sum of the stored diagonal elements.
    pub fn trace(&self) -> f64 {
        self.elements
            .iter()
            .filter(|(&(r, c), _)| r == c)
            .map(|(_, v)| v.re)
            .sum()
    }
}

impl ElementProvider for SparseElements {
    fn shape(&self) -> SystemShape {
        self.shape
    }

    fn entry(&self, row: usize, col: usize) -> Complex64 {
        let dim = self.shape.dim();
        assert!(row < dim && col < dim, "index out of range");
        self.elements
            .get(&(row, col))
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }
}

/// Closed-form `ρ = noise/D · 1 + Σ_i w_i |ψ_i⟩⟨ψ_i|`, evaluated per element
/// without building the `D × D` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyMixture {
    shape: SystemShape,
    noise: f64,
    components: Vec<(f64, PureState)>,
}

impl NoisyMixture {
    pub fn new(noise: f64, components: Vec<(f64, PureState)>) -> Result<Self> {
        let shape = components
            .first()
            .map(|(_, psi)| psi.shape())
            .ok_or_else(|| Error::Parameter("mixture needs at least one pure component".into()))?;
        let mut total = noise;
        for (w, psi) in &components {
            shape.check(&psi.shape())?;
            if w.is_nan() || *w < 0.0 {
                return Err(Error::Parameter(format!("invalid mixture weight {w}")));
            }
            total += w;
        }
        if noise.is_nan() || noise < 0.0 || (total - 1.0).abs() > super::TRACE_TOL {
            return Err(Error::Parameter(format!(
                "noise {noise} and weights must be nonnegative and sum to 1 (sum {total})"
            )));
        }
        Ok(Self {
            shape,
            noise,
            components,
        })
    }

    /// `p/D · 1 + (1 - p) |ψ⟩⟨ψ|`.
    pub fn white_noise(psi: PureState, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::Parameter(format!("noise level {p} outside [0, 1]")));
        }
        Self::new(p, alloc::vec![(1.0 - p, psi)])
    }

    pub fn noise(&self) -> f64 {
        self.noise
    }

    pub fn components(&self) -> &[(f64, PureState)] {
        &self.components
    }

    /// Dense matrix with the same elements.
    pub fn to_dense(&self) -> DensityMatrix {
        let parts: Vec<(f64, &PureState)> = self.components.iter().map(|(w, p)| (*w, p)).collect();
        DensityMatrix::mixture_of_pure(self.shape, self.noise, &parts)
    }
}

impl ElementProvider for NoisyMixture {
    fn shape(&self) -> SystemShape {
        self.shape
    }

    fn entry(&self, row: usize, col: usize) -> Complex64 {
        let mut v: Complex64 = self
            .components
            .iter()
            .map(|(w, psi)| *w * psi.amplitude(row) * psi.amplitude(col).conj())
            .sum();
        if row == col {
            v += self.noise / self.shape.dim() as f64;
        }
        v
    }
}
