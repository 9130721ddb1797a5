//! Basis indexing and state containers for `n` parties of `d` levels each.
//!
//! Flat indices use big-endian mixed-radix encoding: party 1 is the most
//! significant digit, so `(0, 1, 2)` with `d = 3` is `0*9 + 1*3 + 2 = 5`.
//! Party indices are 1-based everywhere in the public API.

mod density;
mod provider;
mod pure;

use alloc::format;
use alloc::vec::Vec;

use crate::combinatorics::PartySubset;
use crate::{Error, Result};

pub use density::{measure, Diagnostics, DensityMatrix, HERMITICITY_TOL, TRACE_TOL};
pub use provider::{ElementProvider, NoisyMixture, SparseElements, BACKEND_TOL};
pub use pure::{PureState, NORM_TOL};

/// Party count `n` and local dimension `d` of the Hilbert space `(C^d)^{⊗n}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SystemShape {
    n: usize,
    d: usize,
    #[cfg_attr(feature = "serde", serde(skip))]
    dim: usize,
}

impl SystemShape {
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if n < 2 || d < 2 {
            return Err(Error::InvalidShape(format!(
                "need n >= 2 and d >= 2, got n={n}, d={d}"
            )));
        }
        let dim = u32::try_from(n)
            .ok()
            .and_then(|e| d.checked_pow(e))
            .ok_or_else(|| Error::InvalidShape(format!("d^n overflows for n={n}, d={d}")))?;
        Ok(Self { n, d, dim })
    }

    /// Shape of a reduced state on `n >= 1` parties.
    pub(crate) fn subsystem(n: usize, d: usize) -> Result<Self> {
        if n == 1 {
            return Ok(Self { n, d, dim: d });
        }
        Self::new(n, d)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    /// Total dimension `d^n`.
    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Place value of a 1-based party in the flat index, `d^(n - party)`.
    #[inline]
    pub fn weight(&self, party: usize) -> usize {
        debug_assert!(party >= 1 && party <= self.n);
        self.d.pow((self.n - party) as u32)
    }

    /// Flat index of `|k⟩^{⊗n}`.
    #[inline]
    pub fn uniform_index(&self, k: usize) -> usize {
        // (d^n - 1) / (d - 1) is the sum of all place values.
        k * ((self.dim - 1) / (self.d - 1))
    }

    /// Sum of the place values of the parties in `subset`.
    #[inline]
    pub fn subset_weight(&self, subset: PartySubset) -> usize {
        subset.parties().into_iter().map(|p| self.weight(p)).sum()
    }

    /// Flat index of the product vector with the parties in `raised` at
    /// level `l + 1` and all others at level `l`.
    #[inline]
    pub fn raised_index(&self, raised: PartySubset, l: usize) -> usize {
        self.uniform_index(l) + self.subset_weight(raised)
    }

    pub fn check(&self, other: &SystemShape) -> Result<()> {
        if self.n != other.n || self.d != other.d {
            return Err(Error::ShapeMismatch {
                expected_n: self.n,
                expected_d: self.d,
                n: other.n,
                d: other.d,
            });
        }
        Ok(())
    }
}

/// Flat-index contributions of every digit assignment to the parties in
/// `subset`, enumerated big-endian over those parties. A full flat index
/// is the sum of the contributions of a subset and its complement.
pub(crate) fn subset_offsets(shape: &SystemShape, subset: PartySubset) -> Vec<usize> {
    let mut offsets = alloc::vec![0usize];
    for party in subset.parties() {
        let w = shape.weight(party);
        offsets = offsets
            .iter()
            .flat_map(|&o| (0..shape.d).map(move |x| o + x * w))
            .collect();
    }
    offsets
}

/// A computational-basis product vector `|i_1 i_2 … i_n⟩`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisLabel(pub Vec<usize>);

impl BasisLabel {
    pub fn digits(&self) -> &[usize] {
        &self.0
    }

    pub fn validate(&self, shape: &SystemShape) -> Result<()> {
        if self.0.len() != shape.n {
            return Err(Error::InvalidLabel(format!(
                "label has {} digits, expected {}",
                self.0.len(),
                shape.n
            )));
        }
        if let Some(&bad) = self.0.iter().find(|&&x| x >= shape.d) {
            return Err(Error::InvalidLabel(format!(
                "digit {bad} out of range for d={}",
                shape.d
            )));
        }
        Ok(())
    }
}

impl From<Vec<usize>> for BasisLabel {
    fn from(digits: Vec<usize>) -> Self {
        Self(digits)
    }
}

impl From<&[usize]> for BasisLabel {
    fn from(digits: &[usize]) -> Self {
        Self(digits.to_vec())
    }
}

/// Flat index of `label` under the big-endian mixed-radix encoding.
pub fn basis_index(label: &BasisLabel, shape: &SystemShape) -> Result<usize> {
    label.validate(shape)?;
    Ok(label.0.iter().fold(0, |acc, &x| acc * shape.d + x))
}

/// Inverse of [`basis_index`].
pub fn basis_label(index: usize, shape: &SystemShape) -> Result<BasisLabel> {
    if index >= shape.dim {
        return Err(Error::InvalidLabel(format!(
            "index {index} out of range for dimension {}",
            shape.dim
        )));
    }
    let mut digits = alloc::vec![0; shape.n];
    let mut rest = index;
    for slot in digits.iter_mut().rev() {
        *slot = rest % shape.d;
        rest /= shape.d;
    }
    Ok(BasisLabel(digits))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn shape_rejects_small_and_overflowing() {
        assert!(SystemShape::new(1, 3).is_err());
        assert!(SystemShape::new(3, 1).is_err());
        assert!(SystemShape::new(200, 2).is_err());
        assert_eq!(SystemShape::new(3, 4).unwrap().dim(), 64);
    }

    #[test]
    fn index_examples() {
        let s = SystemShape::new(3, 3).unwrap();
        assert_eq!(basis_index(&vec![0, 0, 0].into(), &s).unwrap(), 0);
        assert_eq!(basis_index(&vec![0, 1, 2].into(), &s).unwrap(), 5);
        assert_eq!(s.uniform_index(2), 26);
        assert!(matches!(
            basis_index(&vec![0, 3, 0].into(), &s),
            Err(Error::InvalidLabel(_))
        ));
        assert!(basis_index(&vec![0, 1].into(), &s).is_err());
    }

    #[test]
    fn round_trip_n3_d4() {
        let s = SystemShape::new(3, 4).unwrap();
        let mut seen = 0;
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    let lbl = BasisLabel(vec![a, b, c]);
                    let idx = basis_index(&lbl, &s).unwrap();
                    assert_eq!(basis_label(idx, &s).unwrap(), lbl);
                    seen += 1;
                }
            }
        }
        assert_eq!(seen, 64);
    }

    #[test]
    fn encoding_is_bijective_up_to_4096() {
        for (n, d) in [(2, 2), (3, 5), (4, 8), (6, 4), (12, 2)] {
            let s = SystemShape::new(n, d).unwrap();
            assert!(s.dim() <= 4096);
            for i in 0..s.dim() {
                assert_eq!(basis_index(&basis_label(i, &s).unwrap(), &s).unwrap(), i);
            }
            assert!(basis_label(s.dim(), &s).is_err());
        }
    }

    #[test]
    fn weights_match_encoding() {
        let s = SystemShape::new(4, 3).unwrap();
        assert_eq!(s.weight(1), 27);
        assert_eq!(s.weight(4), 1);
        let idx = basis_index(&vec![1, 1, 1, 1].into(), &s).unwrap();
        assert_eq!(s.uniform_index(1), idx);
    }
}
