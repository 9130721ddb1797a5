//! Slow reference evaluations for tiny systems.
//!
//! [`q0_two_copy`] and [`qm_two_copy`] evaluate the criteria literally:
//! swap operators are built digit by digit on `H ⊗ H`, applied to the
//! two-copy basis vector, and the expectation value in `ρ ⊗ ρ` is read from
//! the Kronecker product. The index sets are enumerated here from scratch
//! rather than taken from [`crate::combinatorics`], so agreement with
//! [`crate::criteria`] is a genuine cross-check.
//!
//! The pure-state part computes Schmidt ranks across every bipartition.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::combinatorics::{self, PartySubset};
use crate::linalg;
use crate::tensor::{basis_index, basis_label, BasisLabel, DensityMatrix, PureState, SystemShape};
use crate::{Error, Result};

/// Largest two-copy dimension `d^(2n)` the oracle accepts.
pub const MAX_TWO_COPY_DIM: usize = 1 << 20;

/// Default threshold on singular values when counting Schmidt rank.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// A 0/1 permutation matrix on `H ⊗ H`, stored by the image of each basis
/// vector: column `j` has its single 1 in row `image[j]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationMatrix {
    image: Vec<usize>,
}

impl PermutationMatrix {
    pub fn dim(&self) -> usize {
        self.image.len()
    }

    /// Matrix entry `(row, col)`.
    pub fn entry(&self, row: usize, col: usize) -> u8 {
        u8::from(self.image[col] == row)
    }

    /// `self · other`.
    pub fn compose(&self, other: &PermutationMatrix) -> PermutationMatrix {
        PermutationMatrix {
            image: other.image.iter().map(|&j| self.image[j]).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// Exactly one 1 in every row and every column.
    pub fn is_permutation(&self) -> bool {
        let mut hit = alloc::vec![false; self.dim()];
        for &r in &self.image {
            if r >= hit.len() || core::mem::replace(&mut hit[r], true) {
                return false;
            }
        }
        true
    }

    /// `P · e_col` as a sparse vector (nonzero entries only), found by
    /// scanning the column.
    fn apply_to_basis(&self, col: usize) -> Vec<(usize, f64)> {
        (0..self.dim())
            .filter(|&row| self.entry(row, col) == 1)
            .map(|row| (row, 1.0))
            .collect()
    }
}

fn two_copy_shape(shape: &SystemShape) -> Result<SystemShape> {
    let doubled = SystemShape::new(2 * shape.n(), shape.d())
        .map_err(|_| Error::TooLarge(format!("two-copy space of n={} overflows", shape.n())))?;
    if doubled.dim() > MAX_TWO_COPY_DIM {
        return Err(Error::TooLarge(format!(
            "two-copy dimension {} exceeds {MAX_TWO_COPY_DIM}",
            doubled.dim()
        )));
    }
    Ok(doubled)
}

/// The operator exchanging the parties in `a` between the two copies of
/// `H`. `a` may be any nonempty subset, including all parties.
pub fn permutation_matrix(a: PartySubset, shape: &SystemShape) -> Result<PermutationMatrix> {
    let doubled = two_copy_shape(shape)?;
    let n = shape.n();
    if a.is_empty() || a.difference(PartySubset::full(n)) != PartySubset::EMPTY {
        return Err(Error::InvalidBipartition(format!("{a:?} is not a nonempty subset of 1..={n}")));
    }
    let swapped = a.parties();
    let image = (0..doubled.dim())
        .map(|j| {
            let mut digits = basis_label(j, &doubled)?.0;
            for &p in &swapped {
                digits.swap(p - 1, n + p - 1);
            }
            basis_index(&BasisLabel(digits), &doubled)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PermutationMatrix { image })
}

/// `⟨e_I| P† (ρ ⊗ ρ) P |e_I⟩`.
fn two_copy_expectation(rho: &DensityMatrix, p: &PermutationMatrix, index: usize) -> f64 {
    let dim = rho.dim();
    let w = p.apply_to_basis(index);
    let mut acc = Complex64::new(0.0, 0.0);
    for &(a, wa) in &w {
        for &(b, wb) in &w {
            let kron = rho.get(a / dim, b / dim) * rho.get(a % dim, b % dim);
            acc += wa * wb * kron;
        }
    }
    acc.re
}

fn sqrt_nonneg(x: f64) -> Result<f64> {
    if x < -1e-12 {
        return Err(Error::InvalidState(format!("negative two-copy expectation {x}")));
    }
    Ok(libm::sqrt(x.max(0.0)))
}

fn label_of(digits: Vec<usize>, shape: &SystemShape) -> Result<usize> {
    basis_index(&BasisLabel(digits), shape)
}

/// All subsets of `{1, …, n}` as sorted party lists, smallest mask first.
fn all_subsets(n: usize) -> Vec<Vec<usize>> {
    (0u64..(1 << n))
        .map(|mask| (1..=n).filter(|p| mask & (1 << (p - 1)) != 0).collect())
        .collect()
}

fn to_subset(parties: &[usize], n: usize) -> PartySubset {
    PartySubset::from_parties(parties, n).expect("parties in range")
}

/// `Q_0` evaluated with explicit swap operators on `ρ ⊗ ρ`.
pub fn q0_two_copy(rho: &DensityMatrix) -> Result<f64> {
    let shape = rho.shape();
    let (n, d, dim) = (shape.n(), shape.d(), shape.dim());
    two_copy_shape(&shape)?;
    // One side per bipartition: the side holding party 1.
    let cuts: Vec<PermutationMatrix> = all_subsets(n)
        .into_iter()
        .filter(|s| s.first() == Some(&1) && s.len() < n)
        .map(|s| permutation_matrix(to_subset(&s, n), &shape))
        .collect::<Result<_>>()?;
    let mut total = 0.0;
    for k in 0..d {
        for l in (0..d).filter(|&l| l != k) {
            let kn = label_of(alloc::vec![k; n], &shape)?;
            let ln = label_of(alloc::vec![l; n], &shape)?;
            total += rho.get(kn, ln).norm();
            for p in &cuts {
                total -= sqrt_nonneg(two_copy_expectation(rho, p, kn * dim + ln))?;
            }
        }
    }
    Ok(total)
}

/// Digits of `|α^l⟩`: level `l + 1` on `alpha`, `l` elsewhere.
fn raised_digits(alpha: &[usize], l: usize, n: usize) -> Vec<usize> {
    (1..=n).map(|p| if alpha.contains(&p) { l + 1 } else { l }).collect()
}

/// `Q_m` evaluated with explicit swap operators on `ρ ⊗ ρ`.
pub fn qm_two_copy(rho: &DensityMatrix, m: usize) -> Result<f64> {
    let shape = rho.shape();
    let (n, d, dim) = (shape.n(), shape.d(), shape.dim());
    two_copy_shape(&shape)?;
    if m < 1 || m > n / 2 {
        return Err(Error::Parameter(format!("m={m} outside 1..={}", n / 2)));
    }
    let subsets: Vec<Vec<usize>> = all_subsets(n).into_iter().filter(|s| s.len() == m).collect();
    let mut sigma = Vec::new();
    for a in &subsets {
        for b in &subsets {
            if a.iter().filter(|p| b.contains(p)).count() == m - 1 {
                sigma.push((a.clone(), b.clone()));
            }
        }
    }
    let mut cache: Vec<(Vec<usize>, PermutationMatrix)> = Vec::new();
    let mut swap_for = |parties: &[usize]| -> Result<PermutationMatrix> {
        if let Some((_, p)) = cache.iter().find(|(s, _)| s == parties) {
            return Ok(p.clone());
        }
        let p = permutation_matrix(to_subset(parties, n), &shape)?;
        cache.push((parties.to_vec(), p.clone()));
        Ok(p)
    };
    let mut total = 0.0;
    for k in 0..d - 1 {
        for l in 0..d - 1 {
            for (a, b) in &sigma {
                let row = label_of(raised_digits(a, k, n), &shape)?;
                let col = label_of(raised_digits(b, l, n), &shape)?;
                total += rho.get(row, col).norm();
                let deltas: Vec<Vec<usize>> = if k == l {
                    alloc::vec![a.clone()]
                } else {
                    let removed: Vec<usize> = if k < l {
                        a.iter().copied().filter(|p| !b.contains(p)).collect()
                    } else {
                        b.iter().copied().filter(|p| !a.contains(p)).collect()
                    };
                    let base: Vec<usize> = (1..=n).filter(|p| !removed.contains(p)).collect();
                    all_subsets(n)
                        .into_iter()
                        .filter(|s| !s.is_empty() && s.len() < base.len() && s.iter().all(|p| base.contains(p)))
                        .collect()
                };
                for delta in deltas {
                    let p = swap_for(&delta)?;
                    total -= sqrt_nonneg(two_copy_expectation(rho, &p, row * dim + col))?;
                }
            }
        }
    }
    let n_d = ((d - 1) * m * (n - m - 1)) as f64;
    let mut diag = 0.0;
    for l in 0..d - 1 {
        for a in &subsets {
            let i = label_of(raised_digits(a, l, n), &shape)?;
            diag += rho.get(i, i).re;
        }
    }
    Ok((total - n_d * diag) / m as f64)
}

/// Schmidt coefficients across one bipartition.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SchmidtEntry {
    #[cfg_attr(feature = "serde", serde(rename = "A"))]
    pub subset: PartySubset,
    pub rank: usize,
    /// Non-increasing.
    pub singular_values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SchmidtProfile {
    pub entries: Vec<SchmidtEntry>,
    pub min_rank: usize,
    pub max_rank: usize,
}

/// Entanglement dimensionality of a pure state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PureDimensionality {
    /// Largest Schmidt rank; 1 means fully separable.
    pub f_entanglement: usize,
    /// Smallest Schmidt rank if at least 2, otherwise 0 (not GME).
    pub f_gme: usize,
}

/// Singular values of the coefficient matrix across every bipartition
/// (canonical representatives from [`combinatorics::bipartitions`]).
pub fn schmidt_profile(psi: &PureState, rank_tol: f64) -> Result<SchmidtProfile> {
    let n = psi.shape().n();
    let mut entries = Vec::new();
    for a in combinatorics::bipartitions(n)? {
        let (rows, cols, m) = psi.coefficient_matrix(a)?;
        let singular_values = linalg::singular_values(rows, cols, &m);
        let rank = singular_values.iter().filter(|&&s| s > rank_tol).count();
        entries.push(SchmidtEntry { subset: a, rank, singular_values });
    }
    let min_rank = entries.iter().map(|e| e.rank).min().unwrap_or(0);
    let max_rank = entries.iter().map(|e| e.rank).max().unwrap_or(0);
    Ok(SchmidtProfile { entries, min_rank, max_rank })
}

pub fn pure_dimensionality(psi: &PureState, rank_tol: f64) -> Result<PureDimensionality> {
    Ok(dimensionality_of(&schmidt_profile(psi, rank_tol)?))
}

pub fn dimensionality_of(profile: &SchmidtProfile) -> PureDimensionality {
    PureDimensionality {
        f_entanglement: profile.max_rank,
        f_gme: if profile.min_rank >= 2 { profile.min_rank } else { 0 },
    }
}
