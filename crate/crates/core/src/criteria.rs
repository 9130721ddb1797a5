//! The dimensionality criteria `Q_0` and `Q_m`, the fidelity baselines and
//! the rule turning a criterion value into a certified dimensionality.
//!
//! Both criteria are read off a handful of density-matrix elements. Every
//! two-copy term `⟨x|P†ρ⊗ρ P|x⟩` for a product basis vector `x` collapses to
//! a product of two diagonal elements of `ρ`, because the swap `P` maps
//! product basis vectors to product basis vectors. Those are the only
//! `P`-terms evaluated here; [`crate::oracle`] checks the collapse against
//! explicit two-copy operators.
//!
//! A state with `Q_m > f - 2` (any `m`) is at least `f`-dimensionally
//! genuinely multipartite entangled; `Q_m <= 0` for every biseparable state.

use alloc::format;
use alloc::vec::Vec;

use crate::combinatorics::{self, PartySubset};
use crate::states;
use crate::tensor::{ElementProvider, SystemShape};
use crate::{Error, Result};

/// Diagonal values in `[-CLAMP_TOL, 0)` are treated as rounding noise.
pub const CLAMP_TOL: f64 = 1e-12;

/// Guard subtracted before the strict comparison `Q > f - 2`.
pub const DEFAULT_CERTIFY_TOL: f64 = 1e-9;

/// Which piece of a criterion a term belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub enum TermKind {
    /// Off-diagonal element `|⟨x|ρ|y⟩|`.
    O,
    /// Two-copy swap term `sqrt(⟨u|ρ|u⟩⟨v|ρ|v⟩)`.
    P,
    /// Diagonal element of the Dicke correction.
    D,
}

/// One contribution to a criterion, before the `1/m` scaling and signs.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Term {
    pub kind: TermKind,
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub k: Option<usize>,
    pub l: usize,
    /// `α` for `Q_m` terms; for `Q_0` `P`-terms the bipartition side `A`.
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub alpha: Option<PartySubset>,
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub beta: Option<PartySubset>,
    #[cfg_attr(feature = "serde", serde(skip_serializing_if = "Option::is_none"))]
    pub delta: Option<PartySubset>,
    pub value: f64,
}

/// Value of one criterion `Q_m` (`m = 0` is `Q_0`) and what it certifies.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CriterionReport {
    pub m: usize,
    pub value: f64,
    /// Largest certified `f` in `2..=d`, or 0 when nothing is certified.
    pub certified_f: usize,
    #[cfg_attr(
        feature = "serde",
        serde(rename = "terms", skip_serializing_if = "Option::is_none")
    )]
    pub term_breakdown: Option<Vec<Term>>,
}

/// Reports for several criteria and the best dimensionality among them.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Verdict {
    pub reports: Vec<CriterionReport>,
    pub best_f: usize,
}

/// Fidelity witness outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FidelityReport {
    pub fidelity: f64,
    pub bound: f64,
    pub detected: bool,
}

/// Largest `f` in `2..=d` with `value > f - 2 + tol`, or 0.
pub fn certify(value: f64, d: usize, tol: f64) -> usize {
    (2..=d)
        .rev()
        .find(|&f| value > (f as f64 - 2.0) + tol)
        .unwrap_or(0)
}

fn diagonal<P: ElementProvider + ?Sized>(rho: &P, index: usize) -> Result<f64> {
    let v = rho.entry(index, index).re;
    if v < -CLAMP_TOL || v.is_nan() {
        return Err(Error::InvalidState(format!(
            "diagonal element {index} is {v}, expected nonnegative"
        )));
    }
    Ok(v.max(0.0))
}

fn swap_term<P: ElementProvider + ?Sized>(rho: &P, u: usize, v: usize) -> Result<f64> {
    Ok(libm::sqrt(diagonal(rho, u)? * diagonal(rho, v)?))
}

struct TermLog(Option<Vec<Term>>);

impl TermLog {
    fn push(&mut self, make: impl FnOnce() -> Term) {
        if let Some(v) = &mut self.0 {
            v.push(make());
        }
    }
}

/// `Q_0 = Σ_{k≠l} ( |⟨k…k|ρ|l…l⟩| - Σ_A sqrt(⟨x_A(k,l)|ρ|x_A(k,l)⟩⟨x_A(l,k)|ρ|x_A(l,k)⟩) )`
/// over ordered level pairs, where `x_A(k,l)` carries level `l` on `A` and
/// `k` elsewhere and `A` runs over one side of every bipartition.
pub fn q0<P: ElementProvider + ?Sized>(rho: &P) -> Result<CriterionReport> {
    q0_with(rho, false)
}

pub fn q0_with<P: ElementProvider + ?Sized>(rho: &P, keep_terms: bool) -> Result<CriterionReport> {
    let shape = rho.shape();
    let d = shape.d();
    let cuts: Vec<(PartySubset, usize)> = combinatorics::bipartitions(shape.n())?
        .into_iter()
        .map(|a| (a, shape.subset_weight(a)))
        .collect();
    let mut log = TermLog(keep_terms.then(Vec::new));
    let mut total = 0.0;
    for k in 0..d {
        for l in (0..d).filter(|&l| l != k) {
            let (ik, il) = (shape.uniform_index(k), shape.uniform_index(l));
            let o = rho.entry(ik, il).norm();
            log.push(|| Term { kind: TermKind::O, k: Some(k), l, alpha: None, beta: None, delta: None, value: o });
            total += o;
            for &(a, wa) in &cuts {
                // Level l on A, k elsewhere, and the mirrored label.
                let x = ik - k * wa + l * wa;
                let y = il - l * wa + k * wa;
                let p = swap_term(rho, x, y)?;
                log.push(|| Term { kind: TermKind::P, k: Some(k), l, alpha: Some(a), beta: None, delta: None, value: p });
                total -= p;
            }
        }
    }
    Ok(CriterionReport {
        m: 0,
        value: total,
        certified_f: certify(total, d, DEFAULT_CERTIFY_TOL),
        term_breakdown: log.0,
    })
}

/// Digit contribution of `|α^k⟩` restricted to the parties in `delta`.
#[inline]
fn restricted(shape: &SystemShape, raised: PartySubset, level: usize, delta: PartySubset) -> usize {
    level * shape.subset_weight(delta) + shape.subset_weight(raised.intersection(delta))
}

/// `Q_m` for `1 <= m <= n/2`:
///
/// `(1/m) [ Σ_{k,l<d-1} Σ_{(α,β)∈σ} ( |⟨α^k|ρ|β^l⟩| - Σ_δ P^{k,l}_{α,β,δ} ) - N_D Σ_{l<d-1} Σ_α ⟨α^l|ρ|α^l⟩ ]`
///
/// where `|α^l⟩` has the parties in `α` at level `l + 1` and the rest at `l`.
pub fn qm<P: ElementProvider + ?Sized>(rho: &P, m: usize) -> Result<CriterionReport> {
    qm_with(rho, m, false)
}

pub fn qm_with<P: ElementProvider + ?Sized>(rho: &P, m: usize, keep_terms: bool) -> Result<CriterionReport> {
    let shape = rho.shape();
    let (n, d) = (shape.n(), shape.d());
    let pairs = combinatorics::sigma_pairs(n, m)?;
    let mut log = TermLog(keep_terms.then(Vec::new));
    let mut off_sum = 0.0;
    for k in 0..d - 1 {
        for l in 0..d - 1 {
            for pair in &pairs {
                let (alpha, beta) = (pair.alpha, pair.beta);
                let row = shape.raised_index(alpha, k);
                let col = shape.raised_index(beta, l);
                let o = rho.entry(row, col).norm();
                log.push(|| Term { kind: TermKind::O, k: Some(k), l, alpha: Some(alpha), beta: Some(beta), delta: None, value: o });
                off_sum += o;
                for delta in combinatorics::delta_sets(alpha, beta, k, l, n)? {
                    let from_row = restricted(&shape, alpha, k, delta);
                    let from_col = restricted(&shape, beta, l, delta);
                    // swap the δ-digits between the two labels
                    let u = row + from_col - from_row;
                    let v = col + from_row - from_col;
                    let p = swap_term(rho, u, v)?;
                    log.push(|| Term { kind: TermKind::P, k: Some(k), l, alpha: Some(alpha), beta: Some(beta), delta: Some(delta), value: p });
                    off_sum -= p;
                }
            }
        }
    }
    let mut diag_sum = 0.0;
    let subsets = combinatorics::m_subsets(n, m)?;
    for l in 0..d - 1 {
        for &alpha in &subsets {
            let v = rho.entry(shape.raised_index(alpha, l), shape.raised_index(alpha, l)).re;
            log.push(|| Term { kind: TermKind::D, k: None, l, alpha: Some(alpha), beta: None, delta: None, value: v });
            diag_sum += v;
        }
    }
    let value = (off_sum - combinatorics::n_d(d, m, n) as f64 * diag_sum) / m as f64;
    Ok(CriterionReport {
        m,
        value,
        certified_f: certify(value, d, DEFAULT_CERTIFY_TOL),
        term_breakdown: log.0,
    })
}

/// Dispatches to [`q0_with`] for `m = 0` and [`qm_with`] otherwise.
pub fn criterion<P: ElementProvider + ?Sized>(rho: &P, m: usize, keep_terms: bool) -> Result<CriterionReport> {
    if m == 0 {
        q0_with(rho, keep_terms)
    } else {
        qm_with(rho, m, keep_terms)
    }
}

/// Runs every requested criterion; `best_f` is the largest certified `f`.
pub fn verdict<P: ElementProvider + ?Sized>(rho: &P, m_list: &[usize], keep_terms: bool) -> Result<Verdict> {
    let n = rho.shape().n();
    if let Some(&bad) = m_list.iter().find(|&&m| m > n / 2) {
        return Err(Error::Parameter(format!("m={bad} outside 0..={}", n / 2)));
    }
    let reports = m_list
        .iter()
        .map(|&m| criterion(rho, m, keep_terms))
        .collect::<Result<Vec<_>>>()?;
    let best_f = reports.iter().map(|r| r.certified_f).max().unwrap_or(0);
    Ok(Verdict { reports, best_f })
}

/// `⟨ψ|ρ|ψ⟩` for an equal-weight superposition of the basis vectors in
/// `support`.
fn uniform_fidelity<P: ElementProvider + ?Sized>(rho: &P, support: &[usize]) -> f64 {
    let mut acc = 0.0;
    for &r in support {
        for &c in support {
            acc += rho.entry(r, c).re;
        }
    }
    acc / support.len() as f64
}

fn check_fidelity_f(shape: &SystemShape, f: usize) -> Result<()> {
    if f < 2 || f > shape.d() {
        return Err(Error::Parameter(format!("f={f} outside 2..={}", shape.d())));
    }
    Ok(())
}

/// `⟨GHZ_f|ρ|GHZ_f⟩ > (f - 1)/f`.
pub fn ghz_fidelity_witness<P: ElementProvider + ?Sized>(rho: &P, f: usize) -> Result<FidelityReport> {
    let shape = rho.shape();
    check_fidelity_f(&shape, f)?;
    let fidelity = uniform_fidelity(rho, &states::ghz_support(&shape, f));
    let bound = (f as f64 - 1.0) / f as f64;
    Ok(FidelityReport { fidelity, bound, detected: fidelity > bound })
}

/// `⟨W_f|ρ|W_f⟩ > (n(f - 1) - 1) / (n(f - 1))`.
pub fn w_fidelity_witness<P: ElementProvider + ?Sized>(rho: &P, f: usize) -> Result<FidelityReport> {
    let shape = rho.shape();
    check_fidelity_f(&shape, f)?;
    let fidelity = uniform_fidelity(rho, &states::dicke_support(&shape, 1, f)?);
    let scale = (shape.n() * (f - 1)) as f64;
    let bound = (scale - 1.0) / scale;
    Ok(FidelityReport { fidelity, bound, detected: fidelity > bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{dicke, ghz, maximally_mixed, rho_c, w_state, white_noise_mix};
    use crate::tensor::{DensityMatrix, NoisyMixture, PureState, SparseElements};
    use num_complex::Complex64;

    fn shape(n: usize, d: usize) -> SystemShape {
        SystemShape::new(n, d).unwrap()
    }

    #[test]
    fn certify_examples() {
        assert_eq!(certify(2.0, 3, 1e-9), 3);
        assert_eq!(certify(0.0, 3, 1e-9), 0);
        assert_eq!(certify(1.0, 3, 1e-9), 2);
        assert_eq!(certify(1.0 + 1e-10, 3, 1e-9), 2);
        assert_eq!(certify(5.0, 3, 1e-9), 3);
        assert_eq!(certify(-1.0, 4, 0.0), 0);
    }

    #[test]
    fn q0_pure_ghz3_and_product() {
        let g = NoisyMixture::white_noise(ghz(shape(3, 3), 3).unwrap(), 0.0).unwrap();
        let r = q0(&g).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
        assert_eq!(r.certified_f, 3);
        let prod = DensityMatrix::from_pure(&PureState::basis(shape(3, 3), 0).unwrap());
        assert_eq!(q0(&prod).unwrap().value, 0.0);
    }

    #[test]
    fn q0_noisy_ghz3_closed_form() {
        // 6 ordered off-diagonals of (1-p)/3 minus 18 swap terms of p/27.
        let psi = ghz(shape(3, 3), 3).unwrap();
        for p in [0.0, 0.1, 0.375, 0.8, 1.0] {
            let dense = white_noise_mix(&psi, p).unwrap();
            let v = q0(&dense).unwrap().value;
            assert!((v - (2.0 - 8.0 * p / 3.0)).abs() < 1e-12, "p={p}: {v}");
        }
    }

    #[test]
    fn q1_noisy_w3_closed_form() {
        // 24 O-terms (1-p)/6, 36 P-terms p/27, N_D = 2 times (1-p) + 2p/9.
        let psi = w_state(shape(3, 3), 3).unwrap();
        for p in [0.0, 0.1, 0.5, 9.0 / 34.0, 1.0] {
            let v = qm(&NoisyMixture::white_noise(psi.clone(), p).unwrap(), 1).unwrap().value;
            assert!((v - (2.0 - 34.0 * p / 9.0)).abs() < 1e-12, "p={p}: {v}");
        }
    }

    #[test]
    fn q1_term_counts_for_w3() {
        let rho = NoisyMixture::white_noise(w_state(shape(3, 3), 3).unwrap(), 0.2).unwrap();
        let r = qm_with(&rho, 1, true).unwrap();
        let terms = r.term_breakdown.unwrap();
        let count = |k| terms.iter().filter(|t| t.kind == k).count();
        assert_eq!((count(TermKind::O), count(TermKind::P), count(TermKind::D)), (24, 36, 6));
        assert!(qm(&rho, 1).unwrap().term_breakdown.is_none());
    }

    #[test]
    fn dicke_in_its_own_dimension_reaches_f_minus_one() {
        for (n, d, m) in [(3, 2, 1), (4, 3, 2), (5, 3, 2), (6, 2, 3)] {
            let rho = NoisyMixture::white_noise(dicke(shape(n, d), m, d).unwrap(), 0.0).unwrap();
            let r = qm(&rho, m).unwrap();
            assert!((r.value - (d as f64 - 1.0)).abs() < 1e-12, "{n} {d} {m}: {}", r.value);
        }
    }

    #[test]
    fn dicke_below_full_dimension() {
        // With f < d the diagonal correction still carries the factor d - 1,
        // giving (f-1)(n-m) - (d-1)(n-m-1).
        for (n, d, m, f) in [(3, 3, 1, 2), (4, 4, 1, 3), (4, 4, 2, 2), (5, 3, 1, 2)] {
            let rho = NoisyMixture::white_noise(dicke(shape(n, d), m, f).unwrap(), 0.0).unwrap();
            let want = ((f - 1) * (n - m)) as f64 - ((d - 1) * (n - m - 1)) as f64;
            assert!((qm(&rho, m).unwrap().value - want).abs() < 1e-12);
        }
    }

    #[test]
    fn maximally_mixed_certifies_nothing() {
        let mm = maximally_mixed(shape(3, 3));
        let v = verdict(&mm, &[0, 1], false).unwrap();
        assert_eq!(v.best_f, 0);
        assert!(v.reports.iter().all(|r| r.value <= 0.0));
    }

    #[test]
    fn verdict_rejects_large_m() {
        let mm = maximally_mixed(shape(3, 2));
        assert!(verdict(&mm, &[0, 2], false).is_err());
    }

    #[test]
    fn rho_c_stays_below_three_dimensions() {
        let rc = rho_c(shape(3, 3)).unwrap();
        let r = q0(&rc).unwrap();
        assert!(r.value <= 1.0 + 1e-9);
        assert_eq!(r.certified_f, 2);
        // 6 off-diagonals of 1/6, every swap term reads an empty diagonal.
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negative_diagonal_is_rejected() {
        let s = shape(2, 2);
        let mut sp = SparseElements::new(s);
        sp.insert_index(0, 0, Complex64::new(0.5, 0.0)).unwrap();
        sp.insert_index(3, 3, Complex64::new(0.5, 0.0)).unwrap();
        sp.insert_index(1, 1, Complex64::new(-1e-6, 0.0)).unwrap();
        assert!(matches!(q0(&sp), Err(Error::InvalidState(_))));
        let mut ok = SparseElements::new(s);
        ok.insert_index(1, 1, Complex64::new(-1e-13, 0.0)).unwrap();
        assert!(q0(&ok).is_ok());
    }

    #[test]
    fn fidelity_examples() {
        let psi = ghz(shape(3, 3), 3).unwrap();
        for p in [0.0, 0.2, 1.0] {
            let rho = NoisyMixture::white_noise(psi.clone(), p).unwrap();
            let r = ghz_fidelity_witness(&rho, 3).unwrap();
            assert!((r.fidelity - ((1.0 - p) + p / 27.0)).abs() < 1e-14);
            assert!((r.bound - 2.0 / 3.0).abs() < 1e-15);
            assert_eq!(r.detected, p < 9.0 / 26.0);
        }
        let w = w_state(shape(3, 3), 3).unwrap();
        let r = w_fidelity_witness(&NoisyMixture::white_noise(w, 0.0).unwrap(), 3).unwrap();
        assert!((r.fidelity - 1.0).abs() < 1e-14);
        assert!((r.bound - 5.0 / 6.0).abs() < 1e-15);
        assert!(r.detected);
        assert!(ghz_fidelity_witness(&maximally_mixed(shape(3, 2)), 3).is_err());
    }

    #[test]
    fn fig2_pure_ghz_corner() {
        let s = shape(3, 4);
        let rho = NoisyMixture::new(
            0.0,
            alloc::vec![(1.0, ghz(s, 4).unwrap()), (0.0, w_state(s, 4).unwrap())],
        )
        .unwrap();
        assert_eq!(verdict(&rho, &[0, 1], false).unwrap().best_f, 4);
    }
}
