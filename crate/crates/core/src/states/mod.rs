//! Named states and seeded random samplers.

mod spec;

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::combinatorics::{self, PartySubset};
use crate::rng::Sampler;
use crate::tensor::{subset_offsets, DensityMatrix, PureState, SystemShape};
use crate::{Error, Result};

pub use spec::{NamedState, NamedStateSpec, StateKind};

fn check_f(shape: &SystemShape, f: usize) -> Result<()> {
    if f < 2 || f > shape.d() {
        return Err(Error::Parameter(format!(
            "f={f} outside 2..={} for d={}",
            shape.d(),
            shape.d()
        )));
    }
    Ok(())
}

fn uniform_superposition(shape: SystemShape, support: &[usize]) -> Result<PureState> {
    let amp = Complex64::new(1.0 / libm::sqrt(support.len() as f64), 0.0);
    let mut amps = alloc::vec![Complex64::new(0.0, 0.0); shape.dim()];
    for &i in support {
        amps[i] = amp;
    }
    PureState::new(shape, amps)
}

/// Flat indices of `|i⟩^{⊗n}` for `i < f`.
pub fn ghz_support(shape: &SystemShape, f: usize) -> Vec<usize> {
    (0..f).map(|i| shape.uniform_index(i)).collect()
}

/// Flat indices of the Dicke components: levels `l = 0..=f-2` outermost,
/// then `m`-subsets in increasing mask order.
pub fn dicke_support(shape: &SystemShape, m: usize, f: usize) -> Result<Vec<usize>> {
    let subsets = combinatorics::m_subsets(shape.n(), m)?;
    Ok((0..f.saturating_sub(1))
        .flat_map(|l| subsets.iter().map(move |&a| shape.raised_index(a, l)))
        .collect())
}

/// `|GHZ_f⟩ = f^{-1/2} Σ_{i<f} |i⟩^{⊗n}`.
pub fn ghz(shape: SystemShape, f: usize) -> Result<PureState> {
    check_f(&shape, f)?;
    uniform_superposition(shape, &ghz_support(&shape, f))
}

/// The `m`-Dicke state `|D^m_f⟩`: equal superposition, over the levels
/// `l = 0..=f-2` and all `m`-subsets `α`, of the product vector with the
/// parties in `α` at `l + 1` and the rest at `l`.
pub fn dicke(shape: SystemShape, m: usize, f: usize) -> Result<PureState> {
    check_f(&shape, f)?;
    uniform_superposition(shape, &dicke_support(&shape, m, f)?)
}

/// Qudit W state, `|W_f⟩ = |D^1_f⟩`.
pub fn w_state(shape: SystemShape, f: usize) -> Result<PureState> {
    dicke(shape, 1, f)
}

/// `(|i⟩^{⊗n} + |j⟩^{⊗n}) / √2`.
pub fn ghz_pair(shape: SystemShape, i: usize, j: usize) -> Result<PureState> {
    if i == j || i >= shape.d() || j >= shape.d() {
        return Err(Error::Parameter(format!(
            "pair ({i}, {j}) needs distinct levels below d={}",
            shape.d()
        )));
    }
    uniform_superposition(shape, &[shape.uniform_index(i), shape.uniform_index(j)])
}

/// `|0⟩ ⊗ (|00⟩ + |11⟩ + |22⟩)/√3` on three parties.
pub fn bisep_example(shape: SystemShape) -> Result<PureState> {
    if shape.n() != 3 || shape.d() < 3 {
        return Err(Error::Parameter(format!(
            "biseparable example needs n=3 and d>=3, got n={}, d={}",
            shape.n(),
            shape.d()
        )));
    }
    let support: Vec<usize> = (0..3).map(|i| i * shape.weight(2) + i * shape.weight(3)).collect();
    uniform_superposition(shape, &support)
}

fn check_rho_c_shape(shape: &SystemShape) -> Result<()> {
    if shape.n() != 3 || shape.d() != 3 {
        return Err(Error::Parameter(format!(
            "rho_c is defined for n=3, d=3, got n={}, d={}",
            shape.n(),
            shape.d()
        )));
    }
    Ok(())
}

/// `ρ_c = ½ |GHZ_3⟩⟨GHZ_3| + ⅙ Σ_i |iii⟩⟨iii|`.
pub fn rho_c(shape: SystemShape) -> Result<DensityMatrix> {
    check_rho_c_shape(&shape)?;
    let ghz = ghz(shape, 3)?;
    let corners: Vec<PureState> = (0..3)
        .map(|i| PureState::basis(shape, shape.uniform_index(i)))
        .collect::<Result<_>>()?;
    let mut parts = alloc::vec![(0.5, &ghz)];
    parts.extend(corners.iter().map(|c| (1.0 / 6.0, c)));
    Ok(DensityMatrix::mixture_of_pure(shape, 0.0, &parts))
}

/// The same `ρ_c` written as `⅓ Σ_{i<j} |GHZ_{i,j}⟩⟨GHZ_{i,j}|`.
pub fn rho_c_from_pairs(shape: SystemShape) -> Result<DensityMatrix> {
    check_rho_c_shape(&shape)?;
    let pairs = [
        ghz_pair(shape, 0, 1)?,
        ghz_pair(shape, 0, 2)?,
        ghz_pair(shape, 1, 2)?,
    ];
    let parts: Vec<(f64, &PureState)> = pairs.iter().map(|p| (1.0 / 3.0, p)).collect();
    Ok(DensityMatrix::mixture_of_pure(shape, 0.0, &parts))
}

/// `p/d^n · 1 + (1 - p) |ψ⟩⟨ψ|`.
pub fn white_noise_mix(psi: &PureState, p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Parameter(format!("noise level {p} outside [0, 1]")));
    }
    Ok(DensityMatrix::mixture_of_pure(psi.shape(), p, &[(1.0 - p, psi)]))
}

/// `1/d^n`.
pub fn maximally_mixed(shape: SystemShape) -> DensityMatrix {
    DensityMatrix::mixture_of_pure(shape, 1.0, &[])
}

fn random_vector(sampler: &mut Sampler, len: usize) -> Vec<Complex64> {
    (0..len).map(|_| sampler.complex_normal()).collect()
}

/// Normalized complex-Gaussian state vector.
pub fn random_pure(shape: SystemShape, seed: u64) -> PureState {
    let mut s = Sampler::new(seed);
    PureState::normalized(shape, random_vector(&mut s, shape.dim()))
        .expect("gaussian vector is nonzero")
}

/// Mixture of `num_terms` random pure states with uniform-simplex weights.
pub fn random_mixed(shape: SystemShape, seed: u64, num_terms: usize) -> Result<DensityMatrix> {
    if num_terms == 0 {
        return Err(Error::Parameter("num_terms must be at least 1".into()));
    }
    let mut s = Sampler::new(seed);
    let states: Vec<PureState> = (0..num_terms)
        .map(|_| PureState::normalized(shape, random_vector(&mut s, shape.dim())))
        .collect::<Result<_>>()?;
    let weights = s.simplex(num_terms);
    let parts: Vec<(f64, &PureState)> = weights.into_iter().zip(&states).collect();
    Ok(DensityMatrix::mixture_of_pure(shape, 0.0, &parts))
}

/// Random product `|φ_A⟩ ⊗ |φ_B⟩` across the cut `(A | complement)`.
pub fn random_product(shape: SystemShape, a: PartySubset, sampler: &mut Sampler) -> Result<PureState> {
    a.check_bipartition(shape.n())?;
    let rows = subset_offsets(&shape, a);
    let cols = subset_offsets(&shape, a.complement(shape.n()));
    let phi_a = random_vector(sampler, rows.len());
    let phi_b = random_vector(sampler, cols.len());
    let mut amps = alloc::vec![Complex64::new(0.0, 0.0); shape.dim()];
    for (x, &r) in phi_a.iter().zip(&rows) {
        for (y, &c) in phi_b.iter().zip(&cols) {
            amps[r + c] = x * y;
        }
    }
    PureState::normalized(shape, amps)
}

/// Convex mixture of `num_terms` random pure states, each a product across
/// an independently drawn bipartition. Deterministic in
/// `(shape, seed, num_terms)`.
pub fn random_biseparable(shape: SystemShape, seed: u64, num_terms: usize) -> Result<DensityMatrix> {
    if num_terms == 0 {
        return Err(Error::Parameter("num_terms must be at least 1".into()));
    }
    let cuts = combinatorics::bipartitions(shape.n())?;
    let mut s = Sampler::new(seed);
    let mut states = Vec::with_capacity(num_terms);
    for _ in 0..num_terms {
        let a = cuts[s.below(cuts.len())];
        states.push(random_product(shape, a, &mut s)?);
    }
    let weights = s.simplex(num_terms);
    let parts: Vec<(f64, &PureState)> = weights.into_iter().zip(&states).collect();
    Ok(DensityMatrix::mixture_of_pure(shape, 0.0, &parts))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{basis_index, BasisLabel, ElementProvider, NORM_TOL};
    use alloc::vec;

    fn shape(n: usize, d: usize) -> SystemShape {
        SystemShape::new(n, d).unwrap()
    }

    fn amp(psi: &PureState, digits: &[usize]) -> Complex64 {
        psi.amplitude(basis_index(&BasisLabel::from(digits), &psi.shape()).unwrap())
    }

    /// Nonzero components as (digits, amplitude), brute force over the basis.
    fn components(psi: &PureState) -> Vec<(Vec<usize>, f64)> {
        let s = psi.shape();
        (0..s.dim())
            .filter(|&i| psi.amplitude(i).norm() > 1e-14)
            .map(|i| {
                (
                    crate::tensor::basis_label(i, &s).unwrap().0,
                    psi.amplitude(i).re,
                )
            })
            .collect()
    }

    #[test]
    fn ghz_examples() {
        let s = shape(3, 3);
        let g = ghz(s, 3).unwrap();
        let r3 = 1.0 / 3f64.sqrt();
        assert_eq!(
            components(&g).into_iter().map(|c| c.0).collect::<Vec<_>>(),
            vec![vec![0, 0, 0], vec![1, 1, 1], vec![2, 2, 2]]
        );
        assert!((amp(&g, &[2, 2, 2]).re - r3).abs() < 1e-15);
        let g2 = ghz(s, 2).unwrap();
        assert_eq!(g2.support_size(1e-14), 2);
        assert!((amp(&g2, &[1, 1, 1]).re - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(ghz(s, 4).is_err());
        assert!(ghz(s, 1).is_err());
    }

    #[test]
    fn dicke_examples() {
        let w = dicke(shape(3, 2), 1, 2).unwrap();
        assert_eq!(
            components(&w).into_iter().map(|c| c.0).collect::<Vec<_>>(),
            vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]
        );
        let d3 = dicke(shape(3, 3), 1, 3).unwrap();
        let comps = components(&d3);
        let mut labels: Vec<Vec<usize>> = comps.iter().map(|c| c.0.clone()).collect();
        labels.sort();
        assert_eq!(
            labels,
            vec![
                vec![0, 0, 1],
                vec![0, 1, 0],
                vec![1, 0, 0],
                vec![1, 1, 2],
                vec![1, 2, 1],
                vec![2, 1, 1],
            ]
        );
        assert!(comps.iter().all(|c| (c.1 - 1.0 / 6f64.sqrt()).abs() < 1e-15));
        assert!(dicke(shape(4, 3), 3, 3).is_err());
        assert!(dicke(shape(4, 3), 0, 3).is_err());
    }

    #[test]
    fn w_matches_dicke() {
        let s = shape(4, 3);
        let w = w_state(s, 3).unwrap();
        assert_eq!(w, dicke(s, 1, 3).unwrap());
        assert_eq!(w.support_size(1e-14), 8);
        assert!(components(&w).iter().all(|c| (c.1 - 1.0 / 8f64.sqrt()).abs() < 1e-15));
    }

    #[test]
    fn support_sizes_and_norms() {
        for n in 2..=6 {
            for d in 2..=5 {
                let s = shape(n, d);
                if s.dim() > 4096 {
                    continue;
                }
                for f in 2..=d {
                    let g = ghz(s, f).unwrap();
                    assert_eq!(g.support_size(1e-14), f);
                    assert!((g.inner(&g).unwrap().re - 1.0).abs() < NORM_TOL);
                    for m in 1..=n / 2 {
                        let dk = dicke(s, m, f).unwrap();
                        assert_eq!(
                            dk.support_size(1e-14),
                            (f - 1) * combinatorics::binomial(n, m)
                        );
                        assert!((dk.inner(&dk).unwrap().re - 1.0).abs() < NORM_TOL);
                    }
                }
            }
        }
    }

    #[test]
    fn white_noise_examples() {
        let g = ghz(shape(3, 3), 3).unwrap();
        let pure = white_noise_mix(&g, 0.0).unwrap();
        assert_eq!(pure, DensityMatrix::from_pure(&g));
        let mm = white_noise_mix(&g, 1.0).unwrap();
        for i in 0..27 {
            assert!((mm.get(i, i).re - 1.0 / 27.0).abs() < 1e-16);
        }
        let rho = white_noise_mix(&g, 0.3).unwrap();
        assert!((rho.get(0, 13).re - 0.7 / 3.0).abs() < 1e-15);
        assert!(white_noise_mix(&g, 1.2).is_err());
    }

    #[test]
    fn rho_c_examples() {
        let s = shape(3, 3);
        let a = rho_c(s).unwrap();
        let b = rho_c_from_pairs(s).unwrap();
        assert!((a.get(0, 13).re - 1.0 / 6.0).abs() < 1e-15);
        assert!((a.get(0, 0).re - 1.0 / 3.0).abs() < 1e-15);
        for (x, y) in a.entries().iter().zip(b.entries()) {
            assert!((x - y).norm() <= 1e-14);
        }
        assert!(rho_c(shape(3, 2)).is_err());
        assert!(rho_c(shape(4, 3)).is_err());
    }

    #[test]
    fn bisep_examples() {
        let s = shape(3, 3);
        let b = bisep_example(s).unwrap();
        assert!((amp(&b, &[0, 0, 0]).re - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert_eq!(amp(&b, &[1, 1, 1]).norm(), 0.0);
        let red = b.reduced(PartySubset::from_parties(&[1], 3).unwrap()).unwrap();
        assert_eq!(red.rank(1e-10), 1);
        assert!(bisep_example(shape(3, 2)).is_err());
        assert!(bisep_example(shape(4, 3)).is_err());
    }

    #[test]
    fn random_biseparable_is_valid_and_deterministic() {
        let s = shape(3, 3);
        let one = random_biseparable(s, 11, 1).unwrap();
        assert_eq!(one.rank(1e-10), 1);
        for seed in 0..20 {
            let r = random_biseparable(s, seed, 4).unwrap();
            let d = r.validate(true);
            assert!(d.trace_deviation < 1e-12);
            assert!(d.hermiticity_deviation < 1e-15);
            assert!(d.min_eigenvalue.unwrap() > -1e-12);
            assert_eq!(r, random_biseparable(s, seed, 4).unwrap());
        }
        assert_ne!(random_biseparable(s, 1, 3).unwrap(), random_biseparable(s, 2, 3).unwrap());
        assert!(random_biseparable(s, 1, 0).is_err());
    }

    #[test]
    fn random_product_has_a_rank_one_cut() {
        let s = shape(4, 2);
        let mut sampler = Sampler::new(3);
        let a = PartySubset::from_parties(&[2, 4], 4).unwrap();
        let psi = random_product(s, a, &mut sampler).unwrap();
        assert_eq!(psi.reduced(a).unwrap().rank(1e-10), 1);
        let rho = DensityMatrix::from_pure(&psi);
        assert!(rho.entry(0, 0).re >= 0.0);
    }
}
