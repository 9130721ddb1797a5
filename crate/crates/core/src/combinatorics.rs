//! Index sets the criteria sum over: bipartitions, `m`-subsets, the ordered
//! pair set `σ` and the swap sets `δ`.
//!
//! Subsets of the parties `{1, …, n}` are bitmasks with party `i` at bit
//! `i - 1`. Every enumeration is ordered by increasing mask value, so
//! repeated calls return identical lists.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Largest party count a [`PartySubset`] can represent.
pub const MAX_PARTIES: usize = 63;

/// A set of 1-based party indices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PartySubset(u64);

impl PartySubset {
    pub const EMPTY: PartySubset = PartySubset(0);

    #[inline]
    pub const fn from_bits(bits: u64) -> Self {
        Self(bits)
    }

    /// `{1, …, n}`.
    #[inline]
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_PARTIES);
        Self((1u64 << n) - 1)
    }

    pub fn from_parties(parties: &[usize], n: usize) -> Result<Self> {
        if n > MAX_PARTIES {
            return Err(Error::Parameter(format!("at most {MAX_PARTIES} parties supported")));
        }
        let mut bits = 0u64;
        for &p in parties {
            if p == 0 || p > n {
                return Err(Error::Parameter(format!("party {p} outside 1..={n}")));
            }
            bits |= 1 << (p - 1);
        }
        Ok(Self(bits))
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn contains(self, party: usize) -> bool {
        (1..=MAX_PARTIES).contains(&party) && self.0 & (1 << (party - 1)) != 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Members in increasing order.
    pub fn parties(self) -> Vec<usize> {
        (0..64)
            .filter(|b| self.0 & (1 << b) != 0)
            .map(|b| b + 1)
            .collect()
    }

    #[inline]
    pub fn complement(self, n: usize) -> Self {
        Self(!self.0 & Self::full(n).0)
    }

    #[inline]
    pub fn intersection(self, other: Self) -> Self {
        Self(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: Self) -> Self {
        Self(self.0 & !other.0)
    }

    /// Fails unless `self` is a nonempty proper subset of `{1, …, n}`.
    pub fn check_bipartition(self, n: usize) -> Result<()> {
        if self.is_empty() || self == Self::full(n) || self.0 & !Self::full(n).0 != 0 {
            return Err(Error::InvalidBipartition(format!(
                "{self:?} is not a nonempty proper subset of 1..={n}"
            )));
        }
        Ok(())
    }
}

impl fmt::Debug for PartySubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.parties()).finish()
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for PartySubset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.parties())
    }
}

/// An ordered pair `(α, β)` of `m`-subsets with `|α ∩ β| = m - 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SigmaPair {
    pub alpha: PartySubset,
    pub beta: PartySubset,
}

impl SigmaPair {
    pub fn new(alpha: PartySubset, beta: PartySubset) -> Result<Self> {
        let m = alpha.len();
        if m == 0 || beta.len() != m || alpha.intersection(beta).len() != m - 1 {
            return Err(Error::Parameter(format!(
                "({alpha:?}, {beta:?}) is not a sigma pair"
            )));
        }
        Ok(Self { alpha, beta })
    }
}

fn check_n(n: usize) -> Result<()> {
    if !(2..=MAX_PARTIES).contains(&n) {
        return Err(Error::Parameter(format!("party count {n} outside 2..={MAX_PARTIES}")));
    }
    Ok(())
}

fn check_m(n: usize, m: usize) -> Result<()> {
    check_n(n)?;
    if m < 1 || m > n / 2 {
        return Err(Error::Parameter(format!("m={m} outside 1..={} for n={n}", n / 2)));
    }
    Ok(())
}

/// One representative `A` per unordered bipartition `(A|B)`: the side that
/// does not contain party `n`. There are `2^(n-1) - 1` of them.
pub fn bipartitions(n: usize) -> Result<Vec<PartySubset>> {
    check_n(n)?;
    Ok((1..(1u64 << (n - 1))).map(PartySubset).collect())
}

/// All `C(n, m)` subsets of size `m`, `1 <= m <= n/2`.
pub fn m_subsets(n: usize, m: usize) -> Result<Vec<PartySubset>> {
    check_m(n, m)?;
    Ok(subsets_of_size(n, m))
}

fn subsets_of_size(n: usize, m: usize) -> Vec<PartySubset> {
    let mut out = Vec::new();
    if m == 0 {
        out.push(PartySubset::EMPTY);
        return out;
    }
    // Gosper's hack walks masks of fixed popcount in increasing order.
    let limit = 1u64 << n;
    let mut x = (1u64 << m) - 1;
    while x < limit {
        out.push(PartySubset(x));
        let c = x & x.wrapping_neg();
        let r = x + c;
        x = (((r ^ x) >> 2) / c) | r;
    }
    out
}

/// Every ordered pair `(α, β)` of `m`-subsets with `|α ∩ β| = m - 1`;
/// there are `C(n, m) · m · (n - m)` of them.
pub fn sigma_pairs(n: usize, m: usize) -> Result<Vec<SigmaPair>> {
    let subsets = m_subsets(n, m)?;
    let mut out = Vec::new();
    for &alpha in &subsets {
        for &beta in &subsets {
            if alpha.intersection(beta).len() == m - 1 {
                out.push(SigmaPair { alpha, beta });
            }
        }
    }
    Ok(out)
}

/// Swap sets for the pair `(α, β)` at levels `(k, l)`:
///
/// * `k == l`: just `[α]`;
/// * `k < l`: nonempty proper subsets of the complement of `α \ β`;
/// * `k > l`: nonempty proper subsets of the complement of `β \ α`.
pub fn delta_sets(
    alpha: PartySubset,
    beta: PartySubset,
    k: usize,
    l: usize,
    n: usize,
) -> Result<Vec<PartySubset>> {
    check_n(n)?;
    let full = PartySubset::full(n);
    if alpha.difference(full) != PartySubset::EMPTY || beta.difference(full) != PartySubset::EMPTY {
        return Err(Error::Parameter(format!("subsets exceed 1..={n}")));
    }
    SigmaPair::new(alpha, beta)?;
    let base = match k.cmp(&l) {
        core::cmp::Ordering::Equal => return Ok(alloc::vec![alpha]),
        core::cmp::Ordering::Less => alpha.difference(beta).complement(n),
        core::cmp::Ordering::Greater => beta.difference(alpha).complement(n),
    };
    Ok(proper_submasks(base))
}

/// Nonempty proper submasks of `set` in increasing order.
fn proper_submasks(set: PartySubset) -> Vec<PartySubset> {
    let s = set.0;
    let mut out = Vec::new();
    // Walk all submasks downward, then reverse for increasing order.
    let mut sub = s;
    loop {
        sub = sub.wrapping_sub(1) & s;
        if sub == 0 {
            break;
        }
        out.push(PartySubset(sub));
    }
    out.reverse();
    out
}

/// Counting factor `N_D = (d - 1) · m · (n - m - 1)` of the diagonal term.
pub fn n_d(d: usize, m: usize, n: usize) -> usize {
    d.saturating_sub(1) * m * n.saturating_sub(m + 1)
}

/// Binomial coefficient.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn set(p: &[usize], n: usize) -> PartySubset {
        PartySubset::from_parties(p, n).unwrap()
    }

    #[test]
    fn bipartition_counts() {
        assert_eq!(bipartitions(2).unwrap(), vec![set(&[1], 2)]);
        assert_eq!(
            bipartitions(3).unwrap(),
            vec![set(&[1], 3), set(&[2], 3), set(&[1, 2], 3)]
        );
        assert_eq!(bipartitions(4).unwrap().len(), 7);
        assert!(bipartitions(1).is_err());
    }

    #[test]
    fn bipartitions_cover_each_cut_once() {
        for n in 2..=8 {
            let reps = bipartitions(n).unwrap();
            assert_eq!(reps.len(), (1 << (n - 1)) - 1);
            let mut seen = alloc::collections::BTreeSet::new();
            for a in reps {
                assert!(!a.contains(n));
                a.check_bipartition(n).unwrap();
                let key = a.min(a.complement(n));
                assert!(seen.insert(key));
            }
        }
    }

    #[test]
    fn m_subset_counts() {
        assert_eq!(
            m_subsets(3, 1).unwrap(),
            vec![set(&[1], 3), set(&[2], 3), set(&[3], 3)]
        );
        assert_eq!(m_subsets(4, 2).unwrap().len(), 6);
        assert_eq!(m_subsets(5, 2).unwrap().len(), 10);
        assert!(m_subsets(5, 3).is_err());
        assert!(m_subsets(5, 0).is_err());
        let s = m_subsets(6, 3).unwrap();
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(s.len(), binomial(6, 3));
    }

    #[test]
    fn sigma_counts() {
        let p = sigma_pairs(3, 1).unwrap();
        assert_eq!(p.len(), 6);
        assert!(p.iter().all(|x| x.alpha != x.beta));
        assert_eq!(sigma_pairs(4, 2).unwrap().len(), 24);
        for n in 2..=8 {
            for m in 1..=n / 2 {
                let pairs = sigma_pairs(n, m).unwrap();
                assert_eq!(pairs.len(), binomial(n, m) * m * (n - m));
                for x in &pairs {
                    assert_eq!(x.alpha.intersection(x.beta).len(), m - 1);
                    assert!(pairs.contains(&SigmaPair { alpha: x.beta, beta: x.alpha }));
                }
            }
        }
    }

    #[test]
    fn delta_examples() {
        let (a, b) = (set(&[1], 3), set(&[2], 3));
        assert_eq!(delta_sets(a, b, 0, 0, 3).unwrap(), vec![a]);
        assert_eq!(
            delta_sets(a, b, 0, 1, 3).unwrap(),
            vec![set(&[2], 3), set(&[3], 3)]
        );
        // k > l swaps the roles of α and β.
        assert_eq!(
            delta_sets(a, b, 1, 0, 3).unwrap(),
            vec![set(&[1], 3), set(&[3], 3)]
        );
        let got = delta_sets(set(&[1, 2], 4), set(&[1, 3], 4), 1, 0, 4).unwrap();
        assert_eq!(
            got,
            vec![
                set(&[1], 4),
                set(&[2], 4),
                set(&[1, 2], 4),
                set(&[4], 4),
                set(&[1, 4], 4),
                set(&[2, 4], 4),
            ]
        );
        assert!(delta_sets(a, a, 0, 1, 3).is_err());
        assert!(delta_sets(set(&[1, 2], 4), set(&[3, 4], 4), 0, 0, 4).is_err());
    }

    #[test]
    fn delta_sets_exclude_empty_and_full() {
        for n in 2..=7 {
            for m in 1..=n / 2 {
                for p in sigma_pairs(n, m).unwrap() {
                    for (k, l) in [(0, 0), (0, 1), (1, 0), (2, 2)] {
                        let ds = delta_sets(p.alpha, p.beta, k, l, n).unwrap();
                        assert!(ds.iter().all(|x| !x.is_empty()));
                        if k == l {
                            assert_eq!(ds.len(), 1);
                        } else {
                            let base = if k < l {
                                p.alpha.difference(p.beta).complement(n)
                            } else {
                                p.beta.difference(p.alpha).complement(n)
                            };
                            assert!(ds.iter().all(|&x| x != base));
                            assert_eq!(ds.len(), (1 << base.len()) - 2);
                        }
                        assert_eq!(ds, delta_sets(p.alpha, p.beta, k, l, n).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn n_d_examples() {
        assert_eq!(n_d(3, 1, 3), 2);
        assert_eq!(n_d(2, 1, 2), 0);
        assert_eq!(n_d(4, 2, 5), 12);
    }

    #[test]
    fn subset_ops() {
        let a = set(&[1, 3], 4);
        assert_eq!(a.parties(), vec![1, 3]);
        assert_eq!(a.complement(4), set(&[2, 4], 4));
        assert!(a.contains(3) && !a.contains(2) && !a.contains(0));
        assert!(PartySubset::from_parties(&[5], 4).is_err());
        assert!(set(&[1, 2, 3, 4], 4).check_bipartition(4).is_err());
    }
}
