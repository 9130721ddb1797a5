//! Frozen threshold tables.
//!
//! These values were produced by this implementation and are kept as
//! regression anchors. Only the `n = 3, d = 3` cells have independent
//! reference values (0.375 for GHZ, 9/34 for W); the rest guard against
//! silent drift.

use gmedim_core::scan::{threshold_table, Bisection, FMode, TableCriterion};

const TOL: f64 = 1e-6;

const GHZ_FULL: &[(usize, usize, f64)] = &[
    (3, 2, 0.571428567171),
    (3, 3, 0.375000029802),
    (3, 4, 0.280701726675),
    (3, 5, 0.223214298487),
    (4, 2, 0.533333331347),
    (4, 3, 0.397058814764),
    (4, 4, 0.300469487906),
    (4, 5, 0.236742407084),
    (5, 2, 0.516129046679),
    (5, 3, 0.421874970198),
    (5, 4, 0.31488314271),
    (5, 5, 0.244140654802),
    (6, 2, 0.507936507463),
    (6, 3, 0.443430632353),
    (6, 4, 0.323538690805),
];

const W_FULL: &[(usize, usize, f64)] = &[
    (3, 2, 0.470588237047),
    (3, 3, 0.264705866575),
    (3, 4, 0.207119733095),
    (3, 5, 0.17458102107),
    (4, 2, 0.444444447756),
    (4, 3, 0.223756879568),
    (4, 4, 0.195718675852),
    (4, 5, 0.176553696394),
    (5, 2, 0.477611929178),
    (5, 3, 0.212041884661),
    (5, 4, 0.206994146109),
    (5, 5, 0.193139702082),
    (6, 2, 0.542372852564),
    (6, 3, 0.213532537222),
    (6, 4, 0.227631419897),
];

const GHZ_GME: &[(usize, usize, f64)] = &[
    (3, 2, 0.571428567171),
    (3, 3, 0.750000029802),
    (3, 4, 0.84210523963),
    (3, 5, 0.892857164145),
    (4, 2, 0.533333331347),
    (4, 3, 0.79411765933),
    (4, 4, 0.901408463717),
    (4, 5, 0.946969717741),
    (5, 2, 0.516129046679),
    (5, 3, 0.843749970198),
    (5, 4, 0.944649428129),
    (5, 5, 0.976562470198),
    (6, 2, 0.507936507463),
    (6, 3, 0.886861294508),
    (6, 4, 0.970616132021),
];

fn check(m: usize, f_mode: FMode, expected: &[(usize, usize, f64)]) {
    let table = threshold_table(3..=6, 2..=5, m, TableCriterion::Qm, f_mode, Bisection::default());
    assert_eq!(table.rows.len(), expected.len());
    // only n = 6, d = 5 exceeds the size limit
    assert_eq!(table.skipped.len(), 1);
    assert_eq!((table.skipped[0].0, table.skipped[0].1), (6, 5));
    for (row, &(n, d, p)) in table.rows.iter().zip(expected) {
        assert_eq!((row.n, row.d), (n, d));
        assert!((row.p_star - p).abs() <= TOL, "n={n} d={d}: {} vs {p}", row.p_star);
    }
}

#[test]
fn ghz_full_dimensionality() {
    check(0, FMode::Full, GHZ_FULL);
}

#[test]
fn w_full_dimensionality() {
    check(1, FMode::Full, W_FULL);
}

#[test]
fn ghz_plain_gme() {
    check(0, FMode::Gme, GHZ_GME);
}

#[test]
fn qubit_rows_coincide() {
    // for d = 2 the full and plain GME targets are the same f = 2
    for (a, b) in GHZ_FULL.iter().zip(GHZ_GME).filter(|(a, _)| a.1 == 2) {
        assert_eq!(a, b);
    }
}
