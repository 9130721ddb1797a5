//! Small dense eigen/singular value routines (cyclic Jacobi).
//!
//! Complex matrices are handled through the real embedding
//! `X + iY ↦ [[X, -Y], [Y, X]]`, whose spectrum is that of the complex
//! matrix with every value doubled in multiplicity.

use alloc::vec::Vec;
use num_complex::Complex64;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues of a real symmetric `n × n` row-major matrix, ascending.
pub fn symmetric_eigenvalues(n: usize, mut a: Vec<f64>) -> Vec<f64> {
    debug_assert_eq!(a.len(), n * n);
    let scale: f64 = a.iter().map(|x| x * x).sum();
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p * n + q] * a[p * n + q])
            .sum();
        if off <= 1e-30 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = libm::copysign(1.0, theta) / (libm::fabs(theta) + libm::sqrt(theta * theta + 1.0));
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k * n + p], a[k * n + q]);
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p * n + k], a[q * n + k]);
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

/// Eigenvalues of a Hermitian `n × n` row-major matrix, ascending.
pub fn hermitian_eigenvalues(n: usize, h: &[Complex64]) -> Vec<f64> {
    let m = 2 * n;
    let mut a = alloc::vec![0.0; m * m];
    for r in 0..n {
        for c in 0..n {
            let z = h[r * n + c];
            a[r * m + c] = z.re;
            a[(r + n) * m + (c + n)] = z.re;
            a[r * m + (c + n)] = -z.im;
            a[(r + n) * m + c] = z.im;
        }
    }
    let eig = symmetric_eigenvalues(m, a);
    // Each eigenvalue appears twice; average the adjacent pair.
    eig.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

/// Singular values of a real `rows × cols` row-major matrix, descending.
/// One-sided Jacobi on the columns; returns `min(rows, cols)` values.
pub fn real_singular_values(rows: usize, cols: usize, a: &[f64]) -> Vec<f64> {
    // Work on whichever orientation has at least as many rows as columns.
    let (m, n, mut colmaj) = if rows >= cols {
        let mut v = alloc::vec![0.0; rows * cols];
        for r in 0..rows {
            for c in 0..cols {
                v[c * rows + r] = a[r * cols + c];
            }
        }
        (rows, cols, v)
    } else {
        (cols, rows, a.to_vec())
    };
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in (i + 1)..n {
                let (ci, cj) = (i * m, j * m);
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = 0.0;
                for k in 0..m {
                    let (x, y) = (colmaj[ci + k], colmaj[cj + k]);
                    alpha += x * x;
                    beta += y * y;
                    gamma += x * y;
                }
                if gamma == 0.0 || libm::fabs(gamma) <= 1e-15 * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = libm::copysign(1.0, zeta) / (libm::fabs(zeta) + libm::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                for k in 0..m {
                    let (x, y) = (colmaj[ci + k], colmaj[cj + k]);
                    colmaj[ci + k] = c * x - s * y;
                    colmaj[cj + k] = s * x + c * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = (0..n)
        .map(|j| libm::sqrt(colmaj[j * m..(j + 1) * m].iter().map(|x| x * x).sum()))
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Singular values of a complex `rows × cols` row-major matrix, descending.
pub fn singular_values(rows: usize, cols: usize, a: &[Complex64]) -> Vec<f64> {
    let (r2, c2) = (2 * rows, 2 * cols);
    let mut e = alloc::vec![0.0; r2 * c2];
    for r in 0..rows {
        for c in 0..cols {
            let z = a[r * cols + c];
            e[r * c2 + c] = z.re;
            e[(r + rows) * c2 + (c + cols)] = z.re;
            e[r * c2 + (c + cols)] = -z.im;
            e[(r + rows) * c2 + c] = z.im;
        }
    }
    let sv = real_singular_values(r2, c2, &e);
    sv.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}
