//! Deterministic Hermitian eigendecomposition by cyclic Jacobi rotations.
//!
//! All spectral calculus in this crate (projectors, Green operators, norms,
//! kernel counts) is routed through [`hermitian_eigen`] so that the whole
//! pipeline is deterministic for a fixed input and carries a uniform residual
//! guarantee.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues are real and sorted ascending; `vectors` holds the matching
/// orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<Complex64>,
}

/// Relative off-diagonal mass at which a sweep is considered converged.
const CONVERGENCE: f64 = 1e-15;
const MAX_SWEEPS: usize = 60;

/// Diagonalize a Hermitian matrix with cyclic Jacobi rotations.
///
/// The input is symmetrized as `(m + m*)/2` before iterating, so slightly
/// non-Hermitian inputs (accumulated rounding) are handled gracefully; callers
/// that need to reject genuinely non-Hermitian operators check that before
/// calling. Deterministic: fixed sweep order, no pivot randomization.
pub fn hermitian_eigen(m: &DMatrix<Complex64>) -> HermitianEigen {
    let n = m.nrows();
    assert_eq!(n, m.ncols(), "hermitian_eigen requires a square matrix");

    if n == 0 {
        return HermitianEigen {
            values: Vec::new(),
            vectors: DMatrix::zeros(0, 0),
        };
    }

    let mut a = DMatrix::from_fn(n, n, |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5);
    let mut v = DMatrix::<Complex64>::identity(n, n);

    let total = a.norm();
    if total > 0.0 && n > 1 {
        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&a) <= CONVERGENCE * total {
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .re
            .partial_cmp(&a[(j, j)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });

    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    HermitianEigen { values, vectors }
}

fn off_diagonal_norm(a: &DMatrix<Complex64>) -> f64 {
    let n = a.nrows();
    let mut sum = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                sum += a[(p, q)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// One Jacobi rotation annihilating the (p, q) entry.
///
/// The (p, q) plane rotation is `G = diag(w, 1) · [[c, s], [-s, c]]` where `w`
/// is the phase of `a[p, q]`; `G` is unitary and `G* A G` zeroes the pivot.
fn rotate(a: &mut DMatrix<Complex64>, v: &mut DMatrix<Complex64>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let w = apq / r;

    let alpha = a[(p, p)].re;
    let beta = a[(q, q)].re;
    let tau = (beta - alpha) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    let g11 = w * c;
    let g12 = w * s;
    let g21 = Complex64::new(-s, 0.0);
    let g22 = Complex64::new(c, 0.0);

    let n = a.nrows();
    // A <- A G on columns p, q.
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = aip * g11 + aiq * g21;
        a[(i, q)] = aip * g12 + aiq * g22;
    }
    // A <- G* A on rows p, q.
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = g11.conj() * apj + g21.conj() * aqj;
        a[(q, j)] = g12.conj() * apj + g22.conj() * aqj;
    }
    // Pin the pivot and the diagonal to exact Hermitian form.
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);

    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = vip * g11 + viq * g21;
        v[(i, q)] = vip * g12 + viq * g22;
    }
}

/// Largest singular value, computed as `sqrt(lambda_max(m* m))`.
///
/// Routing the operator norm through the same Hermitian eigensolver keeps the
/// whole crate on a single deterministic spectral code path.
pub fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0.0;
    }
    let gram = m.adjoint() * m;
    let eig = hermitian_eigen(&gram);
    eig.values.last().copied().unwrap_or(0.0).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn random_hermitian(n: usize, seed: u64) -> DMatrix<Complex64> {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let g = DMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        (&g + g.adjoint()) * Complex64::new(0.5, 0.0)
    }

    #[test]
    fn empty_and_scalar() {
        let e = hermitian_eigen(&DMatrix::zeros(0, 0));
        assert!(e.values.is_empty());

        let m = DMatrix::from_element(1, 1, Complex64::new(-2.5, 0.0));
        let e = hermitian_eigen(&m);
        assert_eq!(e.values, vec![-2.5]);
        assert_eq!(e.vectors[(0, 0)], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn known_two_by_two() {
        // [[2, i], [-i, 2]] has eigenvalues 1 and 3.
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(2.0, 0.0),
                Complex64::new(0.0, 1.0),
                Complex64::new(0.0, -1.0),
                Complex64::new(2.0, 0.0),
            ],
        );
        let e = hermitian_eigen(&m);
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn residual_and_orthonormality() {
        for seed in 0..20u64 {
            let n = 1 + (seed as usize % 12);
            let m = random_hermitian(n, seed);
            let scale = m.norm().max(1e-300);
            let e = hermitian_eigen(&m);

            for j in 0..n {
                let vj = e.vectors.column(j);
                let residual = (&m * vj - vj * Complex64::new(e.values[j], 0.0)).norm();
                assert!(
                    residual <= 1e-12 * scale,
                    "pair residual {residual:e} too large (n={n}, seed={seed})"
                );
            }

            let unitarity =
                (e.vectors.adjoint() * &e.vectors - DMatrix::<Complex64>::identity(n, n)).norm();
            assert!(unitarity <= 1e-13, "unitarity {unitarity:e}");

            let mut lambda = DMatrix::<Complex64>::zeros(n, n);
            for j in 0..n {
                lambda[(j, j)] = Complex64::new(e.values[j], 0.0);
            }
            let rebuilt = &e.vectors * lambda * e.vectors.adjoint();
            assert!((rebuilt - &m).norm() <= 1e-12 * scale);

            for j in 1..n {
                assert!(e.values[j - 1] <= e.values[j], "values not sorted");
            }
        }
    }

    #[test]
    fn spectral_norm_matches_singular_value() {
        // [[0, 1], [0, 0]] has operator norm 1.
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        assert!((spectral_norm(&m) - 1.0).abs() < 1e-14);
        assert_eq!(spectral_norm(&DMatrix::zeros(0, 3)), 0.0);
    }

    #[test]
    fn deterministic_for_fixed_input() {
        let m = random_hermitian(9, 7);
        let a = hermitian_eigen(&m);
        let b = hermitian_eigen(&m);
        assert_eq!(a.values, b.values);
        assert_eq!(a.vectors, b.vectors);
    }
}
