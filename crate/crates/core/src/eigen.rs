//! Hermitian eigendecomposition via cyclic Jacobi rotations.
//!
//! Jacobi is a good fit here: every matrix in this crate is small (a few
//! dozen rows at most), and the rotations keep the eigenvector matrix
//! unitary to machine precision.

use num_complex::Complex;
use num_traits::Zero;

use crate::matrix::ComplexMatrix;
use crate::scalar::Scalar;

const MAX_SWEEPS: usize = 64;

/// Eigendecomposition of a Hermitian operator. `values` are real and listed
/// in descending order with ties broken by the original basis index;
/// `vectors` holds the matching orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct Eigh<T> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Scalar> Eigh<T> {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, i: usize) -> Vec<Complex<T>> {
        self.vectors.column(i)
    }

    /// Σ f(λ_i) |v_i⟩⟨v_i|.
    pub fn assemble(&self, mut f: impl FnMut(T) -> T) -> ComplexMatrix<T> {
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lam) in self.values.iter().enumerate() {
            let w = f(lam);
            if w.is_zero() {
                continue;
            }
            let v = self.vectors.column(k);
            for i in 0..n {
                for j in 0..n {
                    out[(i, j)] += v[i] * v[j].conj() * Complex::new(w, T::zero());
                }
            }
        }
        out
    }

    /// Σ λ_i |v_i⟩⟨v_i|, the original operator up to roundoff.
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.assemble(|x| x)
    }
}

/// Magnitude below which eigenvalues from [`eigh_unchecked`] are numerically
/// indistinguishable from zero, relative to the largest magnitude present.
pub(crate) fn noise_floor<T: Scalar>(values: &[T]) -> T {
    let scale = values
        .iter()
        .map(|x| x.abs())
        .fold(T::zero(), |a, b| a.max(b));
    scale * T::JACOBI_TOL * T::from_f64(10.0).unwrap()
}

/// Singular values of a rectangular matrix by one-sided Jacobi: column
/// pairs are rotated until mutually orthogonal, then the singular values
/// are the column norms. One-sided Jacobi computes small singular values
/// to high *relative* accuracy, which the fidelity closed form depends on.
pub(crate) fn singular_values<T: Scalar>(m: &ComplexMatrix<T>) -> Vec<T> {
    let cols = m.cols();
    if cols == 0 || m.rows() == 0 {
        return vec![T::zero(); cols];
    }
    let mut a = m.clone();
    let rel_tol = T::JACOBI_TOL * T::from_f64(10.0).unwrap();
    let half = T::from_f64(0.5).unwrap();

    for _sweep in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let cp = a.column(p);
                let cq = a.column(q);
                let app: T = cp.iter().map(|z| z.norm_sqr()).sum();
                let aqq: T = cq.iter().map(|z| z.norm_sqr()).sum();
                let apq = crate::matrix::inner(&cp, &cq);
                let r = apq.norm();
                // second guard keeps r.recip() finite for denormal columns
                if r <= rel_tol * (app * aqq).sqrt().max(T::min_positive_value())
                    || r <= T::min_positive_value().sqrt()
                {
                    continue;
                }
                rotated = true;
                let w = apq.scale(r.recip());
                let tau = (app - aqq) * half / r;
                let t = if tau >= T::zero() {
                    (tau + (T::one() + tau * tau).sqrt()).recip()
                } else {
                    -((-tau + (T::one() + tau * tau).sqrt()).recip())
                };
                let c = (T::one() + t * t).sqrt().recip();
                let s = t * c;
                let sw = w.scale(s);
                let swc = w.conj().scale(s);
                let cc = Complex::new(c, T::zero());
                for k in 0..a.rows() {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * cc + akq * swc;
                    a[(k, q)] = akq * cc - akp * sw;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sigma: Vec<T> = (0..cols)
        .map(|j| a.column(j).iter().map(|z| z.norm_sqr()).sum::<T>().sqrt())
        .collect();
    sigma.sort_by(|x, y| y.partial_cmp(x).unwrap());
    sigma
}

/// Jacobi eigendecomposition of a matrix assumed Hermitian. The working copy
/// is symmetrized first, so tolerance-level asymmetry in the input is
/// averaged away rather than amplified.
pub(crate) fn eigh_unchecked<T: Scalar>(m: &ComplexMatrix<T>) -> Eigh<T> {
    let n = m.rows();
    debug_assert!(m.is_square());
    if n == 0 {
        return Eigh {
            values: vec![],
            vectors: ComplexMatrix::zeros(0, 0),
        };
    }

    let mut a = ComplexMatrix::from_fn(n, n, |i, j| {
        (m[(i, j)] + m[(j, i)].conj()).scale(T::from_f64(0.5).unwrap())
    });
    let mut v = ComplexMatrix::<T>::identity(n);

    let scale = a.max_norm().max(T::min_positive_value());
    let target = scale * T::JACOBI_TOL;
    let half = T::from_f64(0.5).unwrap();

    for _sweep in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off = off.max(a[(p, q)].norm());
            }
        }
        if off <= target {
            break;
        }

        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let g = a[(p, q)];
                let r = g.norm();
                if r <= target * T::from_f64(1e-3).unwrap() {
                    continue;
                }
                let w = g.scale(r.recip()); // unit phase of the pivot
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (app - aqq) * half / r;
                let t = if tau >= T::zero() {
                    (tau + (T::one() + tau * tau).sqrt()).recip()
                } else {
                    -((-tau + (T::one() + tau * tau).sqrt()).recip())
                };
                let c = (T::one() + t * t).sqrt().recip();
                let s = t * c;

                let sw = w.scale(s);
                let swc = w.conj().scale(s);
                let cc = Complex::new(c, T::zero());

                // A <- A G (columns p, q)
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = akp * cc + akq * swc;
                    a[(k, q)] = akq * cc - akp * sw;
                }
                // A <- G† A (rows p, q)
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = apk * cc + aqk * sw;
                    a[(q, k)] = aqk * cc - apk * swc;
                }
                // enforce the algebraically exact entries
                a[(p, q)] = Complex::zero();
                a[(q, p)] = Complex::zero();
                a[(p, p)] = Complex::new(a[(p, p)].re, T::zero());
                a[(q, q)] = Complex::new(a[(q, q)].re, T::zero());

                // V <- V G
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * cc + vkq * swc;
                    v[(k, q)] = vkq * cc - vkp * sw;
                }
            }
        }
    }

    let raw: Vec<T> = (0..n).map(|i| a[(i, i)].re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| raw[j].partial_cmp(&raw[i]).unwrap().then(i.cmp(&j)));

    let values: Vec<T> = order.iter().map(|&i| raw[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &v.column(src));
    }

    Eigh { values, vectors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ComplexMatrix;
    use crate::test_support::re_mat;

    #[test]
    fn diagonal_input_sorts_descending() {
        let m = ComplexMatrix::from_real_diag(&[0.2, 0.7, 0.1]);
        let e = eigh_unchecked(&m);
        assert_eq!(e.values, vec![0.7, 0.2, 0.1]);
        // stable tie-break leaves the basis order intact on the identity
        let id = ComplexMatrix::<f64>::identity(3);
        let ei = eigh_unchecked(&id);
        assert_eq!(ei.values, vec![1.0, 1.0, 1.0]);
        assert!(ei.vectors.approx_eq(&id, 0.0));
    }

    #[test]
    fn reconstructs_random_hermitians() {
        use crate::sample::child_rng;
        use num_complex::Complex;
        use rand::Rng;
        let mut rng = child_rng(3, 0);
        for n in [1usize, 2, 3, 5, 8, 16] {
            let mut m = ComplexMatrix::<f64>::zeros(n, n);
            for i in 0..n {
                m[(i, i)] = Complex::new(rng.gen::<f64>() - 0.5, 0.0);
                for j in (i + 1)..n {
                    let z = Complex::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                    m[(i, j)] = z;
                    m[(j, i)] = z.conj();
                }
            }
            let e = eigh_unchecked(&m);
            assert!(e.reconstruct().approx_eq(&m, 1e-9), "n={}", n);
            // descending order
            for k in 1..n {
                assert!(e.values[k - 1] >= e.values[k]);
            }
            // orthonormal columns
            let gram = &e.vectors.adjoint() * &e.vectors;
            assert!(gram.approx_eq(&ComplexMatrix::identity(n), 1e-9));
        }
    }

    #[test]
    fn appendix_density_eigenvalues_match_cubic_oracle() {
        // ρ for the tetrahedron-edge ensemble, built from its coordinates.
        let c = 15f64.to_radians().cos();
        let s = 15f64.to_radians().sin();
        let a0 = [c, s, 0.0];
        let a1 = [s, c, 0.0];
        let a2 = [1.0 / 6f64.sqrt(), 1.0 / 6f64.sqrt(), (2f64 / 3.0).sqrt()];
        let mut rho = [[0.0f64; 3]; 3];
        for (w, a) in [(0.49, a0), (0.49, a1), (0.02, a2)] {
            for i in 0..3 {
                for j in 0..3 {
                    rho[i][j] += w * a[i] * a[j];
                }
            }
        }
        // independent oracle: roots of the characteristic cubic by bisection
        let det3 = |m: &[[f64; 3]; 3]| -> f64 {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        };
        let charpoly = |x: f64| -> f64 {
            let mut m = rho;
            for i in 0..3 {
                m[i][i] -= x;
            }
            det3(&m)
        };
        let mut roots = Vec::new();
        let grid: Vec<f64> = (0..=2000).map(|k| k as f64 / 2000.0).collect();
        for w in grid.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if charpoly(lo).signum() != charpoly(hi).signum() {
                let (mut lo, mut hi) = (lo, hi);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if charpoly(lo).signum() == charpoly(mid).signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
        }
        roots.sort_by(|a, b| b.partial_cmp(a).unwrap());
        assert_eq!(roots.len(), 3);

        let m = re_mat(&[&rho[0], &rho[1], &rho[2]]);
        let e = eigh_unchecked(&m);
        for (got, want) in e.values.iter().zip(&roots) {
            assert!((got - want).abs() < 1e-9, "{} vs {}", got, want);
        }
        // frozen expected values
        assert!((e.values[0] - 0.74179).abs() < 5e-6);
        assert!((e.values[1] - 0.24500).abs() < 5e-6);
        assert!((e.values[2] - 0.01321).abs() < 5e-6);
    }

    #[test]
    fn works_at_f32() {
        let m = ComplexMatrix::<f32>::from_real_diag(&[0.25, 0.75]);
        let e = eigh_unchecked(&m);
        assert_eq!(e.values, vec![0.75f32, 0.25]);
    }
}
