//! Fidelity between (possibly subnormalized) states: the pure and
//! pure-mixed special cases, the closed-form purification fidelity, a
//! brute-force purification-maximization oracle, and the fidelity
//! inequality chaining F₁₃ through F₁₂ and F₂₃.

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;

use crate::eigen::eigh_unchecked;
use crate::error::{Error, Result};
use crate::matrix::{inner, vec_tensor, ComplexMatrix};
use crate::operator::{DensityOperator, PureState};
use crate::sample::haar_unitary;
use crate::scalar::{real, Scalar};

/// A fidelity, clamped into [0, 1] after computation. Raw values outside
/// the roundoff band `[-FID_TOL, 1 + FID_TOL]` are rejected rather than
/// silently clamped.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FidelityValue<T>(T);

impl<T: Scalar> FidelityValue<T> {
    pub(crate) fn from_raw(raw: T) -> Result<Self> {
        if !raw.is_finite() || raw < -T::FID_TOL || raw > T::one() + T::FID_TOL {
            return Err(Error::ContractViolation(format!(
                "fidelity {} outside [0, 1] beyond the roundoff band",
                raw
            )));
        }
        Ok(Self(raw.max(T::zero()).min(T::one())))
    }

    /// Builds a fidelity from an already-validated probability-like number.
    pub fn new(value: T) -> Result<Self> {
        Self::from_raw(value)
    }

    pub fn value(&self) -> T {
        self.0
    }

    pub fn sqrt(&self) -> T {
        self.0.sqrt()
    }
}

/// |⟨ψ|φ⟩|² for pure states (subnormalized allowed).
pub fn fidelity_pure_pure<T: Scalar>(
    psi: &PureState<T>,
    phi: &PureState<T>,
) -> Result<FidelityValue<T>> {
    let ip = psi.inner(phi)?;
    FidelityValue::from_raw(ip.norm_sqr())
}

/// Tr(π ρ) for a rank-1 first argument (subnormalized allowed on both
/// sides; a zero first argument is treated as rank ≤ 1).
pub fn fidelity_pure_mixed<T: Scalar>(
    pi: &DensityOperator<T>,
    rho: &DensityOperator<T>,
) -> Result<FidelityValue<T>> {
    if pi.dim() != rho.dim() {
        return Err(Error::DimensionMismatch(format!(
            "states of dim {} and {}",
            pi.dim(),
            rho.dim()
        )));
    }
    let second = pi.eigenvalues().get(1).copied().unwrap_or_else(T::zero);
    if second > T::PSD_TOL {
        return Err(Error::InvalidArgument(format!(
            "first argument has rank > 1 (second eigenvalue {})",
            second
        )));
    }
    FidelityValue::from_raw((pi.matrix() * rho.matrix()).trace().re)
}

/// Purification fidelity via the closed form (Tr √(√ρ₁ ρ₂ √ρ₁))².
///
/// The expression is homogeneous in each argument, so it extends to
/// subnormalized states under the convention that purifications carry the
/// same trace as the state they purify.
pub fn fidelity_general<T: Scalar>(
    rho1: &DensityOperator<T>,
    rho2: &DensityOperator<T>,
) -> Result<FidelityValue<T>> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch(format!(
            "states of dim {} and {}",
            rho1.dim(),
            rho2.dim()
        )));
    }
    // (Tr √(√ρ₁ ρ₂ √ρ₁))² = (Σ σ(√ρ₂ √ρ₁))², computed from the cross factor
    // C_kl = √μ_k √λ_l ⟨w_k|v_l⟩ over the positive eigenmodes of the two
    // states. One-sided Jacobi gives the singular values with high relative
    // accuracy, so rank-deficient inputs do not leak √ε-size noise into the
    // trace and the value stays symmetric in its arguments to roundoff.
    let pos1: Vec<usize> = (0..rho1.dim())
        .filter(|&k| rho1.eigenvalues()[k] > T::zero())
        .collect();
    let pos2: Vec<usize> = (0..rho2.dim())
        .filter(|&k| rho2.eigenvalues()[k] > T::zero())
        .collect();
    if pos1.is_empty() || pos2.is_empty() {
        return FidelityValue::from_raw(T::zero());
    }
    let cross = ComplexMatrix::from_fn(pos2.len(), pos1.len(), |k, l| {
        let w = (rho2.eigenvalues()[pos2[k]] * rho1.eigenvalues()[pos1[l]]).sqrt();
        inner(&rho2.eig().vector(pos2[k]), &rho1.eig().vector(pos1[l])).scale(w)
    });
    let root_sum: T = crate::eigen::singular_values(&cross).into_iter().sum();
    FidelityValue::from_raw(root_sum * root_sum)
}

/// Purification-maximization oracle: fixes the spectral purification |1⟩ of
/// `rho1`, and maximizes |⟨1|(I ⊗ V)|2⟩|² over ancilla unitaries V by
/// alternating best-response steps (each step is the closed-form optimal
/// unitary, the polar factor of the cross-Gram matrix), restarted from
/// random unitaries. The returned value is an explicitly achieved overlap,
/// so it can never exceed the true maximum by more than roundoff.
///
/// Testing aid only; dimensions are capped at 6.
pub fn fidelity_oracle<T: Scalar, R: Rng + ?Sized>(
    rho1: &DensityOperator<T>,
    rho2: &DensityOperator<T>,
    restarts: usize,
    iterations: usize,
    rng: &mut R,
) -> Result<FidelityValue<T>> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::DimensionMismatch(format!(
            "states of dim {} and {}",
            rho1.dim(),
            rho2.dim()
        )));
    }
    let n = rho1.dim();
    if n > 6 {
        return Err(Error::InvalidArgument(
            "the purification oracle is limited to dimension 6".into(),
        ));
    }

    // spectral purifications |ρ⟩ = Σ √λ_i |v_i⟩ ⊗ |i⟩ on an n-dim ancilla
    let purify = |rho: &DensityOperator<T>| -> Vec<Complex<T>> {
        let mut out = vec![Complex::zero(); n * n];
        for (k, &lam) in rho.eigenvalues().iter().enumerate() {
            if lam <= T::zero() {
                continue;
            }
            let v = rho.eig().vector(k);
            let mut anc = vec![Complex::zero(); n];
            anc[k] = Complex::new(lam.sqrt(), T::zero());
            for (idx, z) in vec_tensor(&v, &anc).into_iter().enumerate() {
                out[idx] += z;
            }
        }
        out
    };
    let one = purify(rho1);
    let two = purify(rho2);

    // (I ⊗ V) |s⟩ with V acting on the (fast) ancilla factor
    let apply_anc = |s: &[Complex<T>], v: &ComplexMatrix<T>| -> Vec<Complex<T>> {
        let mut out = vec![Complex::zero(); n * n];
        for q in 0..n {
            for a_out in 0..n {
                let mut acc = Complex::zero();
                for a_in in 0..n {
                    acc += v[(a_out, a_in)] * s[q * n + a_in];
                }
                out[q * n + a_out] = acc;
            }
        }
        out
    };

    // The unitary V maximizing |Σ_{ij} C_ij V_ij| over unitaries, where
    // C_ij = Σ_q conj(a[q,i]) b[q,j] is the cross-Gram of the two
    // purifications with their current ancilla frames. The optimum is the
    // unitary polar factor of conj(C).
    let best_response = |a: &[Complex<T>], b: &[Complex<T>]| -> ComplexMatrix<T> {
        let g = ComplexMatrix::from_fn(n, n, |i, j| {
            let mut acc = Complex::zero();
            for q in 0..n {
                acc += a[q * n + i].conj() * b[q * n + j];
            }
            acc
        })
        .conj();
        polar_unitary_factor(&g)
    };

    let mut best = {
        let id = ComplexMatrix::identity(n);
        inner(&apply_anc(&one, &id), &two).norm_sqr()
    };
    for _restart in 0..restarts.max(1) {
        let mut v1 = ComplexMatrix::identity(n);
        let mut v2 = haar_unitary::<T, _>(n, rng)?;
        let mut val = inner(&apply_anc(&one, &v1), &apply_anc(&two, &v2)).norm_sqr();
        // alternate closed-form best responses for the two ancilla unitaries
        for _it in 0..iterations.max(1) {
            let a = apply_anc(&one, &v1);
            v2 = best_response(&a, &two);
            let b = apply_anc(&two, &v2);
            v1 = best_response(&b, &one);
            let next = inner(&apply_anc(&one, &v1), &apply_anc(&two, &v2)).norm_sqr();
            if next <= val + real::<T>(1e-15) {
                val = val.max(next);
                break;
            }
            val = next;
        }
        best = best.max(val);
    }
    FidelityValue::from_raw(best)
}

/// Unitary polar factor of `g` (the U in g = U·H with H PSD), completed
/// arbitrarily but deterministically on the numerical kernel of `g`. Every
/// column is re-orthonormalized so the result is unitary to machine
/// precision even when `g` is badly conditioned.
fn polar_unitary_factor<T: Scalar>(g: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let n = g.rows();
    let gram = &g.adjoint() * g;
    let eig = eigh_unchecked(&gram);
    let sigma_max = eig.values[0].max(T::zero()).sqrt();
    let sing_tol = sigma_max * T::HERM_TOL * real::<T>(10.0);

    let mut cols: Vec<Vec<Complex<T>>> = Vec::with_capacity(n);
    let accept = |mut v: Vec<Complex<T>>, cols: &mut Vec<Vec<Complex<T>>>| -> bool {
        for _ in 0..2 {
            for c in cols.iter() {
                let r = inner(c, &v);
                for (vk, ck) in v.iter_mut().zip(c) {
                    *vk -= *ck * r;
                }
            }
        }
        let norm = crate::matrix::vec_norm(&v);
        if norm > real::<T>(0.5) {
            let inv = norm.recip();
            for z in &mut v {
                *z = z.scale(inv);
            }
            cols.push(v);
            true
        } else {
            false
        }
    };

    for k in 0..n {
        let sigma = eig.values[k].max(T::zero()).sqrt();
        if sigma > sing_tol {
            let q = eig.vector(k);
            let gq = g.mul_vec(&q).unwrap();
            let col: Vec<Complex<T>> = gq.iter().map(|z| z.scale(sigma.recip())).collect();
            accept(col, &mut cols);
        }
    }
    // complete the range basis, taking the standard basis vector with the
    // largest residual each time so the completion can never collapse
    while cols.len() < n {
        let mut best_residual: Option<(T, Vec<Complex<T>>)> = None;
        for cand in 0..n {
            let mut v = vec![Complex::zero(); n];
            v[cand] = Complex::new(T::one(), T::zero());
            for _ in 0..2 {
                for c in cols.iter() {
                    let r = inner(c, &v);
                    for (vk, ck) in v.iter_mut().zip(c) {
                        *vk -= *ck * r;
                    }
                }
            }
            let norm = crate::matrix::vec_norm(&v);
            if best_residual.as_ref().is_none_or(|(b, _)| norm > *b) {
                best_residual = Some((norm, v));
            }
        }
        let (norm, mut v) = best_residual.expect("dimension is positive");
        let inv = norm.recip();
        for z in &mut v {
            *z = z.scale(inv);
        }
        cols.push(v);
    }
    let mut u = ComplexMatrix::zeros(n, n);
    for (k, col) in cols.iter().enumerate() {
        u.set_column(k, col);
    }
    let mut q = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        q.set_column(k, &eig.vector(k));
    }
    &u * &q.adjoint()
}

/// Upper bound on F₁₃ given F₁₂ and F₂₃, valid whenever the third state is
/// normalized (the first two may be subnormalized):
/// F₂₃ + 2(1 − √F₁₂) + 2√2·√(F₂₃(1 − √F₁₂)).
pub fn triangle_bound<T: Scalar>(f12: FidelityValue<T>, f23: FidelityValue<T>) -> T {
    let gap = T::one() - f12.sqrt();
    let two = real::<T>(2.0);
    f23.value() + two * gap + two * two.sqrt() * (f23.value() * gap).sqrt()
}

/// Generalization of [`triangle_bound`] to a subnormalized third state with
/// trace `tr3`: F₂₃ + 2·tr₃·(1 − √F₁₂) + 2√(2·tr₃)·√(F₂₃(1 − √F₁₂)).
pub fn triangle_bound_general<T: Scalar>(
    f12: FidelityValue<T>,
    f23: FidelityValue<T>,
    tr3: T,
) -> T {
    assert!(
        tr3 > T::zero() && tr3 <= T::one() + T::TRACE_TOL,
        "trace of the third state must lie in (0, 1]"
    );
    let gap = T::one() - f12.sqrt();
    let two = real::<T>(2.0);
    f23.value() + two * tr3 * gap + two * (two * tr3).sqrt() * (f23.value() * gap).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ComplexMatrix;
    use crate::operator::PureState;
    use crate::sample::{child_rng, random_density};

    fn diag_density(d: &[f64]) -> DensityOperator<f64> {
        DensityOperator::from_matrix(ComplexMatrix::from_real_diag(d)).unwrap()
    }

    #[test]
    fn pure_pure_examples() {
        let psi = PureState::<f64>::from_real_normalized(&[1.0, 1.0]).unwrap();
        assert!((fidelity_pure_pure(&psi, &psi).unwrap().value() - 1.0).abs() < 1e-15);

        let e0 = PureState::<f64>::basis(2, 0).unwrap();
        let e1 = PureState::<f64>::basis(2, 1).unwrap();
        assert_eq!(fidelity_pure_pure(&e0, &e1).unwrap().value(), 0.0);

        // tetrahedron-edge states 60° apart: cos²60° = 0.25
        let c = 15f64.to_radians().cos();
        let s = 15f64.to_radians().sin();
        let a0 = PureState::from_real_normalized(&[c, s, 0.0]).unwrap();
        let a2 = PureState::from_real_normalized(&[
            1.0 / 6f64.sqrt(),
            1.0 / 6f64.sqrt(),
            (2f64 / 3.0).sqrt(),
        ])
        .unwrap();
        assert!((fidelity_pure_pure(&a0, &a2).unwrap().value() - 0.25).abs() < 1e-12);

        let short = PureState::<f64>::basis(3, 0).unwrap();
        assert!(fidelity_pure_pure(&e0, &short).is_err());
    }

    #[test]
    fn pure_mixed_examples() {
        let pi = PureState::<f64>::basis(4, 2).unwrap().projector();
        let mixed = DensityOperator::maximally_mixed(4);
        assert!((fidelity_pure_mixed(&pi, &mixed).unwrap().value() - 0.25).abs() < 1e-15);
        assert!((fidelity_pure_mixed(&pi, &pi).unwrap().value() - 1.0).abs() < 1e-12);
        // rank > 1 first argument is rejected
        assert!(fidelity_pure_mixed(&mixed, &pi).is_err());
    }

    #[test]
    fn general_matches_diagonal_oracle() {
        // commuting case: (Σ √(p_i q_i))²
        let p = [0.2f64, 0.7, 0.1];
        let q = [0.5f64, 0.25, 0.25];
        let expect: f64 = p
            .iter()
            .zip(&q)
            .map(|(a, b)| (a * b).sqrt())
            .sum::<f64>()
            .powi(2);
        let f = fidelity_general(&diag_density(&p), &diag_density(&q))
            .unwrap()
            .value();
        assert!((f - expect).abs() < 1e-12, "{} vs {}", f, expect);
        assert!((expect - 0.7968626966596888).abs() < 1e-12);
    }

    #[test]
    fn general_is_symmetric_and_in_range() {
        let mut rng = child_rng(21, 0);
        for trial in 0..10_000 {
            let dim = 2 + trial % 3;
            let a = random_density::<f64, _>(dim, dim, &mut rng).unwrap();
            let b = random_density::<f64, _>(dim, 1 + trial % dim, &mut rng).unwrap();
            let fab = fidelity_general(&a, &b).unwrap().value();
            let fba = fidelity_general(&b, &a).unwrap().value();
            assert!((0.0..=1.0).contains(&fab));
            assert!((fab - fba).abs() < 1e-10, "asym {:.3e}", (fab - fba).abs());
        }
    }

    #[test]
    fn identity_of_indiscernibles_for_normalized_states() {
        let mut rng = child_rng(22, 0);
        for _ in 0..100 {
            let a = random_density::<f64, _>(3, 2, &mut rng).unwrap();
            assert!((fidelity_general(&a, &a).unwrap().value() - 1.0).abs() < 1e-10);
            let b = random_density::<f64, _>(3, 3, &mut rng).unwrap();
            if (a.matrix() - b.matrix()).max_norm() > 1e-3 {
                assert!(fidelity_general(&a, &b).unwrap().value() < 1.0 - 1e-8);
            }
        }
    }

    #[test]
    fn general_reduces_to_pure_mixed_on_rank_one() {
        let mut rng = child_rng(23, 0);
        for _ in 0..1000 {
            let psi = crate::sample::random_pure_state::<f64, _>(3, &mut rng).unwrap();
            let pi = psi.projector();
            let rho = random_density::<f64, _>(3, 3, &mut rng).unwrap();
            let a = fidelity_general(&pi, &rho).unwrap().value();
            let b = fidelity_pure_mixed(&pi, &rho).unwrap().value();
            assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
        }
    }

    #[test]
    fn oracle_agrees_with_closed_form() {
        let mut rng = child_rng(24, 0);
        // pure vs pure: the oracle must reproduce the squared inner product
        let psi = crate::sample::random_pure_state::<f64, _>(2, &mut rng).unwrap();
        let phi = crate::sample::random_pure_state::<f64, _>(2, &mut rng).unwrap();
        let direct = fidelity_pure_pure(&psi, &phi).unwrap().value();
        let via_oracle = fidelity_oracle(&psi.projector(), &phi.projector(), 5, 5, &mut rng)
            .unwrap()
            .value();
        assert!((direct - via_oracle).abs() < 1e-9);

        // mixed equal states → 1
        let rho = random_density::<f64, _>(3, 3, &mut rng).unwrap();
        let f = fidelity_oracle(&rho, &rho, 20, 5, &mut rng)
            .unwrap()
            .value();
        assert!((f - 1.0).abs() < 1e-6);

        // random 2x2 pairs against the closed form
        for _ in 0..30 {
            let a = random_density::<f64, _>(2, 2, &mut rng).unwrap();
            let b = random_density::<f64, _>(2, 2, &mut rng).unwrap();
            let closed = fidelity_general(&a, &b).unwrap().value();
            let oracle = fidelity_oracle(&a, &b, 20, 5, &mut rng).unwrap().value();
            assert!(oracle <= closed + 1e-9);
            assert!((oracle - closed).abs() < 1e-6, "{} vs {}", oracle, closed);
        }
    }

    #[test]
    fn oracle_handles_subnormalized_states() {
        let mut rng = child_rng(25, 0);
        for _ in 0..20 {
            let a = random_density::<f64, _>(3, 2, &mut rng)
                .unwrap()
                .with_trace(0.4)
                .unwrap();
            let b = random_density::<f64, _>(3, 3, &mut rng)
                .unwrap()
                .with_trace(0.7)
                .unwrap();
            let closed = fidelity_general(&a, &b).unwrap().value();
            let oracle = fidelity_oracle(&a, &b, 20, 5, &mut rng).unwrap().value();
            assert!(oracle <= closed + 1e-9);
            assert!((oracle - closed).abs() < 1e-6);
        }
    }

    #[test]
    fn oracle_rejects_large_dims() {
        let mut rng = child_rng(26, 0);
        let a = random_density::<f64, _>(7, 2, &mut rng).unwrap();
        assert!(fidelity_oracle(&a, &a, 1, 1, &mut rng).is_err());
    }

    #[test]
    fn triangle_bound_examples() {
        let one = FidelityValue::<f64>::new(1.0).unwrap();
        let f23 = FidelityValue::new(0.37).unwrap();
        assert!((triangle_bound(one, f23) - 0.37).abs() < 1e-15);
        let zero = FidelityValue::new(0.0).unwrap();
        assert_eq!(triangle_bound(one, zero), 0.0);

        let f12 = FidelityValue::<f64>::new(0.81).unwrap();
        let f23 = FidelityValue::new(0.04).unwrap();
        assert!((triangle_bound(f12, f23) - 0.41888543819998314).abs() < 1e-12);
    }

    #[test]
    fn triangle_bound_general_examples() {
        let f12 = FidelityValue::<f64>::new(0.81).unwrap();
        let f23 = FidelityValue::new(0.04).unwrap();
        assert!((triangle_bound_general(f12, f23, 1.0) - triangle_bound(f12, f23)).abs() < 1e-15);
        assert!((triangle_bound_general(f12, f23, 0.5) - 0.2664911064067351).abs() < 1e-12);
        let one = FidelityValue::new(1.0).unwrap();
        for tr3 in [0.1, 0.5, 1.0] {
            assert!((triangle_bound_general(one, f23, tr3) - 0.04).abs() < 1e-15);
        }
    }

    #[test]
    fn inequality_holds_on_random_triples() {
        let mut rng = child_rng(27, 0);
        for trial in 0..1000 {
            let dim = 2 + (trial % 3);
            let tr1 = 0.3 + 0.7 * rand::Rng::gen::<f64>(&mut rng);
            let tr2 = 0.3 + 0.7 * rand::Rng::gen::<f64>(&mut rng);
            let r1 = random_density::<f64, _>(dim, dim, &mut rng)
                .unwrap()
                .with_trace(tr1)
                .unwrap();
            let r2 = random_density::<f64, _>(dim, 1 + trial % dim, &mut rng)
                .unwrap()
                .with_trace(tr2)
                .unwrap();
            let r3 = random_density::<f64, _>(dim, dim, &mut rng).unwrap();
            let f12 = fidelity_general(&r1, &r2).unwrap();
            let f23 = fidelity_general(&r2, &r3).unwrap();
            let f13 = fidelity_general(&r1, &r3).unwrap();
            assert!(f13.value() <= triangle_bound(f12, f23) + 1e-9);

            let tr3 = 0.3 + 0.7 * rand::Rng::gen::<f64>(&mut rng);
            let r3s = r3.with_trace(tr3).unwrap();
            let f23s = fidelity_general(&r2, &r3s).unwrap();
            let f13s = fidelity_general(&r1, &r3s).unwrap();
            assert!(f13s.value() <= triangle_bound_general(f12, f23s, tr3) + 1e-9);
        }
    }

    #[test]
    fn fidelity_value_clamps_only_roundoff() {
        assert!(FidelityValue::<f64>::from_raw(1.0 + 5e-10).is_ok());
        assert_eq!(
            FidelityValue::<f64>::from_raw(1.0 + 5e-10).unwrap().value(),
            1.0
        );
        assert!(FidelityValue::<f64>::from_raw(-5e-10).unwrap().value() == 0.0);
        assert!(FidelityValue::<f64>::from_raw(1.01).is_err());
        assert!(FidelityValue::<f64>::from_raw(-0.01).is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn bound_collapses_when_first_two_states_agree(f in 0.0f64..=1.0) {
                let one = FidelityValue::new(1.0).unwrap();
                let f23 = FidelityValue::new(f).unwrap();
                prop_assert!((triangle_bound(one, f23) - f).abs() < 1e-12);
            }

            #[test]
            fn general_bound_reduces_at_unit_trace(a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
                let f12 = FidelityValue::new(a).unwrap();
                let f23 = FidelityValue::new(b).unwrap();
                let lhs = triangle_bound_general(f12, f23, 1.0);
                let rhs = triangle_bound(f12, f23);
                prop_assert!((lhs - rhs).abs() < 1e-12);
            }

            #[test]
            fn general_bound_monotone_in_trace(a in 0.0f64..0.999, b in 0.0f64..=1.0,
                                               t1 in 0.05f64..=1.0, t2 in 0.05f64..=1.0) {
                let f12 = FidelityValue::new(a).unwrap();
                let f23 = FidelityValue::new(b).unwrap();
                let (lo, hi) = if t1 < t2 { (t1, t2) } else { (t2, t1) };
                prop_assert!(
                    triangle_bound_general(f12, f23, lo)
                        <= triangle_bound_general(f12, f23, hi) + 1e-12
                );
            }
        }
    }
}
