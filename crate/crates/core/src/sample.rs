//! Seeded random sampling of states, unitaries, and density operators.
//!
//! All sampling is deterministic: one master seed, per-trial child seeds
//! derived by counter hashing, so parallel and serial runs agree and every
//! report can be replayed from `(seed, trial index)`.

use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::matrix::{inner, vec_norm, ComplexMatrix, Subsystem};
use crate::operator::{DensityOperator, PureState};
use crate::scalar::Scalar;

/// SplitMix64 step, used to expand (seed, counter) into stream keys.
fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic child generator for trial `index` under `master`.
pub fn child_rng(master: u64, index: u64) -> ChaCha12Rng {
    let mut state = master ^ index.wrapping_mul(0xA076_1D64_78BD_642F);
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha12Rng::from_seed(key)
}

/// Generator for top-level (non-trial) sampling under a master seed.
pub fn master_rng(seed: u64) -> ChaCha12Rng {
    child_rng(seed, u64::MAX)
}

fn gaussian_complex<T: Scalar, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let half = T::from_f64(0.5).unwrap();
    Complex::new(
        T::standard_normal(rng) * half.sqrt(),
        T::standard_normal(rng) * half.sqrt(),
    )
}

/// Uniform (Haar) pure state: complex Gaussian vector, normalized, with the
/// global phase fixed so the first significant amplitude is real positive.
pub fn random_pure_state<T: Scalar, R: Rng + ?Sized>(
    dim: usize,
    rng: &mut R,
) -> Result<PureState<T>> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dim must be at least 1".into()));
    }
    let mut v: Vec<Complex<T>> = (0..dim).map(|_| gaussian_complex(rng)).collect();
    let n = vec_norm(&v);
    let inv = n.recip();
    for z in &mut v {
        *z = z.scale(inv);
    }
    // fix the (physically irrelevant) global phase for reproducible output
    let anchor = v
        .iter()
        .find(|z| z.norm() > T::from_f64(1e-6).unwrap())
        .copied()
        .unwrap_or_else(|| Complex::new(T::one(), T::zero()));
    let phase = anchor.scale(anchor.norm().recip()).conj();
    for z in &mut v {
        *z *= phase;
    }
    PureState::new(v)
}

/// Modified Gram-Schmidt with a second re-orthogonalization pass. Columns of
/// the result are orthonormal; the implied triangular factor has a positive
/// real diagonal, which is exactly the phase fixing a Haar sample needs.
fn orthonormalize_columns<T: Scalar>(m: &mut ComplexMatrix<T>) -> Result<()> {
    let cols = m.cols();
    for j in 0..cols {
        let mut v = m.column(j);
        for _pass in 0..2 {
            for i in 0..j {
                let q = m.column(i);
                let r = inner(&q, &v);
                for (vk, qk) in v.iter_mut().zip(&q) {
                    *vk -= *qk * r;
                }
            }
        }
        let n = vec_norm(&v);
        if n < T::from_f64(1e-8).unwrap() {
            return Err(Error::ContractViolation(
                "rank-deficient matrix in orthonormalization".into(),
            ));
        }
        let inv = n.recip();
        for vk in &mut v {
            *vk = vk.scale(inv);
        }
        m.set_column(j, &v);
    }
    Ok(())
}

/// Haar-distributed isometry: `cols` orthonormal columns in dimension `rows`.
pub fn haar_isometry<T: Scalar, R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Result<ComplexMatrix<T>> {
    if rows == 0 || cols == 0 || cols > rows {
        return Err(Error::InvalidArgument(format!(
            "isometry needs 1 <= cols <= rows, got {}x{}",
            rows, cols
        )));
    }
    let mut m = ComplexMatrix::from_fn(rows, cols, |_, _| gaussian_complex(rng));
    orthonormalize_columns(&mut m)?;
    Ok(m)
}

/// Haar-distributed unitary (Gaussian matrix, orthonormalization with a
/// phase-fixed triangular factor).
pub fn haar_unitary<T: Scalar, R: Rng + ?Sized>(
    dim: usize,
    rng: &mut R,
) -> Result<ComplexMatrix<T>> {
    haar_isometry(dim, dim, rng)
}

/// Random density operator of the given rank: partial trace of a Haar pure
/// state on `dim × rank`.
pub fn random_density<T: Scalar, R: Rng + ?Sized>(
    dim: usize,
    rank: usize,
    rng: &mut R,
) -> Result<DensityOperator<T>> {
    if dim == 0 || rank == 0 || rank > dim {
        return Err(Error::InvalidArgument(format!(
            "density sampling needs 1 <= rank <= dim, got dim {} rank {}",
            dim, rank
        )));
    }
    let psi = random_pure_state::<T, _>(dim * rank, rng)?;
    let proj = crate::matrix::outer(psi.amplitudes(), psi.amplitudes());
    let reduced = proj.partial_trace((dim, rank), Subsystem::Right)?;
    DensityOperator::from_matrix(reduced)
}

/// Point uniform on the probability simplex (normalized exponentials).
pub fn random_probabilities<T: Scalar, R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<T> {
    let mut w: Vec<T> = (0..k)
        .map(|_| {
            let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
            T::from_f64(-u.ln()).unwrap()
        })
        .collect();
    let total: T = w.iter().copied().sum();
    for x in &mut w {
        *x /= total;
    }
    // exact renormalization of the last entry so the sum is 1 to the ulp
    let head: T = w[..k - 1].iter().copied().sum();
    w[k - 1] = T::one() - head;
    w
}
