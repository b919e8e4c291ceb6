//! Scalar abstraction for the real field underlying all complex arithmetic.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Real scalar type the whole crate is generic over: `f32` or `f64`.
///
/// The associated constants are the default numerical tolerances; they scale
/// with the precision of the type. All contract checks in the crate are
/// expressed through them.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Max-norm tolerance for Hermiticity and projector idempotence checks.
    const HERM_TOL: Self;
    /// Eigenvalues above `-PSD_TOL` are treated as nonnegative and clamped.
    const PSD_TOL: Self;
    /// Relative off-diagonal target for the Jacobi eigensolver.
    const JACOBI_TOL: Self;
    /// Width of the roundoff band accepted (then clamped) around [0, 1]
    /// for fidelity values.
    const FID_TOL: Self;
    /// Tolerance on unit traces and probability sums.
    const TRACE_TOL: Self;

    /// One standard-normal sample.
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

impl Scalar for f64 {
    const HERM_TOL: Self = 1e-9;
    const PSD_TOL: Self = 1e-8;
    const JACOBI_TOL: Self = 1e-14;
    const FID_TOL: Self = 1e-9;
    const TRACE_TOL: Self = 1e-9;

    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}

impl Scalar for f32 {
    const HERM_TOL: Self = 1e-4;
    const PSD_TOL: Self = 1e-4;
    const JACOBI_TOL: Self = 1e-6;
    const FID_TOL: Self = 1e-4;
    const TRACE_TOL: Self = 1e-4;

    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        StandardNormal.sample(rng)
    }
}

/// Lossless-enough conversion of an `f64` literal into `T`.
pub(crate) fn real<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}
