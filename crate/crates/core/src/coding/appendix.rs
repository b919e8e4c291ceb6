//! The worked three-signal example: tetrahedron-edge signal states encoded
//! into a two-dimensional support, with a measure-and-prepare decoder that
//! beats every unitary one.

use crate::channels::MeasurePrepareChannel;
use crate::error::Result;
use crate::matrix::ComplexMatrix;
use crate::operator::{DensityOperator, HermitianOperator, Projector, PureState};
use crate::scalar::{real, Scalar};

use super::{Encoding, SourceEnsemble};

/// Builds the example instance:
///
/// * signals |a₀⟩, |a₁⟩, |a₂⟩: unit vectors in the positive octant of R³,
///   pairwise 60° apart (three edges of a regular tetrahedron meeting at
///   the origin). |a₀⟩ and |a₁⟩ lie in the x-y plane, 15° from the nearest
///   axis; |a₂⟩ = (1/√6, 1/√6, √(2/3)) is the unique such completion.
///   Priors: 0.49, 0.49, 0.02.
/// * encoding: W₀ and W₁ are the projectors onto the x and y axes and
///   W₂ = ½π₀ + ½π₁, all supported on the x-y plane (d = 2).
/// * decoder: measure the x-y axis observable and prepare |a₀⟩ or |a₁⟩;
///   a third (z) outcome prepares |a₂⟩ so the channel is trace preserving
///   on the whole space, but it has probability zero on every encoded
///   state.
pub fn appendix_ensemble<T: Scalar>(
) -> Result<(SourceEnsemble<T>, Encoding<T>, MeasurePrepareChannel<T>)> {
    let t15 = real::<T>(15.0).to_radians();
    let (c, s) = (t15.cos(), t15.sin());
    let six = real::<T>(6.0);
    let a0 = PureState::from_real_normalized(&[c, s, T::zero()])?;
    let a1 = PureState::from_real_normalized(&[s, c, T::zero()])?;
    let a2 = PureState::from_real_normalized(&[
        six.sqrt().recip(),
        six.sqrt().recip(),
        (real::<T>(2.0) / real::<T>(3.0)).sqrt(),
    ])?;
    let (p0, p2) = (real::<T>(0.49), real::<T>(0.02));
    let ensemble = SourceEnsemble::new(vec![(p0, a0.clone()), (p0, a1.clone()), (p2, a2.clone())])?;

    let half = real::<T>(0.5);
    let w0 = DensityOperator::from_matrix(ComplexMatrix::from_real_diag(&[
        T::one(),
        T::zero(),
        T::zero(),
    ]))?;
    let w1 = DensityOperator::from_matrix(ComplexMatrix::from_real_diag(&[
        T::zero(),
        T::one(),
        T::zero(),
    ]))?;
    let w2 = DensityOperator::mixture(&[(half, &a0.projector()), (half, &a1.projector())])?;
    let support = Projector::new(HermitianOperator::from_real_diag(&[
        T::one(),
        T::one(),
        T::zero(),
    ]))?;
    let encoding = Encoding::new(vec![w0, w1, w2], support)?;

    let axis = |k: usize| -> Result<Projector<T>> {
        let mut d = [T::zero(); 3];
        d[k] = T::one();
        Projector::new(HermitianOperator::from_real_diag(&d))
    };
    let decoder = MeasurePrepareChannel::new(
        vec![axis(0)?, axis(1)?, axis(2)?],
        vec![a0.projector(), a1.projector(), a2.projector()],
    )?;

    Ok((ensemble, encoding, decoder))
}
