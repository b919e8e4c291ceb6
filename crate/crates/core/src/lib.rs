//! Numerical laboratory for average-fidelity limits of quantum channels.
//!
//! The crate models the encode/decode pipeline π_i → W_i → w_i for an
//! ensemble of pure signal states: density operators and completely positive
//! trace-preserving decoders (Kraus and Stinespring forms), the purification
//! fidelity with its triangle-style inequality, the spectral bound chain
//! that limits the average fidelity of any coding scheme by the top
//! eigenvalue mass of the source, and the block-coding arithmetic (typical
//! subspaces, Σ_d sweeps) that turns the bound into a converse for noiseless
//! coding at rates below the von Neumann entropy.
//!
//! Everything is generic over the real scalar (`f32`/`f64`) through the
//! [`Scalar`] trait; the `*64` aliases at the crate root are the default
//! double-precision instantiations used by the CLI and the test suites.

pub mod blocking;
pub mod channels;
pub mod coding;
mod eigen;
mod error;
pub mod fidelity;
mod matrix;
mod operator;
mod sample;
mod scalar;

#[cfg(test)]
pub(crate) mod test_support;

pub use eigen::Eigh;
pub use error::{Error, Result};
pub use matrix::{inner, outer, vec_norm, vec_tensor, ComplexMatrix, Subsystem};
pub use operator::{eigh, psd_sqrt, DensityOperator, HermitianOperator, Projector, PureState};
pub use sample::{
    child_rng, haar_isometry, haar_unitary, master_rng, random_density, random_probabilities,
    random_pure_state,
};
pub use scalar::Scalar;

/// Double-precision aliases (the defaults everywhere).
pub type Matrix64 = ComplexMatrix<f64>;
pub type Hermitian64 = HermitianOperator<f64>;
pub type Density64 = DensityOperator<f64>;
pub type Pure64 = PureState<f64>;
pub type Projector64 = Projector<f64>;
pub type Eigh64 = Eigh<f64>;

/// Single-precision aliases.
pub type Matrix32 = ComplexMatrix<f32>;
pub type Density32 = DensityOperator<f32>;
