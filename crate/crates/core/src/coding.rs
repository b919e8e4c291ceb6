//! The encode/decode pipeline and its fidelity limit: source ensembles,
//! arbitrary encodings, average fidelity, the top-eigenvalue mass η, the
//! projection machinery that bounds any coding scheme by
//! F̄ ≤ η + 2η + 2√2·η = (3 + 2√2)η < 6η, the η-achieving top-d encoder,
//! unitary-decoder optimization, and the randomized bound fuzzer.

mod appendix;
mod fuzz;
mod optimize;

pub use appendix::appendix_ensemble;
pub use fuzz::{
    fuzz_bound, fuzz_inequality, fuzz_trial, FuzzConfig, FuzzReport, FuzzViolation,
    InequalityReport, TrialOutcome, BOUND_SLACK,
};
pub use optimize::{optimize_planar_tilt, optimize_unitary_decoder, OptMethod, UnitaryOpt};

use num_complex::Complex;

use crate::channels::KrausChannel;
use crate::error::{Error, Result};
use crate::fidelity::fidelity_pure_mixed;
use crate::matrix::ComplexMatrix;
use crate::operator::{DensityOperator, Projector, PureState};
use crate::scalar::{real, Scalar};

/// Ensemble of pure signal states with prior probabilities summing to one.
#[derive(Debug, Clone)]
pub struct SourceEnsemble<T> {
    signals: Vec<(T, PureState<T>)>,
    dim: usize,
}

impl<T: Scalar> SourceEnsemble<T> {
    pub fn new(signals: Vec<(T, PureState<T>)>) -> Result<Self> {
        let dim = signals
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty ensemble".into()))?
            .1
            .dim();
        if !signals.iter().all(|(_, s)| s.dim() == dim) {
            return Err(Error::DimensionMismatch("signal dims differ".into()));
        }
        if signals.iter().any(|(p, _)| *p < T::zero()) {
            return Err(Error::ContractViolation("negative probability".into()));
        }
        let total: T = signals.iter().map(|(p, _)| *p).sum();
        if (total - T::one()).abs() > real::<T>(1e-12).max(T::epsilon() * real::<T>(16.0)) {
            return Err(Error::ContractViolation(format!(
                "probabilities sum to {}, not 1",
                total
            )));
        }
        if !signals.iter().all(|(_, s)| s.is_normalized()) {
            return Err(Error::ContractViolation(
                "signal states must be normalized".into(),
            ));
        }
        Ok(Self { signals, dim })
    }

    pub fn signals(&self) -> &[(T, PureState<T>)] {
        &self.signals
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.signals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signals.is_empty()
    }

    /// ρ = Σ pᵢ |aᵢ⟩⟨aᵢ|.
    pub fn density(&self) -> DensityOperator<T> {
        let mut m = ComplexMatrix::zeros(self.dim, self.dim);
        for (p, a) in &self.signals {
            let amp = a.amplitudes();
            for i in 0..self.dim {
                for j in 0..self.dim {
                    m[(i, j)] += amp[i] * amp[j].conj() * Complex::new(*p, T::zero());
                }
            }
        }
        DensityOperator::from_matrix(m).expect("ensemble density is PSD with unit trace")
    }
}

/// ρ = Σ pᵢ πᵢ for an ensemble.
pub fn ensemble_density<T: Scalar>(e: &SourceEnsemble<T>) -> DensityOperator<T> {
    e.density()
}

/// Sum of the `d` largest eigenvalues of ρ (the full trace once d reaches
/// the dimension, where the fidelity bound goes vacuous).
pub fn eta<T: Scalar>(rho: &DensityOperator<T>, d: usize) -> T {
    rho.eigenvalues().iter().take(d).copied().sum()
}

/// Signal-indexed channel states supported on a d-dimensional subspace,
/// together with the support projector Γ_d. The map from signals to states
/// is arbitrary: no channel structure is assumed on the encoding side.
#[derive(Debug, Clone)]
pub struct Encoding<T> {
    channel_states: Vec<DensityOperator<T>>,
    support: Projector<T>,
    d: usize,
}

impl<T: Scalar> Encoding<T> {
    pub fn new(channel_states: Vec<DensityOperator<T>>, support: Projector<T>) -> Result<Self> {
        if channel_states.is_empty() {
            return Err(Error::InvalidArgument("no channel states".into()));
        }
        let n = support.dim();
        if !channel_states.iter().all(|w| w.dim() == n) {
            return Err(Error::DimensionMismatch(
                "channel states must live in the support's space".into(),
            ));
        }
        for (i, w) in channel_states.iter().enumerate() {
            if (w.trace() - T::one()).abs() > T::TRACE_TOL {
                return Err(Error::ContractViolation(format!(
                    "channel state {} has trace {}",
                    i,
                    w.trace()
                )));
            }
            let compressed = &(support.matrix() * w.matrix()) * support.matrix();
            if (compressed.trace().re - w.trace()).abs() > T::HERM_TOL {
                return Err(Error::ContractViolation(format!(
                    "channel state {} leaks outside the support projector",
                    i
                )));
            }
        }
        let d = support.rank();
        Ok(Self {
            channel_states,
            support,
            d,
        })
    }

    pub fn channel_states(&self) -> &[DensityOperator<T>] {
        &self.channel_states
    }

    pub fn support(&self) -> &Projector<T> {
        &self.support
    }

    /// Channel dimension d = rank Γ_d.
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn source_dim(&self) -> usize {
        self.support.dim()
    }
}

/// Encoding plus decoder: the full pipeline π_i → W_i → w_i.
#[derive(Debug, Clone)]
pub struct CodingScheme<T> {
    encoding: Encoding<T>,
    decoder: KrausChannel<T>,
}

impl<T: Scalar> CodingScheme<T> {
    pub fn new(encoding: Encoding<T>, decoder: KrausChannel<T>) -> Result<Self> {
        if decoder.d_in() != encoding.source_dim() || decoder.d_out() != encoding.source_dim() {
            return Err(Error::DimensionMismatch(format!(
                "decoder is {}→{}, encoding lives in dimension {}",
                decoder.d_in(),
                decoder.d_out(),
                encoding.source_dim()
            )));
        }
        Ok(Self { encoding, decoder })
    }

    pub fn encoding(&self) -> &Encoding<T> {
        &self.encoding
    }

    pub fn decoder(&self) -> &KrausChannel<T> {
        &self.decoder
    }

    /// Decoded output w_i for signal i.
    pub fn decode(&self, i: usize) -> Result<DensityOperator<T>> {
        self.decoder.apply(&self.encoding.channel_states[i])
    }
}

/// F̄ = Σ pᵢ Tr(πᵢ wᵢ).
pub fn average_fidelity<T: Scalar>(e: &SourceEnsemble<T>, scheme: &CodingScheme<T>) -> Result<T> {
    if scheme.encoding.source_dim() != e.dim() {
        return Err(Error::DimensionMismatch(
            "scheme and ensemble dimensions differ".into(),
        ));
    }
    if scheme.encoding.channel_states.len() != e.len() {
        return Err(Error::DimensionMismatch(
            "one channel state per signal required".into(),
        ));
    }
    let mut acc = T::zero();
    for (i, (p, a)) in e.signals().iter().enumerate() {
        let w = scheme.decode(i)?;
        let f = fidelity_pure_mixed(&a.projector(), &w)?;
        acc += *p * f.value();
    }
    Ok(acc.min(T::one()).max(T::zero()))
}

/// The signals pushed through Λ, the projector onto the n−d smallest
/// eigenvectors of ρ: π̃ᵢ = Λ πᵢ Λ, ρ̃ = Σ pᵢ π̃ᵢ, with η the top-d
/// eigenvalue mass of ρ. The largest eigenvalue of ρ̃ is λ_{d+1}.
#[derive(Debug, Clone)]
pub struct ProjectedEnsemble<T> {
    lambda: Projector<T>,
    projected_signals: Vec<DensityOperator<T>>,
    rho_tilde: DensityOperator<T>,
    eta: T,
}

impl<T: Scalar> ProjectedEnsemble<T> {
    pub fn lambda(&self) -> &Projector<T> {
        &self.lambda
    }

    pub fn projected_signals(&self) -> &[DensityOperator<T>] {
        &self.projected_signals
    }

    pub fn rho_tilde(&self) -> &DensityOperator<T> {
        &self.rho_tilde
    }

    pub fn eta(&self) -> T {
        self.eta
    }
}

/// Builds the projected ensemble for channel dimension d. For d ≥ n the
/// projector is empty and every projected signal is the zero state.
pub fn project_ensemble<T: Scalar>(
    e: &SourceEnsemble<T>,
    d: usize,
) -> Result<ProjectedEnsemble<T>> {
    let n = e.dim();
    let rho = e.density();
    let lambda = if d >= n {
        Projector::zero(n)
    } else {
        let cols: Vec<Vec<Complex<T>>> = (d..n).map(|k| rho.eig().vector(k)).collect();
        Projector::from_orthonormal_columns(n, &cols)?
    };
    let eta = eta(&rho, d);
    let projected_signals: Vec<DensityOperator<T>> = e
        .signals()
        .iter()
        .map(|(_, a)| lambda.compress_pure(a))
        .collect::<Result<_>>()?;
    let rho_tilde = lambda.compress(&rho)?;
    // contract: the largest eigenvalue of ρ̃ is λ_{d+1} of ρ
    if d < n {
        let top = rho_tilde
            .eigenvalues()
            .first()
            .copied()
            .unwrap_or_else(T::zero);
        let expect = rho.eigenvalues()[d];
        if (top - expect).abs() > T::HERM_TOL {
            return Err(Error::ContractViolation(format!(
                "largest eigenvalue of ρ̃ is {}, expected λ_{{d+1}} = {}",
                top, expect
            )));
        }
    }
    Ok(ProjectedEnsemble {
        lambda,
        projected_signals,
        rho_tilde,
        eta,
    })
}

/// Σ pᵢ √F(πᵢ, π̃ᵢ), which collapses to Tr(ρΛ) = 1 − η. All three routes
/// are computed and cross-checked against each other.
pub fn sqrt_fid_projected_average<T: Scalar>(
    pe: &ProjectedEnsemble<T>,
    e: &SourceEnsemble<T>,
) -> Result<T> {
    if pe.projected_signals.len() != e.len() {
        return Err(Error::DimensionMismatch(
            "projected ensemble does not match the source".into(),
        ));
    }
    let mut signal_sum = T::zero();
    for ((p, a), tilde) in e.signals().iter().zip(&pe.projected_signals) {
        let f = fidelity_pure_mixed(&a.projector(), tilde)?;
        signal_sum += *p * f.sqrt();
    }
    let trace_route = (pe.lambda.matrix() * e.density().matrix()).trace().re;
    let eta_route = T::one() - pe.eta;
    let tol = real::<T>(1e-10).max(T::epsilon() * real::<T>(64.0));
    if (signal_sum - trace_route).abs() > tol || (signal_sum - eta_route).abs() > tol {
        return Err(Error::ContractViolation(format!(
            "√F average disagrees: signals {}, Tr(ρΛ) {}, 1−η {}",
            signal_sum, trace_route, eta_route
        )));
    }
    Ok(signal_sum)
}

/// The three averages bounding F̄ term by term: X̄ = Σ p Tr(π̃ w),
/// Ȳ = 2(1 − Σ p √F(π, π̃)) = 2η, and Z̄ = 2 Σ p √(X_i Y_i) ≤ 2√(X̄ Ȳ).
#[derive(Debug, Clone, Copy)]
pub struct XyzBounds<T> {
    pub x_bar: T,
    pub y_bar: T,
    pub z_bar: T,
    pub eta: T,
}

impl<T: Scalar> XyzBounds<T> {
    /// X̄ + Ȳ + Z̄, the upper bound on F̄ assembled from the per-term
    /// fidelity inequality.
    pub fn total(&self) -> T {
        self.x_bar + self.y_bar + self.z_bar
    }
}

/// Evaluates the bound decomposition for a scheme at channel dimension d.
pub fn xyz_decomposition<T: Scalar>(
    e: &SourceEnsemble<T>,
    scheme: &CodingScheme<T>,
    d: usize,
) -> Result<XyzBounds<T>> {
    let pe = project_ensemble(e, d)?;
    let mut x_bar = T::zero();
    let mut z_bar = T::zero();
    let mut sqrt_fid_avg = T::zero();
    let two = real::<T>(2.0);
    for (i, ((p, a), tilde)) in e.signals().iter().zip(&pe.projected_signals).enumerate() {
        let w = scheme.decode(i)?;
        let x_i = fidelity_pure_mixed(tilde, &w)?.value();
        let root_f = fidelity_pure_mixed(&a.projector(), tilde)?.sqrt();
        let y_i = two * (T::one() - root_f);
        x_bar += *p * x_i;
        z_bar += *p * two * (x_i * y_i).max(T::zero()).sqrt();
        sqrt_fid_avg += *p * root_f;
    }
    let y_bar = two * (T::one() - sqrt_fid_avg);
    Ok(XyzBounds {
        x_bar,
        y_bar,
        z_bar,
        eta: pe.eta(),
    })
}

/// The natural η-achieving encoder: Γ_d projects onto the top-d eigenspace
/// of ρ and each signal is encoded as its renormalized projection,
/// W_i = Γ_d π_i Γ_d / Tr(π_i Γ_d). Signals orthogonal to Γ_d contribute
/// nothing to the average fidelity whatever they are encoded as; they get
/// the top eigenvector of ρ as a fixed fallback state.
pub fn topd_encoder<T: Scalar>(e: &SourceEnsemble<T>, d: usize) -> Result<Encoding<T>> {
    let n = e.dim();
    if d == 0 || d > n {
        return Err(Error::InvalidArgument(format!(
            "channel dimension {} out of range 1..={}",
            d, n
        )));
    }
    let rho = e.density();
    let cols: Vec<Vec<Complex<T>>> = (0..d).map(|k| rho.eig().vector(k)).collect();
    let gamma = Projector::from_orthonormal_columns(n, &cols)?;
    let fallback = PureState::new(rho.eig().vector(0))?.projector();
    let mut channel_states = Vec::with_capacity(e.len());
    let orthogonal_tol = real::<T>(1e-12).max(T::epsilon() * real::<T>(16.0));
    for (_, a) in e.signals() {
        let compressed = gamma.compress_pure(a)?;
        let weight = compressed.trace();
        if weight < orthogonal_tol {
            channel_states.push(fallback.clone());
        } else {
            channel_states.push(compressed.with_trace(T::one())?);
        }
    }
    Encoding::new(channel_states, gamma)
}

/// Identity-decoder scheme over an encoding.
pub fn with_identity_decoder<T: Scalar>(enc: Encoding<T>) -> CodingScheme<T> {
    let n = enc.source_dim();
    CodingScheme::new(enc, KrausChannel::identity(n)).expect("identity decoder always compatible")
}
