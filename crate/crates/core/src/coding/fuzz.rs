//! Randomized stress test of the fidelity limit: arbitrary encodings,
//! Haar-random CPTP decoders, and the full bound chain checked per trial.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channels::random_channel;
use crate::error::Result;
use crate::operator::{DensityOperator, Projector};
use crate::sample::{
    child_rng, haar_isometry, random_density, random_probabilities, random_pure_state,
};
use crate::scalar::{real, Scalar};

use super::{average_fidelity, xyz_decomposition, CodingScheme, Encoding, SourceEnsemble};

/// Slack separating genuine counterexamples from roundoff.
pub const BOUND_SLACK: f64 = 1e-9;

/// Configuration of a fuzz campaign. Trials are deterministic functions of
/// `(seed, trial index)`; dims are cycled through in order.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FuzzConfig {
    pub trials: u64,
    pub seed: u64,
    /// (source dimension n, channel dimension d) pairs.
    pub dims: Vec<(usize, usize)>,
    /// Signal count is drawn uniformly from this inclusive range.
    pub min_signals: usize,
    pub max_signals: usize,
}

impl FuzzConfig {
    pub fn new(trials: u64, seed: u64, dims: Vec<(usize, usize)>) -> Self {
        Self {
            trials,
            seed,
            dims,
            min_signals: 2,
            max_signals: 8,
        }
    }

    /// All (n, d) with n in 3..=6 and d < n.
    pub fn default_dims() -> Vec<(usize, usize)> {
        let mut dims = Vec::new();
        for n in 3..=6 {
            for d in 1..n {
                dims.push((n, d));
            }
        }
        dims
    }
}

impl Default for FuzzConfig {
    fn default() -> Self {
        Self::new(10_000, 42, Self::default_dims())
    }
}

/// One trial that broke an inequality of the bound chain.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FuzzViolation {
    pub trial: u64,
    #[serde(rename = "F_bar")]
    pub f_bar: f64,
    pub eta: f64,
    #[serde(rename = "X")]
    pub x: f64,
    #[serde(rename = "Y")]
    pub y: f64,
    #[serde(rename = "Z")]
    pub z: f64,
}

/// Campaign summary. `max_ratio` is the largest observed F̄/η.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FuzzReport {
    pub trials: u64,
    pub seed: u64,
    pub dims: Vec<(usize, usize)>,
    pub max_ratio: f64,
    pub violations: Vec<FuzzViolation>,
}

impl FuzzReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Numbers produced by a single trial.
#[derive(Debug, Clone, Copy)]
pub struct TrialOutcome<T> {
    pub f_bar: T,
    pub eta: T,
    pub x_bar: T,
    pub y_bar: T,
    pub z_bar: T,
}

impl<T: Scalar> TrialOutcome<T> {
    /// Checks the whole chain: F̄ ≤ (3 + 2√2)η, X̄ ≤ η, Ȳ = 2η,
    /// Z̄ ≤ 2√(X̄Ȳ), and F̄ ≤ X̄ + Ȳ + Z̄, all within `slack`.
    pub fn chain_holds(&self, slack: T) -> bool {
        let two = real::<T>(2.0);
        let lemma_factor = real::<T>(3.0) + two * two.sqrt();
        self.f_bar <= lemma_factor * self.eta + slack
            && self.x_bar <= self.eta + slack
            && (self.y_bar - two * self.eta).abs() <= slack
            && self.z_bar <= two * (self.x_bar * self.y_bar).max(T::zero()).sqrt() + slack
            && self.f_bar <= self.x_bar + self.y_bar + self.z_bar + slack
    }
}

/// Runs one deterministic trial: a random ensemble, an arbitrary encoding
/// (an unconstrained signal → state lookup table on a random d-dimensional
/// subspace; the encoder may know the signal identity, so no channel
/// structure is imposed), and a Haar-random CPTP decoder.
pub fn fuzz_trial<T: Scalar>(config: &FuzzConfig, trial: u64) -> Result<TrialOutcome<T>> {
    let mut rng = child_rng(config.seed, trial);
    let (n, d) = config.dims[(trial as usize) % config.dims.len()];
    let m = rng.gen_range(config.min_signals..=config.max_signals);

    let probs = random_probabilities::<T, _>(m, &mut rng);
    let signals = probs
        .into_iter()
        .map(|p| Ok((p, random_pure_state::<T, _>(n, &mut rng)?)))
        .collect::<Result<Vec<_>>>()?;
    let ensemble = SourceEnsemble::new(signals)?;

    // arbitrary encoding: independent random states on a random subspace
    let basis = haar_isometry::<T, _>(n, d, &mut rng)?;
    let support = Projector::from_orthonormal_columns(
        n,
        &(0..d).map(|j| basis.column(j)).collect::<Vec<_>>(),
    )?;
    let mut channel_states = Vec::with_capacity(m);
    for _ in 0..m {
        let rank = rng.gen_range(1..=d);
        let sigma = random_density::<T, _>(d, rank, &mut rng)?;
        let lifted = &(&basis * sigma.matrix()) * &basis.adjoint();
        channel_states.push(DensityOperator::from_matrix(lifted)?);
    }
    let encoding = Encoding::new(channel_states, support)?;

    let decoder = random_channel::<T, _>(n, n, n * n, &mut rng)?;
    let scheme = CodingScheme::new(encoding, decoder)?;

    let f_bar = average_fidelity(&ensemble, &scheme)?;
    let xyz = xyz_decomposition(&ensemble, &scheme, d)?;
    Ok(TrialOutcome {
        f_bar,
        eta: xyz.eta,
        x_bar: xyz.x_bar,
        y_bar: xyz.y_bar,
        z_bar: xyz.z_bar,
    })
}

/// Runs the campaign, recording every trial whose bound chain fails beyond
/// [`BOUND_SLACK`] and the maximum observed F̄/η ratio.
pub fn fuzz_bound(config: &FuzzConfig) -> Result<FuzzReport> {
    let slack = BOUND_SLACK;
    let mut violations = Vec::new();
    let mut max_ratio = 0.0f64;
    for trial in 0..config.trials {
        let out = fuzz_trial::<f64>(config, trial)?;
        if out.eta > 0.0 {
            max_ratio = max_ratio.max(out.f_bar / out.eta);
        }
        if !out.chain_holds(slack) {
            violations.push(FuzzViolation {
                trial,
                f_bar: out.f_bar,
                eta: out.eta,
                x: out.x_bar,
                y: out.y_bar,
                z: out.z_bar,
            });
        }
    }
    Ok(FuzzReport {
        trials: config.trials,
        seed: config.seed,
        dims: config.dims.clone(),
        max_ratio,
        violations,
    })
}

/// Stress test of the fidelity inequality itself on random (possibly
/// subnormalized) triples. Returns the worst (most negative) margin
/// `bound − F₁₃` seen for the unit-trace and subnormalized variants, plus
/// the maximum margin (for reporting).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct InequalityReport {
    pub trials: u64,
    pub seed: u64,
    pub dims: Vec<usize>,
    pub min_margin: f64,
    pub min_margin_subnormalized: f64,
    pub max_margin: f64,
    pub violations: u64,
}

impl InequalityReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Samples triples (ρ₁, ρ₂, ρ₃) with Tr ρ₁, Tr ρ₂ ∈ [0.3, 1] and checks
/// Eq.-style chaining two ways: against a normalized ρ₃ and against a
/// subnormalized copy of it. Every 16th trial forces ρ₁ = ρ₂ normalized,
/// where the bound collapses to F₂₃ and must be tight.
pub fn fuzz_inequality(trials: u64, seed: u64, dims: &[usize]) -> Result<InequalityReport> {
    use crate::fidelity::{fidelity_general, triangle_bound, triangle_bound_general};
    let mut min_margin = f64::INFINITY;
    let mut min_margin_sub = f64::INFINITY;
    let mut max_margin = f64::NEG_INFINITY;
    let mut violations = 0u64;
    for trial in 0..trials {
        let mut rng = child_rng(seed, trial);
        let dim = dims[(trial as usize) % dims.len()];
        let forced_equal = trial % 16 == 15;

        let r1;
        let r2;
        if forced_equal {
            let r = random_density::<f64, _>(dim, 1 + (trial as usize) % dim, &mut rng)?;
            r1 = r.clone();
            r2 = r;
        } else {
            let t1 = 0.3 + 0.7 * rng.gen::<f64>();
            let t2 = 0.3 + 0.7 * rng.gen::<f64>();
            r1 = random_density::<f64, _>(dim, 1 + (trial as usize) % dim, &mut rng)?
                .with_trace(t1)?;
            r2 = random_density::<f64, _>(dim, dim, &mut rng)?.with_trace(t2)?;
        }
        let r3 = random_density::<f64, _>(dim, dim, &mut rng)?;
        let t3 = 0.3 + 0.7 * rng.gen::<f64>();
        let r3_sub = r3.with_trace(t3)?;

        let f12 = if forced_equal {
            crate::fidelity::FidelityValue::new(1.0)?
        } else {
            fidelity_general(&r1, &r2)?
        };
        let f23 = fidelity_general(&r2, &r3)?;
        let f13 = fidelity_general(&r1, &r3)?;
        let margin = triangle_bound(f12, f23) - f13.value();
        min_margin = min_margin.min(margin);
        max_margin = max_margin.max(margin);
        if margin < -BOUND_SLACK {
            violations += 1;
        }
        if forced_equal && margin.abs() > BOUND_SLACK {
            violations += 1;
        }

        let f23s = fidelity_general(&r2, &r3_sub)?;
        let f13s = fidelity_general(&r1, &r3_sub)?;
        let margin_sub = triangle_bound_general(f12, f23s, r3_sub.trace()) - f13s.value();
        min_margin_sub = min_margin_sub.min(margin_sub);
        max_margin = max_margin.max(margin_sub);
        if margin_sub < -BOUND_SLACK {
            violations += 1;
        }
    }
    Ok(InequalityReport {
        trials,
        seed,
        dims: dims.to_vec(),
        min_margin,
        min_margin_subnormalized: min_margin_sub,
        max_margin,
        violations,
    })
}
