//! Block-coding arithmetic: von Neumann entropy, combinatorial spectra of
//! N-fold tensor powers, typical-subspace mass and dimension, the top-d
//! eigenvalue mass Σ_d, and the converse sweep Σ_d ≤ ε_N + 2^{−Nδ}.
//!
//! Spectra of ρ^N are never materialized as k^N lists: each type class
//! (one per eigenvalue count vector) carries its product value and its
//! multinomial multiplicity, so block lengths of several hundred are exact
//! and cheap for small bases.

use serde::{Deserialize, Serialize};

use crate::coding::SourceEnsemble;
use crate::error::{Error, Result};
use crate::operator::PureState;
use crate::scalar::{real, Scalar};

/// Largest number of type classes a product spectrum may expand into.
pub const DEFAULT_CLASS_CAP: usize = 1_000_000;

/// Largest dense dimension block ensembles may reach.
pub const BLOCK_DIM_CAP: usize = 4096;

/// Probability spectrum: nonnegative, descending, summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T> {
    values: Vec<T>,
}

impl<T: Scalar> Spectrum<T> {
    pub fn new(mut values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("empty spectrum".into()));
        }
        if values.iter().any(|x| *x < T::zero() || !x.is_finite()) {
            return Err(Error::ContractViolation(
                "spectrum entries must be nonnegative".into(),
            ));
        }
        let total: T = values.iter().copied().sum();
        if (total - T::one()).abs() > real::<T>(1e-12).max(T::epsilon() * real::<T>(16.0)) {
            return Err(Error::ContractViolation(format!(
                "spectrum sums to {}, not 1",
                total
            )));
        }
        values.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(Self { values })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// S(ρ) = −Σ λ log₂ λ, with 0·log 0 = 0.
pub fn von_neumann_entropy<T: Scalar>(s: &Spectrum<T>) -> T {
    let ln2 = real::<T>(2.0).ln();
    -s.values
        .iter()
        .filter(|x| **x > T::zero())
        .map(|&x| x * (x.ln() / ln2))
        .sum::<T>()
}

/// One eigenvalue class of ρ^N: all tensor factors with the same counts of
/// base eigenvalues share the value Π λ_j^{n_j} and appear with multinomial
/// multiplicity.
#[derive(Debug, Clone)]
pub struct TypeClass<T> {
    pub counts: Vec<u32>,
    pub value: T,
    /// Multinomial coefficient as a real number; exact below 2^53, about
    /// 1e-12 relative accuracy above (computed in log space).
    pub multiplicity: T,
}

/// The spectrum of ρ^N organized by type class, sorted by value descending.
#[derive(Debug, Clone)]
pub struct ProductSpectrum<T> {
    base: Spectrum<T>,
    block_len: u32,
    classes: Vec<TypeClass<T>>,
}

impl<T: Scalar> ProductSpectrum<T> {
    pub fn base(&self) -> &Spectrum<T> {
        &self.base
    }

    pub fn block_len(&self) -> u32 {
        self.block_len
    }

    pub fn classes(&self) -> &[TypeClass<T>] {
        &self.classes
    }

    /// k^N as a real number.
    pub fn total_dimension(&self) -> T {
        self.classes.iter().map(|c| c.multiplicity).sum()
    }

    /// Σ value·multiplicity, equal to one up to roundoff.
    pub fn total_mass(&self) -> T {
        self.classes.iter().map(|c| c.value * c.multiplicity).sum()
    }
}

/// Number of count vectors: C(N + k − 1, k − 1), saturating on overflow.
fn class_count(n: u32, k: usize) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..(k - 1) as u128 {
        let num = n as u128 + i + 1;
        acc = match acc.checked_mul(num) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Exact multinomial coefficient in u128 if it fits.
fn multinomial_u128(n: u32, counts: &[u32]) -> Option<u128> {
    let mut acc: u128 = 1;
    let mut seen: u32 = 0;
    for &c in counts {
        for j in 1..=c {
            seen += 1;
            acc = acc.checked_mul(seen as u128)? / (j as u128);
        }
    }
    debug_assert_eq!(seen, n);
    Some(acc)
}

fn multinomial_real<T: Scalar>(n: u32, counts: &[u32], ln_fact: &[T]) -> T {
    if let Some(exact) = multinomial_u128(n, counts) {
        if let Some(v) = T::from_u128(exact) {
            return v;
        }
    }
    let mut ln = ln_fact[n as usize];
    for &c in counts {
        ln -= ln_fact[c as usize];
    }
    ln.exp()
}

/// Expands the eigenvalue multiset of ρ^N into type classes. Fails if the
/// class count would exceed `cap`.
pub fn product_spectrum_capped<T: Scalar>(
    s: &Spectrum<T>,
    block_len: u32,
    cap: usize,
) -> Result<ProductSpectrum<T>> {
    if block_len == 0 {
        return Err(Error::InvalidArgument(
            "block length must be positive".into(),
        ));
    }
    let k = s.len();
    let count = class_count(block_len, k);
    if count > cap as u128 {
        return Err(Error::SizeCap(format!(
            "{} type classes exceed the cap of {}",
            count, cap
        )));
    }

    // ln m! table for the log-space multiplicity fallback
    let mut ln_fact: Vec<T> = Vec::with_capacity(block_len as usize + 1);
    let mut acc = T::zero();
    ln_fact.push(T::zero());
    for m in 1..=block_len {
        acc += T::from_u32(m).unwrap().ln();
        ln_fact.push(acc);
    }

    let mut classes = Vec::with_capacity(count as usize);
    let mut counts = vec![0u32; k];
    enumerate_counts(block_len, 0, &mut counts, &mut |counts: &[u32]| {
        let mut value = T::one();
        for (j, &c) in counts.iter().enumerate() {
            if c > 0 {
                value *= s.values[j].powi(c as i32);
            }
        }
        classes.push(TypeClass {
            counts: counts.to_vec(),
            value,
            multiplicity: multinomial_real(block_len, counts, &ln_fact),
        });
    });
    classes.sort_by(|a, b| b.value.partial_cmp(&a.value).unwrap());

    let ps = ProductSpectrum {
        base: s.clone(),
        block_len,
        classes,
    };
    let mass = ps.total_mass();
    let mass_tol = real::<T>(1e-9).max(T::epsilon() * real::<T>(512.0));
    if (mass - T::one()).abs() > mass_tol {
        return Err(Error::ContractViolation(format!(
            "product spectrum mass {} drifted from 1",
            mass
        )));
    }
    Ok(ps)
}

/// [`product_spectrum_capped`] with the default cap.
pub fn product_spectrum<T: Scalar>(s: &Spectrum<T>, block_len: u32) -> Result<ProductSpectrum<T>> {
    product_spectrum_capped(s, block_len, DEFAULT_CLASS_CAP)
}

fn enumerate_counts(
    remaining: u32,
    level: usize,
    counts: &mut Vec<u32>,
    f: &mut impl FnMut(&[u32]),
) {
    if level == counts.len() - 1 {
        counts[level] = remaining;
        f(counts);
        return;
    }
    for c in (0..=remaining).rev() {
        counts[level] = c;
        enumerate_counts(remaining - c, level + 1, counts, f);
    }
}

/// Eigenvalue window of the typical subspace: strictly between
/// 2^{−N(S+δ)} and 2^{−N(S−δ)}.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TypicalWindow<T> {
    pub block_len: u32,
    pub delta: T,
    /// Base entropy in bits.
    pub entropy: T,
}

impl<T: Scalar> TypicalWindow<T> {
    pub fn new(block_len: u32, delta: T, entropy: T) -> Result<Self> {
        if delta <= T::zero() {
            return Err(Error::InvalidArgument("delta must be positive".into()));
        }
        Ok(Self {
            block_len,
            delta,
            entropy,
        })
    }

    /// (lower, upper) eigenvalue bounds.
    pub fn bounds(&self) -> (T, T) {
        let n = T::from_u32(self.block_len).unwrap();
        let two = real::<T>(2.0);
        let lo = two.powf(-n * (self.entropy + self.delta));
        let hi = two.powf(-n * (self.entropy - self.delta));
        (lo, hi)
    }

    /// Strict window membership. For any δ > 0 the uniform-source
    /// eigenvalue 2^{−NS} sits strictly inside, so the perfectly
    /// compressible case counts as typical.
    pub fn contains(&self, value: T) -> bool {
        let (lo, hi) = self.bounds();
        lo < value && value < hi
    }
}

/// Probability mass and dimension of the typical subspace of ρ^N.
pub fn typical_stats<T: Scalar>(ps: &ProductSpectrum<T>, delta: T) -> Result<(T, T)> {
    let window = TypicalWindow::new(ps.block_len, delta, von_neumann_entropy(&ps.base))?;
    let mut mass = T::zero();
    let mut dimension = T::zero();
    for c in &ps.classes {
        if window.contains(c.value) {
            mass += c.value * c.multiplicity;
            dimension += c.multiplicity;
        }
    }
    Ok((mass, dimension))
}

/// Sum of the largest `d` eigenvalues of ρ^N, with a partial block at the
/// boundary. `d` is a real-valued count because block dimensions outgrow
/// every integer type along a sweep.
pub fn sigma_d<T: Scalar>(ps: &ProductSpectrum<T>, d: T) -> Result<T> {
    let total = ps.total_dimension();
    let slack = real::<T>(1e-9).max(T::epsilon() * real::<T>(16.0));
    if d < T::one() || d > total * (T::one() + slack) {
        return Err(Error::InvalidArgument(format!(
            "d = {} outside 1..={}",
            d, total
        )));
    }
    let mut remaining = d.min(total);
    let mut acc = T::zero();
    for c in &ps.classes {
        if remaining <= T::zero() {
            break;
        }
        let take = remaining.min(c.multiplicity);
        acc += c.value * take;
        remaining -= take;
    }
    Ok(acc.min(T::one()))
}

/// How the channel dimension is derived from the qubit rate N(S − 2δ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DimensionRule {
    /// d = ⌊2^{N(S−2δ)}⌋ (smooth sweeps).
    FloorOfPower,
    /// d = 2^{⌊N(S−2δ)⌋} (literal qubit counting).
    PowerOfFloor,
}

/// One row of a converse sweep.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ConverseRow<T> {
    pub block_len: u32,
    /// Channel dimension (integer-valued real; huge for long blocks).
    pub d: T,
    pub entropy: T,
    /// Atypical mass 1 − Tr Πρ^NΠ at this block length.
    pub epsilon: T,
    pub two_pow_neg_ndelta: T,
    pub sigma_d: T,
    /// ε_N + 2^{−Nδ}; the sweep contract is σ_d ≤ bound per row.
    pub bound: T,
    /// Fidelity ceiling 6Σ_d from the coding bound.
    pub six_sigma_d: T,
}

impl<T: Scalar> ConverseRow<T> {
    pub fn holds(&self) -> bool {
        self.sigma_d <= self.bound + real::<T>(1e-12)
    }
}

/// Sweeps block lengths, deriving the channel dimension from the qubit rate
/// S − 2δ per input and checking Σ_d against ε_N + 2^{−Nδ} at every N.
pub fn converse_sweep<T: Scalar>(
    s: &Spectrum<T>,
    delta: T,
    block_lens: impl IntoIterator<Item = u32>,
    rule: DimensionRule,
) -> Result<Vec<ConverseRow<T>>> {
    if delta <= T::zero() {
        return Err(Error::InvalidArgument("delta must be positive".into()));
    }
    let entropy = von_neumann_entropy(s);
    let two = real::<T>(2.0);
    let mut rows = Vec::new();
    for n in block_lens {
        let ps = product_spectrum(s, n)?;
        let n_real = T::from_u32(n).unwrap();
        let rate_exponent = n_real * (entropy - two * delta);
        let d_raw = match rule {
            DimensionRule::FloorOfPower => two.powf(rate_exponent).floor(),
            DimensionRule::PowerOfFloor => two.powf(rate_exponent.floor()),
        };
        let d = d_raw.max(T::one()).min(ps.total_dimension());
        let (mass, _dim) = typical_stats(&ps, delta)?;
        let epsilon = T::one() - mass;
        let two_pow = two.powf(-n_real * delta);
        let sigma = sigma_d(&ps, d)?;
        rows.push(ConverseRow {
            block_len: n,
            d,
            entropy,
            epsilon,
            two_pow_neg_ndelta: two_pow,
            sigma_d: sigma,
            bound: epsilon + two_pow,
            six_sigma_d: real::<T>(6.0) * sigma,
        });
    }
    Ok(rows)
}

/// N-fold block ensemble: every N-sequence of base signals as a tensor
/// product with the product probability.
pub fn block_ensemble<T: Scalar>(
    e: &SourceEnsemble<T>,
    block_len: u32,
) -> Result<SourceEnsemble<T>> {
    let m = e.len();
    let n = e.dim();
    let signal_count = (m as u128).checked_pow(block_len).unwrap_or(u128::MAX);
    let dim = (n as u128).checked_pow(block_len).unwrap_or(u128::MAX);
    if signal_count > BLOCK_DIM_CAP as u128 || dim > BLOCK_DIM_CAP as u128 {
        return Err(Error::SizeCap(format!(
            "block ensemble needs {} signals of dimension {}, cap is {}",
            signal_count, dim, BLOCK_DIM_CAP
        )));
    }
    let mut signals: Vec<(T, PureState<T>)> = vec![(T::one(), PureState::basis(1, 0)?)];
    for _ in 0..block_len {
        let mut next = Vec::with_capacity(signals.len() * m);
        for (p, state) in &signals {
            for (q, base) in e.signals() {
                next.push((*p * *q, state.tensor(base)));
            }
        }
        signals = next;
    }
    // exact renormalization of the last probability absorbs product roundoff
    let head: T = signals[..signals.len() - 1].iter().map(|(p, _)| *p).sum();
    let last = signals.len() - 1;
    signals[last].0 = T::one() - head;
    SourceEnsemble::new(signals)
}
