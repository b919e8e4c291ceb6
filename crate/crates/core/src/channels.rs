//! Decoders as completely positive trace-preserving maps: Kraus form,
//! Stinespring dilation (unitary on system ⊗ ancilla followed by discarding
//! the ancilla), measure-and-prepare channels, and channel sampling.

use num_complex::Complex;
use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{inner, outer, vec_norm, ComplexMatrix, Subsystem};
use crate::operator::{DensityOperator, HermitianOperator, Projector, PureState};
use crate::sample::haar_isometry;
use crate::scalar::{real, Scalar};

/// Tolerance for the trace-preservation check Σ K†K = I (1e-8 at f64).
fn tp_tol<T: Scalar>() -> T {
    T::HERM_TOL * real::<T>(10.0)
}

/// Completely positive trace-preserving map given by a finite Kraus family
/// of `d_out × d_in` matrices with Σ K†K = I.
#[derive(Debug, Clone)]
pub struct KrausChannel<T> {
    kraus_ops: Vec<ComplexMatrix<T>>,
    d_in: usize,
    d_out: usize,
}

impl<T: Scalar> KrausChannel<T> {
    pub fn new(kraus_ops: Vec<ComplexMatrix<T>>) -> Result<Self> {
        let first = kraus_ops
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty Kraus family".into()))?;
        let (d_out, d_in) = (first.rows(), first.cols());
        if d_in == 0 || d_out == 0 {
            return Err(Error::InvalidArgument("zero-dimensional channel".into()));
        }
        if !kraus_ops
            .iter()
            .all(|k| k.rows() == d_out && k.cols() == d_in)
        {
            return Err(Error::DimensionMismatch(
                "Kraus operators of unequal shape".into(),
            ));
        }
        let mut sum = ComplexMatrix::zeros(d_in, d_in);
        for k in &kraus_ops {
            sum = &sum + &(&k.adjoint() * k);
        }
        let defect = (&sum - &ComplexMatrix::identity(d_in)).max_norm();
        if defect > tp_tol::<T>() {
            return Err(Error::ContractViolation(format!(
                "not trace preserving: ‖ΣK†K − I‖ = {}",
                defect
            )));
        }
        Ok(Self {
            kraus_ops,
            d_in,
            d_out,
        })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            kraus_ops: vec![ComplexMatrix::identity(dim)],
            d_in: dim,
            d_out: dim,
        }
    }

    /// Channel conjugating by a unitary.
    pub fn from_unitary(u: ComplexMatrix<T>) -> Result<Self> {
        if !u.is_square() {
            return Err(Error::DimensionMismatch("unitary must be square".into()));
        }
        Self::new(vec![u])
    }

    /// ρ ↦ Tr(ρ) I/d.
    pub fn fully_depolarizing(dim: usize) -> Self {
        let scale = T::from_usize(dim).unwrap().sqrt().recip();
        let mut ops = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                let mut k = ComplexMatrix::zeros(dim, dim);
                k[(i, j)] = Complex::new(scale, T::zero());
                ops.push(k);
            }
        }
        Self {
            kraus_ops: ops,
            d_in: dim,
            d_out: dim,
        }
    }

    pub fn kraus_ops(&self) -> &[ComplexMatrix<T>] {
        &self.kraus_ops
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    /// Linear action Σ K M K† on a raw matrix.
    pub fn apply_matrix(&self, m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        if m.rows() != self.d_in || m.cols() != self.d_in {
            return Err(Error::DimensionMismatch(format!(
                "channel expects {0}x{0} input, got {1}x{2}",
                self.d_in,
                m.rows(),
                m.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.d_out, self.d_out);
        for k in &self.kraus_ops {
            out = &out + &(&(k * m) * &k.adjoint());
        }
        Ok(out)
    }

    /// Applies the channel to a (possibly subnormalized) state; the trace
    /// carries through.
    pub fn apply(&self, rho: &DensityOperator<T>) -> Result<DensityOperator<T>> {
        DensityOperator::from_matrix(self.apply_matrix(rho.matrix())?)
    }

    /// Choi matrix Σ_{ij} |i⟩⟨j| ⊗ E(|i⟩⟨j|) on d_in·d_out; PSD exactly when
    /// the map is completely positive.
    pub fn choi(&self) -> HermitianOperator<T> {
        let d = self.d_in * self.d_out;
        let mut c = ComplexMatrix::zeros(d, d);
        for k in &self.kraus_ops {
            // vec(K) with the input index slow: v[(i, o)] = K[o, i]
            let mut v = vec![Complex::<T>::zero(); d];
            for i in 0..self.d_in {
                for o in 0..self.d_out {
                    v[i * self.d_out + o] = k[(o, i)];
                }
            }
            c = &c + &outer(&v, &v);
        }
        HermitianOperator::new(c).expect("Choi matrix is Hermitian by construction")
    }

    pub fn choi_min_eigenvalue(&self) -> T {
        let eig = self.choi().eigh();
        eig.values.last().copied().unwrap_or_else(T::zero)
    }

    /// Stinespring dilation: a unitary U on system ⊗ ancilla with the
    /// ancilla fixed to |0⟩, such that the channel is
    /// ρ ↦ Tr_anc U (ρ ⊗ |0⟩⟨0|) U†. Ancilla dimension = number of Kraus
    /// operators; the remaining columns of U are an orthonormal completion.
    /// Only square channels dilate this way.
    pub fn dilate(&self) -> Result<StinespringDilation<T>> {
        if self.d_in != self.d_out {
            return Err(Error::InvalidArgument(
                "dilation of a non-square channel".into(),
            ));
        }
        let d = self.d_in;
        let k_count = self.kraus_ops.len();
        let total = d * k_count;
        let mut u = ComplexMatrix::zeros(total, total);

        // isometry columns: U[(o,k), (j,0)] = K_k[o, j]
        let mut have: Vec<Vec<Complex<T>>> = Vec::with_capacity(total);
        for j in 0..d {
            let mut col = vec![Complex::zero(); total];
            for (k_idx, k) in self.kraus_ops.iter().enumerate() {
                for o in 0..d {
                    col[o * k_count + k_idx] = k[(o, j)];
                }
            }
            u.set_column(j * k_count, &col);
            have.push(col);
        }

        // fill the remaining column slots with an orthonormal completion
        let mut slots: Vec<usize> = Vec::new();
        for j in 0..d {
            for a in 1..k_count {
                slots.push(j * k_count + a);
            }
        }
        let mut cand = 0usize;
        for slot in slots {
            loop {
                if cand >= total {
                    return Err(Error::ContractViolation(
                        "failed to complete dilation unitary".into(),
                    ));
                }
                let mut v = vec![Complex::zero(); total];
                v[cand] = Complex::new(T::one(), T::zero());
                cand += 1;
                for _ in 0..2 {
                    for c in &have {
                        let r = inner(c, &v);
                        for (vk, ck) in v.iter_mut().zip(c) {
                            *vk -= *ck * r;
                        }
                    }
                }
                let norm = vec_norm(&v);
                if norm > real::<T>(0.5) {
                    let inv = norm.recip();
                    for z in &mut v {
                        *z = z.scale(inv);
                    }
                    u.set_column(slot, &v);
                    have.push(v);
                    break;
                }
            }
        }

        Ok(StinespringDilation {
            unitary: u,
            ancilla_state: PureState::basis(k_count, 0)?,
            d_sys: d,
            d_anc: k_count,
            output_subsystem: Subsystem::Left,
        })
    }
}

/// Unitary realization of a channel on system ⊗ ancilla.
#[derive(Debug, Clone)]
pub struct StinespringDilation<T> {
    unitary: ComplexMatrix<T>,
    ancilla_state: PureState<T>,
    d_sys: usize,
    d_anc: usize,
    output_subsystem: Subsystem,
}

impl<T: Scalar> StinespringDilation<T> {
    pub fn unitary(&self) -> &ComplexMatrix<T> {
        &self.unitary
    }

    pub fn ancilla_state(&self) -> &PureState<T> {
        &self.ancilla_state
    }

    pub fn d_anc(&self) -> usize {
        self.d_anc
    }

    pub fn output_subsystem(&self) -> Subsystem {
        self.output_subsystem
    }

    /// Embed, conjugate by U, trace out the ancilla.
    pub fn apply_matrix(&self, m: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
        if m.rows() != self.d_sys || m.cols() != self.d_sys {
            return Err(Error::DimensionMismatch(format!(
                "dilation expects {0}x{0} input, got {1}x{2}",
                self.d_sys,
                m.rows(),
                m.cols()
            )));
        }
        let anc = outer(
            self.ancilla_state.amplitudes(),
            self.ancilla_state.amplitudes(),
        );
        let total = m.tensor(&anc);
        let evolved = &(&self.unitary * &total) * &self.unitary.adjoint();
        let traced = match self.output_subsystem {
            Subsystem::Left => Subsystem::Right,
            Subsystem::Right => Subsystem::Left,
        };
        evolved.partial_trace((self.d_sys, self.d_anc), traced)
    }

    pub fn apply(&self, rho: &DensityOperator<T>) -> Result<DensityOperator<T>> {
        DensityOperator::from_matrix(self.apply_matrix(rho.matrix())?)
    }
}

/// Measure an orthogonal observable, then prepare an output state keyed by
/// the outcome.
#[derive(Debug, Clone)]
pub struct MeasurePrepareChannel<T> {
    outcome_projectors: Vec<Projector<T>>,
    prepared_outputs: Vec<DensityOperator<T>>,
}

impl<T: Scalar> MeasurePrepareChannel<T> {
    pub fn new(
        outcome_projectors: Vec<Projector<T>>,
        prepared_outputs: Vec<DensityOperator<T>>,
    ) -> Result<Self> {
        if outcome_projectors.is_empty() || outcome_projectors.len() != prepared_outputs.len() {
            return Err(Error::InvalidArgument(
                "need one prepared output per outcome projector".into(),
            ));
        }
        let d_in = outcome_projectors[0].dim();
        if !outcome_projectors.iter().all(|p| p.dim() == d_in) {
            return Err(Error::DimensionMismatch("projector dims differ".into()));
        }
        let mut sum = ComplexMatrix::zeros(d_in, d_in);
        for p in &outcome_projectors {
            sum = &sum + p.matrix();
        }
        if (&sum - &ComplexMatrix::identity(d_in)).max_norm() > T::HERM_TOL {
            return Err(Error::ContractViolation(
                "outcome projectors do not sum to the identity".into(),
            ));
        }
        let d_out = prepared_outputs[0].dim();
        if !prepared_outputs.iter().all(|w| w.dim() == d_out) {
            return Err(Error::DimensionMismatch("output dims differ".into()));
        }
        if !prepared_outputs
            .iter()
            .all(|w| (w.trace() - T::one()).abs() <= T::TRACE_TOL)
        {
            return Err(Error::ContractViolation(
                "prepared outputs must be normalized".into(),
            ));
        }
        Ok(Self {
            outcome_projectors,
            prepared_outputs,
        })
    }

    pub fn d_in(&self) -> usize {
        self.outcome_projectors[0].dim()
    }

    pub fn d_out(&self) -> usize {
        self.prepared_outputs[0].dim()
    }

    pub fn outcome_projectors(&self) -> &[Projector<T>] {
        &self.outcome_projectors
    }

    pub fn prepared_outputs(&self) -> &[DensityOperator<T>] {
        &self.prepared_outputs
    }

    pub fn outcome_probabilities(&self, rho: &DensityOperator<T>) -> Result<Vec<T>> {
        if rho.dim() != self.d_in() {
            return Err(Error::DimensionMismatch("state/measurement dims".into()));
        }
        Ok(self
            .outcome_projectors
            .iter()
            .map(|p| (p.matrix() * rho.matrix()).trace().re)
            .collect())
    }

    /// Direct action Σ_o Tr(P_o ρ) σ_o.
    pub fn apply(&self, rho: &DensityOperator<T>) -> Result<DensityOperator<T>> {
        let probs = self.outcome_probabilities(rho)?;
        let d_out = self.d_out();
        let mut m = ComplexMatrix::zeros(d_out, d_out);
        for (p, w) in probs.iter().zip(&self.prepared_outputs) {
            m = &m + &w.matrix().scale_re(*p);
        }
        DensityOperator::from_matrix(m)
    }

    /// Kraus realization: {√s_m |u_m⟩⟨b| : b basis of range(P_o), (s_m, u_m)
    /// eigenbranches of σ_o}. Applying it equals Σ_o Tr(P_o ρ) σ_o.
    pub fn as_kraus(&self) -> Result<KrausChannel<T>> {
        let d_in = self.d_in();
        let d_out = self.d_out();
        let mut ops = Vec::new();
        for (p, w) in self.outcome_projectors.iter().zip(&self.prepared_outputs) {
            // orthonormal basis of range(P): eigenvectors with eigenvalue ≈ 1
            let peig = p.operator().eigh();
            let basis: Vec<Vec<Complex<T>>> = (0..p.rank()).map(|k| peig.vector(k)).collect();
            for (m_idx, &s) in w.eigenvalues().iter().enumerate() {
                if s <= T::PSD_TOL {
                    continue;
                }
                let u = w.eig().vector(m_idx);
                let root = s.sqrt();
                for b in &basis {
                    let mut k = ComplexMatrix::zeros(d_out, d_in);
                    for r in 0..d_out {
                        for c in 0..d_in {
                            k[(r, c)] = u[r].scale(root) * b[c].conj();
                        }
                    }
                    ops.push(k);
                }
            }
        }
        KrausChannel::new(ops)
    }
}

/// Samples a Haar-random channel: the restriction of a Haar unitary on
/// `d_in · d_anc` to the fixed ancilla state |0⟩ (equivalently a Haar
/// isometry into `d_out ⊗ d_env`), with `d_out` the kept factor. Requires
/// `d_out` to divide `d_in · d_anc`.
pub fn random_channel<T: Scalar, R: Rng + ?Sized>(
    d_in: usize,
    d_out: usize,
    d_anc: usize,
    rng: &mut R,
) -> Result<KrausChannel<T>> {
    if d_in == 0 || d_out == 0 || d_anc == 0 {
        return Err(Error::InvalidArgument(
            "channel dims must be positive".into(),
        ));
    }
    let total = d_in * d_anc;
    if !total.is_multiple_of(d_out) {
        return Err(Error::InvalidArgument(format!(
            "output dim {} does not divide total dim {}",
            d_out, total
        )));
    }
    let d_env = total / d_out;
    let v = haar_isometry::<T, _>(total, d_in, rng)?;
    let mut ops = Vec::with_capacity(d_env);
    for e in 0..d_env {
        let mut k = ComplexMatrix::zeros(d_out, d_in);
        for o in 0..d_out {
            for j in 0..d_in {
                k[(o, j)] = v[(o * d_env + e, j)];
            }
        }
        ops.push(k);
    }
    KrausChannel::new(ops)
}

/// Pads a state supported on `d` dimensions into the first `d` coordinates
/// of an `n`-dimensional space; the trace is unchanged.
pub fn embed_channel_states<T: Scalar>(
    w: &DensityOperator<T>,
    n: usize,
) -> Result<DensityOperator<T>> {
    if w.dim() > n {
        return Err(Error::DimensionMismatch(format!(
            "cannot embed dimension {} into {}",
            w.dim(),
            n
        )));
    }
    DensityOperator::from_matrix(w.matrix().embed(n)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::{child_rng, random_density};
    use crate::test_support::cplx;

    #[test]
    fn identity_channel_is_identity() {
        let mut rng = child_rng(31, 0);
        let rho = random_density::<f64, _>(3, 2, &mut rng).unwrap();
        let id = KrausChannel::identity(3);
        let out = id.apply(&rho).unwrap();
        assert!(out.matrix().approx_eq(rho.matrix(), 1e-15));
    }

    #[test]
    fn depolarizing_channel_maps_to_maximally_mixed() {
        let mut rng = child_rng(31, 1);
        let rho = random_density::<f64, _>(2, 2, &mut rng).unwrap();
        let dep = KrausChannel::fully_depolarizing(2);
        let out = dep.apply(&rho).unwrap();
        assert!(out
            .matrix()
            .approx_eq(&ComplexMatrix::identity(2).scale_re(0.5), 1e-12));
    }

    #[test]
    fn trace_preservation_including_subnormalized_inputs() {
        let mut rng = child_rng(31, 2);
        for _ in 0..50 {
            let ch = random_channel::<f64, _>(3, 3, 2, &mut rng).unwrap();
            let rho = random_density::<f64, _>(3, 3, &mut rng)
                .unwrap()
                .with_trace(0.37)
                .unwrap();
            let out = ch.apply(&rho).unwrap();
            assert!((out.trace() - 0.37).abs() < 1e-10);
        }
    }

    #[test]
    fn invalid_kraus_families_are_rejected() {
        // not trace preserving
        let k = ComplexMatrix::<f64>::identity(2).scale_re(0.9);
        assert!(KrausChannel::new(vec![k]).is_err());
        assert!(KrausChannel::<f64>::new(vec![]).is_err());
        // shape mismatch
        let a = ComplexMatrix::<f64>::identity(2);
        let b = ComplexMatrix::<f64>::identity(3);
        assert!(KrausChannel::new(vec![a, b]).is_err());
    }

    #[test]
    fn choi_of_sampled_channels_is_psd() {
        let mut rng = child_rng(32, 0);
        for trial in 0..50 {
            let d = 2 + trial % 3;
            let ch = random_channel::<f64, _>(d, d, d, &mut rng).unwrap();
            assert!(ch.choi_min_eigenvalue() > -1e-8);
        }
    }

    #[test]
    fn dilation_of_identity_is_identity() {
        let id = KrausChannel::<f64>::identity(3);
        let dil = id.dilate().unwrap();
        assert_eq!(dil.d_anc(), 1);
        assert!(dil.unitary().approx_eq(&ComplexMatrix::identity(3), 1e-12));
    }

    #[test]
    fn dilation_reproduces_kraus_action_on_a_basis() {
        let mut rng = child_rng(33, 0);
        let ch = random_channel::<f64, _>(3, 3, 2, &mut rng).unwrap();
        let dil = ch.dilate().unwrap();
        // unitarity of the completed dilation
        let u = dil.unitary();
        let gram = &u.adjoint() * u;
        assert!((&gram - &ComplexMatrix::identity(u.rows())).max_norm() < 1e-10);
        // equality of the two routes on all matrix units
        for i in 0..3 {
            for j in 0..3 {
                let mut unit = ComplexMatrix::zeros(3, 3);
                unit[(i, j)] = cplx(1.0, 0.0);
                let a = ch.apply_matrix(&unit).unwrap();
                let b = dil.apply_matrix(&unit).unwrap();
                assert!(a.approx_eq(&b, 1e-9));
            }
        }
    }

    #[test]
    fn dilation_equivalence_on_random_inputs() {
        let mut rng = child_rng(33, 1);
        for trial in 0..1000 {
            let d = 2 + trial % 2;
            let ch = random_channel::<f64, _>(d, d, 3, &mut rng).unwrap();
            let dil = ch.dilate().unwrap();
            let rho = random_density::<f64, _>(d, d, &mut rng).unwrap();
            let a = ch.apply(&rho).unwrap();
            let b = dil.apply(&rho).unwrap();
            assert!((a.matrix() - b.matrix()).max_norm() < 1e-9);
        }
    }

    #[test]
    fn measure_prepare_single_outcome_is_constant_channel() {
        let mut rng = child_rng(34, 0);
        let sigma = random_density::<f64, _>(2, 2, &mut rng).unwrap();
        let mp =
            MeasurePrepareChannel::new(vec![Projector::identity(2)], vec![sigma.clone()]).unwrap();
        let rho = random_density::<f64, _>(2, 1, &mut rng).unwrap();
        let out = mp.apply(&rho).unwrap();
        assert!(out.matrix().approx_eq(sigma.matrix(), 1e-12));
        // Kraus route agrees
        let k = mp.as_kraus().unwrap();
        assert!(k
            .apply(&rho)
            .unwrap()
            .matrix()
            .approx_eq(sigma.matrix(), 1e-10));
    }

    #[test]
    fn measure_prepare_kraus_route_matches_direct_route() {
        let mut rng = child_rng(34, 1);
        // random orthogonal two-outcome measurement on dim 3 (ranks 1 and 2)
        let u = crate::sample::haar_unitary::<f64, _>(3, &mut rng).unwrap();
        let p1 = Projector::from_orthonormal_columns(3, &[u.column(0)]).unwrap();
        let p2 = Projector::from_orthonormal_columns(3, &[u.column(1), u.column(2)]).unwrap();
        let w1 = random_density::<f64, _>(3, 2, &mut rng).unwrap();
        let w2 = random_density::<f64, _>(3, 3, &mut rng).unwrap();
        let mp = MeasurePrepareChannel::new(vec![p1, p2], vec![w1, w2]).unwrap();
        let k = mp.as_kraus().unwrap();
        for _ in 0..20 {
            let rho = random_density::<f64, _>(3, 3, &mut rng).unwrap();
            let a = mp.apply(&rho).unwrap();
            let b = k.apply(&rho).unwrap();
            assert!((a.matrix() - b.matrix()).max_norm() < 1e-10);
        }
    }

    #[test]
    fn measure_prepare_outputs_stay_in_the_prepared_hull() {
        let mut rng = child_rng(34, 2);
        let e0 = PureState::<f64>::basis(2, 0).unwrap();
        let e1 = PureState::<f64>::basis(2, 1).unwrap();
        let p0 = Projector::from_orthonormal_columns(2, &[e0.amplitudes().to_vec()]).unwrap();
        let p1 = Projector::from_orthonormal_columns(2, &[e1.amplitudes().to_vec()]).unwrap();
        let w0 = random_density::<f64, _>(2, 1, &mut rng).unwrap();
        let w1 = random_density::<f64, _>(2, 2, &mut rng).unwrap();
        let mp = MeasurePrepareChannel::new(vec![p0, p1], vec![w0.clone(), w1.clone()]).unwrap();
        for _ in 0..20 {
            let rho = random_density::<f64, _>(2, 2, &mut rng).unwrap();
            let probs = mp.outcome_probabilities(&rho).unwrap();
            let out = mp.apply(&rho).unwrap();
            let mix = &w0.matrix().scale_re(probs[0]) + &w1.matrix().scale_re(probs[1]);
            assert!((out.matrix() - &mix).max_norm() < 1e-9);
        }
    }

    #[test]
    fn random_channel_with_trivial_ancilla_is_unitary() {
        let mut rng = child_rng(35, 0);
        let ch = random_channel::<f64, _>(4, 4, 1, &mut rng).unwrap();
        assert_eq!(ch.kraus_ops().len(), 1);
        let u = &ch.kraus_ops()[0];
        assert!((&(&u.adjoint() * u) - &ComplexMatrix::identity(4)).max_norm() < 1e-10);
    }

    #[test]
    fn random_channel_average_output_is_maximally_mixed() {
        // Monte Carlo oracle: averaging over Haar channels twirls any fixed
        // input to I/d.
        let mut rng = child_rng(35, 1);
        let rho = random_density::<f64, _>(2, 1, &mut rng).unwrap();
        let mut acc = ComplexMatrix::<f64>::zeros(2, 2);
        let trials = 10_000;
        for _ in 0..trials {
            let ch = random_channel::<f64, _>(2, 2, 4, &mut rng).unwrap();
            acc = &acc + ch.apply(&rho).unwrap().matrix();
        }
        let avg = acc.scale_re(1.0 / trials as f64);
        assert!(
            (&avg - &ComplexMatrix::identity(2).scale_re(0.5)).max_norm() < 0.02,
            "average output {:?}",
            avg
        );
    }

    #[test]
    fn random_channel_rejects_incompatible_dims() {
        let mut rng = child_rng(35, 2);
        assert!(random_channel::<f64, _>(2, 3, 1, &mut rng).is_err());
        assert!(random_channel::<f64, _>(0, 1, 1, &mut rng).is_err());
    }

    #[test]
    fn embed_examples() {
        let mut rng = child_rng(36, 0);
        let rho = random_density::<f64, _>(2, 2, &mut rng).unwrap();
        let same = embed_channel_states(&rho, 2).unwrap();
        assert!(same.matrix().approx_eq(rho.matrix(), 0.0));

        let one =
            DensityOperator::<f64>::from_matrix(ComplexMatrix::from_real_diag(&[1.0])).unwrap();
        let padded = embed_channel_states(&one, 3).unwrap();
        assert!(padded
            .matrix()
            .approx_eq(&ComplexMatrix::from_real_diag(&[1.0, 0.0, 0.0]), 0.0));
        assert!((padded.trace() - 1.0).abs() < 1e-15);

        assert!(embed_channel_states(&rho, 1).is_err());
    }
}
