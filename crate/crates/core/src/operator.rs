//! Validated operator types: Hermitian operators, density operators
//! (subnormalization allowed), pure states, and projectors.

use num_complex::Complex;
use num_traits::Zero;

use crate::eigen::{eigh_unchecked, Eigh};
use crate::error::{Error, Result};
use crate::matrix::{outer, vec_norm, ComplexMatrix};
use crate::scalar::{real, Scalar};

/// A square matrix with `‖A − A†‖_max` within tolerance, stored exactly
/// symmetrized.
#[derive(Debug, Clone)]
pub struct HermitianOperator<T> {
    matrix: ComplexMatrix<T>,
}

impl<T: Scalar> HermitianOperator<T> {
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Hermitian operator must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_finite() {
            return Err(Error::ContractViolation("non-finite entries".into()));
        }
        let defect = matrix.hermitian_defect();
        if defect > T::HERM_TOL {
            return Err(Error::ContractViolation(format!(
                "matrix is not Hermitian: defect {} exceeds {}",
                defect,
                T::HERM_TOL
            )));
        }
        let n = matrix.rows();
        let half = real::<T>(0.5);
        let sym = ComplexMatrix::from_fn(n, n, |i, j| {
            (matrix[(i, j)] + matrix[(j, i)].conj()).scale(half)
        });
        Ok(Self { matrix: sym })
    }

    pub fn from_real_diag(diag: &[T]) -> Self {
        Self {
            matrix: ComplexMatrix::from_real_diag(diag),
        }
    }

    pub(crate) fn from_symmetric_unchecked(matrix: ComplexMatrix<T>) -> Self {
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn trace_re(&self) -> T {
        self.matrix.trace().re
    }

    /// Eigendecomposition, eigenvalues descending.
    pub fn eigh(&self) -> Eigh<T> {
        eigh_unchecked(&self.matrix)
    }
}

/// Eigendecomposition of a Hermitian operator; eigenvalues are listed in
/// descending order with ties broken by original basis index, and the
/// eigenvector columns are orthonormal.
pub fn eigh<T: Scalar>(a: &HermitianOperator<T>) -> Eigh<T> {
    a.eigh()
}

/// Hermitian positive-semidefinite matrix with trace at most one.
/// Subnormalized (and degenerate zero) states are allowed: projecting a
/// signal can legitimately leave nothing behind.
///
/// Construction clamps eigenvalues in `[-PSD_TOL, 0)` to zero and caches the
/// eigendecomposition.
#[derive(Debug, Clone)]
pub struct DensityOperator<T> {
    op: HermitianOperator<T>,
    trace: T,
    eig: Eigh<T>,
}

impl<T: Scalar> DensityOperator<T> {
    pub fn new(op: HermitianOperator<T>) -> Result<Self> {
        let eig = op.eigh();
        let min = eig.values.last().copied().unwrap_or_else(T::zero);
        if min < -T::PSD_TOL {
            return Err(Error::ContractViolation(format!(
                "negative eigenvalue {} below PSD tolerance",
                min
            )));
        }
        // Numerical-rank policy: eigenvalues at the eigensolver noise floor
        // (negative or positive) are zeroed, so rank-deficient states have
        // exact zero modes and every downstream spectral computation sees
        // the same truncated spectrum.
        let floor = crate::eigen::noise_floor(&eig.values);
        let (op, eig) = if min <= floor {
            let clamped = Eigh {
                values: eig
                    .values
                    .iter()
                    .map(|&x| if x <= floor { T::zero() } else { x })
                    .collect(),
                vectors: eig.vectors,
            };
            let rebuilt = clamped.reconstruct();
            (
                HermitianOperator::from_symmetric_unchecked(rebuilt),
                clamped,
            )
        } else {
            (op, eig)
        };
        let trace = eig.values.iter().copied().sum::<T>();
        if trace > T::one() + T::TRACE_TOL {
            return Err(Error::ContractViolation(format!(
                "trace {} exceeds one",
                trace
            )));
        }
        Ok(Self { op, trace, eig })
    }

    pub fn from_matrix(matrix: ComplexMatrix<T>) -> Result<Self> {
        Self::new(HermitianOperator::new(matrix)?)
    }

    /// Maximally mixed state I/n.
    pub fn maximally_mixed(dim: usize) -> Self {
        let v = vec![T::one() / T::from_usize(dim).unwrap(); dim];
        Self::from_matrix(ComplexMatrix::from_real_diag(&v)).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        self.op.matrix()
    }

    pub fn operator(&self) -> &HermitianOperator<T> {
        &self.op
    }

    pub fn trace(&self) -> T {
        self.trace
    }

    /// Cached spectrum, descending.
    pub fn eigenvalues(&self) -> &[T] {
        &self.eig.values
    }

    pub fn eig(&self) -> &Eigh<T> {
        &self.eig
    }

    /// Number of eigenvalues above the PSD tolerance.
    pub fn rank(&self) -> usize {
        self.eig.values.iter().filter(|&&x| x > T::PSD_TOL).count()
    }

    /// Rescales the state to the given trace (0 for the zero state).
    pub fn with_trace(&self, target: T) -> Result<Self> {
        if target < T::zero() || target > T::one() + T::TRACE_TOL {
            return Err(Error::InvalidArgument(format!(
                "target trace {} outside [0, 1]",
                target
            )));
        }
        if self.trace.is_zero() {
            return Err(Error::InvalidArgument(
                "cannot rescale the zero state to a positive trace".into(),
            ));
        }
        let f = target / self.trace;
        let eig = Eigh {
            values: self.eig.values.iter().map(|&x| x * f).collect(),
            vectors: self.eig.vectors.clone(),
        };
        Ok(Self {
            op: HermitianOperator::from_symmetric_unchecked(self.matrix().scale_re(f)),
            trace: target,
            eig,
        })
    }

    /// Positive-semidefinite square root; clamped eigenvalues map to zero.
    /// Eigenvalues at the eigensolver noise floor are zeroed too: the square
    /// root would otherwise amplify O(ε) noise on rank-deficient states into
    /// O(√ε) errors.
    pub fn psd_sqrt(&self) -> HermitianOperator<T> {
        let floor = crate::eigen::noise_floor(&self.eig.values);
        let m = self
            .eig
            .assemble(|x| if x <= floor { T::zero() } else { x.sqrt() });
        HermitianOperator::from_symmetric_unchecked(m)
    }

    /// Probability-weighted mixture Σ pᵢ ρᵢ.
    pub fn mixture(parts: &[(T, &DensityOperator<T>)]) -> Result<Self> {
        let dim = parts
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty mixture".into()))?
            .1
            .dim();
        let mut m = ComplexMatrix::zeros(dim, dim);
        for (w, rho) in parts {
            if rho.dim() != dim {
                return Err(Error::DimensionMismatch("mixture of unequal dims".into()));
            }
            m = &m + &rho.matrix().scale_re(*w);
        }
        Self::from_matrix(m)
    }
}

/// Positive-semidefinite square root of a density operator.
pub fn psd_sqrt<T: Scalar>(rho: &DensityOperator<T>) -> HermitianOperator<T> {
    rho.psd_sqrt()
}

/// Complex state vector with norm in (0, 1]; signal states are unit norm.
#[derive(Debug, Clone)]
pub struct PureState<T> {
    amplitudes: Vec<Complex<T>>,
    norm: T,
}

impl<T: Scalar> PureState<T> {
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidArgument("empty state vector".into()));
        }
        if !amplitudes
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            return Err(Error::ContractViolation("non-finite amplitudes".into()));
        }
        let norm = vec_norm(&amplitudes);
        if norm <= T::zero() {
            return Err(Error::ContractViolation("zero state vector".into()));
        }
        if norm > T::one() + T::TRACE_TOL {
            return Err(Error::ContractViolation(format!(
                "norm {} exceeds one",
                norm
            )));
        }
        Ok(Self { amplitudes, norm })
    }

    /// Unit vector along the given real amplitudes.
    pub fn from_real_normalized(xs: &[T]) -> Result<Self> {
        let n = xs.iter().map(|&x| x * x).sum::<T>().sqrt();
        if n.is_zero() {
            return Err(Error::ContractViolation("zero state vector".into()));
        }
        Self::new(xs.iter().map(|&x| Complex::new(x / n, T::zero())).collect())
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {} out of range for dim {}",
                index, dim
            )));
        }
        let mut v = vec![Complex::zero(); dim];
        v[index] = Complex::new(T::one(), T::zero());
        Self::new(v)
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    pub fn norm(&self) -> T {
        self.norm
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm - T::one()).abs() <= T::TRACE_TOL
    }

    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "states of dim {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(crate::matrix::inner(&self.amplitudes, &other.amplitudes))
    }

    /// |ψ⟩⟨ψ| as a (possibly subnormalized) density operator.
    pub fn projector(&self) -> DensityOperator<T> {
        DensityOperator::from_matrix(outer(&self.amplitudes, &self.amplitudes))
            .expect("outer product of a valid state is a valid density operator")
    }

    /// |ψ⟩ ⊗ |φ⟩.
    pub fn tensor(&self, other: &Self) -> Self {
        let amp = crate::matrix::vec_tensor(&self.amplitudes, &other.amplitudes);
        let norm = self.norm * other.norm;
        Self {
            amplitudes: amp,
            norm,
        }
    }
}

/// Orthogonal projector with integer rank.
#[derive(Debug, Clone)]
pub struct Projector<T> {
    op: HermitianOperator<T>,
    rank: usize,
}

impl<T: Scalar> Projector<T> {
    pub fn new(op: HermitianOperator<T>) -> Result<Self> {
        let m = op.matrix();
        let sq = m * m;
        let defect = (&sq - m).max_norm();
        if defect > T::HERM_TOL {
            return Err(Error::ContractViolation(format!(
                "not idempotent: ‖P² − P‖ = {}",
                defect
            )));
        }
        let tr = op.trace_re();
        let rank = tr.round().to_usize().ok_or_else(|| {
            Error::ContractViolation(format!("projector trace {} is not a valid rank", tr))
        })?;
        if (tr - T::from_usize(rank).unwrap()).abs() > T::HERM_TOL {
            return Err(Error::ContractViolation(format!(
                "projector trace {} is not close to an integer",
                tr
            )));
        }
        Ok(Self { op, rank })
    }

    /// Σ |vᵢ⟩⟨vᵢ| over the given orthonormal columns.
    pub fn from_orthonormal_columns(dim: usize, columns: &[Vec<Complex<T>>]) -> Result<Self> {
        let mut m = ComplexMatrix::zeros(dim, dim);
        for v in columns {
            if v.len() != dim {
                return Err(Error::DimensionMismatch("column length mismatch".into()));
            }
            m = &m + &outer(v, v);
        }
        Self::new(HermitianOperator::new(m)?)
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            op: HermitianOperator::from_symmetric_unchecked(ComplexMatrix::zeros(dim, dim)),
            rank: 0,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            op: HermitianOperator::from_symmetric_unchecked(ComplexMatrix::identity(dim)),
            rank: dim,
        }
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        self.op.matrix()
    }

    pub fn operator(&self) -> &HermitianOperator<T> {
        &self.op
    }

    /// I − P.
    pub fn complement(&self) -> Self {
        let id = ComplexMatrix::identity(self.dim());
        Self {
            op: HermitianOperator::from_symmetric_unchecked(&id - self.matrix()),
            rank: self.dim() - self.rank,
        }
    }

    /// P ρ P as a subnormalized density operator.
    pub fn compress(&self, rho: &DensityOperator<T>) -> Result<DensityOperator<T>> {
        if self.dim() != rho.dim() {
            return Err(Error::DimensionMismatch(
                "projector/state dims differ".into(),
            ));
        }
        let m = &(self.matrix() * rho.matrix()) * self.matrix();
        DensityOperator::from_matrix(m)
    }

    /// P |ψ⟩⟨ψ| P for a pure state, built as the exact outer product of the
    /// projected vector. For states nearly orthogonal to P this is far more
    /// accurate than [`Projector::compress`]: the triple matrix product
    /// leaves O(ε) roundoff pointing in arbitrary directions, while here
    /// every error stays within the projected ray.
    pub fn compress_pure(&self, psi: &PureState<T>) -> Result<DensityOperator<T>> {
        if self.dim() != psi.dim() {
            return Err(Error::DimensionMismatch(
                "projector/state dims differ".into(),
            ));
        }
        let b = self.matrix().mul_vec(psi.amplitudes())?;
        DensityOperator::from_matrix(outer(&b, &b))
    }
}
