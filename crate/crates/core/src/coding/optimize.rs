//! Maximizing average fidelity over unitary decoders.

use num_complex::Complex;
use rand::Rng;

use crate::eigen::eigh_unchecked;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::sample::haar_unitary;
use crate::scalar::{real, Scalar};

use super::{Encoding, SourceEnsemble};

/// Search strategy for the unitary optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OptMethod {
    /// Rotation parameterization for real-amplitude ensembles in dimension
    /// 2 or 3 (one angle, or axis-angle).
    Rotation,
    /// Riemannian gradient ascent with Hermitian generators, any dimension.
    GradientAscent,
    /// Rotation when applicable, gradient ascent otherwise; both are run
    /// for real low-dimensional inputs and the better result wins.
    Auto,
}

/// Result of a decoder search.
#[derive(Debug, Clone)]
pub struct UnitaryOpt<T> {
    pub unitary: ComplexMatrix<T>,
    pub fidelity: T,
    /// Rotation angle in degrees (real orthogonal decoders only).
    pub rotation_angle_deg: Option<T>,
}

/// F̄ for a unitary decoder: Σ pᵢ ⟨aᵢ|U Wᵢ U†|aᵢ⟩.
fn unitary_fidelity<T: Scalar>(
    e: &SourceEnsemble<T>,
    enc: &Encoding<T>,
    u: &ComplexMatrix<T>,
) -> T {
    let mut acc = T::zero();
    for ((p, a), w) in e.signals().iter().zip(enc.channel_states()) {
        // ⟨a|U W U†|a⟩ = ⟨b|W|b⟩ with |b⟩ = U†|a⟩
        let b = u.adjoint().mul_vec(a.amplitudes()).expect("dims agree");
        let wb = w.matrix().mul_vec(&b).expect("dims agree");
        acc += *p * crate::matrix::inner(&b, &wb).re;
    }
    acc
}

fn all_real<T: Scalar>(e: &SourceEnsemble<T>, enc: &Encoding<T>) -> bool {
    let tol = T::HERM_TOL;
    e.signals()
        .iter()
        .all(|(_, a)| a.amplitudes().iter().all(|z| z.im.abs() <= tol))
        && enc
            .channel_states()
            .iter()
            .all(|w| w.matrix().data().iter().all(|z| z.im.abs() <= tol))
}

/// Rodrigues rotation about `axis` (need not be normalized) by `angle`.
fn rotation_matrix<T: Scalar>(axis: [T; 3], angle: T) -> ComplexMatrix<T> {
    let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    if norm <= T::epsilon() {
        return ComplexMatrix::identity(3);
    }
    let (x, y, z) = (axis[0] / norm, axis[1] / norm, axis[2] / norm);
    let (s, c) = (angle.sin(), angle.cos());
    let omc = T::one() - c;
    let rows = [
        [c + x * x * omc, x * y * omc - z * s, x * z * omc + y * s],
        [y * x * omc + z * s, c + y * y * omc, y * z * omc - x * s],
        [z * x * omc - y * s, z * y * omc + x * s, c + z * z * omc],
    ];
    ComplexMatrix::from_fn(3, 3, |i, j| Complex::new(rows[i][j], T::zero()))
}

fn rotation_2d<T: Scalar>(angle: T) -> ComplexMatrix<T> {
    let (s, c) = (angle.sin(), angle.cos());
    ComplexMatrix::from_fn(2, 2, |i, j| {
        let v = match (i, j) {
            (0, 0) => c,
            (0, 1) => -s,
            (1, 0) => s,
            _ => c,
        };
        Complex::new(v, T::zero())
    })
}

/// Golden-section refinement of a scalar maximization around a bracketing
/// interval.
fn golden_max<T: Scalar>(mut f: impl FnMut(T) -> T, mut lo: T, mut hi: T, iters: usize) -> (T, T) {
    let phi = (real::<T>(5.0).sqrt() - T::one()) * real::<T>(0.5);
    let mut a = hi - (hi - lo) * phi;
    let mut b = lo + (hi - lo) * phi;
    let mut fa = f(a);
    let mut fb = f(b);
    for _ in 0..iters {
        if fa >= fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - (hi - lo) * phi;
            fa = f(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + (hi - lo) * phi;
            fb = f(b);
        }
    }
    let mid = (lo + hi) * real::<T>(0.5);
    (mid, f(mid))
}

/// One-parameter family: rotate about `axis` and maximize F̄ over the
/// angle. A coarse grid bracket is refined by golden section; deterministic.
/// Returns (angle in radians, fidelity).
pub fn optimize_planar_tilt<T: Scalar>(
    e: &SourceEnsemble<T>,
    enc: &Encoding<T>,
    axis: [T; 3],
) -> Result<(T, T)> {
    if e.dim() != 3 {
        return Err(Error::InvalidArgument(
            "tilt search needs a 3-dimensional source".into(),
        ));
    }
    let eval = |theta: T| unitary_fidelity(e, enc, &rotation_matrix(axis, theta));
    let steps = 720usize;
    let width = T::PI() / real::<T>(2.0);
    let mut best_k = 0usize;
    let mut best_v = T::neg_infinity();
    for k in 0..=steps {
        let theta = -width
            + real::<T>(2.0) * width * T::from_usize(k).unwrap() / T::from_usize(steps).unwrap();
        let v = eval(theta);
        if v > best_v {
            best_v = v;
            best_k = k;
        }
    }
    let step = real::<T>(2.0) * width / T::from_usize(steps).unwrap();
    let center = -width + step * T::from_usize(best_k).unwrap();
    let (theta, value) = golden_max(eval, center - step, center + step, 80);
    Ok((theta, value))
}

fn rotation_angle_deg<T: Scalar>(u: &ComplexMatrix<T>) -> Option<T> {
    if u.data().iter().any(|z| z.im.abs() > real::<T>(1e-9)) {
        return None;
    }
    let n = u.rows();
    let tr = u.trace().re;
    let cos_angle = match n {
        2 => (tr * real::<T>(0.5)).min(T::one()).max(-T::one()),
        3 => ((tr - T::one()) * real::<T>(0.5))
            .min(T::one())
            .max(-T::one()),
        _ => return None,
    };
    Some(cos_angle.acos().to_degrees())
}

/// Derivative-free pattern search over a small parameter vector.
fn pattern_search<T: Scalar>(
    mut eval: impl FnMut(&[T]) -> T,
    start: &[T],
    initial_step: T,
    min_step: T,
) -> (Vec<T>, T) {
    let mut x = start.to_vec();
    let mut fx = eval(&x);
    let mut step = initial_step;
    while step > min_step {
        let mut improved = false;
        for k in 0..x.len() {
            for sign in [T::one(), -T::one()] {
                let mut y = x.clone();
                y[k] += sign * step;
                let fy = eval(&y);
                if fy > fx {
                    x = y;
                    fx = fy;
                    improved = true;
                }
            }
        }
        if !improved {
            step *= real::<T>(0.5);
        }
    }
    (x, fx)
}

fn optimize_rotation<T: Scalar, R: Rng + ?Sized>(
    e: &SourceEnsemble<T>,
    enc: &Encoding<T>,
    restarts: usize,
    rng: &mut R,
) -> Result<UnitaryOpt<T>> {
    match e.dim() {
        2 => {
            let eval = |theta: T| unitary_fidelity(e, enc, &rotation_2d(theta));
            // exhaustive bracket over the full circle, then refine
            let steps = 720usize;
            let two_pi = T::PI() * real::<T>(2.0);
            let mut best_k = 0usize;
            let mut best_v = T::neg_infinity();
            for k in 0..steps {
                let theta = two_pi * T::from_usize(k).unwrap() / T::from_usize(steps).unwrap();
                let v = eval(theta);
                if v > best_v {
                    best_v = v;
                    best_k = k;
                }
            }
            let step = two_pi / T::from_usize(steps).unwrap();
            let center = step * T::from_usize(best_k).unwrap();
            let (theta, value) = golden_max(eval, center - step, center + step, 80);
            let u = rotation_2d(theta);
            let angle = rotation_angle_deg(&u);
            Ok(UnitaryOpt {
                unitary: u,
                fidelity: value,
                rotation_angle_deg: angle,
            })
        }
        3 => {
            let eval = |v: &[T]| {
                let angle = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                unitary_fidelity(e, enc, &rotation_matrix([v[0], v[1], v[2]], angle))
            };
            let mut best: Option<(Vec<T>, T)> = None;
            let zero_start = vec![T::zero(); 3];
            let mut starts: Vec<Vec<T>> = vec![zero_start];
            for _ in 0..restarts {
                starts.push(
                    (0..3)
                        .map(|_| T::standard_normal(rng) * real::<T>(0.1))
                        .collect(),
                );
            }
            for s in starts {
                let (x, fx) = pattern_search(eval, &s, real::<T>(0.1), real::<T>(1e-12));
                if best.as_ref().is_none_or(|(_, b)| fx > *b) {
                    best = Some((x, fx));
                }
            }
            let (x, fx) = best.expect("at least one start");
            let angle = (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt();
            let u = rotation_matrix([x[0], x[1], x[2]], angle);
            Ok(UnitaryOpt {
                unitary: u.clone(),
                fidelity: fx,
                rotation_angle_deg: rotation_angle_deg(&u),
            })
        }
        _ => Err(Error::InvalidArgument(
            "rotation search supports dimensions 2 and 3".into(),
        )),
    }
}

fn optimize_ascent<T: Scalar, R: Rng + ?Sized>(
    e: &SourceEnsemble<T>,
    enc: &Encoding<T>,
    restarts: usize,
    rng: &mut R,
) -> Result<UnitaryOpt<T>> {
    let n = e.dim();
    // Riemannian gradient: dF̄(e^{iεH} U)/dε|₀ = Tr(H G) with
    // G = i Σ p (U W U† π − π U W U†), Hermitian; steepest ascent H = G.
    let gradient = |u: &ComplexMatrix<T>| -> ComplexMatrix<T> {
        let mut g = ComplexMatrix::zeros(n, n);
        for ((p, a), w) in e.signals().iter().zip(enc.channel_states()) {
            let wu = &(&(u * w.matrix()) * &u.adjoint()).clone();
            let pi = crate::matrix::outer(a.amplitudes(), a.amplitudes());
            let comm = &(wu * &pi) - &(&pi * wu);
            let i_scaled = comm.scale(Complex::new(T::zero(), *p));
            g = &g + &i_scaled;
        }
        g
    };
    let exp_ih = |h: &ComplexMatrix<T>, t: T| -> ComplexMatrix<T> {
        // e^{itH} via the eigendecomposition of H
        let eig = eigh_unchecked(h);
        let nn = h.rows();
        let mut out = ComplexMatrix::zeros(nn, nn);
        for (k, &lam) in eig.values.iter().enumerate() {
            let v = eig.vector(k);
            let phase = Complex::new((t * lam).cos(), (t * lam).sin());
            for i in 0..nn {
                for j in 0..nn {
                    out[(i, j)] += v[i] * v[j].conj() * phase;
                }
            }
        }
        out
    };

    let mut best: Option<UnitaryOpt<T>> = None;
    let mut starts: Vec<ComplexMatrix<T>> = vec![ComplexMatrix::identity(n)];
    for _ in 0..restarts {
        starts.push(haar_unitary::<T, _>(n, rng)?);
    }
    for start in starts {
        let mut u = start;
        let mut f = unitary_fidelity(e, enc, &u);
        let mut step = real::<T>(0.5);
        for _iter in 0..400 {
            let g = gradient(&u);
            let gnorm = g.max_norm();
            if gnorm < real::<T>(1e-12) {
                break;
            }
            let mut advanced = false;
            while step > real::<T>(1e-13) {
                let cand = &exp_ih(&g, step / gnorm.max(T::one())) * &u;
                let fc = unitary_fidelity(e, enc, &cand);
                if fc > f + real::<T>(1e-16) {
                    u = cand;
                    f = fc;
                    step *= real::<T>(1.5);
                    advanced = true;
                    break;
                }
                step *= real::<T>(0.5);
            }
            if !advanced {
                break;
            }
        }
        if best.as_ref().is_none_or(|b| f > b.fidelity) {
            best = Some(UnitaryOpt {
                rotation_angle_deg: rotation_angle_deg(&u),
                unitary: u,
                fidelity: f,
            });
        }
    }
    Ok(best.expect("at least one start"))
}

/// Maximizes F̄ over unitary decoders. The result never falls below the
/// identity decoder (it is always one of the starting points).
pub fn optimize_unitary_decoder<T: Scalar, R: Rng + ?Sized>(
    e: &SourceEnsemble<T>,
    enc: &Encoding<T>,
    method: OptMethod,
    restarts: usize,
    rng: &mut R,
) -> Result<UnitaryOpt<T>> {
    if enc.source_dim() != e.dim() || enc.channel_states().len() != e.len() {
        return Err(Error::DimensionMismatch(
            "encoding does not match the ensemble".into(),
        ));
    }
    let rotation_ok = matches!(e.dim(), 2 | 3) && all_real(e, enc);
    let candidates = match method {
        OptMethod::Rotation => {
            if !rotation_ok {
                return Err(Error::InvalidArgument(
                    "rotation search needs a real ensemble of dimension 2 or 3".into(),
                ));
            }
            vec![optimize_rotation(e, enc, restarts, rng)?]
        }
        OptMethod::GradientAscent => vec![optimize_ascent(e, enc, restarts, rng)?],
        OptMethod::Auto => {
            let mut c = vec![optimize_ascent(e, enc, restarts, rng)?];
            if rotation_ok {
                c.push(optimize_rotation(e, enc, restarts, rng)?);
            }
            c
        }
    };
    let identity_f = unitary_fidelity(e, enc, &ComplexMatrix::identity(e.dim()));
    let mut best = UnitaryOpt {
        unitary: ComplexMatrix::identity(e.dim()),
        fidelity: identity_f,
        rotation_angle_deg: Some(T::zero()),
    };
    for c in candidates {
        if c.fidelity > best.fidelity {
            best = c;
        }
    }
    Ok(best)
}
