//! One Euler–Maruyama step in three equivalent forms.
//!
//! [`euler_step`] is the literal matrix update. The simulator uses two
//! cheaper forms with the same transition law for the spectrum:
//!
//! * eigen frame: write `X = U diag(λ) U*`. Then `U* ΔW U` has the law of
//!   `ΔW` (the Gaussian matrix is unitarily invariant), so the next
//!   spectrum is the spectrum of
//!   `diag(λ) + diag(g) Z diag(h) + diag(h) Z* diag(g) + diag(b) dt`
//!   with fresh noise `Z`. Only eigenvalues are needed, never vectors.
//! * matrix frame: for constant `g`, `h` and affine `b` the update needs no
//!   spectral calculus at all and spectra are only taken at record times.

use num_complex::Complex;

use super::{FlowSpec, Projection};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues_in_place, jacobi_eigen, map_spectrum, Mat, SpectralMatrix};
use crate::scalar::{Entry, Real};

use super::noise::NoiseIncrement;

/// Result of [`euler_step`].
#[derive(Clone, Debug, PartialEq)]
pub struct StepOutcome<T> {
    pub matrix: SpectralMatrix<T>,
    /// Eigenvalues moved back into the projection domain.
    pub clamped: usize,
}

impl Projection {
    /// Closest point of the domain.
    pub fn clamp<T: Real>(self, x: T) -> T {
        match self {
            Projection::None => x,
            Projection::NonNeg => x.max(T::zero()),
            Projection::UnitInterval => x.max(T::zero()).min(T::one()),
        }
    }

    pub fn contains<T: Real>(self, x: T) -> bool {
        self.clamp(x) == x
    }
}

/// `hermitize(X + g(X) ΔW h(X) + h(X) ΔW* g(X) + drift dt)`, followed by the
/// eigenvalue clamp when `spec.projection` asks for one.
pub fn euler_step<T: Real>(
    x: &SpectralMatrix<T>,
    spec: &FlowSpec<T>,
    noise: &NoiseIncrement<T>,
) -> Result<StepOutcome<T>> {
    x.validate()?;
    let drift_dt = spec.drift_scale() * spec.dt;
    match (x, &noise.dw) {
        (SpectralMatrix::Real(x), SpectralMatrix::Real(w)) => {
            let (m, clamped) = euler_mat(x, w, spec, drift_dt)?;
            Ok(StepOutcome {
                matrix: SpectralMatrix::Real(m),
                clamped,
            })
        }
        (SpectralMatrix::Complex(x), SpectralMatrix::Complex(w)) => {
            let (m, clamped) = euler_mat(x, w, spec, drift_dt)?;
            Ok(StepOutcome {
                matrix: SpectralMatrix::Complex(m),
                clamped,
            })
        }
        _ => Err(Error::Validation("noise field does not match the state's field".into())),
    }
}

fn euler_mat<T: Real, E: Entry<T>>(x: &Mat<E>, w: &Mat<E>, spec: &FlowSpec<T>, drift_dt: T) -> Result<(Mat<E>, usize)> {
    if w.n() != x.n() {
        return Err(Error::Validation(format!(
            "noise has dimension {}, state has {}",
            w.n(),
            x.n()
        )));
    }
    let (lambda, u) = jacobi_eigen(x)?;
    let gx = Mat::reassemble(&u, &map_spectrum(&spec.g, &lambda)?);
    let hx = Mat::reassemble(&u, &map_spectrum(&spec.h, &lambda)?);
    let bx = Mat::reassemble(&u, &map_spectrum(&spec.b, &lambda)?);
    let noise = gx.matmul(&w.matmul(&hx));
    let next = x.add(&noise).add(&noise.adjoint()).add(&bx.scale(drift_dt)).hermitize();
    if spec.projection == Projection::None {
        return Ok((next, 0));
    }
    let (mu, v) = jacobi_eigen(&next)?;
    let clamped = mu.iter().filter(|&&m| !spec.projection.contains(m)).count();
    if clamped == 0 {
        return Ok((next, 0));
    }
    let mu: Vec<T> = mu.into_iter().map(|m| spec.projection.clamp(m)).collect();
    Ok((Mat::reassemble(&v, &mu), clamped))
}

/// Per-step coefficient values on the current spectrum.
pub(crate) struct FrameCoefficients<T> {
    pub g: Vec<T>,
    pub h: Vec<T>,
    pub b: Vec<T>,
}

/// Next spectrum in the eigen frame (unsorted input allowed, sorted output).
pub(crate) fn eigen_frame_step<T: Real>(
    lambda: &[T],
    coeffs: &FrameCoefficients<T>,
    drift_dt: T,
    z: &SpectralMatrix<T>,
) -> Result<Vec<T>> {
    match z {
        SpectralMatrix::Real(z) => eigen_frame_mat(lambda, coeffs, drift_dt, z),
        SpectralMatrix::Complex(z) => eigen_frame_mat(lambda, coeffs, drift_dt, z),
    }
}

fn eigen_frame_mat<T: Real, E: Entry<T>>(
    lambda: &[T],
    c: &FrameCoefficients<T>,
    drift_dt: T,
    z: &Mat<E>,
) -> Result<Vec<T>> {
    let n = lambda.len();
    // Lower triangle of diag(λ + b dt) + G Z H + H Z* G.
    let mut m = Mat::<E>::zeros(n);
    for i in 0..n {
        for j in 0..=i {
            let v = z[(i, j)].scale(c.g[i] * c.h[j]) + z[(j, i)].conj().scale(c.h[i] * c.g[j]);
            m[(i, j)] = v;
        }
        let d = m[(i, i)].re() + lambda[i] + c.b[i] * drift_dt;
        m[(i, i)] = E::from_real(d);
    }
    eigenvalues_in_place(&mut m)
}

/// State of the matrix-frame integrator.
#[derive(Clone, Debug)]
pub(crate) enum MatrixFrameState<T> {
    Real(Mat<T>),
    Complex(Mat<Complex<T>>),
}

impl<T: Real> MatrixFrameState<T> {
    /// `X ← X + c (Z + Z*) + (b0 + b1 X) drift_dt`.
    pub fn step(&mut self, gh: T, b0: T, b1: T, drift_dt: T, z: &SpectralMatrix<T>) -> Result<()> {
        match (self, z) {
            (MatrixFrameState::Real(x), SpectralMatrix::Real(z)) => matrix_frame_mat(x, gh, b0, b1, drift_dt, z),
            (MatrixFrameState::Complex(x), SpectralMatrix::Complex(z)) => matrix_frame_mat(x, gh, b0, b1, drift_dt, z),
            _ => unreachable!("noise field is fixed by the spec"),
        }
        Ok(())
    }

    pub fn spectrum(&self) -> Result<Vec<T>> {
        match self {
            MatrixFrameState::Real(x) => eigenvalues_in_place(&mut x.clone()),
            MatrixFrameState::Complex(x) => eigenvalues_in_place(&mut x.clone()),
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            MatrixFrameState::Real(x) => x.is_finite(),
            MatrixFrameState::Complex(x) => x.is_finite(),
        }
    }
}

fn matrix_frame_mat<T: Real, E: Entry<T>>(x: &mut Mat<E>, gh: T, b0: T, b1: T, drift_dt: T, z: &Mat<E>) {
    let n = x.n();
    let keep = T::one() + b1 * drift_dt;
    let shift = b0 * drift_dt;
    for i in 0..n {
        for j in 0..=i {
            let v = x[(i, j)].scale(keep) + (z[(i, j)] + z[(j, i)].conj()).scale(gh);
            if i == j {
                x[(i, i)] = E::from_real(v.re() + shift);
            } else {
                x[(i, j)] = v;
                x[(j, i)] = v.conj();
            }
        }
    }
}
