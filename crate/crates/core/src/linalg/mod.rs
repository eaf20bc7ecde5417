//! Dense Hermitian matrices, eigendecomposition and spectral calculus.

mod dense;
mod jacobi;
mod spectral_fn;
mod tridiag;

pub use dense::Mat;
pub use jacobi::jacobi_eigen;
pub use spectral_fn::SpectralFunction;
pub use tridiag::eigenvalues_in_place;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{Beta, Real};

/// Real symmetric (β = 1) or complex Hermitian (β = 2) matrix.
#[derive(Clone, Debug, PartialEq)]
pub enum SpectralMatrix<T> {
    Real(Mat<T>),
    Complex(Mat<Complex<T>>),
}

/// Ascending eigenvalues with matching orthonormal eigenvector columns.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenDecomposition<T> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: SpectralMatrix<T>,
}

macro_rules! dispatch {
    ($m:expr, $x:ident => $body:expr) => {
        match $m {
            SpectralMatrix::Real($x) => $body,
            SpectralMatrix::Complex($x) => $body,
        }
    };
}

macro_rules! dispatch_map {
    ($m:expr, $x:ident => $body:expr) => {
        match $m {
            SpectralMatrix::Real($x) => SpectralMatrix::Real($body),
            SpectralMatrix::Complex($x) => SpectralMatrix::Complex($body),
        }
    };
}

impl<T: Real> SpectralMatrix<T> {
    /// Diagonal matrix with the given real spectrum.
    pub fn from_diag(beta: Beta, d: &[T]) -> Self {
        match beta {
            Beta::Real => SpectralMatrix::Real(Mat::from_real_diag(d)),
            Beta::Complex => SpectralMatrix::Complex(Mat::from_real_diag(d)),
        }
    }

    pub fn identity(beta: Beta, n: usize) -> Self {
        Self::from_diag(beta, &vec![T::one(); n])
    }

    pub fn n(&self) -> usize {
        dispatch!(self, m => m.n())
    }

    pub fn beta(&self) -> Beta {
        match self {
            SpectralMatrix::Real(_) => Beta::Real,
            SpectralMatrix::Complex(_) => Beta::Complex,
        }
    }

    pub fn max_abs(&self) -> T {
        dispatch!(self, m => m.max_abs())
    }

    pub fn hermitian_defect(&self) -> T {
        dispatch!(self, m => m.hermitian_defect())
    }

    pub fn is_finite(&self) -> bool {
        dispatch!(self, m => m.is_finite())
    }

    /// Entry `(i, j)` as a complex number.
    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        match self {
            SpectralMatrix::Real(m) => Complex::new(m[(i, j)], T::zero()),
            SpectralMatrix::Complex(m) => m[(i, j)],
        }
    }

    pub fn scale(&self, s: T) -> Self {
        dispatch_map!(self, m => m.scale(s))
    }

    /// Sum of two matrices of the same field.
    pub fn add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (SpectralMatrix::Real(a), SpectralMatrix::Real(b)) => Ok(SpectralMatrix::Real(a.add(b))),
            (SpectralMatrix::Complex(a), SpectralMatrix::Complex(b)) => Ok(SpectralMatrix::Complex(a.add(b))),
            _ => Err(Error::Validation("field mismatch".into())),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            (SpectralMatrix::Real(a), SpectralMatrix::Real(b)) => Ok(SpectralMatrix::Real(a.matmul(b))),
            (SpectralMatrix::Complex(a), SpectralMatrix::Complex(b)) => Ok(SpectralMatrix::Complex(a.matmul(b))),
            _ => Err(Error::Validation("field mismatch".into())),
        }
    }

    /// Checks the Hermitian and finiteness invariants.
    pub fn validate(&self) -> Result<()> {
        if !self.is_finite() {
            return Err(Error::Validation("matrix has non-finite entries".into()));
        }
        let defect = self.hermitian_defect();
        let tol = T::lit(1e-12) * (T::one() + self.max_abs());
        if defect > tol {
            return Err(Error::Validation(format!(
                "matrix is not Hermitian: defect {defect:e} exceeds {tol:e}"
            )));
        }
        Ok(())
    }
}

/// `(M + M*) / 2`.
pub fn hermitize<T: Real>(m: &SpectralMatrix<T>) -> SpectralMatrix<T> {
    dispatch_map!(m, x => x.hermitize())
}

/// Full eigendecomposition by cyclic Jacobi rotations.
pub fn eigen<T: Real>(m: &SpectralMatrix<T>) -> Result<EigenDecomposition<T>> {
    m.validate()?;
    Ok(match m {
        SpectralMatrix::Real(x) => {
            let (eigenvalues, v) = jacobi_eigen(x)?;
            EigenDecomposition {
                eigenvalues,
                eigenvectors: SpectralMatrix::Real(v),
            }
        }
        SpectralMatrix::Complex(x) => {
            let (eigenvalues, v) = jacobi_eigen(x)?;
            EigenDecomposition {
                eigenvalues,
                eigenvectors: SpectralMatrix::Complex(v),
            }
        }
    })
}

/// Ascending eigenvalues only, by tridiagonal reduction.
///
/// Agrees with [`eigen`] to rounding but is several times faster.
pub fn eigenvalues<T: Real>(m: &SpectralMatrix<T>) -> Result<Vec<T>> {
    m.validate()?;
    let mut work = m.clone();
    dispatch!(&mut work, x => eigenvalues_in_place(x))
}

impl<T: Real> EigenDecomposition<T> {
    /// `H diag(d) H*` with this decomposition's eigenvectors.
    pub fn reassemble(&self, d: &[T]) -> SpectralMatrix<T> {
        dispatch_map!(&self.eigenvectors, v => Mat::reassemble(v, d))
    }
}

/// Evaluates `f` on every eigenvalue, failing on the first non-finite value.
pub fn map_spectrum<T: Real>(f: &SpectralFunction<T>, eigenvalues: &[T]) -> Result<Vec<T>> {
    eigenvalues
        .iter()
        .map(|&x| {
            let y = f.eval(x);
            if y.is_finite() {
                Ok(y)
            } else {
                Err(Error::Domain(format!("{f} is not finite at eigenvalue {x:e}")))
            }
        })
        .collect()
}

/// `f(M) = H diag(f(λ)) H*`.
pub fn apply_spectral<T: Real>(f: &SpectralFunction<T>, m: &SpectralMatrix<T>) -> Result<SpectralMatrix<T>> {
    let dec = eigen(m)?;
    let fx = map_spectrum(f, &dec.eigenvalues)?;
    Ok(dec.reassemble(&fx))
}
