use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{Mat, SpectralMatrix};
use crate::scalar::{Beta, Real};

/// Random stream used by every simulation.
pub type Stream = ChaCha8Rng;

/// Independent stream `r` of the family keyed by `base_seed`.
pub fn stream(base_seed: u64, replica: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(replica);
    rng
}

/// Brownian increment `ΔW^{(n)} = n^{-1/2} ΔW` over one step. Not Hermitian.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseIncrement<T> {
    pub n: usize,
    pub beta: Beta,
    /// Stored in a [`SpectralMatrix`] container for the field tag only.
    pub dw: SpectralMatrix<T>,
}

#[inline]
fn normal<T: Real>(rng: &mut Stream) -> T {
    T::lit(rng.sample::<f64, _>(StandardNormal))
}

/// Real entries are `N(0, dt)`; complex entries have independent real and
/// imaginary parts of variance `dt` each. Everything is then multiplied by
/// `scale` (`n^{-1/2}` for the scaled equation).
pub(crate) fn sample_scaled<T: Real>(n: usize, beta: Beta, dt: T, scale: T, rng: &mut Stream) -> SpectralMatrix<T> {
    let sd = dt.sqrt() * scale;
    match beta {
        Beta::Real => SpectralMatrix::Real(Mat::from_fn(n, |_, _| normal::<T>(rng) * sd)),
        Beta::Complex => SpectralMatrix::Complex(Mat::from_fn(n, |_, _| {
            let re = normal::<T>(rng);
            let im = normal::<T>(rng);
            Complex::new(re * sd, im * sd)
        })),
    }
}

pub fn sample_noise<T: Real>(n: usize, beta: Beta, dt: T, rng: &mut Stream) -> NoiseIncrement<T> {
    let scale = T::one() / T::from_usize_lossy(n).sqrt();
    NoiseIncrement {
        n,
        beta,
        dw: sample_scaled(n, beta, dt, scale, rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_stream_separated() {
        let a = sample_noise::<f64>(3, Beta::Complex, 0.1, &mut stream(7, 0));
        let b = sample_noise::<f64>(3, Beta::Complex, 0.1, &mut stream(7, 0));
        let c = sample_noise::<f64>(3, Beta::Complex, 0.1, &mut stream(7, 1));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn field_matches_beta() {
        let r = sample_noise::<f64>(2, Beta::Real, 0.1, &mut stream(1, 0));
        assert!(matches!(r.dw, SpectralMatrix::Real(_)));
        let c = sample_noise::<f32>(2, Beta::Complex, 0.1, &mut stream(1, 0));
        assert!(matches!(c.dw, SpectralMatrix::Complex(_)));
    }
}
