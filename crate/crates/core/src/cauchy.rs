//! Cauchy transforms `G(z) = ∫ (x − z)^{-1} μ(dx)`, Stieltjes inversion, the
//! transform evolution equation and the two closed-form free diffusions.
//!
//! Under this sign convention `G(z) ~ −1/z` at infinity and `Im G > 0` on
//! the upper half-plane.

use num_complex::Complex;

use crate::empirical::EmpiricalMeasure;
use crate::error::{validation, Error, Result};
use crate::limits::{ArcPiece, LawParts, LimitLaw};
use crate::linalg::SpectralFunction;
use crate::scalar::{Beta, Real};

const QUAD_TOL: f64 = 1e-14;

/// A probability measure that can integrate complex test functions.
pub trait SpectralMeasure<T: Real> {
    fn integrate(&self, f: &dyn Fn(T) -> Complex<T>) -> Result<Complex<T>>;
}

impl<T: Real> SpectralMeasure<T> for EmpiricalMeasure<T> {
    fn integrate(&self, f: &dyn Fn(T) -> Complex<T>) -> Result<Complex<T>> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for &x in self.atoms() {
            acc += f(x);
        }
        Ok(acc / T::from_usize_lossy(self.len()))
    }
}

impl<T: Real> SpectralMeasure<T> for LawParts<T> {
    fn integrate(&self, f: &dyn Fn(T) -> Complex<T>) -> Result<Complex<T>> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for &(a, w) in &self.atoms {
            acc += f(a) * w;
        }
        for p in &self.pieces {
            acc += p.expect(f, T::lit(QUAD_TOL)) * p.weight;
        }
        Ok(acc)
    }
}

impl<T: Real> SpectralMeasure<T> for LimitLaw<T> {
    fn integrate(&self, f: &dyn Fn(T) -> Complex<T>) -> Result<Complex<T>> {
        self.parts()?.integrate(f)
    }
}

fn upper<T: Real>(z: Complex<T>) -> Result<()> {
    if z.im > T::zero() && z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("transform needs Im z > 0, got z = {z}")))
    }
}

/// `∫ (x − z)^{-1} μ(dx)`.
pub fn cauchy_transform<T: Real, M: SpectralMeasure<T> + ?Sized>(mu: &M, z: Complex<T>) -> Result<Complex<T>> {
    upper(z)?;
    mu.integrate(&|x| (Complex::new(x, T::zero()) - z).inv())
}

/// `Im G > 0` and `|G| ≤ 1 / Im z`, up to a relative slack.
pub fn is_herglotz<T: Real>(g: Complex<T>, z: Complex<T>) -> bool {
    g.im > T::zero() && g.norm() <= (T::one() + T::lit(1e-10)) / z.im
}

/// Density estimates `(1/π) Im G(x + iε)` extrapolated to `ε = 0` through
/// the Neville polynomial in `ε` over all entries of `eps`.
pub fn stieltjes_invert<T: Real>(
    g: impl Fn(Complex<T>) -> Result<Complex<T>>,
    x_grid: &[T],
    eps: &[T],
) -> Result<Vec<T>> {
    if eps.len() < 2 || eps.iter().any(|e| !(*e > T::zero())) || eps.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(validation(
            "need at least two positive, strictly descending smoothing widths",
        ));
    }
    let pi = T::PI();
    x_grid
        .iter()
        .map(|&x| {
            let mut table = eps
                .iter()
                .map(|&e| Ok(g(Complex::new(x, e))?.im / pi))
                .collect::<Result<Vec<T>>>()?;
            // Neville's scheme evaluated at ε = 0.
            let m = eps.len();
            for level in 1..m {
                for i in 0..m - level {
                    let (ei, ej) = (eps[i], eps[i + level]);
                    table[i] = (ei * table[i + 1] - ej * table[i]) / (ei - ej);
                }
            }
            Ok(table[0])
        })
        .collect()
}

/// `d/dt ⟨f_z, μ_t⟩` from the evolution equation with index `β`:
///
/// `−∫ b/(x−z)² dμ + β (∫ g²/(x−z) dμ ∫ h²/(y−z)² dμ + ∫ h²/(x−z) dμ ∫ g²/(y−z)² dμ)`.
///
/// At β = 1 this is the equation as usually printed; the β factor comes
/// from the double integral of the limit equation with `f = f_z`.
pub fn ct_evolution_rhs<T: Real, M: SpectralMeasure<T> + ?Sized>(
    mu: &M,
    z: Complex<T>,
    g2: &SpectralFunction<T>,
    h2: &SpectralFunction<T>,
    b: &SpectralFunction<T>,
    beta: Beta,
) -> Result<Complex<T>> {
    upper(z)?;
    let r = |x: T| (Complex::new(x, T::zero()) - z).inv();
    let weighted = |f: &SpectralFunction<T>, power: i32| mu.integrate(&|x| r(x).powi(power) * f.eval(x));
    let drift = weighted(b, 2)?;
    let (ag, bg) = (weighted(g2, 1)?, weighted(g2, 2)?);
    let (ah, bh) = (weighted(h2, 1)?, weighted(h2, 2)?);
    Ok(-drift + (ag * bh + ah * bg) * beta.value::<T>())
}

/// Transform of the semicircle law with the given center and variance.
pub fn semicircle_transform<T: Real>(center: T, variance: T, z: Complex<T>) -> Result<Complex<T>> {
    upper(z)?;
    let w = z - center;
    if variance == T::zero() {
        return Ok(-w.inv());
    }
    // Roots of v r² + w r + 1 = 0; the Herglotz root is the transform.
    // The root product is 1/v; taking the larger root directly and the
    // smaller as the reciprocal avoids cancellation at large |z|.
    let mut disc = (w * w - Complex::new(T::lit(4.0) * variance, T::zero())).sqrt();
    if (w.conj() * disc).re < T::zero() {
        disc = -disc;
    }
    let q = -(w + disc) * T::lit(0.5);
    let r1 = q / variance;
    let r2 = q.inv();
    Ok(if r1.im > r2.im { r1 } else { r2 })
}

/// Free Brownian motion with drift: semicircle of mean `θ t` and variance
/// `σ² t`.
pub fn free_bm_transform<T: Real>(theta: T, sigma: T, t: T, z: Complex<T>) -> Result<Complex<T>> {
    if !(t > T::zero()) {
        return Err(validation(format!("free BM transform needs t > 0, got {t}")));
    }
    semicircle_transform(theta * t, sigma * sigma * t, z)
}

/// Squared radius of the free OU law at time `t`,
/// `2σ² (e^{2θt} − 1) / θ` (which is `2σ²(1 − e^{−2|θ|t})/|θ|` for θ < 0),
/// with the free BM value `4σ²t` at θ = 0.
pub fn free_ou_radius_sq<T: Real>(theta: T, sigma: T, t: T) -> T {
    let s2 = sigma * sigma;
    if theta == T::zero() {
        return T::lit(4.0) * s2 * t;
    }
    T::lit(2.0) * s2 * (T::lit(2.0) * theta * t).exp_m1() / theta
}

/// Free Ornstein–Uhlenbeck process started at 0: centered semicircle with
/// radius given by [`free_ou_radius_sq`].
pub fn free_ou_transform<T: Real>(theta: T, sigma: T, t: T, z: Complex<T>) -> Result<Complex<T>> {
    if !(t > T::zero()) {
        return Err(validation(format!("free OU transform needs t > 0, got {t}")));
    }
    semicircle_transform(T::zero(), free_ou_radius_sq(theta, sigma, t) / T::lit(4.0), z)
}

/// The two free diffusions with closed-form laws.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum FreeDiffusion<T> {
    /// `dX = σ dS + θ dt`.
    Bm { theta: T, sigma: T },
    /// `dX = σ dS + θ X dt`.
    Ou { theta: T, sigma: T },
}

impl<T: Real> FreeDiffusion<T> {
    /// Law at time `t` as atoms and arc pieces.
    pub fn law(&self, t: T) -> LawParts<T> {
        let (center, variance) = match *self {
            FreeDiffusion::Bm { theta, sigma } => (theta * t, sigma * sigma * t),
            FreeDiffusion::Ou { theta, sigma } => (T::zero(), free_ou_radius_sq(theta, sigma, t) / T::lit(4.0)),
        };
        if variance == T::zero() {
            LawParts {
                atoms: vec![(center, T::one())],
                pieces: Vec::new(),
            }
        } else {
            LawParts {
                atoms: Vec::new(),
                pieces: vec![ArcPiece::semicircle(T::one(), center, T::lit(2.0) * variance.sqrt())],
            }
        }
    }

    pub fn transform(&self, t: T, z: Complex<T>) -> Result<Complex<T>> {
        match *self {
            FreeDiffusion::Bm { theta, sigma } => free_bm_transform(theta, sigma, t, z),
            FreeDiffusion::Ou { theta, sigma } => free_ou_transform(theta, sigma, t, z),
        }
    }

    /// `(g², h², b)` for the evolution equation at β = 1. The convention
    /// `g² = h² = σ/√2` is the one under which the closed forms solve it:
    /// the interaction term then equals `σ² G ∂_z G`, the rate at which
    /// the semicircle transform moves with its variance.
    pub fn coefficients(&self) -> (SpectralFunction<T>, SpectralFunction<T>, SpectralFunction<T>) {
        let (sigma, b) = match *self {
            FreeDiffusion::Bm { theta, sigma } => (sigma, SpectralFunction::Constant(theta)),
            FreeDiffusion::Ou { theta, sigma } => (sigma, SpectralFunction::Affine { a: theta, b: T::zero() }),
        };
        let c = sigma / T::SQRT_2();
        (SpectralFunction::Constant(c), SpectralFunction::Constant(c), b)
    }
}

/// `|(r_{t+Δt}(z) − r_{t−Δt}(z)) / 2Δt − RHS(μ_t, z)|` for a free diffusion,
/// with the RHS of [`ct_evolution_rhs`] at β = 1.
pub fn free_pde_residual<T: Real>(case: &FreeDiffusion<T>, t: T, z: Complex<T>, dt: T) -> Result<T> {
    if !(dt > T::zero() && t > dt) {
        return Err(validation("need 0 < dt < t"));
    }
    let fd = (case.transform(t + dt, z)? - case.transform(t - dt, z)?) / (T::lit(2.0) * dt);
    let (g2, h2, b) = case.coefficients();
    let rhs = ct_evolution_rhs(&case.law(t), z, &g2, &h2, &b, Beta::Real)?;
    Ok((fd - rhs).norm())
}

/// Moments `m_0..m_kmax` read off the Laurent expansion
/// `G(z) = −Σ m_k z^{−k−1}` on the circle `|z| = radius`, using
/// `G(z̄) = conj G(z)` for the lower half.
pub fn moments_from_transform<T: Real>(
    g: impl Fn(Complex<T>) -> Result<Complex<T>>,
    radius: T,
    k_max: usize,
    nodes: usize,
) -> Result<Vec<T>> {
    // Nodes at φ_j = π (j + 1/2) / nodes on the upper half; the lower half
    // mirrors them.
    let pi = T::PI();
    let half_nodes = T::from_usize_lossy(nodes);
    let mut samples = Vec::with_capacity(nodes);
    for j in 0..nodes {
        let phi = pi * (T::from_usize_lossy(j) + T::lit(0.5)) / half_nodes;
        let z = Complex::from_polar(radius, phi);
        samples.push((phi, g(z)?));
    }
    Ok((0..=k_max)
        .map(|k| {
            let kk = T::from_usize_lossy(k + 1);
            // (1/2π) ∮ G e^{i(k+1)φ} dφ, both halves combined.
            let mut acc = T::zero();
            for &(phi, gz) in &samples {
                acc += (gz * Complex::from_polar(T::one(), kk * phi)).re;
            }
            -acc / half_nodes * radius.powi(k as i32 + 1)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn point_mass_transform() {
        let m = EmpiricalMeasure::new(vec![0.0]).unwrap();
        let z = c(0.3, 0.7);
        assert!((cauchy_transform(&m, z).unwrap() + z.inv()).norm() < 1e-15);
        assert!(cauchy_transform(&m, c(1.0, 0.0)).is_err());
    }

    #[test]
    fn free_bm_is_semicircle() {
        let law = LimitLaw::Semicircle {
            t: 1.0,
            beta: Beta::Complex,
        };
        let z = c(0.0, 2.0);
        let a = cauchy_transform(&law, z).unwrap();
        let b = free_bm_transform(0.0, 1.0, 1.0, z).unwrap();
        assert!((a - b).norm() < 1e-10, "{a} vs {b}");
        // Shift covariance.
        let s = free_bm_transform(0.7, 1.3, 0.5, c(0.2, 0.4)).unwrap();
        let u = free_bm_transform(0.0, 1.3, 0.5, c(0.2 - 0.35, 0.4)).unwrap();
        assert!((s - u).norm() < 1e-14);
        assert!(free_bm_transform(0.0, 1.0, 0.0, z).is_err());
    }

    #[test]
    fn laurent_normalization() {
        let z = c(0.0, 1e6);
        let r = free_bm_transform(0.3, 1.0, 2.0, z).unwrap();
        assert!((r * z + 1.0).norm() < 1e-5);
    }

    #[test]
    fn ou_radius_limits() {
        let (s, t) = (1.3f64, 0.8);
        let small = free_ou_radius_sq(1e-9, s, t);
        assert!((small - 4.0 * s * s * t).abs() < 1e-7);
        let stationary = free_ou_radius_sq(-1.0f64, 1.0, 60.0);
        assert!((stationary - 2.0).abs() < 1e-12);
        let z = c(0.1, 0.5);
        let a = free_ou_transform(1e-10, 1.0, 1.0, z).unwrap();
        let b = free_bm_transform(0.0, 1.0, 1.0, z).unwrap();
        assert!((a - b).norm() < 1e-8);
    }

    #[test]
    fn inversion_recovers_poisson_kernel_limit() {
        // For δ_a the smoothed density is the Poisson kernel; away from a it
        // is ε/(π d²) + O(ε³), so extrapolation drives it to 0.
        let g = |z: Complex<f64>| Ok(-(z - 0.5).inv());
        let eps = 0.01;
        let kernel = g(c(1.5, eps)).unwrap().im / std::f64::consts::PI;
        assert!((kernel - eps / (std::f64::consts::PI * (1.0 + eps * eps))).abs() < 1e-16);
        let d = stieltjes_invert(g, &[1.5, -1.0], &[0.02, 0.01, 0.005]).unwrap();
        assert!(d.iter().all(|x| x.abs() < 1e-6), "{d:?}");
        assert!(stieltjes_invert(g, &[0.0], &[0.01, 0.02]).is_err());
    }

    #[test]
    fn zero_coefficients_give_zero_rhs() {
        let law = LimitLaw::Semicircle {
            t: 1.0,
            beta: Beta::Complex,
        };
        let z = SpectralFunction::zero();
        let r = ct_evolution_rhs(&law, c(0.0, 1.0), &z, &z, &z, Beta::Complex).unwrap();
        assert_eq!(r, c(0.0, 0.0));
    }

    #[test]
    fn degenerate_sigma_is_translation() {
        let case = FreeDiffusion::Bm { theta: 0.8, sigma: 0.0 };
        let r = free_pde_residual(&case, 1.0, c(0.3, 1.0), 1e-4).unwrap();
        assert!(r < 1e-8, "{r}");
    }
}
