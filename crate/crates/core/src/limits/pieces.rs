//! Building blocks of the limit laws that have a density: point masses and
//! "arc pieces" parameterized by `x(θ) = s (c − r cos θ)`, `θ ∈ [0, π]`.
//!
//! In the angle variable both density profiles used here are smooth and
//! even around `θ = 0, π`, so expectations converge geometrically with the
//! periodic trapezoid rule, including the `x^{−1/2}` edge of the
//! Marchenko–Pastur law at ratio one.

use crate::quad::{gauss_kronrod, periodic_trapezoid};
use crate::scalar::{Entry, Real};

/// Shape of an arc piece's density.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Profile<T> {
    /// Semicircle: `(2/π) sin² θ` in the angle variable.
    Semicircle,
    /// Continuous part of the Marchenko–Pastur law with ratio `α` dilated
    /// by `scale`, normalized to unit mass.
    MarchenkoPastur { ratio: T, scale: T },
}

/// Probability measure `weight · ν` where `ν` is the unit-mass law of
/// `sign · (center − half_width cos θ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcPiece<T> {
    pub weight: T,
    pub center: T,
    pub half_width: T,
    pub profile: Profile<T>,
    /// `+1` or `−1` (reflection `A ↦ −A`).
    pub sign: T,
}

impl<T: Real> ArcPiece<T> {
    pub fn semicircle(weight: T, center: T, radius: T) -> Self {
        ArcPiece {
            weight,
            center,
            half_width: radius,
            profile: Profile::Semicircle,
            sign: T::one(),
        }
    }

    /// Continuous part of `MP(ratio)` dilated by `scale`, carrying
    /// `weight` (callers pass `weight · min(1, ratio)`).
    pub fn marchenko_pastur(weight: T, ratio: T, scale: T) -> Self {
        let s = ratio.sqrt();
        ArcPiece {
            weight,
            center: (T::one() + ratio) * scale,
            half_width: T::lit(2.0) * s * scale,
            profile: Profile::MarchenkoPastur { ratio, scale },
            sign: T::one(),
        }
    }

    pub fn reflected(mut self) -> Self {
        self.sign = -self.sign;
        self
    }

    /// Support `[lo, hi]`.
    pub fn support(&self) -> (T, T) {
        let a = self.sign * (self.center - self.half_width);
        let b = self.sign * (self.center + self.half_width);
        (a.min(b), a.max(b))
    }

    /// Point at angle `θ`.
    #[inline]
    pub fn x(&self, theta: T) -> T {
        self.sign * (self.center - self.half_width * theta.cos())
    }

    /// Unit-mass density in the angle variable.
    #[inline]
    pub fn angle_density(&self, theta: T) -> T {
        let pi = T::PI();
        match self.profile {
            Profile::Semicircle => T::lit(2.0) / pi * theta.sin().powi(2),
            Profile::MarchenkoPastur { ratio, scale } => {
                let mass = ratio.min(T::one());
                let r = self.half_width;
                if ratio == T::one() {
                    // sin²θ / (1 − cos θ) = 1 + cos θ
                    r * (T::one() + theta.cos()) / (T::lit(2.0) * pi * scale) / mass
                } else {
                    let y = self.center - r * theta.cos();
                    r * r * theta.sin().powi(2) / (T::lit(2.0) * pi * scale * y) / mass
                }
            }
        }
    }

    /// Unit-mass density in `x` (zero outside the support).
    pub fn density(&self, x: T) -> T {
        let y = self.sign * x;
        let u = (self.center - y) / self.half_width;
        if !(u > -T::one() && u < T::one()) {
            return T::zero();
        }
        let theta = u.acos();
        self.angle_density(theta) / (self.half_width * theta.sin())
    }

    /// `E_ν[f]` (unit mass) by the periodic trapezoid rule in `θ`.
    pub fn expect<V: Entry<T>>(&self, f: impl Fn(T) -> V, rel_tol: T) -> V {
        periodic_trapezoid(|th| f(self.x(th)).scale(self.angle_density(th)), rel_tol)
    }

    /// `ν((−∞, x])` for the unit-mass piece.
    pub fn cdf(&self, x: T) -> T {
        let y = self.sign * x;
        let lo = self.center - self.half_width;
        let hi = self.center + self.half_width;
        // Mass of {Y ≤ y} for the unreflected variable Y.
        let below = if y <= lo {
            T::zero()
        } else if y >= hi {
            T::one()
        } else {
            let theta = ((self.center - y) / self.half_width)
                .max(-T::one())
                .min(T::one())
                .acos();
            self.angle_mass(theta)
        };
        if self.sign > T::zero() {
            below
        } else {
            // P(−Y ≤ x) = P(Y ≥ −x); the pieces carry no atoms.
            T::one() - below
        }
    }

    /// `∫_0^θ angle_density`.
    fn angle_mass(&self, theta: T) -> T {
        match self.profile {
            Profile::Semicircle => (theta - theta.sin() * theta.cos()) / T::PI(),
            Profile::MarchenkoPastur { .. } => {
                let v = gauss_kronrod(|th| self.angle_density(th), T::zero(), theta, T::lit(1e-13));
                v.max(T::zero()).min(T::one())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_masses() {
        let pieces = [
            ArcPiece::<f64>::semicircle(1.0, 0.3, 2.0),
            ArcPiece::marchenko_pastur(1.0, 1.0, 1.0),
            ArcPiece::marchenko_pastur(1.0, 2.5, 0.7),
            ArcPiece::marchenko_pastur(1.0, 0.4, 1.3),
        ];
        for p in pieces {
            let mass: f64 = p.expect(|_| 1.0f64, 1e-14);
            assert!((mass - 1.0).abs() < 1e-12, "{p:?}: {mass}");
            assert!((p.cdf(p.support().1) - 1.0).abs() < 1e-12);
            assert_eq!(p.cdf(p.support().0), 0.0);
        }
    }

    #[test]
    fn density_matches_formula() {
        let p = ArcPiece::marchenko_pastur(1.0, 2.0, 1.0);
        let (a, b) = ((1.0 - 2f64.sqrt()).powi(2), (1.0 + 2f64.sqrt()).powi(2));
        for x in [0.5, 1.0, 3.0, 5.0] {
            let want = ((x - a) * (b - x)).sqrt() / (2.0 * std::f64::consts::PI * x);
            assert!((p.density(x) - want).abs() < 1e-12);
        }
        let s = ArcPiece::semicircle(1.0, 0.0, 2.0);
        let want = (4.0f64 - 1.0).sqrt() / (2.0 * std::f64::consts::PI);
        assert!((s.density(1.0) - want).abs() < 1e-14);
    }

    #[test]
    fn reflection_mirrors_cdf() {
        let p = ArcPiece::<f64>::marchenko_pastur(1.0, 1.0, 0.5);
        let r = p.reflected();
        for x in [0.1, 0.5, 1.2, 1.9] {
            assert!((r.cdf(-x) - (1.0 - p.cdf(x))).abs() < 1e-13);
        }
        assert_eq!(r.support(), (-2.0, 0.0));
    }
}
