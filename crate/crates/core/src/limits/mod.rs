//! Limit laws of the empirical spectral measure and their moment engines.

mod moments;
mod ode;
mod pieces;

pub use moments::{
    catalan, exact, geometric_moments, geometric_w, geometric_w_bound, mp_moment_polys, mp_moments, mp_moments_float,
    mp_params, semicircle_moments,
};
pub use ode::{
    generic_moment_ode, jacobi_coefficients, jacobi_moments, point_mass_moments, MomentTrajectory, PolyCoefficients,
};
pub use pieces::{ArcPiece, Profile};

use crate::error::{validation, Error, Result};
use crate::linalg::{jacobi_eigen, Mat};
use crate::scalar::{Beta, Entry, Real};

/// Relative tolerance of the angle-variable quadratures.
const QUAD_TOL: f64 = 1e-13;

/// Moments `m_0..m_kmax` at time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSequence<T> {
    pub t: T,
    pub values: Vec<T>,
}

impl<T: Real> MomentSequence<T> {
    pub fn k_max(&self) -> usize {
        self.values.len() - 1
    }

    /// Smallest eigenvalue of the Hankel matrix `(m_{i+j})_{i,j ≤ k_max/2}`
    /// divided by the largest in absolute value.
    pub fn hankel_min_ratio(&self) -> Result<T> {
        let d = self.k_max() / 2 + 1;
        let h = Mat::from_fn(d, |i, j| self.values[i + j]);
        let (eig, _) = jacobi_eigen(&h)?;
        let top = eig.iter().fold(T::zero(), |acc, x| acc.max(x.abs()));
        if top == T::zero() {
            return Ok(T::zero());
        }
        Ok(eig[0] / top)
    }

    /// Hankel positivity to `1e-8` relative, as required of moments of a
    /// probability law on the line.
    pub fn check_hankel(&self) -> Result<()> {
        let r = self.hankel_min_ratio()?;
        if r < -T::lit(1e-8) {
            return Err(Error::Numerical(format!(
                "moment sequence is not positive definite (min/max Hankel eigenvalue {r:e})"
            )));
        }
        Ok(())
    }
}

/// Weights of the two-component non-uniqueness mixture.
pub fn mixture_two_weights<T: Real>(alpha: T) -> Result<(T, T)> {
    if !(alpha >= T::zero() && alpha < T::one()) {
        return Err(validation(format!("mixture needs alpha in [0, 1), got {alpha}")));
    }
    let half = T::lit(0.5);
    Ok(((T::one() + alpha) * half, (T::one() - alpha) * half))
}

/// Weights and induced drift of the three-component mixture.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MixtureThree<T> {
    pub lambda: T,
    pub lambda_star: T,
    pub gamma: T,
    pub induced_alpha: T,
}

pub fn mixture_three_weights<T: Real>(alpha_plus: T, alpha_minus: T) -> Result<MixtureThree<T>> {
    if !(alpha_plus > T::one() && alpha_minus >= alpha_plus) {
        return Err(validation(format!(
            "mixture needs alpha_minus >= alpha_plus > 1, got alpha_plus = {alpha_plus}, alpha_minus = {alpha_minus}"
        )));
    }
    let one = T::one();
    let den = alpha_plus * alpha_minus - one;
    Ok(MixtureThree {
        lambda: (alpha_minus - one) / den,
        lambda_star: (alpha_plus - one) / den,
        gamma: (alpha_plus - one) * (alpha_minus - one) / den,
        induced_alpha: (alpha_minus - alpha_plus) / den,
    })
}

/// The limit laws of the four universality classes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LimitLaw<T> {
    /// Centered semicircle of variance `β t / 2`.
    Semicircle {
        t: T,
        beta: Beta,
    },
    /// Solution at time `t` of the Wishart limit equation with drift `α`
    /// and index `β`: the Marchenko–Pastur law of ratio `α / β` dilated by
    /// `β t`. For β = 1 this is the classical `ν^{MP}_t`.
    MarchenkoPastur {
        alpha: T,
        t: T,
        beta: Beta,
    },
    /// `λ ν^+_{λt} + λ* reflect(ν^+_{λ*t})`, `ν^+` the ratio-one law (β = 1).
    MPMixtureTwo {
        alpha: T,
        t: T,
    },
    /// `λ ν^{α+}_{λt} + γ δ_0 + λ* reflect(ν^{α−}_{λ*t})` (β = 1).
    MPMixtureThree {
        alpha_plus: T,
        alpha_minus: T,
        t: T,
    },
    /// Geometric class started at `δ_a`; moments only.
    Geometric {
        a: T,
        alpha: T,
        beta: Beta,
        t: T,
    },
    /// Jacobi class started at `δ_a`; moments only.
    Jacobi {
        p: T,
        q: T,
        beta: Beta,
        a: T,
        t: T,
    },
    PointMass {
        a: T,
    },
}

/// Two-component mixture at time `t`.
pub fn mp_mixture_two<T: Real>(alpha: T, t: T) -> Result<LimitLaw<T>> {
    mixture_two_weights(alpha)?;
    Ok(LimitLaw::MPMixtureTwo { alpha, t })
}

/// Three-component mixture at time `t`.
pub fn mp_mixture_three<T: Real>(alpha_plus: T, alpha_minus: T, t: T) -> Result<LimitLaw<T>> {
    mixture_three_weights(alpha_plus, alpha_minus)?;
    Ok(LimitLaw::MPMixtureThree {
        alpha_plus,
        alpha_minus,
        t,
    })
}

/// Atoms plus arc pieces; the explicit form of every law with a CDF.
#[derive(Clone, Debug, PartialEq)]
pub struct LawParts<T> {
    /// `(location, mass)`, sorted by location.
    pub atoms: Vec<(T, T)>,
    pub pieces: Vec<ArcPiece<T>>,
}

impl<T: Real> LawParts<T> {
    fn point(a: T, mass: T) -> Self {
        LawParts {
            atoms: vec![(a, mass)],
            pieces: Vec::new(),
        }
    }

    fn scaled(mut self, w: T) -> Self {
        for a in &mut self.atoms {
            a.1 *= w;
        }
        for p in &mut self.pieces {
            p.weight *= w;
        }
        self
    }

    fn reflected(mut self) -> Self {
        for a in &mut self.atoms {
            a.0 = -a.0;
        }
        for p in &mut self.pieces {
            *p = p.reflected();
        }
        self
    }

    fn merge(parts: Vec<LawParts<T>>) -> Self {
        let mut atoms: Vec<(T, T)> = Vec::new();
        let mut pieces = Vec::new();
        for p in parts {
            for (x, w) in p.atoms {
                if w == T::zero() {
                    continue;
                }
                match atoms.iter_mut().find(|a| a.0 == x) {
                    Some(a) => a.1 += w,
                    None => atoms.push((x, w)),
                }
            }
            pieces.extend(p.pieces.into_iter().filter(|q| q.weight > T::zero()));
        }
        atoms.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
        LawParts { atoms, pieces }
    }

    /// Ratio-`ratio` Marchenko–Pastur law dilated by `scale`.
    fn marchenko_pastur(ratio: T, scale: T) -> Self {
        if ratio == T::zero() || scale == T::zero() {
            return Self::point(T::zero(), T::one());
        }
        let cont = ratio.min(T::one());
        let mut parts = LawParts {
            atoms: Vec::new(),
            pieces: vec![ArcPiece::marchenko_pastur(cont, ratio, scale)],
        };
        if ratio < T::one() {
            parts.atoms.push((T::zero(), T::one() - ratio));
        }
        parts
    }

    pub fn support(&self) -> (T, T) {
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for &(x, _) in &self.atoms {
            lo = lo.min(x);
            hi = hi.max(x);
        }
        for p in &self.pieces {
            let (a, b) = p.support();
            lo = lo.min(a);
            hi = hi.max(b);
        }
        (lo, hi)
    }

    pub fn atom_mass(&self) -> T {
        self.atoms.iter().map(|a| a.1).sum()
    }

    /// `P(X ≤ x)`.
    pub fn cdf(&self, x: T) -> T {
        let mut acc = T::zero();
        for &(a, w) in &self.atoms {
            if a <= x {
                acc += w;
            }
        }
        for p in &self.pieces {
            acc += p.weight * p.cdf(x);
        }
        acc.min(T::one())
    }

    /// `P(X < x)`.
    pub fn cdf_left(&self, x: T) -> T {
        let mut acc = T::zero();
        for &(a, w) in &self.atoms {
            if a < x {
                acc += w;
            }
        }
        for p in &self.pieces {
            acc += p.weight * p.cdf(x);
        }
        acc.min(T::one())
    }

    /// Density of the continuous part.
    pub fn density(&self, x: T) -> T {
        self.pieces.iter().map(|p| p.weight * p.density(x)).sum()
    }

    pub fn expect<V: Entry<T>>(&self, f: impl Fn(T) -> V) -> V {
        let mut acc = V::zero();
        for &(a, w) in &self.atoms {
            acc += f(a).scale(w);
        }
        for p in &self.pieces {
            acc += p.expect(&f, T::lit(QUAD_TOL)).scale(p.weight);
        }
        acc
    }

    /// Generalized inverse `inf{x : F(x) ≥ u}` for `u ∈ (0, 1)`.
    pub fn quantile(&self, u: T) -> T {
        let (mut lo, mut hi) = self.support();
        if lo == hi {
            return lo;
        }
        for &(a, _) in &self.atoms {
            if self.cdf_left(a) < u && u <= self.cdf(a) {
                return a;
            }
        }
        // Newton with bisection fallback: a Newton step is taken only if it
        // stays in the bracket and at least halves the previous step, so
        // the edge singularities of the density cannot stall the search.
        let half = T::lit(0.5);
        let mut x = (lo + hi) * half;
        let tol = T::lit(1e-14) * (T::one() + hi.abs().max(lo.abs()));
        let mut step_old = hi - lo;
        let mut step = step_old;
        for _ in 0..300 {
            let f = self.cdf(x) - u;
            if f.abs() < T::lit(1e-15) {
                break;
            }
            if f > T::zero() {
                hi = x;
            } else {
                lo = x;
            }
            if hi - lo <= tol {
                break;
            }
            let d = self.density(x);
            let newton = if d > T::zero() { x - f / d } else { T::nan() };
            if newton > lo && newton < hi && (T::lit(2.0) * f).abs() <= (step_old * d).abs() {
                step_old = step;
                step = (newton - x).abs();
                x = newton;
            } else {
                step_old = step;
                step = (hi - lo) * half;
                x = lo + step;
            }
        }
        x
    }
}

impl<T: Real> LimitLaw<T> {
    pub fn validate(&self) -> Result<()> {
        use LimitLaw::*;
        let nonneg_t = |t: T| {
            if t >= T::zero() {
                Ok(())
            } else {
                Err(validation(format!("time must be >= 0, got {t}")))
            }
        };
        match *self {
            Semicircle { t, .. } => nonneg_t(t),
            MarchenkoPastur { alpha, t, .. } => {
                mp_params(alpha)?;
                nonneg_t(t)
            }
            MPMixtureTwo { alpha, t } => {
                mixture_two_weights(alpha)?;
                nonneg_t(t)
            }
            MPMixtureThree {
                alpha_plus,
                alpha_minus,
                t,
            } => {
                mixture_three_weights(alpha_plus, alpha_minus)?;
                nonneg_t(t)
            }
            Geometric { a, t, .. } => {
                if !(a > T::zero()) {
                    return Err(validation("geometric start must be > 0"));
                }
                nonneg_t(t)
            }
            Jacobi { a, t, .. } => {
                if !(a >= T::zero() && a <= T::one()) {
                    return Err(validation("Jacobi start must lie in [0, 1]"));
                }
                nonneg_t(t)
            }
            PointMass { a } => {
                if a.is_finite() {
                    Ok(())
                } else {
                    Err(validation("point mass location must be finite"))
                }
            }
        }
    }

    /// The same family at another time.
    pub fn at_time(&self, new_t: T) -> Self {
        use LimitLaw::*;
        let mut out = *self;
        match &mut out {
            Semicircle { t, .. }
            | MarchenkoPastur { t, .. }
            | MPMixtureTwo { t, .. }
            | MPMixtureThree { t, .. }
            | Geometric { t, .. }
            | Jacobi { t, .. } => *t = new_t,
            PointMass { .. } => {}
        }
        out
    }

    pub fn has_cdf(&self) -> bool {
        !matches!(self, LimitLaw::Geometric { .. } | LimitLaw::Jacobi { .. })
    }

    /// Explicit atoms and density pieces.
    pub fn parts(&self) -> Result<LawParts<T>> {
        use LimitLaw::*;
        self.validate()?;
        Ok(match *self {
            Semicircle { t, beta } => {
                if t == T::zero() {
                    LawParts::point(T::zero(), T::one())
                } else {
                    let var = beta.value::<T>() * t * T::lit(0.5);
                    LawParts {
                        atoms: Vec::new(),
                        pieces: vec![ArcPiece::semicircle(T::one(), T::zero(), T::lit(2.0) * var.sqrt())],
                    }
                }
            }
            MarchenkoPastur { alpha, t, beta } => {
                let b = beta.value::<T>();
                LawParts::marchenko_pastur(alpha / b, b * t)
            }
            MPMixtureTwo { alpha, t } => {
                let (l, ls) = mixture_two_weights(alpha)?;
                LawParts::merge(vec![
                    LawParts::marchenko_pastur(T::one(), l * t).scaled(l),
                    LawParts::marchenko_pastur(T::one(), ls * t).scaled(ls).reflected(),
                ])
            }
            MPMixtureThree {
                alpha_plus,
                alpha_minus,
                t,
            } => {
                let w = mixture_three_weights(alpha_plus, alpha_minus)?;
                LawParts::merge(vec![
                    LawParts::marchenko_pastur(alpha_plus, w.lambda * t).scaled(w.lambda),
                    LawParts::point(T::zero(), w.gamma),
                    LawParts::marchenko_pastur(alpha_minus, w.lambda_star * t)
                        .scaled(w.lambda_star)
                        .reflected(),
                ])
            }
            Geometric { .. } | Jacobi { .. } => {
                return Err(Error::Unsupported(format!(
                    "{} law is known through its moments only",
                    self.family()
                )))
            }
            PointMass { a } => LawParts::point(a, T::one()),
        })
    }

    pub fn family(&self) -> &'static str {
        use LimitLaw::*;
        match self {
            Semicircle { .. } => "semicircle",
            MarchenkoPastur { .. } => "marchenko_pastur",
            MPMixtureTwo { .. } => "mp_mixture_two",
            MPMixtureThree { .. } => "mp_mixture_three",
            Geometric { .. } => "geometric",
            Jacobi { .. } => "jacobi",
            PointMass { .. } => "point_mass",
        }
    }

    /// Moments `m_0..m_kmax`. Jacobi moments come from the RK4 hierarchy
    /// with `dt = 1e-3`.
    pub fn moments(&self, k_max: usize) -> Result<MomentSequence<T>> {
        use LimitLaw::*;
        self.validate()?;
        let sign_k = |k: usize| if k.is_multiple_of(2) { T::one() } else { -T::one() };
        Ok(match *self {
            Semicircle { t, beta } => semicircle_moments(t, beta, k_max),
            MarchenkoPastur { alpha, t, beta } => MomentSequence {
                t,
                values: mp_moments_float(alpha, beta.value(), t, k_max),
            },
            MPMixtureTwo { alpha, t } => {
                let (l, ls) = mixture_two_weights(alpha)?;
                let plus = mp_moments_float(T::one(), T::one(), l * t, k_max);
                let minus = mp_moments_float(T::one(), T::one(), ls * t, k_max);
                let values = (0..=k_max).map(|k| l * plus[k] + ls * sign_k(k) * minus[k]).collect();
                MomentSequence { t, values }
            }
            MPMixtureThree {
                alpha_plus,
                alpha_minus,
                t,
            } => {
                let w = mixture_three_weights(alpha_plus, alpha_minus)?;
                let plus = mp_moments_float(alpha_plus, T::one(), w.lambda * t, k_max);
                let minus = mp_moments_float(alpha_minus, T::one(), w.lambda_star * t, k_max);
                let values = (0..=k_max)
                    .map(|k| {
                        let atom = if k == 0 { w.gamma } else { T::zero() };
                        w.lambda * plus[k] + atom + w.lambda_star * sign_k(k) * minus[k]
                    })
                    .collect();
                MomentSequence { t, values }
            }
            Geometric { a, alpha, beta, t } => geometric_moments(a, alpha, beta, t, k_max),
            Jacobi { p, q, beta, a, t } => {
                let traj = jacobi_moments(p, q, beta, a, t, T::lit(1e-3), k_max)?;
                let mut m = traj.last();
                m.t = t;
                m
            }
            PointMass { a } => MomentSequence {
                t: T::zero(),
                values: point_mass_moments(a, k_max),
            },
        })
    }

    pub fn cdf(&self, x: T) -> Result<T> {
        Ok(self.parts()?.cdf(x))
    }

    pub fn density(&self, x: T) -> Result<T> {
        Ok(self.parts()?.density(x))
    }

    /// `E[f(X)]` by atom sums and angle-variable quadrature.
    pub fn expect<V: Entry<T>>(&self, f: impl Fn(T) -> V) -> Result<V> {
        Ok(self.parts()?.expect(f))
    }

    /// The `count` midpoint quantiles `F^{-1}((i + 1/2) / count)`.
    pub fn quantiles(&self, count: usize) -> Result<Vec<T>> {
        let parts = self.parts()?;
        let c = T::from_usize_lossy(count);
        Ok((0..count)
            .map(|i| parts.quantile((T::from_usize_lossy(i) + T::lit(0.5)) / c))
            .collect())
    }
}
