//! Moment hierarchy of the limit equation for polynomial coefficients,
//! integrated with classical RK4.
//!
//! Testing the limit equation against `f = x^k` gives
//!
//! `m_k' = k Σ_j b_j m_{k−1+j}
//!       + (β/2) k Σ_{i=0}^{k−2} Σ_{j1,j2} γ_{j1} η_{j2}
//!         (m_{i+j1} m_{k−2−i+j2} + m_{i+j2} m_{k−2−i+j1})`
//!
//! with `b = Σ b_j x^j`, `g² = Σ γ_j x^j`, `h² = Σ η_j x^j`. The right side
//! of `m_k'` only involves moments up to order `k` exactly when
//! `deg b ≤ 1` and `deg g², deg h² ≤ 2`; otherwise every level needs a
//! higher one and the hierarchy cannot be truncated.

use super::MomentSequence;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::{Beta, Real};

/// Moments `m_0..m_kmax` on a uniform time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentTrajectory<T> {
    pub times: Vec<T>,
    /// `moments[i][k] = m_k(times[i])`.
    pub moments: Vec<Vec<T>>,
}

impl<T: Real> MomentTrajectory<T> {
    /// Moments at the grid time nearest to `t`.
    pub fn at(&self, t: T) -> MomentSequence<T> {
        let idx = self
            .times
            .iter()
            .enumerate()
            .min_by(|a, b| {
                (*a.1 - t)
                    .abs()
                    .partial_cmp(&(*b.1 - t).abs())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .map(|(i, _)| i)
            .unwrap_or(0);
        MomentSequence {
            t: self.times[idx],
            values: self.moments[idx].clone(),
        }
    }

    pub fn last(&self) -> MomentSequence<T> {
        MomentSequence {
            t: *self.times.last().expect("nonempty trajectory"),
            values: self.moments.last().expect("nonempty trajectory").clone(),
        }
    }
}

/// Polynomial coefficients of a limit equation.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyCoefficients<T> {
    pub b: Poly<T>,
    pub g2: Poly<T>,
    pub h2: Poly<T>,
    pub beta: Beta,
}

impl<T: Real> PolyCoefficients<T> {
    /// Extra moment orders each level needs beyond its own.
    pub fn closure_excess(&self) -> usize {
        let deg = |p: &Poly<T>| p.degree().unwrap_or(0);
        [
            deg(&self.b).saturating_sub(1),
            deg(&self.g2).saturating_sub(2),
            deg(&self.h2).saturating_sub(2),
        ]
        .into_iter()
        .max()
        .unwrap_or(0)
    }

    /// Right-hand side `dm_k/dt` for `k = 0..=k_max` (with `dm_0/dt = 0`).
    pub fn rhs(&self, m: &[T], out: &mut [T]) {
        let k_max = m.len() - 1;
        let half_beta = self.beta.value::<T>() * T::lit(0.5);
        let (b, g2, h2) = (self.b.coeffs(), self.g2.coeffs(), self.h2.coeffs());
        out[0] = T::zero();
        for k in 1..=k_max {
            let kt = T::from_usize_lossy(k);
            let mut drift = T::zero();
            for (j, &bj) in b.iter().enumerate() {
                drift += bj * m[k - 1 + j];
            }
            let mut inter = T::zero();
            for i in 0..k.saturating_sub(1) {
                let rest = k - 2 - i;
                for (j1, &gam) in g2.iter().enumerate() {
                    for (j2, &eta) in h2.iter().enumerate() {
                        inter += gam * eta * (m[i + j1] * m[rest + j2] + m[i + j2] * m[rest + j1]);
                    }
                }
            }
            out[k] = kt * drift + half_beta * kt * inter;
        }
    }
}

/// RK4 integration of the moment hierarchy from `m0` (which must hold
/// `m_0..m_kmax`) up to `t_final` with step `dt`. The grid is
/// `0, dt, 2dt, ..` with the last step shortened to land on `t_final`.
pub fn generic_moment_ode<T: Real>(
    coeffs: &PolyCoefficients<T>,
    m0: &[T],
    k_max: usize,
    t_final: T,
    dt: T,
) -> Result<MomentTrajectory<T>> {
    let excess = coeffs.closure_excess();
    if excess > 0 {
        return Err(Error::Truncation(format!(
            "moment m_{k_max} needs m_{} and every higher level needs {excess} more; \
             the hierarchy closes only for deg b <= 1 and deg g^2, deg h^2 <= 2",
            k_max + excess
        )));
    }
    if m0.len() < k_max + 1 {
        return Err(Error::Validation(format!(
            "initial moments up to order {k_max} required, got {}",
            m0.len().saturating_sub(1)
        )));
    }
    if !(dt > T::zero()) || !(t_final >= T::zero()) {
        return Err(Error::Validation("need dt > 0 and t_final >= 0".into()));
    }
    let len = k_max + 1;
    let mut m = m0[..len].to_vec();
    let mut times = vec![T::zero()];
    let mut moments = vec![m.clone()];
    let steps = (t_final / dt).ceil().to_usize().unwrap_or(0);
    let (mut k1, mut k2, mut k3, mut k4) = (
        vec![T::zero(); len],
        vec![T::zero(); len],
        vec![T::zero(); len],
        vec![T::zero(); len],
    );
    let mut tmp = vec![T::zero(); len];
    let half = T::lit(0.5);
    let sixth = T::one() / T::lit(6.0);
    for step in 1..=steps {
        let t_prev = *times.last().unwrap();
        let t_next = (T::from_usize_lossy(step) * dt).min(t_final);
        let h = t_next - t_prev;
        coeffs.rhs(&m, &mut k1);
        for i in 0..len {
            tmp[i] = m[i] + half * h * k1[i];
        }
        coeffs.rhs(&tmp, &mut k2);
        for i in 0..len {
            tmp[i] = m[i] + half * h * k2[i];
        }
        coeffs.rhs(&tmp, &mut k3);
        for i in 0..len {
            tmp[i] = m[i] + h * k3[i];
        }
        coeffs.rhs(&tmp, &mut k4);
        for i in 0..len {
            m[i] += h * sixth * (k1[i] + T::lit(2.0) * (k2[i] + k3[i]) + k4[i]);
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::Numerical(format!("moment hierarchy blew up at t = {t_next}")));
        }
        times.push(t_next);
        moments.push(m.clone());
    }
    Ok(MomentTrajectory { times, moments })
}

/// Moments of a point mass at `a`.
pub fn point_mass_moments<T: Real>(a: T, k_max: usize) -> Vec<T> {
    (0..=k_max).map(|k| a.powi(k as i32)).collect()
}

/// Jacobi limit coefficients `b = p − (p+q)x`, `g² = x`, `h² = 1 − x`.
pub fn jacobi_coefficients<T: Real>(p: T, q: T, beta: Beta) -> PolyCoefficients<T> {
    PolyCoefficients {
        b: Poly::new(vec![p, -(p + q)]),
        g2: Poly::new(vec![T::zero(), T::one()]),
        h2: Poly::new(vec![T::one(), -T::one()]),
        beta,
    }
}

/// Moment trajectory of the Jacobi limit started from `δ_a`, with the
/// support check `0 ≤ m_{k+1} ≤ m_k` (to `1e-6`) at every grid time.
pub fn jacobi_moments<T: Real>(
    p: T,
    q: T,
    beta: Beta,
    a: T,
    t_final: T,
    dt: T,
    k_max: usize,
) -> Result<MomentTrajectory<T>> {
    if !(a >= T::zero() && a <= T::one()) {
        return Err(Error::Validation(format!("Jacobi start must lie in [0, 1], got {a}")));
    }
    let traj = generic_moment_ode(
        &jacobi_coefficients(p, q, beta),
        &point_mass_moments(a, k_max),
        k_max,
        t_final,
        dt,
    )?;
    let tol = T::lit(1e-6);
    for (t, m) in traj.times.iter().zip(&traj.moments) {
        for k in 0..k_max {
            if m[k + 1] < -tol || m[k + 1] > m[k] + tol {
                return Err(Error::Numerical(format!(
                    "Jacobi moments left [0, 1] at t = {t}: m_{} = {}, m_{} = {} \
                     (check the drift sign)",
                    k,
                    m[k],
                    k + 1,
                    m[k + 1]
                )));
            }
        }
    }
    Ok(traj)
}
