//! Exact moment recursions: Catalan numbers for the semicircle family, the
//! Marchenko–Pastur recursion and the geometric `w_k` polynomials.
//!
//! The recursions are written over any coefficient field, so the same code
//! produces exact `BigRational` tables and fast `f64` evaluations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::MomentSequence;
use crate::error::{validation, Result};
use crate::poly::Poly;
use crate::scalar::{Beta, Coeff, Real};

fn c_from<C: Coeff>(k: usize) -> C {
    C::from_usize(k).expect("small integer representable")
}

/// Catalan numbers `Cat(0)..=Cat(n)`.
pub fn catalan<C: Coeff>(n: usize) -> Vec<C> {
    let mut out = vec![C::one()];
    for k in 1..=n {
        let mut acc = C::zero();
        for i in 0..k {
            acc = acc + out[i].clone() * out[k - 1 - i].clone();
        }
        out.push(acc);
    }
    out
}

/// Moments `m_0..m_kmax` of the centered semicircle law reached at time `t`
/// by the flow of index `β`. Its variance is `β t / 2`: the β = 2 law at
/// time `t` is `ρ^{sc}_t`, and the β = 1 law at time `t` equals the β = 2
/// law at time `t / 2`. Even moments are `Cat(j) (βt/2)^j`.
pub fn semicircle_moments<T: Real>(t: T, beta: Beta, k_max: usize) -> MomentSequence<T> {
    let var = beta.value::<T>() * t * T::lit(0.5);
    let cat = catalan::<T>(k_max / 2);
    let values = (0..=k_max)
        .map(|k| {
            if k % 2 == 1 {
                T::zero()
            } else {
                cat[k / 2] * var.powi((k / 2) as i32)
            }
        })
        .collect();
    MomentSequence { t, values }
}

/// Edges `(a, b) = ((1 − √α)², (1 + √α)²)` of the Marchenko–Pastur law.
pub fn mp_params<T: Real>(alpha: T) -> Result<(T, T)> {
    if !(alpha >= T::zero()) {
        return Err(validation(format!(
            "Marchenko-Pastur parameter must be >= 0, got {alpha}"
        )));
    }
    let s = alpha.sqrt();
    Ok(((T::one() - s).powi(2), (T::one() + s).powi(2)))
}

/// Moment polynomials `m_k(t)`, `k = 0..=k_max`, of the Wishart limit
/// equation with drift `α` and index `β`:
///
/// `m_k(t) = α k ∫_0^t m_{k−1} + β k Σ_{i=0}^{k−2} ∫_0^t m_{i+1} m_{k−2−i}`.
///
/// Every `m_k` is `c_k t^k`; the table keeps the full polynomial form.
pub fn mp_moment_polys<C: Coeff>(alpha: C, beta: C, k_max: usize) -> Vec<Poly<C>> {
    let mut m: Vec<Poly<C>> = vec![Poly::constant(C::one())];
    for k in 1..=k_max {
        let kc: C = c_from(k);
        let mut integrand = m[k - 1].scale(&(alpha.clone() * kc.clone()));
        let mut pair_sum = Poly::zero();
        for i in 0..k.saturating_sub(1) {
            pair_sum = &pair_sum + &(&m[i + 1] * &m[k - 2 - i]);
        }
        integrand = &integrand + &pair_sum.scale(&(beta.clone() * kc));
        m.push(integrand.integral());
    }
    m
}

/// Exact rational form of a finite `f64` (binary fractions are exact).
pub fn exact<T: Real>(x: T) -> Result<BigRational> {
    BigRational::from_float(x.to_f64_lossy()).ok_or_else(|| validation(format!("{x} has no exact rational form")))
}

/// Moments of the Wishart limit at time `t`, evaluated from the exact
/// polynomial table.
pub fn mp_moments<T: Real>(alpha: T, beta: Beta, t: T, k_max: usize) -> Result<MomentSequence<T>> {
    mp_params(alpha)?;
    let beta_exact = BigRational::from_integer(BigInt::from(beta.index()));
    let polys = mp_moment_polys(exact(alpha)?, beta_exact, k_max);
    let t_exact = exact(t)?;
    let values = polys
        .iter()
        .map(|p| T::lit(p.eval(&t_exact).to_f64().unwrap_or(f64::NAN)))
        .collect();
    Ok(MomentSequence { t, values })
}

/// Same moments evaluated in floating point (no exact conversion).
pub fn mp_moments_float<T: Real>(alpha: T, beta: T, t: T, k_max: usize) -> Vec<T> {
    mp_moment_polys(alpha, beta, k_max).iter().map(|p| p.eval(&t)).collect()
}

/// Polynomials `w_1..w_kmax` with `w_k' = k Σ_{i=0}^{k−2} w_{i+1} w_{k−1−i}`
/// and `w_k(0) = 1`. Entry `k − 1` holds `w_k`.
pub fn geometric_w<C: Coeff>(k_max: usize) -> Vec<Poly<C>> {
    let mut w: Vec<Poly<C>> = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let mut deriv = Poly::zero();
        for i in 0..k.saturating_sub(1) {
            // w_{i+1} w_{k-1-i}, 1-based.
            deriv = &deriv + &(&w[i] * &w[k - 2 - i]);
        }
        let wk = &deriv.scale(&c_from(k)).integral() + &Poly::constant(C::one());
        w.push(wk);
    }
    w
}

/// `m_k(t) = a^k w_k(tβ) e^{kαt}`, `k = 0..=k_max`.
pub fn geometric_moments<T: Real>(a: T, alpha: T, beta: Beta, t: T, k_max: usize) -> MomentSequence<T> {
    let w = geometric_w::<T>(k_max);
    let x = t * beta.value::<T>();
    let mut values = vec![T::one()];
    for k in 1..=k_max {
        let kt = T::from_usize_lossy(k);
        values.push(a.powi(k as i32) * w[k - 1].eval(&x) * (kt * alpha * t).exp());
    }
    MomentSequence { t, values }
}

/// `k! 9^{k−1} (1 + x)^{k−1}`, the growth bound for `w_k(x)`, `x ≥ 0`.
pub fn geometric_w_bound<T: Real>(k: usize, x: T) -> T {
    let mut fact = T::one();
    for i in 2..=k {
        fact *= T::from_usize_lossy(i);
    }
    fact * (T::lit(9.0) * (T::one() + x)).powi(k as i32 - 1)
}
