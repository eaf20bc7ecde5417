//! Elementary symmetric polynomials, power sums and the algebraic identities
//! behind the eigenvalue drift computations.

use crate::error::{validation, Error, Result};
use crate::linalg::SpectralFunction;
use crate::scalar::{Beta, Real};

/// `e_0..e_n` and `p_1..p_K` of one spectrum.
#[derive(Clone, Debug, PartialEq)]
pub struct SymPolyVector<T> {
    pub n: usize,
    /// `e[k] = e_k`, length `n + 1`.
    pub e: Vec<T>,
    /// `p[k - 1] = p_k`, length `K`.
    pub p: Vec<T>,
}

impl<T: Real> SymPolyVector<T> {
    pub fn new(lambda: &[T], k_max: usize) -> Self {
        SymPolyVector {
            n: lambda.len(),
            e: elementary_symmetric(lambda),
            p: power_sums(lambda, k_max),
        }
    }

    /// `e_k`, zero for `k > n`.
    pub fn e(&self, k: usize) -> T {
        self.e.get(k).copied().unwrap_or_else(T::zero)
    }

    /// `p_k` for `1 ≤ k ≤ K`.
    pub fn p(&self, k: usize) -> T {
        self.p[k - 1]
    }
}

/// `e_0..e_n` by the prefix recurrence `e_k ← e_k + λ e_{k−1}`.
pub fn elementary_symmetric<T: Real>(lambda: &[T]) -> Vec<T> {
    let n = lambda.len();
    let mut e = vec![T::zero(); n + 1];
    e[0] = T::one();
    for (m, &x) in lambda.iter().enumerate() {
        for k in (1..=m + 1).rev() {
            let prev = e[k - 1];
            e[k] += x * prev;
        }
    }
    e
}

/// `p_1..p_K` with `p_k = Σ λ_i^k`; entry `k − 1` holds `p_k`.
pub fn power_sums<T: Real>(lambda: &[T], k_max: usize) -> Vec<T> {
    let mut p = vec![T::zero(); k_max];
    for &x in lambda {
        let mut pow = T::one();
        for pk in p.iter_mut() {
            pow *= x;
            *pk += pow;
        }
    }
    p
}

/// `|p_k − Σ_{i<k} (−1)^{i−1} e_i p_{k−i} − (−1)^{k−1} k e_k| / (1 + |p_k|)`.
///
/// `e` is `e_0..e_n` (missing entries count as zero) and `p` is `p_1..p_K`.
pub fn newton_residual<T: Real>(e: &[T], p: &[T], k: usize) -> T {
    assert!(k >= 1 && k <= p.len(), "need 1 <= k <= K");
    let ei = |i: usize| e.get(i).copied().unwrap_or_else(T::zero);
    let mut rhs = T::zero();
    for i in 1..k {
        let term = ei(i) * p[k - i - 1];
        if i % 2 == 1 {
            rhs += term;
        } else {
            rhs -= term;
        }
    }
    let last = T::from_usize_lossy(k) * ei(k);
    if k % 2 == 1 {
        rhs += last;
    } else {
        rhs -= last;
    }
    (p[k - 1] - rhs).abs() / (T::one() + p[k - 1].abs())
}

/// `G(x, y) = g²(x) h²(y) + g²(y) h²(x)`.
pub fn interaction<T: Real>(g: &SpectralFunction<T>, h: &SpectralFunction<T>, x: T, y: T) -> T {
    let (gx, gy, hx, hy) = (g.eval(x), g.eval(y), h.eval(x), h.eval(y));
    gx * gx * hy * hy + gy * gy * hx * hx
}

fn check_distinct<T: Real>(lambda: &[T]) -> Result<()> {
    let mut sorted = lambda.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(validation(format!("coincident eigenvalues at {:e}", w[0])));
    }
    Ok(())
}

/// Relative gap between the singular pair sum
/// `Σ_i λ_i^{k−1} Σ_{j≠i} G(λ_i, λ_j) / (λ_i − λ_j)` and its symmetrized
/// form `Σ_{i<j} (Σ_{l=0}^{k−2} λ_i^l λ_j^{k−2−l}) G(λ_i, λ_j)`.
pub fn pairwise_drift_identity_residual<T: Real>(
    lambda: &[T],
    g: &SpectralFunction<T>,
    h: &SpectralFunction<T>,
    k: usize,
) -> Result<T> {
    if k < 2 {
        return Err(validation("pairwise identity needs k >= 2"));
    }
    check_distinct(lambda)?;
    let n = lambda.len();
    let mut lhs = T::zero();
    for i in 0..n {
        let li = lambda[i];
        let mut inner = T::zero();
        for j in 0..n {
            if j != i {
                inner += interaction(g, h, li, lambda[j]) / (li - lambda[j]);
            }
        }
        lhs += li.powi(k as i32 - 1) * inner;
    }
    let mut rhs = T::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            let (a, b) = (lambda[i], lambda[j]);
            let mut kernel = T::zero();
            for l in 0..=(k - 2) {
                kernel += a.powi(l as i32) * b.powi((k - 2 - l) as i32);
            }
            rhs += kernel * interaction(g, h, a, b);
        }
    }
    Ok((lhs - rhs).abs() / (T::one() + rhs.abs()))
}

/// Elementary symmetric polynomials of the spectrum with the listed indices
/// removed, recomputed from scratch (no division by `λ_i`).
pub fn incomplete_elementary<T: Real>(lambda: &[T], removed: &[usize]) -> Vec<T> {
    let kept: Vec<T> = lambda
        .iter()
        .enumerate()
        .filter(|(i, _)| !removed.contains(i))
        .map(|(_, &x)| x)
        .collect();
    elementary_symmetric(&kept)
}

/// `e_{n−1}` of the spectrum with `λ_i` removed, for every `i`.
pub fn e_top_without_one<T: Real>(lambda: &[T]) -> Vec<T> {
    let n = lambda.len();
    (0..n).map(|i| incomplete_elementary(lambda, &[i])[n - 1]).collect()
}

/// `e_{n−2}` of the spectrum with `λ_i, λ_j` removed, indexed `[i][j]`
/// (symmetric, zero diagonal).
pub fn e_top_without_two<T: Real>(lambda: &[T]) -> Vec<Vec<T>> {
    let n = lambda.len();
    let mut out = vec![vec![T::zero(); n]; n];
    if n < 2 {
        return out;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let v = incomplete_elementary(lambda, &[i, j])[n - 2];
            out[i][j] = v;
            out[j][i] = v;
        }
    }
    out
}

/// Relative residuals of the three incomplete-polynomial relations
/// `λ_i e_{n−1}^{(i)} = e_n` (worst over `i`), `Σ_i e_{n−1}^{(i)} = e_{n−1}`
/// and `Σ_{i<j} (λ_i + λ_j) e_{n−2}^{(i,j)} = (n − 1) e_{n−1}`.
pub fn incomplete_relation_residuals<T: Real>(lambda: &[T]) -> [T; 3] {
    let n = lambda.len();
    let e = elementary_symmetric(lambda);
    let rel = |a: T, b: T| (a - b).abs() / (T::one() + b.abs());
    if n == 0 {
        return [T::zero(); 3];
    }
    let top1 = e_top_without_one(lambda);
    let first = lambda
        .iter()
        .zip(&top1)
        .map(|(&l, &t)| rel(l * t, e[n]))
        .fold(T::zero(), T::max);
    let second = rel(top1.iter().copied().sum(), e[n - 1]);
    let top2 = e_top_without_two(lambda);
    let mut pair_sum = T::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            pair_sum += (lambda[i] + lambda[j]) * top2[i][j];
        }
    }
    let third = rel(pair_sum, T::from_usize_lossy(n - 1) * e[n - 1]);
    [first, second, third]
}

/// Finite-variation coefficient of `log e_n` along the scaled eigenvalue
/// flow with coefficients `g, h, b` at scale `n`:
///
/// `−(2 / (n e_n²)) Σ g²h²(λ_i) (e_{n−1}^{(i)})²
///   + (1 / (n e_n)) [Σ b(λ_i) e_{n−1}^{(i)} − β Σ_{i<j} G(λ_i, λ_j) e_{n−2}^{(i,j)}]`.
pub fn log_det_drift<T: Real>(
    lambda: &[T],
    g: &SpectralFunction<T>,
    h: &SpectralFunction<T>,
    b: &SpectralFunction<T>,
    beta: Beta,
    n: T,
) -> Result<T> {
    if let Some(x) = lambda.iter().find(|&&x| !(x > T::zero())) {
        return Err(Error::Domain(format!(
            "log-determinant drift needs a positive spectrum, found {x:e}"
        )));
    }
    let m = lambda.len();
    let e_n = elementary_symmetric(lambda)[m];
    let top1 = e_top_without_one(lambda);
    let top2 = e_top_without_two(lambda);
    let mut quad = T::zero();
    let mut drift = T::zero();
    for i in 0..m {
        let (gi, hi) = (g.eval(lambda[i]), h.eval(lambda[i]));
        quad += gi * gi * hi * hi * top1[i] * top1[i];
        drift += b.eval(lambda[i]) * top1[i];
    }
    let mut pairs = T::zero();
    for i in 0..m {
        for j in (i + 1)..m {
            pairs += interaction(g, h, lambda[i], lambda[j]) * top2[i][j];
        }
    }
    let two = T::lit(2.0);
    Ok(-two * quad / (n * e_n * e_n) + (drift - beta.value::<T>() * pairs) / (n * e_n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_examples() {
        assert_eq!(elementary_symmetric(&[1.0, 2.0, 3.0]), vec![1.0, 6.0, 11.0, 6.0]);
        assert_eq!(elementary_symmetric(&[0.0; 4]), vec![1.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(elementary_symmetric(&[2.5]), vec![1.0, 2.5]);
    }

    #[test]
    fn power_sum_examples() {
        assert_eq!(power_sums(&[1.0, 2.0, 3.0], 2), vec![6.0, 14.0]);
        assert_eq!(power_sums(&[-1.0, 1.0], 3), vec![0.0, 2.0, 0.0]);
    }

    #[test]
    fn newton_on_all_ones() {
        let n = 12;
        let lambda = vec![1.0; n];
        let s = SymPolyVector::new(&lambda, n);
        for k in 1..=n {
            assert!(newton_residual(&s.e, &s.p, k) <= 1e-12);
        }
        assert_eq!(s.p(1), s.e(1));
    }

    #[test]
    fn pairwise_hand_example() {
        // n = 2, λ = (1, 2), G ≡ 2, k = 3:
        // LHS = 1·2/(1−2) + 4·2/(2−1) = 6, RHS = (1 + 2)·2 = 6.
        let one = SpectralFunction::Constant(1.0);
        let r = pairwise_drift_identity_residual(&[1.0, 2.0], &one, &one, 3).unwrap();
        assert!(r <= 1e-12);
    }

    #[test]
    fn pairwise_rejects_collisions() {
        let one = SpectralFunction::Constant(1.0);
        assert!(pairwise_drift_identity_residual(&[1.0, 1.0], &one, &one, 2).is_err());
        assert!(pairwise_drift_identity_residual(&[1.0, 2.0], &one, &one, 1).is_err());
    }

    #[test]
    fn log_det_drift_single_eigenvalue() {
        let (g, h, b) = (
            SpectralFunction::SqrtAbs,
            SpectralFunction::Constant(1.5),
            SpectralFunction::Affine { a: 0.5, b: 2.0 },
        );
        let x: f64 = 0.7;
        let got = log_det_drift(&[x], &g, &h, &b, Beta::Complex, 1.0).unwrap();
        let expected = b.eval(x) / x - 2.0 * x * 2.25 / (x * x);
        assert!((got - expected).abs() < 1e-12);
    }

    #[test]
    fn log_det_drift_all_ones_constant_coefficients() {
        // λ = 1 (m times), g = h = c, b = d: e_{m−1}^(i) = e_{m−2}^(i,j) = e_m = 1,
        // drift = (−2 m c⁴ + m d − β C(m,2) 2c⁴) / n.
        let (c, d, m, n) = (0.8f64, 3.0, 5usize, 7.0);
        let g = SpectralFunction::Constant(c);
        let b = SpectralFunction::Constant(d);
        let got = log_det_drift(&vec![1.0; m], &g, &g, &b, Beta::Real, n).unwrap();
        let mf = m as f64;
        let c4 = c.powi(4);
        let expected = (-2.0 * mf * c4 + mf * d - (mf * (mf - 1.0) / 2.0) * 2.0 * c4) / n;
        assert!((got - expected).abs() < 1e-12);
    }

    #[test]
    fn log_det_drift_domain() {
        let one = SpectralFunction::Constant(1.0);
        assert!(matches!(
            log_det_drift(&[1.0, 0.0], &one, &one, &one, Beta::Real, 2.0),
            Err(Error::Domain(_))
        ));
    }
}
