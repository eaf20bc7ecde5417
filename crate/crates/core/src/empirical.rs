//! Empirical spectral measures, distances to limit laws and residuals of the
//! measure evolution equations.

use crate::error::{validation, Result};
use crate::flow::{EigenPath, FlowSpec};
use crate::limits::{LawParts, LimitLaw};
use crate::linalg::SpectralFunction;
use crate::poly::Poly;
use crate::scalar::{Beta, Real};

/// Number of uniform nodes of the W1 grid.
const W1_GRID: usize = 4000;

/// Highest polynomial degree accepted by the residual checks.
pub const MAX_TEST_DEGREE: usize = 12;

/// Uniform probability measure on a finite set of atoms.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalMeasure<T> {
    atoms: Vec<T>,
}

impl<T: Real> EmpiricalMeasure<T> {
    /// Sorts the atoms; they must be finite.
    pub fn new(mut atoms: Vec<T>) -> Result<Self> {
        if atoms.is_empty() || atoms.iter().any(|x| !x.is_finite()) {
            return Err(validation("an empirical measure needs at least one finite atom"));
        }
        atoms.sort_by(|a, b| a.partial_cmp(b).expect("finite atoms"));
        Ok(EmpiricalMeasure { atoms })
    }

    /// The midpoint quantiles of `law`.
    pub fn from_law_quantiles(law: &LimitLaw<T>, count: usize) -> Result<Self> {
        Self::new(law.quantiles(count)?)
    }

    pub fn atoms(&self) -> &[T] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    fn weight(&self) -> T {
        T::one() / T::from_usize_lossy(self.atoms.len())
    }

    /// `(1/n) Σ f(x_i)`.
    pub fn mean(&self, f: impl Fn(T) -> T) -> T {
        self.atoms.iter().map(|&x| f(x)).sum::<T>() * self.weight()
    }

    pub fn moment(&self, k: usize) -> T {
        if k == 0 {
            return T::one();
        }
        self.mean(|x| x.powi(k as i32))
    }

    /// Moments `m_0..=m_kmax`.
    pub fn moments(&self, k_max: usize) -> Vec<T> {
        let mut acc = vec![T::zero(); k_max + 1];
        for &x in &self.atoms {
            let mut p = T::one();
            for a in acc.iter_mut() {
                *a += p;
                p *= x;
            }
        }
        let w = self.weight();
        let mut out: Vec<T> = acc.into_iter().map(|a| a * w).collect();
        out[0] = T::one();
        out
    }

    /// `P(X ≤ x)`.
    pub fn cdf(&self, x: T) -> T {
        let k = self.atoms.partition_point(|&a| a <= x);
        T::from_usize_lossy(k) * self.weight()
    }

    /// `P(X < x)`.
    pub fn cdf_left(&self, x: T) -> T {
        let k = self.atoms.partition_point(|&a| a < x);
        T::from_usize_lossy(k) * self.weight()
    }

    /// Mass on the open negative half-line.
    pub fn negative_mass(&self) -> T {
        self.cdf_left(T::zero())
    }
}

/// Empirical measures on a time grid.
#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalMeasureProcess<T> {
    pub t_grid: Vec<T>,
    pub measures: Vec<EmpiricalMeasure<T>>,
}

impl<T: Real> EmpiricalMeasureProcess<T> {
    pub fn new(t_grid: Vec<T>, measures: Vec<EmpiricalMeasure<T>>) -> Result<Self> {
        if t_grid.is_empty() || t_grid.len() != measures.len() {
            return Err(validation("time grid and measures must be nonempty and aligned"));
        }
        if t_grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(validation("time grid must be strictly ascending"));
        }
        let n = measures[0].len();
        if measures.iter().any(|m| m.len() != n) {
            return Err(validation("all measures must have the same atom count"));
        }
        Ok(EmpiricalMeasureProcess { t_grid, measures })
    }

    pub fn from_path(path: &EigenPath<T>) -> Result<Self> {
        let measures = path
            .spectra
            .iter()
            .map(|s| EmpiricalMeasure::new(s.clone()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(path.t_grid.clone(), measures)
    }

    /// `law` moved along its family over `t_grid`, each time discretized
    /// on `count` midpoint quantiles.
    pub fn from_law_family(law: &LimitLaw<T>, t_grid: &[T], count: usize) -> Result<Self> {
        let measures = t_grid
            .iter()
            .map(|&t| EmpiricalMeasure::from_law_quantiles(&law.at_time(t), count))
            .collect::<Result<Vec<_>>>()?;
        Self::new(t_grid.to_vec(), measures)
    }
}

/// Kolmogorov–Smirnov distance `sup_x |F_emp(x) − F_law(x)|`.
///
/// Both CDFs are right-continuous step-plus-continuous functions, so the
/// supremum is attained as a one-sided limit at a jump of either; those
/// are all evaluated, which honors atoms of the law.
pub fn ks_distance<T: Real>(m: &EmpiricalMeasure<T>, law: &LimitLaw<T>) -> Result<T> {
    let parts = law.parts()?;
    Ok(ks_distance_parts(m, &parts))
}

/// [`ks_distance`] against explicit law parts.
pub fn ks_distance_parts<T: Real>(m: &EmpiricalMeasure<T>, parts: &LawParts<T>) -> T {
    let mut worst = T::zero();
    let points = m.atoms().iter().copied().chain(parts.atoms.iter().map(|a| a.0));
    for x in points {
        worst = worst
            .max((m.cdf(x) - parts.cdf(x)).abs())
            .max((m.cdf_left(x) - parts.cdf_left(x)).abs());
    }
    worst
}

/// `W1 = ∫ |F_emp − F_law| dx`.
///
/// Integration runs over a 4000-node uniform grid spanning both supports,
/// refined by every atom of either measure. On each cell the empirical CDF
/// is constant and `|F_emp − F_law|` is integrated by Simpson's rule using
/// the one-sided law CDF values at the cell ends.
pub fn wasserstein1<T: Real>(m: &EmpiricalMeasure<T>, law: &LimitLaw<T>) -> Result<T> {
    let parts = law.parts()?;
    Ok(wasserstein1_parts(m, &parts))
}

/// [`wasserstein1`] against explicit law parts.
pub fn wasserstein1_parts<T: Real>(m: &EmpiricalMeasure<T>, parts: &LawParts<T>) -> T {
    let (law_lo, law_hi) = parts.support();
    let lo = law_lo.min(m.atoms()[0]);
    let hi = law_hi.max(*m.atoms().last().expect("nonempty"));
    if hi <= lo {
        return T::zero();
    }
    let mut nodes: Vec<T> = (0..=W1_GRID)
        .map(|i| lo + (hi - lo) * T::from_usize_lossy(i) / T::from_usize_lossy(W1_GRID))
        .collect();
    nodes.extend_from_slice(m.atoms());
    nodes.extend(parts.atoms.iter().map(|a| a.0));
    nodes.sort_by(|a, b| a.partial_cmp(b).expect("finite nodes"));
    nodes.dedup();
    let sixth = T::one() / T::lit(6.0);
    let mut total = T::zero();
    let mut f_right = parts.cdf(nodes[0]);
    for w in nodes.windows(2) {
        let (a, b) = (w[0], w[1]);
        let e = m.cdf(a);
        let mid = (a + b) * T::lit(0.5);
        let f_mid = parts.cdf(mid);
        let f_left_b = parts.cdf_left(b);
        total += (b - a) * sixth * ((e - f_right).abs() + T::lit(4.0) * (e - f_mid).abs() + (e - f_left_b).abs());
        f_right = parts.cdf(b);
    }
    total
}

/// Separable moment sums of one measure used by both residuals.
struct DriftTerms<T> {
    /// `∫ b f' dμ`.
    drift: T,
    /// `∫∫ (f'(x) − f'(y))/(x − y) G(x, y) μ(dx) μ(dy)` with the diagonal
    /// value `f''(x)`.
    interaction: T,
    /// `∫ f''(x) G(x, x) μ(dx)`.
    diagonal: T,
}

/// Coefficient functions as evaluated on atoms.
struct Coefficients<'a, T> {
    g2: &'a dyn Fn(T) -> T,
    h2: &'a dyn Fn(T) -> T,
    b: &'a dyn Fn(T) -> T,
}

fn drift_terms<T: Real>(m: &EmpiricalMeasure<T>, f: &Poly<T>, c: &Coefficients<'_, T>) -> DriftTerms<T> {
    let deg = f.degree().unwrap_or(0);
    let fp = f.derivative();
    let fpp = fp.derivative();
    // S_g[a] = ∫ x^a g², S_h[a] = ∫ x^a h², a ≤ deg − 2.
    let len = deg.saturating_sub(1);
    let mut sg = vec![T::zero(); len];
    let mut sh = vec![T::zero(); len];
    let mut drift = T::zero();
    let mut diagonal = T::zero();
    for &x in m.atoms() {
        let (g2, h2) = ((c.g2)(x), (c.h2)(x));
        drift += (c.b)(x) * fp.eval(&x);
        diagonal += fpp.eval(&x) * T::lit(2.0) * g2 * h2;
        let mut p = T::one();
        for a in 0..len {
            sg[a] += p * g2;
            sh[a] += p * h2;
            p *= x;
        }
    }
    let w = T::one() / T::from_usize_lossy(m.len());
    for a in 0..len {
        sg[a] *= w;
        sh[a] *= w;
    }
    // (f'(x) − f'(y))/(x − y) = Σ_k k f_k Σ_{a+c=k−2} x^a y^c
    let mut interaction = T::zero();
    for k in 2..=deg {
        let kf = T::from_usize_lossy(k) * f.coeff(k);
        if kf == T::zero() {
            continue;
        }
        let mut s = T::zero();
        for a in 0..=k - 2 {
            s += sg[a] * sh[k - 2 - a] + sh[a] * sg[k - 2 - a];
        }
        interaction += kf * s;
    }
    DriftTerms {
        drift: drift * w,
        interaction,
        diagonal: diagonal * w,
    }
}

/// Trapezoid cumulative integral on `t`.
fn cumulative<T: Real>(t: &[T], y: &[T]) -> Vec<T> {
    let mut out = vec![T::zero(); t.len()];
    for i in 1..t.len() {
        out[i] = out[i - 1] + (t[i] - t[i - 1]) * (y[i] + y[i - 1]) * T::lit(0.5);
    }
    out
}

fn check_degree<T: Real>(f: &Poly<T>) -> Result<()> {
    if f.degree().unwrap_or(0) > MAX_TEST_DEGREE {
        return Err(validation(format!(
            "test polynomial degree must be at most {MAX_TEST_DEGREE}"
        )));
    }
    Ok(())
}

/// Largest `|LHS − RHS|` over grid times of the limit equation
///
/// `⟨μ_t, f⟩ = ⟨μ_0, f⟩ + ∫_0^t ⟨μ_s, b f'⟩ ds
///   + (β/2) ∫_0^t ∫∫ (f'(x) − f'(y))/(x − y) G(x, y) μ_s(dx) μ_s(dy) ds`,
///
/// `G(x, y) = g²(x) h²(y) + g²(y) h²(x)`. Space integrals are exact atom
/// sums (the kernel is expanded in monomials, which covers the diagonal);
/// time integrals use the trapezoid rule on the grid.
pub fn limit_equation_residual<T: Real>(
    proc: &EmpiricalMeasureProcess<T>,
    f: &Poly<T>,
    g2: &SpectralFunction<T>,
    h2: &SpectralFunction<T>,
    b: &SpectralFunction<T>,
    beta: Beta,
) -> Result<T> {
    check_degree(f)?;
    let (eg, eh, eb) = (|x| g2.eval(x), |x| h2.eval(x), |x| b.eval(x));
    let coeffs = Coefficients {
        g2: &eg,
        h2: &eh,
        b: &eb,
    };
    let half_beta = beta.value::<T>() * T::lit(0.5);
    let rate: Vec<T> = proc
        .measures
        .iter()
        .map(|m| {
            let d = drift_terms(m, f, &coeffs);
            d.drift + half_beta * d.interaction
        })
        .collect();
    let integral = cumulative(&proc.t_grid, &rate);
    let f0 = proc.measures[0].mean(|x| f.eval(&x));
    let mut worst = T::zero();
    for (m, int) in proc.measures.iter().zip(&integral) {
        let r = m.mean(|x| f.eval(&x)) - f0 - *int;
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

/// Time-integrated drift terms of the finite-`n` semimartingale
/// decomposition of `⟨μ_t^{(n)}, f⟩`, one entry per grid time.
#[derive(Clone, Debug, PartialEq)]
pub struct EmDecomposition<T> {
    pub t_grid: Vec<T>,
    /// `⟨μ_t, f⟩ − ⟨μ_0, f⟩`.
    pub change: Vec<T>,
    /// `∫ ⟨μ_s, (1/n) b_n f'⟩ ds`.
    pub drift: Vec<T>,
    /// `(2 − β)/(2n) ∫ ⟨μ_s, f'' G_n(x, x)⟩ ds`.
    pub correction: Vec<T>,
    /// `(β/2) ∫ ∫∫ (f'(x) − f'(y))/(x − y) G_n μ_s μ_s ds`.
    pub interaction: Vec<T>,
    /// What is left for the martingale part (plus time discretization).
    pub martingale: Vec<T>,
}

impl<T: Real> EmDecomposition<T> {
    /// Final-time value of each term, `(drift, correction, interaction, martingale)`.
    pub fn last(&self) -> (T, T, T, T) {
        let i = self.t_grid.len() - 1;
        (
            self.drift[i],
            self.correction[i],
            self.interaction[i],
            self.martingale[i],
        )
    }
}

pub fn em_sde_decomposition<T: Real>(
    proc: &EmpiricalMeasureProcess<T>,
    f: &Poly<T>,
    spec: &FlowSpec<T>,
) -> Result<EmDecomposition<T>> {
    check_degree(f)?;
    let sq = |s: &SpectralFunction<T>, x: T| {
        let v = s.eval(x);
        v * v
    };
    let scale = spec.drift_scale();
    let (eg, eh, eb) = (|x| sq(&spec.g, x), |x| sq(&spec.h, x), |x| scale * spec.b.eval(x));
    let coeffs = Coefficients {
        g2: &eg,
        h2: &eh,
        b: &eb,
    };
    let beta = spec.beta.value::<T>();
    let n = T::from_usize_lossy(spec.n);
    let corr_factor = (T::lit(2.0) - beta) / (T::lit(2.0) * n);
    let (mut dr, mut co, mut it) = (Vec::new(), Vec::new(), Vec::new());
    for m in &proc.measures {
        let d = drift_terms(m, f, &coeffs);
        dr.push(d.drift);
        co.push(corr_factor * d.diagonal);
        it.push(beta * T::lit(0.5) * d.interaction);
    }
    let drift = cumulative(&proc.t_grid, &dr);
    let correction = cumulative(&proc.t_grid, &co);
    let interaction = cumulative(&proc.t_grid, &it);
    let f0 = proc.measures[0].mean(|x| f.eval(&x));
    let change: Vec<T> = proc.measures.iter().map(|m| m.mean(|x| f.eval(&x)) - f0).collect();
    let martingale = (0..change.len())
        .map(|i| change[i] - drift[i] - correction[i] - interaction[i])
        .collect();
    Ok(EmDecomposition {
        t_grid: proc.t_grid.clone(),
        change,
        drift,
        correction,
        interaction,
        martingale,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moment_examples() {
        let m = EmpiricalMeasure::new(vec![1.0, -1.0]).unwrap();
        assert_eq!(m.moment(2), 1.0);
        assert_eq!(m.moment(0), 1.0);
        let m = EmpiricalMeasure::new(vec![3.0, 1.0, 2.0]).unwrap();
        assert_eq!(m.moment(1), 2.0);
        let ms: Vec<f64> = m.moments(2);
        assert_eq!(ms[..2], [1.0, 2.0]);
        assert!((ms[2] - 14.0 / 3.0).abs() < 1e-15);
        assert_eq!(m.atoms(), &[1.0, 2.0, 3.0]);
        assert!(EmpiricalMeasure::<f64>::new(vec![]).is_err());
    }

    #[test]
    fn cdf_is_right_continuous() {
        let m = EmpiricalMeasure::new(vec![0.0, 1.0, 1.0, 2.0]).unwrap();
        assert_eq!(m.cdf(1.0), 0.75);
        assert_eq!(m.cdf_left(1.0), 0.25);
        assert_eq!(m.cdf(-1.0), 0.0);
        assert_eq!(m.negative_mass(), 0.0);
    }

    #[test]
    fn point_mass_distances_vanish() {
        let m = EmpiricalMeasure::new(vec![0.0f64]).unwrap();
        let law = LimitLaw::PointMass { a: 0.0 };
        assert_eq!(ks_distance(&m, &law).unwrap(), 0.0);
        assert_eq!(wasserstein1(&m, &law).unwrap(), 0.0);
        let shifted = LimitLaw::PointMass { a: 0.5 };
        assert_eq!(ks_distance(&m, &shifted).unwrap(), 1.0);
        assert!((wasserstein1(&m, &shifted).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn frozen_residual_is_zero() {
        let m = EmpiricalMeasure::new(vec![0.3, -0.2, 1.1]).unwrap();
        let proc = EmpiricalMeasureProcess::new(vec![0.0, 0.5, 1.0], vec![m.clone(), m.clone(), m]).unwrap();
        let zero = SpectralFunction::zero();
        let f = Poly::new(vec![0.0, 1.0, 0.0, 2.0, 1.0]);
        let r = limit_equation_residual(&proc, &f, &zero, &zero, &zero, Beta::Complex).unwrap();
        assert_eq!(r, 0.0);
        let too_high = Poly::monomial(1.0, 13);
        assert!(limit_equation_residual(&proc, &too_high, &zero, &zero, &zero, Beta::Real).is_err());
    }

    #[test]
    fn separable_kernel_matches_pair_sum() {
        let atoms = vec![-0.7, 0.1, 0.4, 1.3, 2.0];
        let m = EmpiricalMeasure::new(atoms.clone()).unwrap();
        let f = Poly::new(vec![0.5, -1.0, 0.3, 0.0, 0.2, -0.1]);
        let g2 = |x: f64| x.abs();
        let h2 = |x: f64| 1.0 + x * x;
        let b = |_: f64| 0.0;
        let d = drift_terms(
            &m,
            &f,
            &Coefficients {
                g2: &g2,
                h2: &h2,
                b: &b,
            },
        );
        let fp = f.derivative();
        let fpp = fp.derivative();
        let mut want = 0.0f64;
        for &x in &atoms {
            for &y in &atoms {
                let k = if x == y {
                    fpp.eval(&x)
                } else {
                    (fp.eval(&x) - fp.eval(&y)) / (x - y)
                };
                want += k * (g2(x) * h2(y) + g2(y) * h2(x));
            }
        }
        want /= 25.0;
        assert!((d.interaction - want).abs() < 1e-12);
    }
}
