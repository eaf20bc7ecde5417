//! Adaptive quadrature rules.

use crate::scalar::{Entry, Real};

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS_K: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const GK_WEIGHTS_G: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<T: Real, V: Entry<T>>(f: &impl Fn(T) -> V, a: T, b: T) -> (V, T) {
    let half = (b - a) * T::lit(0.5);
    let mid = (a + b) * T::lit(0.5);
    let fc = f(mid);
    let mut kron = fc.scale(T::lit(GK_WEIGHTS_K[7]));
    let mut gauss = fc.scale(T::lit(GK_WEIGHTS_G[3]));
    for i in 0..7 {
        let dx = half * T::lit(GK_NODES[i]);
        let s = f(mid - dx) + f(mid + dx);
        kron += s.scale(T::lit(GK_WEIGHTS_K[i]));
        if i % 2 == 1 {
            gauss += s.scale(T::lit(GK_WEIGHTS_G[i / 2]));
        }
    }
    let kron = kron.scale(half);
    let gauss = gauss.scale(half);
    (kron, (kron - gauss).modulus())
}

/// Adaptive Gauss–Kronrod (7/15) integral of `f` over `[a, b]`.
///
/// Subdivides until the summed error estimate is below `abs_tol`, or the
/// interval budget is spent.
pub fn gauss_kronrod<T: Real, V: Entry<T>>(f: impl Fn(T) -> V, a: T, b: T, abs_tol: T) -> V {
    if a == b {
        return V::zero();
    }
    let mut parts = vec![(a, b, gk15(&f, a, b))];
    for _ in 0..2000 {
        let total_err: T = parts.iter().map(|p| p.2 .1).sum();
        if total_err <= abs_tol {
            break;
        }
        let (worst, _) =
            parts.iter().enumerate().fold(
                (0, T::neg_infinity()),
                |best, (i, p)| {
                    if p.2 .1 > best.1 {
                        (i, p.2 .1)
                    } else {
                        best
                    }
                },
            );
        let (lo, hi, _) = parts.swap_remove(worst);
        let mid = (lo + hi) * T::lit(0.5);
        parts.push((lo, mid, gk15(&f, lo, mid)));
        parts.push((mid, hi, gk15(&f, mid, hi)));
    }
    let mut sum = V::zero();
    for p in &parts {
        sum += p.2 .0;
    }
    sum
}

/// Integral over `θ ∈ [0, π]` of a function whose even extension is smooth
/// and 2π-periodic, by the trapezoid rule with step doubling.
///
/// The trapezoid rule converges geometrically for such integrands; the
/// iteration stops once two successive refinements agree to `rel_tol`.
pub fn periodic_trapezoid<T: Real, V: Entry<T>>(f: impl Fn(T) -> V, rel_tol: T) -> V {
    let pi = T::PI();
    let half = T::lit(0.5);
    let mut m = 16usize;
    let edge_sum = (f(T::zero()) + f(pi)).scale(half);
    let mut interior = V::zero();
    for j in 1..m {
        interior += f(pi * T::from_usize_lossy(j) / T::from_usize_lossy(m));
    }
    let mut estimate = (edge_sum + interior).scale(pi / T::from_usize_lossy(m));
    let mut agreed = 0;
    while m < (1 << 22) {
        let m2 = 2 * m;
        for j in (1..m2).step_by(2) {
            interior += f(pi * T::from_usize_lossy(j) / T::from_usize_lossy(m2));
        }
        m = m2;
        let next = (edge_sum + interior).scale(pi / T::from_usize_lossy(m));
        let diff = (next - estimate).modulus();
        estimate = next;
        if diff <= rel_tol * (T::one() + next.modulus()) {
            agreed += 1;
            if agreed >= 2 {
                break;
            }
        } else {
            agreed = 0;
        }
    }
    estimate
}
