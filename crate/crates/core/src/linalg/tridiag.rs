//! Eigenvalues without eigenvectors: Householder reduction to real
//! symmetric tridiagonal form followed by implicit QL iterations.
//!
//! This is the hot path of the simulator, which only needs spectra. It
//! costs about a third of one Jacobi sweep.

use super::dense::Mat;
use crate::error::{Error, Result};
use crate::scalar::{Entry, Real};

/// Ascending eigenvalues of a Hermitian matrix. The input is consumed as
/// workspace; only its lower triangle is read.
pub fn eigenvalues_in_place<T: Real, E: Entry<T>>(a: &mut Mat<E>) -> Result<Vec<T>> {
    let n = a.n();
    let (mut d, mut e) = tridiagonalize(a);
    tql(&mut d, &mut e)?;
    d.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
    debug_assert_eq!(d.len(), n);
    Ok(d)
}

/// Reduces to tridiagonal form. Returns the real diagonal and the moduli
/// of the subdiagonal (the spectrum only depends on those).
fn tridiagonalize<T: Real, E: Entry<T>>(a: &mut Mat<E>) -> (Vec<T>, Vec<T>) {
    let n = a.n();
    let mut offdiag = vec![T::zero(); n];
    let mut v = vec![E::zero(); n];
    let mut w = vec![E::zero(); n];
    for k in 0..n.saturating_sub(2) {
        let lo = k + 1;
        let m = n - lo;
        let mut norm2 = T::zero();
        for i in lo..n {
            norm2 += a[(i, k)].norm_sqr();
        }
        let x0 = a[(lo, k)];
        let tail = norm2 - x0.norm_sqr();
        let scale_ref = T::epsilon() * T::epsilon() * (norm2 + a[(k, k)].norm_sqr());
        if tail <= scale_ref {
            offdiag[k] = x0.modulus();
            continue;
        }
        let norm = norm2.sqrt();
        let x0_abs = x0.modulus();
        let phase = if x0_abs > T::zero() {
            x0.scale(T::one() / x0_abs)
        } else {
            E::from_real(T::one())
        };
        // v = x + phase * |x| e1, H = I - tau v v*, H x = -phase |x| e1.
        for i in 0..m {
            v[i] = a[(lo + i, k)];
        }
        v[0] += phase.scale(norm);
        let vnorm2 = tail + v[0].norm_sqr();
        let tau = T::lit(2.0) / vnorm2;

        // p = tau * A22 v, using the lower triangle only.
        for i in 0..m {
            w[i] = E::zero();
        }
        for i in 0..m {
            let row = lo + i;
            let aii = a[(row, row)].re();
            let vi = v[i];
            let mut acc = vi.scale(aii);
            for j in 0..i {
                let aij = a[(row, lo + j)];
                acc += aij * v[j];
                w[j] += aij.conj() * vi;
            }
            w[i] += acc;
        }
        let mut vp = E::zero();
        for i in 0..m {
            w[i] = w[i].scale(tau);
            vp += v[i].conj() * w[i];
        }
        let kk = vp.re() * tau * T::lit(0.5);
        for i in 0..m {
            w[i] -= v[i].scale(kk);
        }
        // A22 -= v w* + w v* (lower triangle).
        for i in 0..m {
            let row = lo + i;
            let (vi, wi) = (v[i], w[i]);
            for j in 0..=i {
                let upd = vi * w[j].conj() + wi * v[j].conj();
                a[(row, lo + j)] -= upd;
            }
        }
        offdiag[k] = norm;
    }
    if n >= 2 {
        offdiag[n - 2] = a[(n - 1, n - 2)].modulus();
    }
    let diag = (0..n).map(|i| a[(i, i)].re()).collect();
    (diag, offdiag)
}

/// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.
/// `e[i]` couples `d[i]` and `d[i + 1]`; `e[n - 1]` is scratch.
fn tql<T: Real>(d: &mut [T], e: &mut [T]) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = T::zero();
    let two = T::lit(2.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Numerical("tridiagonal QL did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r } else { -r });
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok(())
}
