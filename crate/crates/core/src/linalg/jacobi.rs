//! Cyclic Jacobi eigensolver for real symmetric and complex Hermitian
//! matrices.
//!
//! Complex pairs are handled natively: the off-diagonal entry `h = A[p][q]`
//! is first made real by a diagonal phase on index `q`, after which a real
//! plane rotation annihilates it.

use super::dense::Mat;
use crate::error::{Error, Result};
use crate::scalar::{Entry, Real};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues (ascending) and the matching orthonormal eigenvector columns.
pub fn jacobi_eigen<T: Real, E: Entry<T>>(m: &Mat<E>) -> Result<(Vec<T>, Mat<E>)> {
    let n = m.n();
    let mut a = m.clone();
    let mut v = Mat::<E>::identity(n);
    for i in 0..n {
        a[(i, i)] = E::from_real(a[(i, i)].re());
    }
    if n <= 1 {
        return Ok((a.diag_re(), v));
    }

    let total: T = a.as_slice().iter().map(|x| x.norm_sqr()).sum();
    let floor = T::epsilon() * T::epsilon() * total;
    let n_t = T::from_usize_lossy(n);
    for sweep in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off <= floor || off == T::zero() {
            return Ok(sorted(a.diag_re(), v));
        }
        // Skip small entries during the first sweeps.
        let thresh = if sweep < 3 {
            T::lit(0.2) * off.sqrt() / (n_t * n_t)
        } else {
            T::zero()
        };
        for p in 0..n {
            for q in (p + 1)..n {
                let h = a[(p, q)];
                let r = h.modulus();
                if r == T::zero() {
                    continue;
                }
                let app = a[(p, p)].re();
                let aqq = a[(q, q)].re();
                let tiny = T::lit(100.0) * r;
                if sweep > 3 && app.abs() + tiny == app.abs() && aqq.abs() + tiny == aqq.abs() {
                    a[(p, q)] = E::zero();
                    a[(q, p)] = E::zero();
                    continue;
                }
                if r <= thresh {
                    continue;
                }
                rotate(&mut a, &mut v, p, q, h, r, app, aqq);
            }
        }
    }
    Err(Error::Numerical(format!(
        "Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps"
    )))
}

#[allow(clippy::too_many_arguments)]
#[inline]
fn rotate<T: Real, E: Entry<T>>(a: &mut Mat<E>, v: &mut Mat<E>, p: usize, q: usize, h: E, r: T, app: T, aqq: T) {
    let n = a.n();
    // Phase making A[p][q] real and positive after scaling index q by conj(phase).
    let phase_c = h.conj().scale(T::one() / r);
    let theta = (aqq - app) / (r + r);
    let mut t = T::one() / (theta.abs() + (theta * theta + T::one()).sqrt());
    if theta < T::zero() {
        t = -t;
    }
    let c = T::one() / (t * t + T::one()).sqrt();
    let s = t * c;

    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let x = a[(k, p)];
        let y = a[(k, q)] * phase_c;
        let new_p = x.scale(c) - y.scale(s);
        let new_q = x.scale(s) + y.scale(c);
        a[(k, p)] = new_p;
        a[(p, k)] = new_p.conj();
        a[(k, q)] = new_q;
        a[(q, k)] = new_q.conj();
    }
    a[(p, p)] = E::from_real(app - t * r);
    a[(q, q)] = E::from_real(aqq + t * r);
    a[(p, q)] = E::zero();
    a[(q, p)] = E::zero();

    for k in 0..n {
        let x = v[(k, p)];
        let y = v[(k, q)] * phase_c;
        v[(k, p)] = x.scale(c) - y.scale(s);
        v[(k, q)] = x.scale(s) + y.scale(c);
    }
}

fn sorted<T: Real, E: Entry<T>>(vals: Vec<T>, vecs: Mat<E>) -> (Vec<T>, Mat<E>) {
    let n = vals.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap_or(std::cmp::Ordering::Equal));
    let out_vals = order.iter().map(|&i| vals[i]).collect();
    let out_vecs = Mat::from_fn(n, |r, c| vecs[(r, order[c])]);
    (out_vals, out_vecs)
}
