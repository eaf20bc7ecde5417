use std::ops::{Index, IndexMut};

use crate::scalar::{Entry, Real};

/// Square dense matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<E> {
    n: usize,
    data: Vec<E>,
}

impl<E: Copy> Mat<E> {
    pub fn from_vec(n: usize, data: Vec<E>) -> Self {
        assert_eq!(data.len(), n * n, "expected {n}x{n} entries");
        Mat { n, data }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Mat { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[E] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [E] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[E] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

impl<E> Index<(usize, usize)> for Mat<E> {
    type Output = E;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &E {
        &self.data[i * self.n + j]
    }
}

impl<E> IndexMut<(usize, usize)> for Mat<E> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut E {
        &mut self.data[i * self.n + j]
    }
}

impl<E> Mat<E> {
    pub fn zeros<T: Real>(n: usize) -> Self
    where
        E: Entry<T>,
    {
        Mat {
            n,
            data: vec![E::zero(); n * n],
        }
    }

    pub fn identity<T: Real>(n: usize) -> Self
    where
        E: Entry<T>,
    {
        Self::from_real_diag(&vec![T::one(); n])
    }

    pub fn from_real_diag<T: Real>(d: &[T]) -> Self
    where
        E: Entry<T>,
    {
        let n = d.len();
        let mut m = Self::zeros(n);
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] = E::from_real(x);
        }
        m
    }

    /// Conjugate transpose.
    pub fn adjoint<T: Real>(&self) -> Self
    where
        E: Entry<T>,
    {
        Mat::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn matmul<T: Real>(&self, rhs: &Self) -> Self
    where
        E: Entry<T>,
    {
        let n = self.n;
        assert_eq!(n, rhs.n);
        let mut out = Self::zeros(n);
        for i in 0..n {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == E::zero() {
                    continue;
                }
                let rhs_row = &rhs.data[k * n..(k + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    /// `diag(l) * self * diag(r)` for real diagonal vectors.
    pub fn scale_rows_cols<T: Real>(&self, l: &[T], r: &[T]) -> Self
    where
        E: Entry<T>,
    {
        Mat::from_fn(self.n, |i, j| self[(i, j)].scale(l[i] * r[j]))
    }

    pub fn add<T: Real>(&self, rhs: &Self) -> Self
    where
        E: Entry<T>,
    {
        assert_eq!(self.n, rhs.n);
        Mat {
            n: self.n,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }

    pub fn scale<T: Real>(&self, s: T) -> Self
    where
        E: Entry<T>,
    {
        Mat {
            n: self.n,
            data: self.data.iter().map(|a| a.scale(s)).collect(),
        }
    }

    pub fn max_abs<T: Real>(&self) -> T
    where
        E: Entry<T>,
    {
        self.data.iter().map(|a| a.modulus()).fold(T::zero(), T::max)
    }

    /// `max |M_ij - conj(M_ji)|`.
    pub fn hermitian_defect<T: Real>(&self) -> T
    where
        E: Entry<T>,
    {
        let mut worst = T::zero();
        for i in 0..self.n {
            for j in i..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).modulus());
            }
        }
        worst
    }

    pub fn is_finite<T: Real>(&self) -> bool
    where
        E: Entry<T>,
    {
        self.data.iter().all(|a| a.all_finite())
    }

    /// `(M + M*) / 2`.
    pub fn hermitize<T: Real>(&self) -> Self
    where
        E: Entry<T>,
    {
        let half = T::lit(0.5);
        Mat::from_fn(self.n, |i, j| (self[(i, j)] + self[(j, i)].conj()).scale(half))
    }

    pub fn diag_re<T: Real>(&self) -> Vec<T>
    where
        E: Entry<T>,
    {
        (0..self.n).map(|i| self[(i, i)].re()).collect()
    }

    /// `V diag(d) V*`.
    pub fn reassemble<T: Real>(vecs: &Self, d: &[T]) -> Self
    where
        E: Entry<T>,
    {
        let n = vecs.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut acc = E::zero();
                for (k, &dk) in d.iter().enumerate() {
                    acc += (vecs[(i, k)] * vecs[(j, k)].conj()).scale(dk);
                }
                out[(i, j)] = acc;
                out[(j, i)] = acc.conj();
            }
        }
        for i in 0..n {
            out[(i, i)] = E::from_real(out[(i, i)].re());
        }
        out
    }
}
