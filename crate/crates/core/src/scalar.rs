//! Scalar abstractions shared by every module.
//!
//! Numerical code is written against [`Real`] (implemented for `f32` and
//! `f64`). Matrix entries are either a real scalar or a `Complex<Real>`,
//! abstracted by [`Entry`]. Exact recursions use [`Coeff`], which is also
//! satisfied by `BigRational`.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, Num, NumAssign, ToPrimitive, Zero};

/// Floating point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Default
    + Debug
    + Display
    + LowerExp
    + Sum
    + NumAssign
    + Send
    + Sync
    + Entry<Self>
    + 'static
{
    /// Converts an `f64` literal. Panics only if `Self` cannot represent finite `f64`s,
    /// which never happens for `f32`/`f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Coefficient ring used by the exact moment recursions: a field with
/// conversions from small integers. Satisfied by `f64` and `BigRational`.
pub trait Coeff: Clone + Num + FromPrimitive + Debug {}

impl<C: Clone + Num + FromPrimitive + Debug> Coeff for C {}

/// A matrix entry over the real scalar `T`: either `T` itself (β = 1) or
/// `Complex<T>` (β = 2).
pub trait Entry<T>:
    Copy
    + Debug
    + Send
    + Sync
    + PartialEq
    + Zero
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + 'static
{
    const IS_COMPLEX: bool;

    fn conj(self) -> Self;
    fn re(self) -> T;
    fn im(self) -> T;
    fn from_real(x: T) -> Self;
    fn scale(self, s: T) -> Self;
    fn norm_sqr(self) -> T;
    fn modulus(self) -> T;
    fn all_finite(self) -> bool;
}

macro_rules! real_entry {
    ($t:ty) => {
        impl Entry<$t> for $t {
            const IS_COMPLEX: bool = false;
            #[inline]
            fn conj(self) -> Self {
                self
            }
            #[inline]
            fn re(self) -> $t {
                self
            }
            #[inline]
            fn im(self) -> $t {
                0.0
            }
            #[inline]
            fn from_real(x: $t) -> Self {
                x
            }
            #[inline]
            fn scale(self, s: $t) -> Self {
                self * s
            }
            #[inline]
            fn norm_sqr(self) -> $t {
                self * self
            }
            #[inline]
            fn modulus(self) -> $t {
                self.abs()
            }
            #[inline]
            fn all_finite(self) -> bool {
                <$t>::is_finite(self)
            }
        }
    };
}

real_entry!(f32);
real_entry!(f64);

impl<T: Real> Entry<T> for Complex<T> {
    const IS_COMPLEX: bool = true;
    #[inline]
    fn conj(self) -> Self {
        Complex::conj(&self)
    }
    #[inline]
    fn re(self) -> T {
        self.re
    }
    #[inline]
    fn im(self) -> T {
        self.im
    }
    #[inline]
    fn from_real(x: T) -> Self {
        Complex::new(x, T::zero())
    }
    #[inline]
    fn scale(self, s: T) -> Self {
        Complex::new(self.re * s, self.im * s)
    }
    #[inline]
    fn norm_sqr(self) -> T {
        self.re * self.re + self.im * self.im
    }
    #[inline]
    fn modulus(self) -> T {
        self.re.hypot(self.im)
    }
    #[inline]
    fn all_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// Dyson index: 1 for real symmetric flows, 2 for complex Hermitian flows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Beta {
    Real,
    Complex,
}

impl Beta {
    pub fn from_index(beta: u32) -> Option<Self> {
        match beta {
            1 => Some(Beta::Real),
            2 => Some(Beta::Complex),
            _ => None,
        }
    }

    pub fn index(self) -> u32 {
        match self {
            Beta::Real => 1,
            Beta::Complex => 2,
        }
    }

    pub fn value<T: Real>(self) -> T {
        T::from_u32(self.index()).expect("small integer")
    }
}

impl Display for Beta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.index())
    }
}
