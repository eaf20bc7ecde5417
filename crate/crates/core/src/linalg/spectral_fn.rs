use std::fmt;
use std::str::FromStr;

use crate::error::{validation, Error};
use crate::poly::Poly;
use crate::scalar::Real;

/// Scalar function applied to a Hermitian matrix through its spectrum.
#[derive(Clone, Debug, PartialEq)]
pub enum SpectralFunction<T> {
    Polynomial(Poly<T>),
    /// `x ↦ √|x|`
    SqrtAbs,
    /// `x ↦ √|1 − x|`
    SqrtAbsOneMinus,
    /// `x ↦ |x|`
    Abs,
    /// `x ↦ |1 − x|`
    AbsOneMinus,
    Constant(T),
    /// `x ↦ a x + b`
    Affine {
        a: T,
        b: T,
    },
    /// `x ↦ c · f(x)`
    Scaled(T, Box<SpectralFunction<T>>),
}

impl<T: Real> SpectralFunction<T> {
    pub fn identity() -> Self {
        SpectralFunction::Affine {
            a: T::one(),
            b: T::zero(),
        }
    }

    pub fn zero() -> Self {
        SpectralFunction::Constant(T::zero())
    }

    pub fn poly(coeffs: &[T]) -> Self {
        SpectralFunction::Polynomial(Poly::new(coeffs.to_vec()))
    }

    pub fn scaled(self, c: T) -> Self {
        SpectralFunction::Scaled(c, Box::new(self))
    }

    pub fn eval(&self, x: T) -> T {
        use SpectralFunction::*;
        match self {
            Polynomial(p) => p.eval(&x),
            SqrtAbs => x.abs().sqrt(),
            SqrtAbsOneMinus => (T::one() - x).abs().sqrt(),
            Abs => x.abs(),
            AbsOneMinus => (T::one() - x).abs(),
            Constant(c) => *c,
            Affine { a, b } => *a * x + *b,
            Scaled(c, f) => *c * f.eval(x),
        }
    }

    /// The pointwise square `f²`, which always stays in the family.
    pub fn squared(&self) -> Self {
        use SpectralFunction::*;
        match self {
            Polynomial(p) => Polynomial(p * p),
            SqrtAbs => Abs,
            SqrtAbsOneMinus => AbsOneMinus,
            Abs => Polynomial(Poly::new(vec![T::zero(), T::zero(), T::one()])),
            AbsOneMinus => Polynomial(Poly::new(vec![T::one(), -T::lit(2.0), T::one()])),
            Constant(c) => Constant(*c * *c),
            Affine { a, b } => {
                let p = Poly::new(vec![*b, *a]);
                Polynomial(&p * &p)
            }
            Scaled(c, f) => Scaled(*c * *c, Box::new(f.squared())),
        }
    }

    /// Exact polynomial form, if the function is one.
    pub fn as_polynomial(&self) -> Option<Poly<T>> {
        use SpectralFunction::*;
        match self {
            Polynomial(p) => Some(p.clone()),
            Constant(c) => Some(Poly::constant(*c)),
            Affine { a, b } => Some(Poly::new(vec![*b, *a])),
            Scaled(c, f) => f.as_polynomial().map(|p| p.scale(c)),
            _ => None,
        }
    }

    /// Polynomial that agrees with the function on `[lo, hi]`, if any.
    /// `|x|` restricted to `x ≥ 0` is `x`, and so on.
    pub fn polynomial_on(&self, lo: T, hi: T) -> Option<Poly<T>> {
        use SpectralFunction::*;
        match self {
            Abs if lo >= T::zero() => Some(Poly::new(vec![T::zero(), T::one()])),
            AbsOneMinus if hi <= T::one() => Some(Poly::new(vec![T::one(), -T::one()])),
            Scaled(c, f) => f.polynomial_on(lo, hi).map(|p| p.scale(c)),
            _ => self.as_polynomial(),
        }
    }

    /// Constant value, if the function is constant.
    pub fn as_constant(&self) -> Option<T> {
        self.as_polynomial()
            .map(|p| match p.degree() {
                None => Some(T::zero()),
                Some(0) => Some(p.coeff(0)),
                _ => None,
            })
            .unwrap_or(None)
    }

    /// Short human-readable label, parseable by `FromStr`.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl<T: Real> fmt::Display for SpectralFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use SpectralFunction::*;
        match self {
            Polynomial(p) => {
                write!(f, "poly:")?;
                let c = p.coeffs();
                if c.is_empty() {
                    return write!(f, "0");
                }
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
            SqrtAbs => write!(f, "sqrt_abs"),
            SqrtAbsOneMinus => write!(f, "sqrt_abs_one_minus"),
            Abs => write!(f, "abs"),
            AbsOneMinus => write!(f, "abs_one_minus"),
            Constant(c) => write!(f, "const:{c}"),
            Affine { a, b } => write!(f, "affine:{a},{b}"),
            Scaled(c, inner) => write!(f, "scaled:{c}:{inner}"),
        }
    }
}

fn parse_num<T: Real>(s: &str) -> Result<T, Error> {
    s.trim()
        .parse::<f64>()
        .ok()
        .and_then(T::from_f64)
        .filter(|x| x.is_finite())
        .ok_or_else(|| validation(format!("not a finite number: {s:?}")))
}

impl<T: Real> FromStr for SpectralFunction<T> {
    type Err = Error;

    /// Accepted forms: `poly:c0,c1,..`, `const:c`, `affine:a,b`,
    /// `scaled:c:<function>`, `sqrt_abs`, `sqrt_abs_one_minus`, `abs`,
    /// `abs_one_minus`, `identity`, `zero`.
    fn from_str(s: &str) -> Result<Self, Error> {
        use SpectralFunction::*;
        let s = s.trim();
        let (head, rest) = match s.split_once(':') {
            Some((h, r)) => (h.trim(), Some(r)),
            None => (s, None),
        };
        match (head, rest) {
            ("sqrt_abs", None) => Ok(SqrtAbs),
            ("sqrt_abs_one_minus", None) => Ok(SqrtAbsOneMinus),
            ("abs", None) => Ok(Abs),
            ("abs_one_minus", None) => Ok(AbsOneMinus),
            ("identity", None) => Ok(Self::identity()),
            ("zero", None) => Ok(Self::zero()),
            ("const", Some(r)) => Ok(Constant(parse_num(r)?)),
            ("poly", Some(r)) => {
                let c = r.split(',').map(parse_num).collect::<Result<Vec<T>, _>>()?;
                Ok(Polynomial(Poly::new(c)))
            }
            ("affine", Some(r)) => {
                let parts: Vec<&str> = r.split(',').collect();
                if parts.len() != 2 {
                    return Err(validation(format!("affine needs two numbers: {s:?}")));
                }
                Ok(Affine {
                    a: parse_num(parts[0])?,
                    b: parse_num(parts[1])?,
                })
            }
            ("scaled", Some(r)) => {
                let (c, inner) = r
                    .split_once(':')
                    .ok_or_else(|| validation(format!("scaled needs c:<function>: {s:?}")))?;
                Ok(Scaled(parse_num(c)?, Box::new(inner.parse()?)))
            }
            _ => Err(validation(format!("unknown spectral function {s:?}"))),
        }
    }
}
