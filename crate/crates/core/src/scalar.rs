//! Scalar fields used throughout the crate.
//!
//! Exact computations run over arbitrary-precision rationals ([`Rational`]);
//! numerical ones over `f64` or [`Complex64`]. Every algebraic routine is
//! generic over [`Scalar`] so the same code path serves both.

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
pub use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub trait Scalar:
    Clone
    + Debug
    + Display
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Whether arithmetic in this field is exact.
    const EXACT: bool;

    fn from_i64(n: i64) -> Self;

    /// Absolute value as a float, used for residual reporting.
    fn magnitude(&self) -> f64;

    fn to_complex(&self) -> Complex64;

    /// `self^exp` for any integer exponent. Panics on `0^negative`.
    fn powi(&self, exp: i64) -> Self {
        let mut base = if exp < 0 {
            assert!(!self.is_zero(), "zero raised to a negative power");
            Self::one() / self.clone()
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// True when `self` should be treated as zero: exact zero for exact
    /// fields, `|self| <= tol` otherwise.
    fn negligible(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.magnitude() <= tol
        }
    }
}

/// Scalars with a total order, needed by the stochastic layer (rates, `0 < q < 1`).
pub trait RealScalar: Scalar + PartialOrd {
    fn to_f64(&self) -> f64;
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn magnitude(&self) -> f64 {
        ToPrimitive::to_f64(&self.abs()).unwrap_or(f64::INFINITY)
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(RealScalar::to_f64(self), 0.0)
    }
}

impl RealScalar for Rational {
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        n as f64
    }

    fn magnitude(&self) -> f64 {
        self.abs()
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(*self, 0.0)
    }

    fn powi(&self, exp: i64) -> Self {
        f64::powi(*self, exp as i32)
    }
}

impl RealScalar for f64 {
    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn from_i64(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn powi(&self, exp: i64) -> Self {
        Complex64::powi(self, exp as i32)
    }
}

/// `n / d` as an exact rational.
pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// The q-integer `[n]_q = 1 + q + ... + q^{n-1}`, equal to `(1 - q^n)/(1 - q)` for `q != 1`.
pub fn q_integer<S: Scalar>(n: usize, q: &S) -> S {
    let mut acc = S::zero();
    let mut power = S::one();
    for _ in 0..n {
        acc = acc + power.clone();
        power = power * q.clone();
    }
    acc
}
