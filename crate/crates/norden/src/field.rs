//! Scalar-field abstraction.
//!
//! All differential-geometry code in this crate is generic over [`Scalar`],
//! instantiated at exactly two types: `f64` (real metrics) and
//! [`Complex64`] (holomorphic metrics). Keeping one generic implementation
//! guarantees that the real and complex pipelines perform the same
//! arithmetic, which is what makes their outputs directly comparable in the
//! realification checks.
//!
//! Branch-cut policy: `sqrt` and `log` use principal branches. Arguments on
//! the cut (non-positive reals; for `sqrt` this includes `0`, where the
//! derivative blows up) are rejected by the callers via [`Scalar::on_sqrt_cut`]
//! / [`Scalar::on_log_cut`] instead of silently producing NaNs.

use num_complex::Complex64;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Divisors with modulus at or below this threshold are treated as zero;
/// dividing by them raises an error instead of producing huge values.
pub const DIV_EPS: f64 = 1e-14;

/// Which scalar field a computation runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
}

/// A scalar field element: `f64` or `Complex64`.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const FIELD: Field;

    fn zero() -> Self;
    fn one() -> Self;

    /// Embed a real number.
    fn from_re(x: f64) -> Self;

    /// Convert a complex constant into this field; `None` when the constant
    /// does not belong to the field (nonzero imaginary part over `f64`).
    fn from_c64(c: Complex64) -> Option<Self>;

    /// Embed into the complex numbers (identity for `Complex64`).
    fn to_c64(self) -> Complex64;

    /// Modulus.
    fn abs(self) -> f64;
    /// Real part.
    fn re(self) -> f64;
    /// Imaginary part (zero for `f64`).
    fn im(self) -> f64;

    fn is_finite(self) -> bool;

    /// Integer power (exponentiation by squaring; negative exponents invert).
    fn powi(self, k: i32) -> Self;

    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn sinh(self) -> Self;
    fn cosh(self) -> Self;

    /// True when `sqrt(self)` lands on the principal branch cut or the
    /// derivative pole (non-positive reals, including zero).
    fn on_sqrt_cut(self) -> bool;

    /// True when `log(self)` lands on the principal branch cut
    /// (non-positive reals, including zero).
    fn on_log_cut(self) -> bool;
}

impl Scalar for f64 {
    const FIELD: Field = Field::Real;

    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_re(x: f64) -> Self {
        x
    }
    fn from_c64(c: Complex64) -> Option<Self> {
        if c.im == 0.0 {
            Some(c.re)
        } else {
            None
        }
    }
    fn to_c64(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    fn re(self) -> f64 {
        self
    }
    fn im(self) -> f64 {
        0.0
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
    fn powi(self, k: i32) -> Self {
        f64::powi(self, k)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn sinh(self) -> Self {
        f64::sinh(self)
    }
    fn cosh(self) -> Self {
        f64::cosh(self)
    }
    fn on_sqrt_cut(self) -> bool {
        self <= 0.0
    }
    fn on_log_cut(self) -> bool {
        self <= 0.0
    }
}

impl Scalar for Complex64 {
    const FIELD: Field = Field::Complex;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_re(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn from_c64(c: Complex64) -> Option<Self> {
        Some(c)
    }
    fn to_c64(self) -> Complex64 {
        self
    }
    fn abs(self) -> f64 {
        self.norm()
    }
    fn re(self) -> f64 {
        self.re
    }
    fn im(self) -> f64 {
        self.im
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn powi(self, k: i32) -> Self {
        Complex64::powi(&self, k)
    }
    fn sqrt(self) -> Self {
        Complex64::sqrt(self)
    }
    fn exp(self) -> Self {
        Complex64::exp(self)
    }
    fn ln(self) -> Self {
        Complex64::ln(self)
    }
    fn sin(self) -> Self {
        Complex64::sin(self)
    }
    fn cos(self) -> Self {
        Complex64::cos(self)
    }
    fn sinh(self) -> Self {
        Complex64::sinh(self)
    }
    fn cosh(self) -> Self {
        Complex64::cosh(self)
    }
    fn on_sqrt_cut(self) -> bool {
        self.im == 0.0 && self.re <= 0.0
    }
    fn on_log_cut(self) -> bool {
        self.im == 0.0 && self.re <= 0.0
    }
}
