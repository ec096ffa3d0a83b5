//! Value modes: floating complex numbers or exact cyclotomic numbers.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;

use crate::cyclotomic::Cyclotomic;
use crate::error::{Error, Result};
use crate::rational::to_f64;

/// `exp(2πi·k/m)` with exact values at multiples of a quarter turn.
pub fn unit_root(k: u64, m: u64) -> Complex64 {
    let k = k % m;
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if 4 * k % m == 0 {
        return match 4 * k / m {
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let angle = std::f64::consts::TAU * (k as f64) / (m as f64);
    Complex64::new(angle.cos(), angle.sin())
}

/// Field of values a grid function can take.
///
/// Implemented for [`Complex64`] (floating mode) and [`Cyclotomic`] (exact mode).
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + AddAssign
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_rational(r: &BigRational) -> Self;
    /// Lift a real weight. Exact mode needs the exact value.
    fn from_real(exact: Option<&BigRational>, approx: f64) -> Result<Self>;
    fn root_of_unity(k: u64, m: u64) -> Self;
    fn conj(&self) -> Self;
    fn to_complex(&self) -> Complex64;
    /// Exact rational value, if this is a rational number held exactly.
    fn as_rational(&self) -> Option<BigRational>;
    /// Exact `|z|²` when available.
    fn norm_sqr_rational(&self) -> Option<BigRational>;

    fn modulus(&self) -> f64 {
        self.to_complex().norm()
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }
    fn add_ref(&mut self, other: &Self) {
        *self += other.clone();
    }
    fn scale_rational(&self, r: &BigRational) -> Self {
        self.clone() * Self::from_rational(r)
    }
}

impl Scalar for Complex64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn from_rational(r: &BigRational) -> Self {
        Complex64::new(to_f64(r), 0.0)
    }
    fn from_real(_exact: Option<&BigRational>, approx: f64) -> Result<Self> {
        Ok(Complex64::new(approx, 0.0))
    }
    fn root_of_unity(k: u64, m: u64) -> Self {
        unit_root(k, m)
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn as_rational(&self) -> Option<BigRational> {
        None
    }
    fn norm_sqr_rational(&self) -> Option<BigRational> {
        None
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn add_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn scale_rational(&self, r: &BigRational) -> Self {
        self * to_f64(r)
    }
}

impl Scalar for Cyclotomic {
    const EXACT: bool = true;

    fn zero() -> Self {
        Cyclotomic::zero()
    }
    fn one() -> Self {
        Cyclotomic::one()
    }
    fn is_zero(&self) -> bool {
        Cyclotomic::is_zero(self)
    }
    fn from_rational(r: &BigRational) -> Self {
        Cyclotomic::rational(r.clone())
    }
    fn from_real(exact: Option<&BigRational>, approx: f64) -> Result<Self> {
        exact
            .map(|r| Cyclotomic::rational(r.clone()))
            .ok_or_else(|| Error::Inexact(format!("weight {approx} has no exact rational form")))
    }
    fn root_of_unity(k: u64, m: u64) -> Self {
        Cyclotomic::root_of_unity(k, m)
    }
    fn conj(&self) -> Self {
        Cyclotomic::conj(self)
    }
    fn to_complex(&self) -> Complex64 {
        Cyclotomic::to_complex(self)
    }
    fn as_rational(&self) -> Option<BigRational> {
        Cyclotomic::as_rational(self)
    }
    fn norm_sqr_rational(&self) -> Option<BigRational> {
        Cyclotomic::norm_sqr_rational(self)
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn add_ref(&mut self, other: &Self) {
        *self += other;
    }
    fn scale_rational(&self, r: &BigRational) -> Self {
        self.scale(r)
    }
}
