//! Scalar arithmetic shared by the symmetric-function engine.
//!
//! Two scalar kinds are supported and never mixed: exact complex rationals
//! ([`CRat`], a pair of arbitrary-precision rationals) and double-precision
//! complex numbers ([`Complex64`]). Code that is generic over [`Field`] runs
//! identically on either; the exact kind turns identity checks into exact
//! equalities, the float kind is used wherever data comes from quadrature or
//! sampling.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Minimal field interface for generic determinants and series arithmetic.
///
/// `abs_approx` only steers pivot choice; it may be a rough magnitude.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Exact scalars only treat *exactly equal* points as confluent; float
    /// scalars switch to confluent formulas below a gap threshold.
    const EXACT: bool;
    fn from_int(n: i64) -> Self;
    fn abs_approx(&self) -> f64;
    /// Lexicographic key used to cluster nearly-equal points.
    fn sort_key(&self) -> (f64, f64);
}

impl Field for Complex64 {
    const EXACT: bool = false;
    fn from_int(n: i64) -> Self {
        Complex64::new(n as f64, 0.0)
    }
    fn abs_approx(&self) -> f64 {
        self.norm()
    }
    fn sort_key(&self) -> (f64, f64) {
        (self.re, self.im)
    }
}

/// Exact complex rational: re + im·i with arbitrary-precision rational parts.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl CRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        CRat { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        CRat { re, im: BigRational::zero() }
    }

    /// re/den + (im/den)·i from machine integers.
    pub fn from_ints(re: i64, im: i64) -> Self {
        CRat {
            re: BigRational::from_integer(BigInt::from(re)),
            im: BigRational::from_integer(BigInt::from(im)),
        }
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        CRat {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn i() -> Self {
        CRat::from_ints(0, 1)
    }

    pub fn conj(&self) -> Self {
        CRat { re: self.re.clone(), im: -self.im.clone() }
    }

    /// |z|² as an exact rational.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "division by zero CRat");
        CRat { re: &self.re / &n, im: -(&self.im / &n) }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

impl fmt::Display for CRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

impl Add for CRat {
    type Output = CRat;
    fn add(self, rhs: CRat) -> CRat {
        CRat { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Sub for CRat {
    type Output = CRat;
    fn sub(self, rhs: CRat) -> CRat {
        CRat { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Mul for CRat {
    type Output = CRat;
    fn mul(self, rhs: CRat) -> CRat {
        CRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for CRat {
    type Output = CRat;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: CRat) -> CRat {
        self * rhs.inv()
    }
}

impl Neg for CRat {
    type Output = CRat;
    fn neg(self) -> CRat {
        CRat { re: -self.re, im: -self.im }
    }
}

impl Zero for CRat {
    fn zero() -> Self {
        CRat { re: BigRational::zero(), im: BigRational::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for CRat {
    fn one() -> Self {
        CRat { re: BigRational::one(), im: BigRational::zero() }
    }
}

impl Field for CRat {
    const EXACT: bool = true;
    fn from_int(n: i64) -> Self {
        CRat::from_ints(n, 0)
    }
    fn abs_approx(&self) -> f64 {
        self.re.to_f64().map(f64::abs).unwrap_or(f64::INFINITY)
            + self.im.to_f64().map(f64::abs).unwrap_or(f64::INFINITY)
    }
    fn sort_key(&self) -> (f64, f64) {
        (
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

/// z^n for signed n (n < 0 inverts; panics on 0^negative).
pub fn crat_pow(z: &CRat, n: i64) -> CRat {
    let base = if n < 0 { z.inv() } else { z.clone() };
    let mut acc = CRat::one();
    for _ in 0..n.unsigned_abs() {
        acc = acc * base.clone();
    }
    acc
}
