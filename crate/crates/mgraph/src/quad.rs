//! Exact arithmetic in the quadratic field Q(sqrt 2).
//!
//! An element is `a + b*sqrt(2)` with rational `a`, `b`. Since sqrt(2) is
//! irrational the representation is unique, so equality is component-wise
//! and an element is rational exactly when `b == 0`. Division uses the
//! conjugate: the norm `a^2 - 2b^2` vanishes only at zero.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// Element `a + b*sqrt(2)` of Q(sqrt 2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadExt {
    a: BigRational,
    b: BigRational,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QuadExt {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QuadExt { a, b }
    }

    /// Embeds an integer pair: `a + b*sqrt(2)`.
    pub fn from_ints(a: i64, b: i64) -> Self {
        QuadExt { a: rat(a), b: rat(b) }
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }

    pub fn sqrt2() -> Self {
        Self::from_ints(0, 1)
    }

    /// Rational component `a`.
    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient `b` of sqrt(2).
    pub fn sqrt2_coefficient(&self) -> &BigRational {
        &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Field norm `a^2 - 2b^2` (the product with the conjugate).
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - rat(2) * &self.b * &self.b
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inverse(&self) -> Option<QuadExt> {
        if self.is_zero() {
            return None;
        }
        let norm = self.norm();
        debug_assert!(!norm.is_zero(), "norm vanishes only at zero");
        Some(QuadExt {
            a: &self.a / &norm,
            b: -(&self.b / &norm),
        })
    }

    /// Integer power by repeated squaring.
    pub fn pow(&self, mut exp: u32) -> QuadExt {
        let mut base = self.clone();
        let mut acc = QuadExt::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }
}

impl Add for &QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &QuadExt) -> QuadExt {
        QuadExt { a: &self.a + &rhs.a, b: &self.b + &rhs.b }
    }
}

impl Sub for &QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &QuadExt) -> QuadExt {
        QuadExt { a: &self.a - &rhs.a, b: &self.b - &rhs.b }
    }
}

impl Mul for &QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &QuadExt) -> QuadExt {
        // (a1 + b1 r)(a2 + b2 r) = a1 a2 + 2 b1 b2 + (a1 b2 + b1 a2) r
        QuadExt {
            a: &self.a * &rhs.a + rat(2) * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt { a: -self.a.clone(), b: -self.b.clone() }
    }
}

impl std::fmt::Display for QuadExt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}*sqrt(2)", self.b);
        }
        if self.b.is_negative() {
            write!(f, "{} - {}*sqrt(2)", self.a, -self.b.clone())
        } else {
            write!(f, "{} + {}*sqrt(2)", self.a, self.b)
        }
    }
}
