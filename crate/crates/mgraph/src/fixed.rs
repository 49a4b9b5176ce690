//! Fixed-point decimal values and a high-precision natural logarithm.
//!
//! Entropy estimates and digit counts need `ln` of exact rationals with a
//! controlled error bound, well beyond f64. A [`FixedDecimal`] stores an
//! integer mantissa scaled by a power of ten; [`ln_rational`] evaluates
//! `ln(x)` for positive rational `x` with absolute error below one unit in
//! the last place of the requested scale.
//!
//! The logarithm uses the atanh series
//! `ln x = 2 * sum z^(2k+1) / (2k+1)` with `z = (x-1)/(x+1)`, after
//! halving the argument into `(1, 2]` so that `z <= 1/3`. All series
//! arithmetic is floor-division on integers at 20 guard digits, which
//! dominates both the per-term rounding and the truncated tail.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

const GUARD_DIGITS: u32 = 20;

/// Exact decimal `mantissa / 10^scale`.
#[derive(Debug, Clone)]
pub struct FixedDecimal {
    mantissa: BigInt,
    scale: u32,
}

fn pow10(exp: u32) -> BigInt {
    BigInt::from(10u32).pow(exp)
}

impl FixedDecimal {
    pub fn new(mantissa: BigInt, scale: u32) -> Self {
        FixedDecimal { mantissa, scale }
    }

    pub fn zero(scale: u32) -> Self {
        FixedDecimal { mantissa: BigInt::zero(), scale }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    /// Changes scale, flooring when digits are dropped.
    pub fn rescale(&self, scale: u32) -> FixedDecimal {
        let mantissa = if scale >= self.scale {
            &self.mantissa * pow10(scale - self.scale)
        } else {
            self.mantissa.div_floor(&pow10(self.scale - scale))
        };
        FixedDecimal { mantissa, scale }
    }

    pub fn add(&self, other: &FixedDecimal) -> FixedDecimal {
        assert_eq!(self.scale, other.scale, "scale mismatch");
        FixedDecimal::new(&self.mantissa + &other.mantissa, self.scale)
    }

    pub fn sub(&self, other: &FixedDecimal) -> FixedDecimal {
        assert_eq!(self.scale, other.scale, "scale mismatch");
        FixedDecimal::new(&self.mantissa - &other.mantissa, self.scale)
    }

    /// Divides by `2^k`, flooring.
    pub fn div_pow2(&self, k: u32) -> FixedDecimal {
        FixedDecimal::new(self.mantissa.div_floor(&(BigInt::from(1u32) << k)), self.scale)
    }

    pub fn to_f64(&self) -> f64 {
        BigRational::new(self.mantissa.clone(), pow10(self.scale))
            .to_f64()
            .unwrap_or(f64::NAN)
    }
}

impl PartialEq for FixedDecimal {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(std::cmp::Ordering::Equal)
    }
}

impl PartialOrd for FixedDecimal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        let s = std::cmp::max(self.scale, other.scale);
        let a = &self.mantissa * pow10(s - self.scale);
        let b = &other.mantissa * pow10(s - other.scale);
        a.partial_cmp(&b)
    }
}

impl std::fmt::Display for FixedDecimal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mag = self.mantissa.magnitude();
        let ten = num_bigint::BigUint::from(10u32).pow(self.scale);
        let int = mag / &ten;
        let frac = mag % &ten;
        let sign = if self.mantissa.is_negative() { "-" } else { "" };
        if self.scale == 0 {
            write!(f, "{sign}{int}")
        } else {
            write!(f, "{sign}{int}.{frac:0>width$}", width = self.scale as usize)
        }
    }
}

/// `ln(x)` for positive rational `x`, absolute error `< 10^-scale`.
///
/// Panics if `x <= 0`.
pub fn ln_rational(x: &BigRational, scale: u32) -> FixedDecimal {
    assert!(x.is_positive(), "ln requires a positive argument, got {x}");
    let one = BigRational::from_integer(BigInt::from(1));
    if *x == one {
        return FixedDecimal::zero(scale);
    }
    if *x < one {
        let inv = x.recip();
        let r = ln_rational(&inv, scale);
        return FixedDecimal::new(-r.mantissa, scale);
    }

    let work = scale + GUARD_DIGITS;
    let two = BigRational::from_integer(BigInt::from(2));

    // Halve into (1, 2]; ln x = halvings * ln 2 + ln(reduced).
    let mut reduced = x.clone();
    let mut halvings = 0u64;
    while reduced > two {
        reduced /= &two;
        halvings += 1;
    }

    let mut total = atanh_series(&reduced, work);
    if halvings > 0 {
        let ln2 = atanh_series(&two, work);
        total += ln2 * BigInt::from(halvings);
    }
    FixedDecimal::new(total, work).rescale(scale)
}

/// `ln(x) * 10^work` (floored) for `x` in `(1, 2]` via the atanh series.
fn atanh_series(x: &BigRational, work: u32) -> BigInt {
    let unit = pow10(work);
    let n = x.numer();
    let d = x.denom();
    // z = (n - d) / (n + d), 0 < z <= 1/3
    let z = ((n - d) * &unit).div_floor(&(n + d));
    let zsq = (&z * &z).div_floor(&unit);

    let mut sum = z.clone();
    let mut power = z;
    let mut k = 1u64;
    loop {
        power = (&power * &zsq).div_floor(&unit);
        if power.is_zero() {
            break;
        }
        sum += power.div_floor(&BigInt::from(2 * k + 1));
        k += 1;
    }
    sum * 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    fn rational(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Parses "0.6931..." into mantissa units at the given scale (truncating).
    fn mantissa_of(text: &str, scale: u32) -> BigInt {
        let neg = text.starts_with('-');
        let t = text.trim_start_matches('-');
        let (int, frac) = t.split_once('.').unwrap_or((t, ""));
        let mut digits = String::from(int);
        let frac = &frac[..std::cmp::min(frac.len(), scale as usize)];
        digits.push_str(frac);
        for _ in frac.len()..scale as usize {
            digits.push('0');
        }
        let v: BigInt = digits.parse().unwrap();
        if neg {
            -v
        } else {
            v
        }
    }

    fn assert_ln(x: BigRational, expect: &str) {
        let scale = 35;
        let got = ln_rational(&x, scale);
        let want = mantissa_of(expect, scale);
        let diff = (got.mantissa() - &want).magnitude().clone();
        assert!(
            diff <= 2u32.into(),
            "ln({x}) = {got}, expected {expect} (mantissa off by {diff})"
        );
    }

    #[test]
    fn known_logarithms() {
        assert_ln(rational(1, 1), "0.0");
        assert_ln(rational(2, 1), "0.6931471805599453094172321214581765680755");
        assert_ln(rational(4, 1), "1.386294361119890618834464242916353136151");
        assert_ln(rational(10, 1), "2.3025850929940456840179914546843642076011");
        assert_ln(rational(7, 2), "1.2527629684953679956881206219850031615616");
        assert_ln(rational(24, 7), "1.2321436812926323145415888578538756792369");
        assert_ln(rational(1, 2), "-0.6931471805599453094172321214581765680755");
    }

    #[test]
    fn display_and_rescale() {
        let x = FixedDecimal::new(BigInt::from(65694i64), 5);
        assert_eq!(x.to_string(), "0.65694");
        assert_eq!(x.rescale(2).to_string(), "0.65");
        assert_eq!(x.rescale(7).to_string(), "0.6569400");
        let neg = FixedDecimal::new(BigInt::from(-5), 1);
        assert_eq!(neg.to_string(), "-0.5");
        assert!((x.to_f64() - 0.65694).abs() < 1e-12);
    }

    #[test]
    fn comparison_across_scales() {
        let a = FixedDecimal::new(BigInt::from(5), 1); // 0.5
        let b = FixedDecimal::new(BigInt::from(500), 3); // 0.500
        assert_eq!(a, b);
        assert!(a < FixedDecimal::new(BigInt::from(6), 1));
    }

    proptest! {
        // ln(a*b) = ln(a) + ln(b) within a few ulps.
        #[test]
        fn log_is_additive(an in 1i64..=40, ad in 1i64..=40, bn in 1i64..=40, bd in 1i64..=40) {
            let a = rational(an, ad);
            let b = rational(bn, bd);
            let ab = &a * &b;
            prop_assume!(!a.is_one() && !b.is_one() && !ab.is_one());
            let scale = 30;
            let la = ln_rational(&a, scale);
            let lb = ln_rational(&b, scale);
            let lab = ln_rational(&ab, scale);
            let diff = (la.mantissa() + lb.mantissa() - lab.mantissa()).magnitude().clone();
            prop_assert!(diff <= 4u32.into(), "additivity off by {diff} ulps");
        }
    }
}
