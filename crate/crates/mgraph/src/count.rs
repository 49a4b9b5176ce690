//! Exact spanning-tree counts for the family M(t).
//!
//! Three quantities drive everything here, all computed exactly:
//!
//! * `s(t)` — the number of spanning trees of M(t). It satisfies
//!   `s(t) = 4 s(t-1)^2 - 2 s(t-1) s(t-2)^2` with `s(0) = 1`, `s(1) = 4`.
//! * `g(t)` — the number of spanning two-tree forests of M(t) that
//!   separate its hub pair; `g(t) = s(t) - s(t-1)^2`, `g(0) = 1`.
//! * `q(t) = s(t) / s(t-1)^2` — the doubling ratio. It obeys
//!   `q(t) = 4 - 2/q(t-1)` from `q(1) = 4` and has the closed form
//!   `q(t) = 2 - sqrt(2) + 2 sqrt(2) / (1 - (3 - 2 sqrt(2))^t)`,
//!   which is rational despite its irrational presentation; it is
//!   evaluated exactly in Q(sqrt 2) and the sqrt(2) component is required
//!   to cancel to exactly zero.
//!
//! Multiplying the ratios back together gives the product form
//! `s(t) = prod_{i=1..t} q(i)^(2^(t-i))`, an independent route to `s(t)`
//! used to cross-check the recurrence. The spanning-tree entropy
//! `h = lim ln s(t) / |V_t|` falls out of the same ratios:
//! `ln s(t) / 2^(t+1) = sum_{i<=t} 2^(-i-1) ln q(i)`, evaluated in
//! fixed-point decimal with a stated error bound.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::fixed::{ln_rational, FixedDecimal};
use crate::quad::QuadExt;

/// Default cap on materializing the full decimal value of `s(t)`
/// (the count has roughly `0.285 * 2^(t+1)` digits).
pub const DEFAULT_MAX_MATERIALIZE_T: u32 = 22;

/// Largest level for which `s(t)` is materialized in full by the CLI.
/// `MGRAPH_MAX_T` overrides the default.
pub fn max_materialize_t() -> u32 {
    match std::env::var("MGRAPH_MAX_T") {
        Ok(v) => v.parse().unwrap_or(DEFAULT_MAX_MATERIALIZE_T),
        Err(_) => DEFAULT_MAX_MATERIALIZE_T,
    }
}

/// `s(t)`: spanning trees of M(t) by forward recurrence.
pub fn spanning_tree_count(t: u32) -> BigUint {
    let mut prev = BigUint::one(); // s(0)
    let mut cur = BigUint::from(4u32); // s(1)
    if t == 0 {
        return prev;
    }
    for _ in 1..t {
        // s(t) = 2 s(t-1) (2 s(t-1) - s(t-2)^2); the parenthesis is
        // positive because every ratio q exceeds 2.
        let next = (&cur << 1) * ((&cur << 1) - &prev * &prev);
        prev = cur;
        cur = next;
    }
    cur
}

/// `s(t) mod p` by the same recurrence, for levels far beyond what can be
/// materialized.
pub fn spanning_tree_count_mod(t: u32, p: u64) -> u64 {
    let m = BigUint::from(p);
    let mut prev = BigUint::one() % &m;
    let mut cur = BigUint::from(4u32) % &m;
    if t == 0 {
        return prev.to_u64().unwrap();
    }
    for _ in 1..t {
        // 4c^2 - 2c*p^2 computed as 2c(2c + (p - p^2 mod p)) to stay
        // nonnegative: use 2c*(2c mod m) etc. Work in BigUint with an
        // added multiple of m before subtraction.
        let c2 = (&cur * &cur) % &m;
        let pp = (&prev * &prev) % &m;
        let a = (BigUint::from(4u32) * &c2) % &m;
        let b = (BigUint::from(2u32) * &cur * &pp) % &m;
        let next = (a + &m - b) % &m;
        prev = cur;
        cur = next;
    }
    cur.to_u64().unwrap()
}

/// `g(t)`: spanning two-tree forests of M(t) separating the hub pair.
///
/// `g(0) = 1` (the empty edge set is the only such forest of a single
/// edge); for t >= 1, `g(t) = s(t) - s(t-1)^2`.
pub fn separating_forest_count(t: u32) -> BigUint {
    if t == 0 {
        return BigUint::one();
    }
    let prev = spanning_tree_count(t - 1);
    spanning_tree_count(t) - &prev * &prev
}

/// Iterator over the exact ratios `q(1), q(2), ...` via `q = 4 - 2/q`.
pub struct RatioIter {
    current: Option<BigRational>,
}

impl RatioIter {
    pub fn new() -> Self {
        RatioIter { current: None }
    }
}

impl Default for RatioIter {
    fn default() -> Self {
        Self::new()
    }
}

impl Iterator for RatioIter {
    type Item = BigRational;

    fn next(&mut self) -> Option<BigRational> {
        let four = BigRational::from_integer(BigInt::from(4));
        let next = match &self.current {
            None => four,
            Some(q) => four - BigRational::from_integer(BigInt::from(2)) / q,
        };
        self.current = Some(next.clone());
        Some(next)
    }
}

/// `q(t) = s(t) / s(t-1)^2` as a reduced fraction, by the recurrence
/// `q(t) = 4 - 2/q(t-1)` from `q(1) = 4`. Requires `t >= 1`.
pub fn growth_ratio(t: u32) -> Result<BigRational> {
    if t == 0 {
        return Err(Error::LevelTooSmall { t, min: 1 });
    }
    Ok(RatioIter::new().nth(t as usize - 1).expect("infinite iterator"))
}

/// `q(t)` from the closed form `2 - sqrt2 + 2 sqrt2 / (1 - (3 - 2 sqrt2)^t)`,
/// evaluated exactly in Q(sqrt 2). Requires `t >= 1`.
///
/// The sqrt(2) component of the result must cancel to exactly zero; a
/// nonzero residue is reported as an error rather than rounded away.
pub fn growth_ratio_closed_form(t: u32) -> Result<BigRational> {
    if t == 0 {
        return Err(Error::LevelTooSmall { t, min: 1 });
    }
    let contraction = QuadExt::from_ints(3, -2); // 3 - 2 sqrt2, |.| < 1
    let denom = &QuadExt::one() - &contraction.pow(t);
    let inv = denom.inverse().expect("(3 - 2 sqrt2)^t != 1 for t >= 1");
    let two_sqrt2 = QuadExt::from_ints(0, 2);
    let q = &QuadExt::from_ints(2, -1) + &(&two_sqrt2 * &inv);
    if !q.is_rational() {
        return Err(Error::IrrationalResidue { t, detail: q.to_string() });
    }
    Ok(q.rational_part().clone())
}

/// `s(t)` by the product form `prod q(i)^(2^(t-i))` over the closed-form
/// ratios, folded as `acc -> acc^2 * q(i)`. Requires `t >= 1`.
///
/// The product must come out an integer; a surviving denominator is
/// reported as an error.
pub fn spanning_tree_count_product(t: u32) -> Result<BigUint> {
    if t == 0 {
        return Err(Error::LevelTooSmall { t, min: 1 });
    }
    let mut acc = BigRational::one();
    for i in 1..=t {
        let q = growth_ratio_closed_form(i)?;
        acc = &acc * &acc * q;
    }
    if !acc.is_integer() {
        return Err(Error::NonIntegerProduct { t, den: acc.denom().to_string() });
    }
    let v = acc.to_integer();
    debug_assert!(!v.is_negative());
    Ok(v.magnitude().clone())
}

/// Entropy partial sum at level `t` together with the decimal digit count
/// of `s(t)`, both derived from the exact ratios without materializing the
/// count itself.
#[derive(Debug, Clone)]
pub struct EntropyEstimate {
    pub t: u32,
    /// `ln s(t) / 2^(t+1)` with `precision` correct decimal digits.
    pub h: FixedDecimal,
    /// `floor(log10 s(t)) + 1`.
    pub digits: u64,
}

impl EntropyEstimate {
    pub fn h_f64(&self) -> f64 {
        self.h.to_f64()
    }
}

/// Computes `h_t = sum_{i=1..t} 2^(-i-1) ln q(i)` to at least `precision`
/// decimal digits, plus the digit count of `s(t)` from the same logarithm
/// sum. Requires `t >= 1` and `precision >= 10`.
pub fn entropy(t: u32, precision: u32) -> Result<EntropyEstimate> {
    if t == 0 {
        return Err(Error::LevelTooSmall { t, min: 1 });
    }
    if precision < 10 {
        return Err(Error::PrecisionTooSmall(precision));
    }

    // Guard digits: t floor-divisions for h, and amplification by up to
    // 2^(t-1) when the same logarithms are recombined for ln s(t).
    let digits_of_t = (t.checked_ilog10().unwrap_or(0)) + 1;
    let scale = precision
        .max(16)
        .checked_add(16 + digits_of_t + (3 * t + 9) / 10)
        .expect("scale overflow");

    let mut h = FixedDecimal::zero(scale);
    let mut log_s = BigInt::zero(); // ln s(t) * 10^scale, approximately
    for (idx, q) in RatioIter::new().take(t as usize).enumerate() {
        let i = idx as u32 + 1;
        let ln_q = ln_rational(&q, scale);
        log_s += ln_q.mantissa() << (t - i);
        h = h.add(&ln_q.div_pow2(i + 1));
    }

    let ln10 = ln_rational(&BigRational::from_integer(BigInt::from(10)), scale);
    let digits = (log_s.div_floor(ln10.mantissa()) + 1u32)
        .to_u64()
        .unwrap_or(u64::MAX);

    Ok(EntropyEstimate { t, h: h.rescale(precision), digits })
}

/// The entropy limit to f64 accuracy (partial sum at t = 40; the
/// remaining tail is below `ln(4) * 2^-41`).
pub fn entropy_limit_f64() -> f64 {
    entropy(40, 20).expect("fixed arguments are valid").h_f64()
}
