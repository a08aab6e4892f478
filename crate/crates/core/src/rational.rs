//! Thin helpers around `BigRational`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn factorial(k: u32) -> Q {
    let mut acc = BigInt::one();
    for i in 2..=k {
        acc *= i;
    }
    Q::from_integer(acc)
}

/// n (n-1) ... (n-k+1); equal to 1 for k = 0.
pub fn falling(n: i64, k: u32) -> Q {
    let mut acc = BigInt::one();
    for i in 0..k as i64 {
        acc *= n - i;
    }
    Q::from_integer(acc)
}

/// Generalised binomial coefficient `binom(n, k)` for any integer `n`.
pub fn binom(n: i64, k: u32) -> Q {
    falling(n, k) / factorial(k)
}

/// Fully reduced `p/q` rendering (integers print without a denominator).
pub fn fmt_q(c: &Q) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Q::new(n, d))
    } else {
        Some(Q::from_integer(s.parse().ok()?))
    }
}

/// Bit length of numerator plus denominator, used as a pivot size heuristic.
pub fn bit_size(c: &Q) -> u64 {
    c.numer().abs().bits() + c.denom().bits()
}

pub fn to_i64(c: &Q) -> Option<i64> {
    if !c.is_integer() {
        return None;
    }
    i64::try_from(c.numer().clone()).ok()
}

pub fn sign_q(s: i32) -> Q {
    if s < 0 {
        -Q::one()
    } else {
        Q::one()
    }
}

pub fn is_negative(c: &Q) -> bool {
    c.is_negative()
}
