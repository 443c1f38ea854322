//! Exact binomials and rationals shared by the bound computations.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

/// `C(n, r)` as an exact big integer; zero when `r > n`.
pub fn binomial_big(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for i in 0..r {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, r)` in `u128`, saturating at `u128::MAX`.
pub fn binomial_u128(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r as u128 {
        // acc * (n - i) / (i + 1) is always integral; divide by gcd first to stay in range.
        let num = n as u128 - i;
        let den = i + 1;
        let g = gcd(acc, den);
        let (a, d) = (acc / g, den / g);
        let n2 = num / d;
        match a.checked_mul(n2) {
            Some(v) => acc = v,
            None => return u128::MAX,
        }
    }
    acc
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Natural log of a positive big integer, accurate to f64 precision.
pub fn ln_big(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().map(f64::ln).unwrap_or(f64::INFINITY);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// A rational rendered as a numerator/denominator pair in JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RationalPair {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for RationalPair {
    fn from(r: &BigRational) -> Self {
        RationalPair {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}
