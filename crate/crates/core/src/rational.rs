//! Exact rational helpers shared by every module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p"` or `"p/q"` (optionally signed) into a reduced rational.
pub fn parse_rational(text: &str) -> Result<Q> {
    let text = text.trim();
    let bad = || Error::ParseRational(text.to_string());
    match text.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().map_err(|_| bad())?;
            let den: BigInt = den.trim().parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(num, den))
        }
        None => {
            let num: BigInt = text.parse().map_err(|_| bad())?;
            Ok(Q::from_integer(num))
        }
    }
}

/// Integers print without a denominator, everything else as `p/q`.
pub fn format_rational(value: &Q) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

pub fn format_all(values: &[Q]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

pub fn sign_of(value: &Q) -> i8 {
    if value.is_zero() {
        0
    } else if value.is_positive() {
        1
    } else {
        -1
    }
}

pub fn pow_q(base: &Q, exp: usize) -> Q {
    let mut acc = Q::one();
    for _ in 0..exp {
        acc *= base;
    }
    acc
}
