//! Exact rational arithmetic.
//!
//! All probabilities, payoffs and game values are carried as arbitrary
//! precision fractions in lowest terms. Text form is `p/q`, or `p` when the
//! denominator is one.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use num_rational::BigRational as Rational;

/// Builds `numer / denom`. Panics when `denom` is zero.
pub fn ratio(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn zero() -> Rational {
    Rational::zero()
}

pub fn one() -> Rational {
    Rational::one()
}

/// Parses `p/q`, `p`, or `-p/q`. Whitespace around the parts is rejected.
pub fn parse(text: &str) -> Option<Rational> {
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let valid = |s: &str| {
        let digits = s.strip_prefix('-').unwrap_or(s);
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num) {
        return None;
    }
    let numer: BigInt = num.parse().ok()?;
    match den {
        None => Some(Rational::from_integer(numer)),
        Some(d) => {
            if !valid(d) || d.starts_with('-') {
                return None;
            }
            let denom: BigInt = d.parse().ok()?;
            if denom.is_zero() {
                return None;
            }
            Some(Rational::new(numer, denom))
        }
    }
}

/// Canonical text form, the inverse of [`parse`].
pub fn format(value: &Rational) -> String {
    value.to_string()
}

/// Failure odds `(1 - p) / p`.
pub fn odds(p: &Rational) -> Rational {
    (one() - p) / p
}

pub fn to_f64(value: &Rational) -> f64 {
    // numer and denom may both exceed f64 range on long products; scale first.
    let n = value.numer();
    let d = value.denom();
    let bits = n.bits().max(d.bits());
    if bits < 1000 {
        return num_traits::ToPrimitive::to_f64(n).unwrap_or(f64::NAN)
            / num_traits::ToPrimitive::to_f64(d).unwrap_or(f64::NAN);
    }
    let shift = bits - 900;
    let n = num_traits::ToPrimitive::to_f64(&(n >> shift)).unwrap_or(0.0);
    let d = num_traits::ToPrimitive::to_f64(&(d >> shift)).unwrap_or(f64::INFINITY);
    n / d
}

pub fn is_probability(p: &Rational) -> bool {
    !p.is_negative() && *p <= one()
}

pub fn sum<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    values.into_iter().fold(zero(), |acc, v| acc + v)
}

pub fn product<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    values.into_iter().fold(one(), |acc, v| acc * v)
}

/// Scales nonnegative weights so that they sum to one. All-zero input
/// becomes the uniform distribution.
pub fn normalize(weights: &[Rational]) -> Vec<Rational> {
    let total = sum(weights);
    if total.is_zero() {
        let n = weights.len() as i64;
        return weights.iter().map(|_| ratio(1, n)).collect();
    }
    weights.iter().map(|w| w / &total).collect()
}
