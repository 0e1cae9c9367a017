//! Exact rational scalars.
//!
//! All coordinates, exponents and weights are arbitrary-precision rationals
//! kept in lowest terms with a positive denominator (zero is `0/1`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders `p/q`, or just `p` when the denominator is one.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses an integer, a `p/q` fraction, or a finite decimal such as `-1.25`.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty number".into());
    }
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|_| format!("bad numerator in `{s}`"))?;
        let q = BigInt::from_str(q.trim()).map_err(|_| format!("bad denominator in `{s}`"))?;
        if q.is_zero() {
            return Err(format!("zero denominator in `{s}`"));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let digits_ok = |t: &str| t.chars().all(|c| c.is_ascii_digit());
        let whole_digits = whole.trim_start_matches(['-', '+']);
        if !digits_ok(whole_digits)
            || !digits_ok(frac)
            || (whole_digits.is_empty() && frac.is_empty())
        {
            return Err(format!("bad decimal `{s}`"));
        }
        let mut mantissa = String::with_capacity(whole_digits.len() + frac.len());
        mantissa.push_str(whole_digits);
        mantissa.push_str(frac);
        let mut n = BigInt::from_str(if mantissa.is_empty() { "0" } else { &mantissa })
            .map_err(|_| format!("bad decimal `{s}`"))?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::new(n, d));
    }
    BigInt::from_str(s)
        .map(Rational::from_integer)
        .map_err(|_| format!("bad number `{s}`"))
}

/// Least common multiple of the denominators of `values` (one for an empty input).
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

pub fn gcd_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::zero(), |acc, v| acc.gcd(v))
}

/// Smallest prime factor of `n` for `|n| >= 2`; zero is divisible by every prime, so 2.
pub fn smallest_prime_factor(n: &BigInt) -> Option<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return Some(BigInt::from(2));
    }
    if n.is_one() {
        return None;
    }
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if n.is_multiple_of(&p) {
            return Some(p);
        }
        p += 1;
    }
    Some(n)
}
