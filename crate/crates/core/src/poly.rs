//! Sparse bivariate Laurent polynomials with rational exponents and rational
//! coefficients, plus the univariate image ring of the line substitution.
//!
//! Terms live in a `BTreeMap` keyed by the lexicographic exponent order, so
//! equality, iteration and rendering are canonical. Zero coefficients are
//! never stored; the zero polynomial is the empty map.

use crate::rational::{fmt_rational, int, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("power substitution requires a positive exponent scale, got {0}")]
    NonPositiveScale(String),
    #[error("line substitution requires (c, d) != (0, 0)")]
    ZeroDirection,
    #[error("line substitution requires gcd(|c|, |d|) = 1, got ({0}, {1})")]
    NotCoprime(i64, i64),
    #[error("square side must be at least 1, got {0}")]
    BadSide(i64),
}

/// Exponents `(u, v)` of a monomial `X^u Y^v`, ordered lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentPair {
    pub u: Rational,
    pub v: Rational,
}

impl ExponentPair {
    pub fn new(u: Rational, v: Rational) -> Self {
        ExponentPair { u, v }
    }

    pub fn origin() -> Self {
        ExponentPair::new(Rational::zero(), Rational::zero())
    }
}

fn accumulate<K: Ord>(map: &mut BTreeMap<K, Rational>, key: K, coeff: Rational) {
    if coeff.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Vacant(e) => {
            e.insert(coeff);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += coeff;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// An element of `Q[X^Q, Y^Q]`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<ExponentPair, Rational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(Rational::one(), Rational::zero(), Rational::zero())
    }

    pub fn monomial(coeff: Rational, u: Rational, v: Rational) -> Self {
        let mut p = LaurentPoly::zero();
        accumulate(&mut p.terms, ExponentPair::new(u, v), coeff);
        p
    }

    /// Builds a polynomial from `(coefficient, u, v)` triples, combining like terms.
    pub fn from_terms(terms: impl IntoIterator<Item = (Rational, Rational, Rational)>) -> Self {
        let mut p = LaurentPoly::zero();
        for (c, u, v) in terms {
            accumulate(&mut p.terms, ExponentPair::new(u, v), c);
        }
        p
    }

    /// Integer-data convenience for tests and fixtures.
    pub fn from_int_terms(terms: &[(i64, i64, i64)]) -> Self {
        LaurentPoly::from_terms(terms.iter().map(|&(c, u, v)| (int(c), int(u), int(v))))
    }

    /// `(X^alpha - 1)(Y^beta - 1)`, the polynomial of the anchored rectangle `R_{alpha,beta}`.
    pub fn corner_rectangle(alpha: &Rational, beta: &Rational) -> Self {
        let zero = Rational::zero();
        LaurentPoly::from_terms([
            (Rational::one(), alpha.clone(), beta.clone()),
            (-Rational::one(), alpha.clone(), zero.clone()),
            (-Rational::one(), zero.clone(), beta.clone()),
            (Rational::one(), zero.clone(), zero),
        ])
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentPair, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &ExponentPair) -> Rational {
        self.terms.get(e).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, a: &Rational) -> Self {
        if a.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * a)).collect(),
        }
    }

    /// Multiplication by `X^sigma Y^tau`.
    pub fn shift(&self, sigma: &Rational, tau: &Rational) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (ExponentPair::new(&e.u + sigma, &e.v + tau), c.clone()))
                .collect(),
        }
    }

    /// `f(X^rho, Y^rho)`.
    pub fn substitute_powers(&self, rho: &Rational) -> Result<Self, PolyError> {
        if !rho.is_positive() {
            return Err(PolyError::NonPositiveScale(fmt_rational(rho)));
        }
        Ok(LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (ExponentPair::new(&e.u * rho, &e.v * rho), c.clone()))
                .collect(),
        })
    }

    /// The line substitution `f(Z^c, Z^d)`.
    pub fn substitute_line(&self, c: i64, d: i64) -> Result<UniLaurentPoly, PolyError> {
        if c == 0 && d == 0 {
            return Err(PolyError::ZeroDirection);
        }
        if c.gcd(&d) != 1 {
            return Err(PolyError::NotCoprime(c, d));
        }
        let (c, d) = (int(c), int(d));
        let mut out = UniLaurentPoly::zero();
        for (e, coeff) in &self.terms {
            accumulate(&mut out.terms, &e.u * &c + &e.v * &d, coeff.clone());
        }
        Ok(out)
    }

    /// Sum of all coefficients, i.e. evaluation at `X = Y = 1`.
    pub fn eval_at_one(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |acc, c| acc + c)
    }

    /// The smallest exponent (in term order) where `self` and `other` differ,
    /// with the two coefficients found there.
    pub fn first_difference(
        &self,
        other: &LaurentPoly,
    ) -> Option<(ExponentPair, Rational, Rational)> {
        let diff = self - other;
        diff.terms
            .keys()
            .next()
            .map(|e| (e.clone(), self.coefficient(e), other.coefficient(e)))
    }

    /// Exponents summed coefficientwise along one variable: `f(1, Y)` keyed by `v`
    /// when `by_v` is set, else `f(X, 1)` keyed by `u`.
    pub(crate) fn marginal(&self, by_v: bool) -> BTreeMap<Rational, Rational> {
        let mut out = BTreeMap::new();
        for (e, c) in &self.terms {
            let key = if by_v { e.v.clone() } else { e.u.clone() };
            accumulate(&mut out, key, c.clone());
        }
        out
    }
}

/// `g_l = (X^l - 1)(Y^l - 1)`, the polynomial of the `l x l` square at the origin.
pub fn square_poly(l: i64) -> Result<LaurentPoly, PolyError> {
    if l < 1 {
        return Err(PolyError::BadSide(l));
    }
    Ok(LaurentPoly::corner_rectangle(&int(l), &int(l)))
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            accumulate(&mut out.terms, e.clone(), c.clone());
        }
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, rhs: LaurentPoly) -> LaurentPoly {
        for (e, c) in rhs.terms {
            accumulate(&mut self.terms, e, c);
        }
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            accumulate(&mut out.terms, e.clone(), -c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                accumulate(
                    &mut out.terms,
                    ExponentPair::new(&e1.u + &e2.u, &e1.v + &e2.v),
                    c1 * c2,
                );
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

fn write_signed_terms<'a, I>(f: &mut fmt::Formatter<'_>, terms: I) -> fmt::Result
where
    I: Iterator<Item = (&'a Rational, String)>,
{
    let mut first = true;
    for (c, mono) in terms {
        let magnitude = fmt_rational(&c.abs());
        let body = if mono.is_empty() {
            magnitude
        } else {
            format!("{magnitude} {mono}")
        };
        match (first, c.is_negative()) {
            (true, false) => write!(f, "{body}")?,
            (true, true) => write!(f, "-{body}")?,
            (false, false) => write!(f, " + {body}")?,
            (false, true) => write!(f, " - {body}")?,
        }
        first = false;
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Canonical rendering, e.g. `1 - 1 Y^{1} - 1 X^{1} + 1 X^{1} Y^{1}`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_signed_terms(
            f,
            self.terms.iter().map(|(e, c)| {
                let mut parts = Vec::new();
                if !e.u.is_zero() {
                    parts.push(format!("X^{{{}}}", fmt_rational(&e.u)));
                }
                if !e.v.is_zero() {
                    parts.push(format!("Y^{{{}}}", fmt_rational(&e.v)));
                }
                (c, parts.join(" "))
            }),
        )
    }
}

/// An element of `Q[Z^Q]`, the image ring of the line substitution.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct UniLaurentPoly {
    terms: BTreeMap<Rational, Rational>,
}

impl UniLaurentPoly {
    pub fn zero() -> Self {
        UniLaurentPoly::default()
    }

    pub fn from_int_terms(terms: &[(i64, i64)]) -> Self {
        let mut p = UniLaurentPoly::zero();
        for &(c, e) in terms {
            accumulate(&mut p.terms, int(e), int(c));
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when every coefficient is an integer multiple of `n`.
    pub fn coefficients_divisible_by(&self, n: &BigInt) -> bool {
        self.terms
            .values()
            .all(|c| c.denom().is_one() && c.numer().is_multiple_of(n))
    }
}

impl Add for &UniLaurentPoly {
    type Output = UniLaurentPoly;
    fn add(self, rhs: &UniLaurentPoly) -> UniLaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            accumulate(&mut out.terms, e.clone(), c.clone());
        }
        out
    }
}

impl Mul for &UniLaurentPoly {
    type Output = UniLaurentPoly;
    fn mul(self, rhs: &UniLaurentPoly) -> UniLaurentPoly {
        let mut out = UniLaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                accumulate(&mut out.terms, e1 + e2, c1 * c2);
            }
        }
        out
    }
}

impl fmt::Display for UniLaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_signed_terms(
            f,
            self.terms.iter().map(|(e, c)| {
                let mono = if e.is_zero() {
                    String::new()
                } else {
                    format!("Z^{{{}}}", fmt_rational(e))
                };
                (c, mono)
            }),
        )
    }
}
