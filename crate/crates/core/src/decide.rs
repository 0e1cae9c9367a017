//! Decision procedures for shapetiling a square with rational or integer
//! weights.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::rational::{fmt_rational, Rational};
use crate::slope::{condition2_check, Slope, SlopeError, SlopeReport};
use crate::tiles::{TileError, WeightedTile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Question {
    /// Rational weights.
    Q,
    /// Integer weights.
    Z,
}

impl fmt::Display for Question {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Question::Q => f.write_str("Q"),
            Question::Z => f.write_str("Z"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    ZeroArea,
    /// Class areas along this slope are all divisible by the prime.
    SlopePrime(Slope, BigInt),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::ZeroArea => f.write_str("zero area"),
            Witness::SlopePrime(s, p) => write!(f, "slope mu={s} prime p={p}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub question: Question,
    pub answer: bool,
    pub witness: Option<Witness>,
    /// Factor the tile was scaled by to reach its lattice form.
    pub lattice_scale: Rational,
    pub area: Rational,
}

impl Verdict {
    fn yes(question: Question, lattice_scale: Rational, area: Rational) -> Self {
        Verdict {
            question,
            answer: true,
            witness: None,
            lattice_scale,
            area,
        }
    }

    fn no(question: Question, witness: Witness, lattice_scale: Rational, area: Rational) -> Self {
        Verdict {
            question,
            answer: false,
            witness: Some(witness),
            lattice_scale,
            area,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {}",
            self.question,
            if self.answer { "yes" } else { "no" }
        )?;
        if let Some(w) = &self.witness {
            write!(f, ", witness {w}")?;
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DecideError {
    #[error("weight {0} is not an integer; the Z question needs integer weights")]
    NonIntegerWeight(String),
    #[error(transparent)]
    Tile(#[from] TileError),
    #[error(transparent)]
    Slope(#[from] SlopeError),
}

/// Yes exactly when the weighted area is nonzero.
pub fn decide_q(t: &WeightedTile) -> Result<Verdict, DecideError> {
    let form = t.to_lattice()?;
    let area = t.weighted_area();
    Ok(if area.is_zero() {
        Verdict::no(Question::Q, Witness::ZeroArea, form.scale, area)
    } else {
        Verdict::yes(Question::Q, form.scale, area)
    })
}

/// Decides on the lattice form: nonzero area, and no slope/prime pair
/// dividing every class area.
pub fn decide_z(t: &WeightedTile) -> Result<Verdict, DecideError> {
    decide_z_report(t).map(|(v, _)| v)
}

/// As [`decide_z`], also returning the slope report when one was computed.
pub fn decide_z_report(t: &WeightedTile) -> Result<(Verdict, Option<SlopeReport>), DecideError> {
    if let Some(w) = t.weights().find(|w| !w.is_integer()) {
        return Err(DecideError::NonIntegerWeight(fmt_rational(w)));
    }
    let form = t.to_lattice()?;
    let area = t.weighted_area();
    if area.is_zero() {
        return Ok((
            Verdict::no(Question::Z, Witness::ZeroArea, form.scale, area),
            None,
        ));
    }
    let report = condition2_check(&form.tile)?;
    let verdict = match &report.failing_witness {
        Some((s, p)) => Verdict::no(
            Question::Z,
            Witness::SlopePrime(*s, p.clone()),
            form.scale,
            area,
        ),
        None => Verdict::yes(Question::Z, form.scale, area),
    };
    Ok((verdict, Some(report)))
}
