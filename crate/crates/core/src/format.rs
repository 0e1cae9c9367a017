//! Text and JSON formats for tiles, certificates, verdicts and slope
//! reports.
//!
//! Tile files list `rect x0 x1 y0 y1 weight` records, one per line, with
//! `#` starting a comment. Certificate files add a header (`side`,
//! `anchor`, `weight`), the prototile as an inline `tile` ... `end` block
//! or a `prototile <path>` reference, and `place weight scale sx sy`
//! records. A document whose first non-blank character is `{` is read as
//! JSON instead.

use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use serde::de::{self, Deserializer, Visitor};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::certify::{Certificate, CheckOutcome, Placement};
use crate::decide::{Verdict, Witness};
use crate::rational::{fmt_rational, int, parse_rational, Rational};
use crate::slope::SlopeReport;
use crate::tiles::{Rect, WeightedTile};

/// `line` is zero for errors that have no single source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            f.write_str(&self.message)
        } else {
            write!(
                f,
                "line {}, column {}: {}",
                self.line, self.column, self.message
            )
        }
    }
}

impl std::error::Error for ParseError {}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }

    fn from_json(e: serde_json::Error) -> Self {
        ParseError::new(e.line(), e.column(), e.to_string())
    }
}

fn is_json(text: &str) -> bool {
    text.trim_start().starts_with('{')
}

/// Whitespace-separated words of a line with their 1-based columns, up to
/// any `#` comment.
fn words(line: &str) -> Vec<(usize, &str)> {
    let body = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in body.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push((s, &body[s..i]));
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s, &body[s..]));
    }
    out.into_iter()
        .map(|(s, w)| (body[..s].chars().count() + 1, w))
        .collect()
}

struct Line<'a> {
    number: usize,
    words: Vec<(usize, &'a str)>,
}

impl<'a> Line<'a> {
    fn keyword(&self) -> &'a str {
        self.words[0].1
    }

    fn err(&self, column: usize, message: impl Into<String>) -> ParseError {
        ParseError::new(self.number, column, message)
    }

    fn expect_args(&self, n: usize, usage: &str) -> Result<(), ParseError> {
        if self.words.len() != n + 1 {
            let column = self.words.get(n + 1).map_or(self.words[0].0, |w| w.0);
            return Err(self.err(
                column,
                format!("`{}` takes {n} fields: {usage}", self.keyword()),
            ));
        }
        Ok(())
    }

    fn rational(&self, k: usize) -> Result<Rational, ParseError> {
        let (column, word) = self.words[k];
        parse_rational(word).map_err(|m| self.err(column, m))
    }

    fn integer(&self, k: usize) -> Result<BigInt, ParseError> {
        let q = self.rational(k)?;
        if !q.is_integer() {
            return Err(self.err(
                self.words[k].0,
                format!("expected an integer, got {}", self.words[k].1),
            ));
        }
        Ok(q.to_integer())
    }
}

fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(n, l)| {
        let words = words(l);
        (!words.is_empty()).then_some(Line {
            number: n + 1,
            words,
        })
    })
}

fn rect_record(line: &Line<'_>) -> Result<(Rational, Rect), ParseError> {
    line.expect_args(5, "x0 x1 y0 y1 weight")?;
    let v = (1..=5)
        .map(|k| line.rational(k))
        .collect::<Result<Vec<_>, _>>()?;
    let [x0, x1, y0, y1, w]: [Rational; 5] = v.try_into().expect("five fields");
    let rect = Rect::new(x0, x1, y0, y1).map_err(|e| line.err(line.words[1].0, e.to_string()))?;
    Ok((w, rect))
}

/// Parses a tile document, text or JSON.
pub fn parse_tile(text: &str) -> Result<WeightedTile, ParseError> {
    if is_json(text) {
        let doc: TileDoc = serde_json::from_str(text).map_err(ParseError::from_json)?;
        return doc.into_tile();
    }
    let mut rects = Vec::new();
    for line in lines(text) {
        if line.keyword() != "rect" {
            return Err(line.err(
                line.words[0].0,
                format!("unknown record `{}`", line.keyword()),
            ));
        }
        rects.push(rect_record(&line)?);
    }
    Ok(WeightedTile::from_rects(&rects))
}

/// Canonical text form: one record per nonzero cell of the minimal grid.
pub fn format_tile(t: &WeightedTile) -> String {
    t.to_string()
}

pub fn tile_json(t: &WeightedTile) -> Value {
    let rects: Vec<Value> = t
        .cells()
        .map(|(r, w)| {
            json!({
                "x0": fmt_rational(r.x0()),
                "x1": fmt_rational(r.x1()),
                "y0": fmt_rational(r.y0()),
                "y1": fmt_rational(r.y1()),
                "weight": fmt_rational(w),
            })
        })
        .collect();
    json!({ "rects": rects })
}

/// A rational written as a JSON string (`"3/2"`, `"0.5"`) or integer.
#[derive(Debug, Clone)]
struct Num(Rational);

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct NumVisitor;
        impl Visitor<'_> for NumVisitor {
            type Value = Num;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a string such as \"3/2\" or \"0.25\"")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Num, E> {
                Ok(Num(int(v)))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Num, E> {
                Ok(Num(Rational::from_integer(v.into())))
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<Num, E> {
                Err(E::custom(format!(
                    "non-integer number {v}; write it as a string"
                )))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Num, E> {
                parse_rational(v).map(Num).map_err(E::custom)
            }
        }
        d.deserialize_any(NumVisitor)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RectDoc {
    x0: Num,
    x1: Num,
    y0: Num,
    y1: Num,
    weight: Num,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TileDoc {
    rects: Vec<RectDoc>,
}

impl TileDoc {
    fn into_tile(self) -> Result<WeightedTile, ParseError> {
        let rects = self
            .rects
            .into_iter()
            .enumerate()
            .map(|(k, r)| {
                Rect::new(r.x0.0, r.x1.0, r.y0.0, r.y1.0)
                    .map(|rect| (r.weight.0, rect))
                    .map_err(|e| ParseError::new(0, 0, format!("rects[{k}]: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(WeightedTile::from_rects(&rects))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PlacementDoc {
    weight: Num,
    scale: Num,
    shift: (Num, Num),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateDoc {
    side: Num,
    anchor: (Num, Num),
    weight: Num,
    #[serde(default)]
    tile: Option<TileDoc>,
    #[serde(default)]
    prototile: Option<String>,
    placements: Vec<PlacementDoc>,
}

/// Parses a certificate whose prototile is inline.
pub fn parse_certificate(text: &str) -> Result<Certificate, ParseError> {
    parse_certificate_with(text, |path| {
        Err(format!("cannot resolve prototile reference `{path}`"))
    })
}

/// Parses a certificate, loading `prototile <path>` references through
/// `load`.
pub fn parse_certificate_with(
    text: &str,
    load: impl Fn(&str) -> Result<WeightedTile, String>,
) -> Result<Certificate, ParseError> {
    if is_json(text) {
        let doc: CertificateDoc = serde_json::from_str(text).map_err(ParseError::from_json)?;
        let prototile = match (doc.tile, doc.prototile) {
            (Some(t), None) => t.into_tile()?,
            (None, Some(path)) => load(&path).map_err(|m| ParseError::new(0, 0, m))?,
            _ => {
                return Err(ParseError::new(
                    0,
                    0,
                    "give exactly one of `tile` and `prototile`",
                ))
            }
        };
        let placements = doc
            .placements
            .into_iter()
            .enumerate()
            .map(|(k, p)| {
                Placement::new(p.weight.0, p.scale.0, (p.shift.0 .0, p.shift.1 .0))
                    .map_err(|e| ParseError::new(0, 0, format!("placements[{k}]: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let weight = integer_num(doc.weight, "weight")?;
        return Certificate::new(
            prototile,
            placements,
            doc.side.0,
            (doc.anchor.0 .0, doc.anchor.1 .0),
            weight,
        )
        .map_err(|e| ParseError::new(0, 0, e.to_string()));
    }

    let mut side = None;
    let mut anchor = None;
    let mut weight = None;
    let mut prototile: Option<WeightedTile> = None;
    let mut placements = Vec::new();
    let mut block: Option<(usize, Vec<(Rational, Rect)>)> = None;
    let mut last_line = 0;

    for line in lines(text) {
        last_line = line.number;
        let key = line.keyword();
        if let Some((_, rects)) = block.as_mut() {
            match key {
                "rect" => rects.push(rect_record(&line)?),
                "end" => {
                    line.expect_args(0, "")?;
                    let (_, rects) = block.take().expect("inside block");
                    prototile = Some(WeightedTile::from_rects(&rects));
                }
                _ => {
                    return Err(line.err(
                        line.words[0].0,
                        format!("expected `rect` or `end`, got `{key}`"),
                    ))
                }
            }
            continue;
        }
        let once = |seen: bool| -> Result<(), ParseError> {
            if seen {
                return Err(line.err(line.words[0].0, format!("duplicate `{key}`")));
            }
            Ok(())
        };
        match key {
            "side" => {
                once(side.is_some())?;
                line.expect_args(1, "side")?;
                side = Some(line.rational(1)?);
            }
            "anchor" => {
                once(anchor.is_some())?;
                line.expect_args(2, "x y")?;
                anchor = Some((line.rational(1)?, line.rational(2)?));
            }
            "weight" => {
                once(weight.is_some())?;
                line.expect_args(1, "w")?;
                weight = Some(line.integer(1)?);
            }
            "tile" => {
                once(prototile.is_some())?;
                line.expect_args(0, "")?;
                block = Some((line.number, Vec::new()));
            }
            "prototile" => {
                once(prototile.is_some())?;
                line.expect_args(1, "path")?;
                let (column, path) = line.words[1];
                prototile = Some(load(path).map_err(|m| line.err(column, m))?);
            }
            "place" => {
                line.expect_args(4, "weight scale sx sy")?;
                let v = (1..=4)
                    .map(|k| line.rational(k))
                    .collect::<Result<Vec<_>, _>>()?;
                let [w, s, sx, sy]: [Rational; 4] = v.try_into().expect("four fields");
                placements.push(
                    Placement::new(w, s, (sx, sy))
                        .map_err(|e| line.err(line.words[1].0, e.to_string()))?,
                );
            }
            _ => return Err(line.err(line.words[0].0, format!("unknown record `{key}`"))),
        }
    }
    if let Some((start, _)) = block {
        return Err(ParseError::new(
            start,
            1,
            "`tile` block is never closed with `end`",
        ));
    }
    let missing = |what: &str| ParseError::new(last_line + 1, 1, format!("missing `{what}`"));
    let side = side.ok_or_else(|| missing("side"))?;
    let anchor = anchor.ok_or_else(|| missing("anchor"))?;
    let weight = weight.ok_or_else(|| missing("weight"))?;
    let prototile = prototile.ok_or_else(|| missing("tile"))?;
    Certificate::new(prototile, placements, side, anchor, weight)
        .map_err(|e| ParseError::new(1, 1, e.to_string()))
}

fn integer_num(n: Num, what: &str) -> Result<BigInt, ParseError> {
    if !n.0.is_integer() {
        return Err(ParseError::new(
            0,
            0,
            format!("`{what}` must be an integer"),
        ));
    }
    Ok(n.0.to_integer())
}

/// Canonical text form; the prototile is always written inline.
pub fn format_certificate(c: &Certificate) -> String {
    let mut s = String::new();
    writeln!(s, "side {}", fmt_rational(&c.target_side)).unwrap();
    writeln!(
        s,
        "anchor {} {}",
        fmt_rational(&c.target_anchor.0),
        fmt_rational(&c.target_anchor.1)
    )
    .unwrap();
    writeln!(s, "weight {}", c.target_weight).unwrap();
    s.push_str("tile\n");
    s.push_str(&format_tile(&c.prototile));
    s.push_str("end\n");
    for p in &c.placements {
        writeln!(
            s,
            "place {} {} {} {}",
            fmt_rational(&p.weight),
            fmt_rational(&p.scale),
            fmt_rational(&p.shift.0),
            fmt_rational(&p.shift.1)
        )
        .unwrap();
    }
    s
}

pub fn certificate_json(c: &Certificate) -> Value {
    let placements: Vec<Value> = c
        .placements
        .iter()
        .map(|p| {
            json!({
                "weight": fmt_rational(&p.weight),
                "scale": fmt_rational(&p.scale),
                "shift": [fmt_rational(&p.shift.0), fmt_rational(&p.shift.1)],
            })
        })
        .collect();
    json!({
        "side": fmt_rational(&c.target_side),
        "anchor": [fmt_rational(&c.target_anchor.0), fmt_rational(&c.target_anchor.1)],
        "weight": c.target_weight.to_string(),
        "tile": tile_json(&c.prototile),
        "placements": placements,
    })
}

pub fn verdict_json(v: &Verdict) -> Value {
    let witness = match &v.witness {
        None => Value::Null,
        Some(Witness::ZeroArea) => json!({ "kind": "zero-area" }),
        Some(Witness::SlopePrime(s, p)) => json!({
            "kind": "slope-prime",
            "slope": fmt_rational(&s.mu()),
            "prime": p.to_string(),
        }),
    };
    json!({
        "question": v.question.to_string(),
        "answer": if v.answer { "yes" } else { "no" },
        "witness": witness,
        "latticeScale": fmt_rational(&v.lattice_scale),
        "area": fmt_rational(&v.area),
    })
}

pub fn check_outcome_json(o: &CheckOutcome) -> Value {
    match o {
        CheckOutcome::Valid => json!({ "valid": true }),
        CheckOutcome::Mismatch {
            exponent,
            placed,
            target,
        } => json!({
            "valid": false,
            "exponent": [fmt_rational(&exponent.u), fmt_rational(&exponent.v)],
            "placed": fmt_rational(placed),
            "target": fmt_rational(target),
        }),
        CheckOutcome::Malformed(m) => json!({ "valid": false, "malformed": m }),
    }
}

pub fn slope_report_json(r: &SlopeReport) -> Value {
    let slopes: Vec<Value> = r
        .per_slope
        .iter()
        .map(|(s, e)| {
            let classes: Vec<Value> = e
                .classes
                .iter()
                .map(|c| {
                    json!({
                        "cells": c.members.iter().map(|&(i, j)| json!([i, j])).collect::<Vec<_>>(),
                        "area": c.area.to_string(),
                    })
                })
                .collect();
            json!({
                "slope": fmt_rational(&s.mu()),
                "c": s.c(),
                "d": s.d(),
                "gcd": e.gcd.to_string(),
                "classes": classes,
            })
        })
        .collect();
    let witness = match &r.failing_witness {
        None => Value::Null,
        Some((s, p)) => json!({ "slope": fmt_rational(&s.mu()), "prime": p.to_string() }),
    };
    json!({
        "genericGcd": r.generic_gcd.to_string(),
        "slopes": slopes,
        "passes": r.passes(),
        "witness": witness,
    })
}

/// Aligned table: one row per relevant slope.
pub fn format_slope_report(r: &SlopeReport) -> String {
    let rows: Vec<[String; 3]> = r
        .per_slope
        .iter()
        .map(|(s, e)| {
            let areas: Vec<String> = e.classes.iter().map(|c| c.area.to_string()).collect();
            [format!("mu={s}"), e.gcd.to_string(), areas.join(" ")]
        })
        .collect();
    let header = [
        "slope".to_string(),
        "gcd".to_string(),
        "class areas".to_string(),
    ];
    let w0 = rows
        .iter()
        .map(|r| r[0].len())
        .chain([header[0].len()])
        .max()
        .unwrap_or(0);
    let w1 = rows
        .iter()
        .map(|r| r[1].len())
        .chain([header[1].len()])
        .max()
        .unwrap_or(0);
    let mut s = String::new();
    writeln!(s, "generic gcd: {}", r.generic_gcd).unwrap();
    for row in std::iter::once(&header).chain(&rows) {
        writeln!(s, "{:<w0$}  {:>w1$}  {}", row[0], row[1], row[2]).unwrap();
    }
    match &r.failing_witness {
        Some((sl, p)) => {
            writeln!(s, "fails: every class area at mu={sl} is divisible by {p}").unwrap()
        }
        None => writeln!(s, "passes").unwrap(),
    }
    s
}
