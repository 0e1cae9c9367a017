//! Slope classes of integer-weighted lattice tiles and the divisibility tests
//! built on them.
//!
//! For coprime `c, d` with `d >= 1` the slope is `mu = -c/d`. Two cells lie
//! in the same class exactly when their offset is a multiple of `(d, -c)`,
//! i.e. when `c*i + d*j` agrees, so the line substitution
//! `(X, Y) -> (Z^-c, Z^-d)` sends each class to a single power of `Z`.

use crate::rational::{gcd_all, smallest_prime_factor, Rational};
use crate::tiles::LatticeTile;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SlopeError {
    #[error("slope needs nonzero c and d, got ({0}, {1})")]
    Degenerate(i64, i64),
    #[error("slope needs coprime (c, d), got ({0}, {1})")]
    NotCoprime(i64, i64),
    #[error("tile has a non-integer weight at cell ({0}, {1})")]
    NonIntegerWeight(i64, i64),
    #[error("tile is empty")]
    EmptyTile,
    #[error("modulus must be positive, got {0}")]
    BadModulus(String),
}

/// A nonzero, finite rational slope `mu = -c/d`, stored canonically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Slope {
    c: i64,
    d: i64,
}

impl Slope {
    /// Canonicalizes the sign so that `d >= 1`.
    pub fn new(c: i64, d: i64) -> Result<Self, SlopeError> {
        if c == 0 || d == 0 {
            return Err(SlopeError::Degenerate(c, d));
        }
        if c.gcd(&d) != 1 {
            return Err(SlopeError::NotCoprime(c, d));
        }
        Ok(if d < 0 {
            Slope { c: -c, d: -d }
        } else {
            Slope { c, d }
        })
    }

    /// The slope `rise / run` of a line, reduced.
    pub fn from_rise_run(rise: i64, run: i64) -> Result<Self, SlopeError> {
        if rise == 0 || run == 0 {
            return Err(SlopeError::Degenerate(rise, run));
        }
        let g = rise.gcd(&run);
        Slope::new(-rise / g, run / g)
    }

    /// `mu = 1`, the first slope in canonical order.
    pub fn unit() -> Self {
        Slope { c: -1, d: 1 }
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn mu(&self) -> Rational {
        Rational::new(BigInt::from(-self.c), BigInt::from(self.d))
    }

    /// Cells `(i, j)` and `(i', j')` share a class iff their keys agree.
    pub fn class_key(&self, i: i64, j: i64) -> i64 {
        self.c * i + self.d * j
    }
}

/// Canonical order: by `|c| + d`, then by `c`.
impl Ord for Slope {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.c.abs() + self.d, self.c).cmp(&(other.c.abs() + other.d, other.c))
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::rational::fmt_rational(&self.mu()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeClass {
    pub slope: Slope,
    pub members: Vec<(i64, i64)>,
    pub area: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeEntry {
    pub classes: Vec<SlopeClass>,
    pub gcd: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopeReport {
    /// gcd of all cell weights: the class-area gcd at every slope not listed.
    pub generic_gcd: BigInt,
    pub per_slope: BTreeMap<Slope, SlopeEntry>,
    pub failing_witness: Option<(Slope, BigInt)>,
}

impl SlopeReport {
    pub fn passes(&self) -> bool {
        self.failing_witness.is_none()
    }
}

fn integer_cells(t: &LatticeTile) -> Result<BTreeMap<(i64, i64), BigInt>, SlopeError> {
    match t.integer_weights() {
        Some(w) => Ok(w),
        None => {
            let (&(i, j), _) = t
                .cells()
                .find(|(_, w)| !w.denom().is_one())
                .expect("some weight is fractional");
            Err(SlopeError::NonIntegerWeight(i, j))
        }
    }
}

fn decompose_cells(cells: &BTreeMap<(i64, i64), BigInt>, s: Slope) -> Vec<SlopeClass> {
    let mut by_key: BTreeMap<i64, (Vec<(i64, i64)>, BigInt)> = BTreeMap::new();
    for (&(i, j), w) in cells {
        let entry = by_key
            .entry(s.class_key(i, j))
            .or_insert_with(|| (Vec::new(), BigInt::zero()));
        entry.0.push((i, j));
        entry.1 += w;
    }
    let mut classes: Vec<SlopeClass> = by_key
        .into_values()
        .map(|(members, area)| SlopeClass {
            slope: s,
            members,
            area,
        })
        .collect();
    classes.sort_by(|a, b| a.members[0].cmp(&b.members[0]));
    classes
}

/// Partitions the weighted cells of `t` into maximal classes along `(d, -c)`.
pub fn slope_decompose(t: &LatticeTile, s: Slope) -> Result<Vec<SlopeClass>, SlopeError> {
    Ok(decompose_cells(&integer_cells(t)?, s))
}

/// Every slope at which some class holds two or more cells.
pub fn relevant_slopes(t: &LatticeTile) -> Vec<Slope> {
    let cells: Vec<(i64, i64)> = t.cells().map(|(&k, _)| k).collect();
    let mut out = BTreeSet::new();
    for (a, &(i, j)) in cells.iter().enumerate() {
        for &(i2, j2) in &cells[a + 1..] {
            if let Ok(s) = Slope::from_rise_run(j2 - j, i2 - i) {
                out.insert(s);
            }
        }
    }
    out.into_iter().collect()
}

/// Checks that the class-area gcd is 1 at every nonzero rational slope.
pub fn condition2_check(t: &LatticeTile) -> Result<SlopeReport, SlopeError> {
    if t.is_empty() {
        return Err(SlopeError::EmptyTile);
    }
    let cells = integer_cells(t)?;
    let generic_gcd = gcd_all(cells.values());
    let per_slope: BTreeMap<Slope, SlopeEntry> = relevant_slopes(t)
        .into_par_iter()
        .map(|s| {
            let classes = decompose_cells(&cells, s);
            let gcd = gcd_all(classes.iter().map(|c| &c.area));
            (s, SlopeEntry { classes, gcd })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();

    let mut candidates: Vec<(BigInt, Slope)> = per_slope
        .iter()
        .filter(|(_, e)| !e.gcd.is_one())
        .filter_map(|(s, e)| smallest_prime_factor(&e.gcd).map(|p| (p, *s)))
        .collect();
    if let Some(p) = smallest_prime_factor(&generic_gcd) {
        candidates.push((p, Slope::unit()));
    }
    let failing_witness = candidates.into_iter().min().map(|(p, s)| (s, p));
    Ok(SlopeReport {
        generic_gcd,
        per_slope,
        failing_witness,
    })
}

/// Decides whether every class area at `s` is divisible by `n` through the
/// line substitution of the star factor: each class collapses to a single
/// power of `Z` whose coefficient is the class area.
pub fn divisibility_membership(t: &LatticeTile, s: Slope, n: &BigInt) -> Result<bool, SlopeError> {
    if !n.is_positive() {
        return Err(SlopeError::BadModulus(n.to_string()));
    }
    integer_cells(t)?;
    let image = t
        .star_factor()
        .substitute_line(-s.c, -s.d)
        .expect("canonical slopes are coprime and nonzero");
    Ok(image.coefficients_divisible_by(n))
}

/// The combinatorial side of the same test: every class area divisible by `n`.
pub fn class_areas_divisible(t: &LatticeTile, s: Slope, n: &BigInt) -> Result<bool, SlopeError> {
    if !n.is_positive() {
        return Err(SlopeError::BadModulus(n.to_string()));
    }
    Ok(slope_decompose(t, s)?
        .iter()
        .all(|c| c.area.is_multiple_of(n)))
}

/// Convenience for integer moduli.
pub fn modulus(n: i64) -> BigInt {
    BigInt::from(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use proptest::prelude::*;

    fn s_tetromino() -> LatticeTile {
        LatticeTile::from_unit_cells(&[(0, 0), (1, 0), (1, 1), (2, 1)])
    }

    fn tromino() -> LatticeTile {
        LatticeTile::from_unit_cells(&[(0, 0), (1, 0), (0, 1)])
    }

    fn mu(rise: i64, run: i64) -> Slope {
        Slope::from_rise_run(rise, run).unwrap()
    }

    /// Brute-force classes: union cells whose connecting line has slope `mu`.
    fn brute_classes(t: &LatticeTile, s: Slope) -> Vec<(Vec<(i64, i64)>, BigInt)> {
        let cells: Vec<((i64, i64), BigInt)> =
            t.cells().map(|(&k, w)| (k, w.to_integer())).collect();
        let n = cells.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        let m = s.mu();
        for a in 0..n {
            for b in a + 1..n {
                let (di, dj) = (cells[b].0 .0 - cells[a].0 .0, cells[b].0 .1 - cells[a].0 .1);
                if di != 0 && Rational::new(dj.into(), di.into()) == m {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[ra] = rb;
                }
            }
        }
        let mut groups: BTreeMap<usize, (Vec<(i64, i64)>, BigInt)> = BTreeMap::new();
        for (k, (cell, w)) in cells.iter().enumerate() {
            let root = find(&mut parent, k);
            let g = groups
                .entry(root)
                .or_insert_with(|| (Vec::new(), BigInt::zero()));
            g.0.push(*cell);
            g.1 += w;
        }
        let mut out: Vec<_> = groups.into_values().collect();
        out.sort();
        out
    }

    #[test]
    fn slope_canonical_form() {
        let s = Slope::new(1, -1).unwrap();
        assert_eq!((s.c(), s.d()), (-1, 1));
        assert_eq!(s.mu(), int(1));
        assert_eq!(mu(1, 2).mu(), Rational::new(1.into(), 2.into()));
        assert_eq!(mu(-2, 4), mu(1, -2));
        assert!(Slope::new(0, 1).is_err());
        assert!(Slope::new(2, 4).is_err());
        let mut v = vec![mu(1, 2), mu(-1, 1), mu(1, 1), mu(3, 1)];
        v.sort();
        assert_eq!(v, vec![mu(1, 1), mu(-1, 1), mu(1, 2), mu(3, 1)]);
    }

    #[test]
    fn decompose_s_tetromino() {
        let classes = slope_decompose(&s_tetromino(), mu(1, 1)).unwrap();
        assert_eq!(classes.len(), 2);
        assert_eq!(classes[0].members, vec![(0, 0), (1, 1)]);
        assert_eq!(classes[1].members, vec![(1, 0), (2, 1)]);
        assert!(classes.iter().all(|c| c.area == BigInt::from(2)));

        let anti = slope_decompose(&s_tetromino(), mu(-1, 1)).unwrap();
        assert_eq!(anti.len(), 4);
        assert!(anti.iter().all(|c| c.area.is_one()));
        let brute = brute_classes(&s_tetromino(), mu(-1, 1));
        assert_eq!(brute.len(), 4);
    }

    #[test]
    fn single_cell_is_one_class() {
        let t = LatticeTile::from_int_cells(&[((3, -2), 7)]);
        for s in [mu(1, 1), mu(-2, 3)] {
            let classes = slope_decompose(&t, s).unwrap();
            assert_eq!(classes.len(), 1);
            assert_eq!(classes[0].area, BigInt::from(7));
        }
    }

    #[test]
    fn relevant_slope_examples() {
        assert!(relevant_slopes(&LatticeTile::from_unit_cells(&[(0, 0), (0, 1)])).is_empty());
        assert_eq!(relevant_slopes(&s_tetromino()), vec![mu(1, 1), mu(1, 2)]);
        assert!(relevant_slopes(&LatticeTile::from_unit_cells(&[(4, 4)])).is_empty());
    }

    #[test]
    fn condition2_examples() {
        let r = condition2_check(&s_tetromino()).unwrap();
        assert_eq!(r.failing_witness, Some((mu(1, 1), BigInt::from(2))));
        assert!(r.generic_gcd.is_one());
        assert_eq!(r.per_slope[&mu(1, 2)].gcd, BigInt::from(1));

        let r = condition2_check(&tromino()).unwrap();
        assert!(r.passes());
        // mu > 0: the upper-left corner cell is a singleton of area 1.
        let classes = slope_decompose(&tromino(), mu(1, 1)).unwrap();
        assert!(classes
            .iter()
            .any(|c| c.members == vec![(0, 1)] && c.area.is_one()));

        let doubled = LatticeTile::from_int_cells(&[((0, 0), 2)]);
        let r = condition2_check(&doubled).unwrap();
        assert_eq!(r.generic_gcd, BigInt::from(2));
        assert_eq!(r.failing_witness, Some((Slope::unit(), BigInt::from(2))));

        assert_eq!(
            condition2_check(&LatticeTile::empty()),
            Err(SlopeError::EmptyTile)
        );
        let frac = LatticeTile::from_cells([((1, 2), Rational::new(1.into(), 2.into()))]);
        assert_eq!(
            condition2_check(&frac),
            Err(SlopeError::NonIntegerWeight(1, 2))
        );
    }

    #[test]
    fn membership_examples() {
        let two = modulus(2);
        assert!(divisibility_membership(&s_tetromino(), mu(1, 1), &two).unwrap());
        let s = mu(1, 1);
        let image = s_tetromino()
            .star_factor()
            .substitute_line(-s.c(), -s.d())
            .unwrap();
        assert_eq!(
            image,
            crate::poly::UniLaurentPoly::from_int_terms(&[(2, 0), (2, 1)])
        );
        for t in [s_tetromino(), tromino()] {
            for s in [mu(1, 1), mu(-3, 2)] {
                assert!(divisibility_membership(&t, s, &modulus(1)).unwrap());
            }
        }
        assert!(!divisibility_membership(&tromino(), mu(1, 1), &two).unwrap());
        assert!(divisibility_membership(&tromino(), mu(1, 1), &modulus(0)).is_err());
    }

    fn arb_lattice() -> impl Strategy<Value = LatticeTile> {
        prop::collection::vec(((-4i64..=4, -4i64..=4), -4i64..=4), 1..14)
            .prop_map(|v| LatticeTile::from_int_cells(&v))
            .prop_filter("nonempty", |t| !t.is_empty())
    }

    fn arb_slope() -> impl Strategy<Value = Slope> {
        (-5i64..=5, 1i64..=5)
            .prop_filter_map("nonzero coprime", |(r, s)| Slope::from_rise_run(r, s).ok())
    }

    proptest! {
        #[test]
        fn classes_partition_the_tile(t in arb_lattice(), s in arb_slope()) {
            let classes = slope_decompose(&t, s).unwrap();
            let total: BigInt = classes.iter().map(|c| &c.area).sum();
            prop_assert_eq!(Rational::from_integer(total), t.weighted_area());
            let mut members: Vec<_> = classes.iter().flat_map(|c| c.members.clone()).collect();
            members.sort();
            let support: Vec<_> = t.cells().map(|(&k, _)| k).collect();
            prop_assert_eq!(members, support);
            let mut ours: Vec<_> = classes.into_iter().map(|c| (c.members, c.area)).collect();
            ours.sort();
            prop_assert_eq!(ours, brute_classes(&t, s));
        }

        #[test]
        fn membership_matches_class_areas(t in arb_lattice(), s in arb_slope(), n in 1i64..=6) {
            let n = modulus(n);
            prop_assert_eq!(
                divisibility_membership(&t, s, &n).unwrap(),
                class_areas_divisible(&t, s, &n).unwrap()
            );
        }

        #[test]
        fn irrelevant_slopes_have_singleton_classes(t in arb_lattice(), s in arb_slope()) {
            if !relevant_slopes(&t).contains(&s) {
                let classes = slope_decompose(&t, s).unwrap();
                prop_assert!(classes.iter().all(|c| c.members.len() == 1));
                let g = gcd_all(classes.iter().map(|c| &c.area));
                prop_assert_eq!(g, condition2_check(&t).unwrap().generic_gcd);
            }
        }
    }
}
