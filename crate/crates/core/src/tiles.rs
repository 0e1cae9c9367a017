//! Weighted tiles: finite weighted unions of half-open axis-parallel
//! rectangles with rational corners.
//!
//! A [`WeightedTile`] is stored as a minimal cut grid: strictly increasing
//! x and y cut lists and a sparse map of nonzero cell weights. Equality is
//! decided through the [`CornerForm`], which is unique for a given weight
//! function.

use crate::poly::{ExponentPair, LaurentPoly};
use crate::rational::{common_denominator, fmt_rational, int, is_integer, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Add;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TileError {
    #[error("degenerate rectangle [{0}, {1}) x [{2}, {3})")]
    DegenerateRect(String, String, String, String),
    #[error("rescaling factor must be positive, got {0}")]
    NonPositiveScale(String),
    #[error("polynomial is not a tile encoding: {0}")]
    NotATileEncoding(String),
    #[error("lattice coordinate {0} does not fit in 64 bits")]
    CoordinateOverflow(String),
}

/// The half-open rectangle `[x0, x1) x [y0, y1)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rect {
    x0: Rational,
    x1: Rational,
    y0: Rational,
    y1: Rational,
}

impl Rect {
    pub fn new(x0: Rational, x1: Rational, y0: Rational, y1: Rational) -> Result<Self, TileError> {
        if x0 >= x1 || y0 >= y1 {
            return Err(TileError::DegenerateRect(
                fmt_rational(&x0),
                fmt_rational(&x1),
                fmt_rational(&y0),
                fmt_rational(&y1),
            ));
        }
        Ok(Rect { x0, x1, y0, y1 })
    }

    pub fn from_ints(x0: i64, x1: i64, y0: i64, y1: i64) -> Result<Self, TileError> {
        Rect::new(int(x0), int(x1), int(y0), int(y1))
    }

    pub fn x0(&self) -> &Rational {
        &self.x0
    }
    pub fn x1(&self) -> &Rational {
        &self.x1
    }
    pub fn y0(&self) -> &Rational {
        &self.y0
    }
    pub fn y1(&self) -> &Rational {
        &self.y1
    }

    pub fn area(&self) -> Rational {
        (&self.x1 - &self.x0) * (&self.y1 - &self.y0)
    }

    pub fn contains(&self, x: &Rational, y: &Rational) -> bool {
        &self.x0 <= x && x < &self.x1 && &self.y0 <= y && y < &self.y1
    }
}

/// Coefficients of the anchored rectangles `R_{alpha,beta}` (one corner at
/// the origin, opposite corner at `(alpha, beta)`, both nonzero).
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct CornerForm {
    terms: BTreeMap<(Rational, Rational), Rational>,
}

impl CornerForm {
    fn add_term(&mut self, alpha: Rational, beta: Rational, coeff: Rational) {
        if alpha.is_zero() || beta.is_zero() || coeff.is_zero() {
            return;
        }
        let key = (alpha, beta);
        let slot = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Rational, Rational), &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, alpha: &Rational, beta: &Rational) -> Rational {
        self.terms
            .get(&(alpha.clone(), beta.clone()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// `sum c * (X^alpha - 1)(Y^beta - 1)`.
    pub fn to_poly(&self) -> LaurentPoly {
        let zero = Rational::zero;
        LaurentPoly::from_terms(self.terms.iter().flat_map(|((a, b), c)| {
            [
                (c.clone(), a.clone(), b.clone()),
                (-c, a.clone(), zero()),
                (-c, zero(), b.clone()),
                (c.clone(), zero(), zero()),
            ]
        }))
    }
}

impl fmt::Display for CornerForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, ((a, b), c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(
                f,
                "{} R[{}, {}]",
                fmt_rational(c),
                fmt_rational(a),
                fmt_rational(b)
            )?;
        }
        Ok(())
    }
}

/// A rational-cornered weighted tile in minimal grid form.
#[derive(Debug, Clone, Default)]
pub struct WeightedTile {
    xcuts: Vec<Rational>,
    ycuts: Vec<Rational>,
    cells: BTreeMap<(usize, usize), Rational>,
}

impl PartialEq for WeightedTile {
    fn eq(&self, other: &Self) -> bool {
        self.to_corner_form() == other.to_corner_form()
    }
}

impl Eq for WeightedTile {}

impl WeightedTile {
    pub fn empty() -> Self {
        WeightedTile::default()
    }

    /// Superposes weighted rectangles; overlapping weights add.
    pub fn from_rects(entries: &[(Rational, Rect)]) -> Self {
        let xs: BTreeSet<Rational> = entries
            .iter()
            .flat_map(|(_, r)| [r.x0.clone(), r.x1.clone()])
            .collect();
        let ys: BTreeSet<Rational> = entries
            .iter()
            .flat_map(|(_, r)| [r.y0.clone(), r.y1.clone()])
            .collect();
        let xcuts: Vec<Rational> = xs.into_iter().collect();
        let ycuts: Vec<Rational> = ys.into_iter().collect();
        let nx = xcuts.len().saturating_sub(1);
        let ny = ycuts.len().saturating_sub(1);
        let mut grid = vec![vec![Rational::zero(); ny]; nx];
        for (w, r) in entries {
            if w.is_zero() {
                continue;
            }
            let i0 = xcuts.binary_search(&r.x0).expect("cut present");
            let i1 = xcuts.binary_search(&r.x1).expect("cut present");
            let j0 = ycuts.binary_search(&r.y0).expect("cut present");
            let j1 = ycuts.binary_search(&r.y1).expect("cut present");
            for column in &mut grid[i0..i1] {
                for cell in &mut column[j0..j1] {
                    *cell += w;
                }
            }
        }
        WeightedTile::from_dense(xcuts, ycuts, grid)
    }

    /// Normalizes a dense grid (`grid[i][j]` is the weight on
    /// `[xcuts[i], xcuts[i+1]) x [ycuts[j], ycuts[j+1])`) into minimal form.
    fn from_dense(
        mut xcuts: Vec<Rational>,
        mut ycuts: Vec<Rational>,
        mut grid: Vec<Vec<Rational>>,
    ) -> Self {
        if grid.iter().flatten().all(Zero::is_zero) {
            return WeightedTile::empty();
        }
        collapse_axis(&mut xcuts, &mut grid);
        let mut transposed = transpose(grid);
        collapse_axis(&mut ycuts, &mut transposed);
        let grid = transpose(transposed);
        let mut cells = BTreeMap::new();
        for (i, column) in grid.into_iter().enumerate() {
            for (j, w) in column.into_iter().enumerate() {
                if !w.is_zero() {
                    cells.insert((i, j), w);
                }
            }
        }
        WeightedTile {
            xcuts,
            ycuts,
            cells,
        }
    }

    pub fn xcuts(&self) -> &[Rational] {
        &self.xcuts
    }

    pub fn ycuts(&self) -> &[Rational] {
        &self.ycuts
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Nonzero grid cells with their rectangles, in `(i, j)` order.
    pub fn cells(&self) -> impl Iterator<Item = (Rect, &Rational)> + '_ {
        self.cells.iter().map(|(&(i, j), w)| {
            (
                Rect {
                    x0: self.xcuts[i].clone(),
                    x1: self.xcuts[i + 1].clone(),
                    y0: self.ycuts[j].clone(),
                    y1: self.ycuts[j + 1].clone(),
                },
                w,
            )
        })
    }

    pub fn weights(&self) -> impl Iterator<Item = &Rational> {
        self.cells.values()
    }

    /// The weight function at a point.
    pub fn weight_at(&self, x: &Rational, y: &Rational) -> Rational {
        let locate = |cuts: &[Rational], t: &Rational| -> Option<usize> {
            match cuts.binary_search(t) {
                Ok(k) if k + 1 < cuts.len() => Some(k),
                Ok(_) => None,
                Err(0) => None,
                Err(k) if k < cuts.len() => Some(k - 1),
                Err(_) => None,
            }
        };
        match (locate(&self.xcuts, x), locate(&self.ycuts, y)) {
            (Some(i), Some(j)) => self
                .cells
                .get(&(i, j))
                .cloned()
                .unwrap_or_else(Rational::zero),
            _ => Rational::zero(),
        }
    }

    /// `(x_min, x_max, y_min, y_max)` of the support, if any.
    pub fn bounding_box(&self) -> Option<(Rational, Rational, Rational, Rational)> {
        if self.is_empty() {
            return None;
        }
        Some((
            self.xcuts[0].clone(),
            self.xcuts[self.xcuts.len() - 1].clone(),
            self.ycuts[0].clone(),
            self.ycuts[self.ycuts.len() - 1].clone(),
        ))
    }

    pub fn translate(&self, sigma: &Rational, tau: &Rational) -> Self {
        WeightedTile {
            xcuts: self.xcuts.iter().map(|x| x + sigma).collect(),
            ycuts: self.ycuts.iter().map(|y| y + tau).collect(),
            cells: self.cells.clone(),
        }
    }

    /// The image under `(x, y) -> (rho x, rho y)`.
    pub fn rescale(&self, rho: &Rational) -> Result<Self, TileError> {
        if !rho.is_positive() {
            return Err(TileError::NonPositiveScale(fmt_rational(rho)));
        }
        Ok(WeightedTile {
            xcuts: self.xcuts.iter().map(|x| x * rho).collect(),
            ycuts: self.ycuts.iter().map(|y| y * rho).collect(),
            cells: self.cells.clone(),
        })
    }

    /// `a T`: every weight multiplied by `a`.
    pub fn scale_weights(&self, a: &Rational) -> Self {
        if a.is_zero() {
            return WeightedTile::empty();
        }
        WeightedTile {
            xcuts: self.xcuts.clone(),
            ycuts: self.ycuts.clone(),
            cells: self.cells.iter().map(|(k, w)| (*k, w * a)).collect(),
        }
    }

    pub fn to_rects(&self) -> Vec<(Rational, Rect)> {
        self.cells().map(|(r, w)| (w.clone(), r)).collect()
    }

    pub fn to_corner_form(&self) -> CornerForm {
        let mut form = CornerForm::default();
        for (r, w) in self.cells() {
            form.add_term(r.x1.clone(), r.y1.clone(), w.clone());
            form.add_term(r.x1.clone(), r.y0.clone(), -w);
            form.add_term(r.x0.clone(), r.y1.clone(), -w);
            form.add_term(r.x0, r.y0, w.clone());
        }
        form
    }

    /// The tile polynomial `f_T`.
    pub fn encode(&self) -> LaurentPoly {
        self.to_corner_form().to_poly()
    }

    /// Inverse of [`encode`](Self::encode): the weight at `(x, y)` is the sum of
    /// the coefficients of all terms `X^u Y^v` with `u <= x` and `v <= y`.
    pub fn decode(f: &LaurentPoly) -> Result<Self, TileError> {
        for (by_v, axis) in [(true, 'Y'), (false, 'X')] {
            if let Some((e, s)) = f.marginal(by_v).into_iter().next() {
                let other = if axis == 'Y' { 'X' } else { 'Y' };
                return Err(TileError::NotATileEncoding(format!(
                    "coefficients at {axis}-exponent {} sum to {} (weight does not vanish for large {other})",
                    fmt_rational(&e),
                    fmt_rational(&s)
                )));
            }
        }
        let xcuts: Vec<Rational> = f
            .terms()
            .map(|(e, _)| e.u.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let ycuts: Vec<Rational> = f
            .terms()
            .map(|(e, _)| e.v.clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if xcuts.is_empty() {
            return Ok(WeightedTile::empty());
        }
        let (nx, ny) = (xcuts.len(), ycuts.len());
        let mut prefix = vec![vec![Rational::zero(); ny]; nx];
        for (e, c) in f.terms() {
            let i = xcuts.binary_search(&e.u).expect("cut present");
            let j = ycuts.binary_search(&e.v).expect("cut present");
            prefix[i][j] += c;
        }
        for i in 0..nx {
            for j in 0..ny {
                let mut acc = prefix[i][j].clone();
                if i > 0 {
                    acc += &prefix[i - 1][j];
                }
                if j > 0 {
                    acc += &prefix[i][j - 1];
                }
                if i > 0 && j > 0 {
                    acc -= &prefix[i - 1][j - 1];
                }
                prefix[i][j] = acc;
            }
        }
        // The last row and column of prefix sums vanish by the marginal check.
        let grid: Vec<Vec<Rational>> = prefix
            .into_iter()
            .take(nx - 1)
            .map(|mut column| {
                column.truncate(ny - 1);
                column
            })
            .collect();
        Ok(WeightedTile::from_dense(xcuts, ycuts, grid))
    }

    pub fn weighted_area(&self) -> Rational {
        self.cells()
            .fold(Rational::zero(), |acc, (r, w)| acc + r.area() * w)
    }

    pub fn has_integer_weights(&self) -> bool {
        self.cells.values().all(is_integer)
    }

    /// Rescales by the common denominator of all coordinates, translates the
    /// result to touch both axes in the first quadrant, and splits it into
    /// unit cells.
    pub fn to_lattice(&self) -> Result<LatticeForm, TileError> {
        if self.is_empty() {
            return Ok(LatticeForm {
                tile: LatticeTile::empty(),
                scale: Rational::one(),
                offset: (0, 0),
            });
        }
        let denom = common_denominator(self.xcuts.iter().chain(self.ycuts.iter()));
        let scale = Rational::from_integer(denom);
        let to_int = |q: &Rational| -> Result<i64, TileError> {
            let scaled = q * &scale;
            debug_assert!(scaled.is_integer());
            scaled
                .to_integer()
                .to_i64()
                .ok_or_else(|| TileError::CoordinateOverflow(fmt_rational(&scaled)))
        };
        let xs = self
            .xcuts
            .iter()
            .map(to_int)
            .collect::<Result<Vec<_>, _>>()?;
        let ys = self
            .ycuts
            .iter()
            .map(to_int)
            .collect::<Result<Vec<_>, _>>()?;
        let offset = (-xs[0], -ys[0]);
        let mut cells = BTreeMap::new();
        for (&(i, j), w) in &self.cells {
            for x in xs[i]..xs[i + 1] {
                for y in ys[j]..ys[j + 1] {
                    cells.insert((x + offset.0, y + offset.1), w.clone());
                }
            }
        }
        Ok(LatticeForm {
            tile: LatticeTile { cells },
            scale,
            offset,
        })
    }
}

fn transpose(grid: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let ny = grid.first().map_or(0, Vec::len);
    let mut out = vec![Vec::with_capacity(grid.len()); ny];
    for column in grid {
        for (j, w) in column.into_iter().enumerate() {
            out[j].push(w);
        }
    }
    out
}

/// Drops redundant cuts along the first grid axis: empty boundary strips and
/// interior cuts whose neighbouring strips carry identical weights.
fn collapse_axis(cuts: &mut Vec<Rational>, grid: &mut Vec<Vec<Rational>>) {
    while grid.first().is_some_and(|c| c.iter().all(Zero::is_zero)) {
        grid.remove(0);
        cuts.remove(0);
    }
    while grid.last().is_some_and(|c| c.iter().all(Zero::is_zero)) {
        grid.pop();
        cuts.pop();
    }
    let mut k = 1;
    while k < grid.len() {
        if grid[k] == grid[k - 1] {
            grid.remove(k);
            cuts.remove(k);
        } else {
            k += 1;
        }
    }
}

impl Add for &WeightedTile {
    type Output = WeightedTile;
    fn add(self, rhs: &WeightedTile) -> WeightedTile {
        let mut entries = self.to_rects();
        entries.extend(rhs.to_rects());
        WeightedTile::from_rects(&entries)
    }
}

impl fmt::Display for WeightedTile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (r, w) in self.cells() {
            writeln!(
                f,
                "rect {} {} {} {} {}",
                fmt_rational(&r.x0),
                fmt_rational(&r.x1),
                fmt_rational(&r.y0),
                fmt_rational(&r.y1),
                fmt_rational(w)
            )?;
        }
        Ok(())
    }
}

/// Result of [`WeightedTile::to_lattice`]: the lattice tile equals the
/// original rescaled by `scale` and then translated by `offset`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeForm {
    pub tile: LatticeTile,
    pub scale: Rational,
    pub offset: (i64, i64),
}

/// A tile made of unit lattice squares `S_{ij} = [i, i+1) x [j, j+1)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LatticeTile {
    cells: BTreeMap<(i64, i64), Rational>,
}

impl LatticeTile {
    pub fn empty() -> Self {
        LatticeTile::default()
    }

    pub fn from_cells(cells: impl IntoIterator<Item = ((i64, i64), Rational)>) -> Self {
        let mut map: BTreeMap<(i64, i64), Rational> = BTreeMap::new();
        for (k, w) in cells {
            *map.entry(k).or_insert_with(Rational::zero) += w;
        }
        map.retain(|_, w| !w.is_zero());
        LatticeTile { cells: map }
    }

    /// Unit-weight cells.
    pub fn from_unit_cells(cells: &[(i64, i64)]) -> Self {
        LatticeTile::from_cells(cells.iter().map(|&k| (k, Rational::one())))
    }

    pub fn from_int_cells(cells: &[((i64, i64), i64)]) -> Self {
        LatticeTile::from_cells(cells.iter().map(|&(k, w)| (k, int(w))))
    }

    pub fn cells(&self) -> impl Iterator<Item = (&(i64, i64), &Rational)> {
        self.cells.iter()
    }

    pub fn weight(&self, i: i64, j: i64) -> Rational {
        self.cells
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn has_integer_weights(&self) -> bool {
        self.cells.values().all(is_integer)
    }

    /// Integer weights, or `None` if some weight is fractional.
    pub fn integer_weights(&self) -> Option<BTreeMap<(i64, i64), BigInt>> {
        self.cells
            .iter()
            .map(|(k, w)| is_integer(w).then(|| (*k, w.to_integer())))
            .collect()
    }

    pub fn weighted_area(&self) -> Rational {
        self.cells.values().fold(Rational::zero(), |acc, w| acc + w)
    }

    /// Inclusive `(i_min, i_max, j_min, j_max)` over the cell indices.
    pub fn bounding_box(&self) -> Option<(i64, i64, i64, i64)> {
        let mut iter = self.cells.keys();
        let &(i, j) = iter.next()?;
        Some(iter.fold((i, i, j, j), |(a, b, c, d), &(i, j)| {
            (a.min(i), b.max(i), c.min(j), d.max(j))
        }))
    }

    pub fn translate(&self, di: i64, dj: i64) -> Self {
        LatticeTile {
            cells: self
                .cells
                .iter()
                .map(|(&(i, j), w)| ((i + di, j + dj), w.clone()))
                .collect(),
        }
    }

    /// `T(k)` for a positive integer `k`, split back into unit cells.
    pub fn rescale(&self, k: i64) -> Self {
        assert!(k >= 1, "lattice rescale needs k >= 1");
        let mut cells = BTreeMap::new();
        for (&(i, j), w) in &self.cells {
            for a in 0..k {
                for b in 0..k {
                    cells.insert((k * i + a, k * j + b), w.clone());
                }
            }
        }
        LatticeTile { cells }
    }

    /// `f*_T = sum w_ij X^i Y^j`, so that `f_T = (X - 1)(Y - 1) f*_T`.
    pub fn star_factor(&self) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.cells
                .iter()
                .map(|(&(i, j), w)| (w.clone(), int(i), int(j))),
        )
    }

    pub fn to_weighted_tile(&self) -> WeightedTile {
        let entries: Vec<(Rational, Rect)> = self
            .cells
            .iter()
            .map(|(&(i, j), w)| {
                (
                    w.clone(),
                    Rect::from_ints(i, i + 1, j, j + 1).expect("unit cell"),
                )
            })
            .collect();
        WeightedTile::from_rects(&entries)
    }

    pub fn encode(&self) -> LaurentPoly {
        &self.star_factor() * &crate::poly::square_poly(1).expect("side 1")
    }
}

/// Exponent pair helper for tests and callers working with integer data.
pub fn exponent(u: i64, v: i64) -> ExponentPair {
    ExponentPair::new(int(u), int(v))
}
