//! Certificates: explicit weighted tilings of a square by rescaled
//! translates of a prototile.
//!
//! A certificate is checked as a polynomial identity
//! `sum a_i X^{s_i} Y^{t_i} f_T(X^{r_i}, Y^{r_i}) = w X^{p} Y^{q} g_l`
//! by [`verify_certificate`], and independently by sampling the summed
//! weight function with [`raster_check`]. The bounded searches assemble the
//! same identity as a linear system over lattice cells and solve it exactly.

use crate::linalg::{reduce_free_coordinates, IntMatrix, IntegerSystem, RationalSystem};
use crate::poly::{ExponentPair, LaurentPoly};
use crate::rational::{common_denominator, fmt_rational, int, Rational};
use crate::tiles::{LatticeTile, WeightedTile};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("placement weight must be nonzero")]
    ZeroWeight,
    #[error("placement scale must be positive, got {0}")]
    NonPositiveScale(String),
    #[error("target side must be positive, got {0}")]
    BadSide(String),
    #[error("target weight must be a positive integer, got {0}")]
    BadTargetWeight(String),
    #[error("raster resolution must be at least 1")]
    BadResolution,
    #[error("raster check needs {0} samples, above the limit of {1}")]
    TooManySamples(u128, u128),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("prototile has zero weighted area, so it tiles no square")]
    ZeroArea,
    #[error("integer search needs integer weights; cell ({0}, {1}) is fractional")]
    NonIntegerWeight(i64, i64),
    #[error("search bounds must be positive (max scale {0}, window {1})")]
    BadBounds(u32, u32),
    #[error("search would use {unknowns} unknowns, above the ceiling of {ceiling}")]
    TooManyUnknowns { unknowns: usize, ceiling: usize },
    #[error(transparent)]
    Tile(#[from] crate::tiles::TileError),
}

/// One weighted copy of the prototile, rescaled and then translated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Placement {
    pub weight: Rational,
    pub scale: Rational,
    pub shift: (Rational, Rational),
}

impl Placement {
    pub fn new(
        weight: Rational,
        scale: Rational,
        shift: (Rational, Rational),
    ) -> Result<Self, CertifyError> {
        if weight.is_zero() {
            return Err(CertifyError::ZeroWeight);
        }
        if !scale.is_positive() {
            return Err(CertifyError::NonPositiveScale(fmt_rational(&scale)));
        }
        Ok(Placement {
            weight,
            scale,
            shift,
        })
    }

    pub fn from_ints(weight: i64, scale: i64, sx: i64, sy: i64) -> Result<Self, CertifyError> {
        Placement::new(int(weight), int(scale), (int(sx), int(sy)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub prototile: WeightedTile,
    pub placements: Vec<Placement>,
    pub target_side: Rational,
    pub target_anchor: (Rational, Rational),
    pub target_weight: BigInt,
}

impl Certificate {
    pub fn new(
        prototile: WeightedTile,
        placements: Vec<Placement>,
        target_side: Rational,
        target_anchor: (Rational, Rational),
        target_weight: BigInt,
    ) -> Result<Self, CertifyError> {
        let c = Certificate {
            prototile,
            placements,
            target_side,
            target_anchor,
            target_weight,
        };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<(), CertifyError> {
        if !self.target_side.is_positive() {
            return Err(CertifyError::BadSide(fmt_rational(&self.target_side)));
        }
        if !self.target_weight.is_positive() {
            return Err(CertifyError::BadTargetWeight(
                self.target_weight.to_string(),
            ));
        }
        for p in &self.placements {
            Placement::new(p.weight.clone(), p.scale.clone(), p.shift.clone())?;
        }
        Ok(())
    }

    /// Left side of the certificate identity.
    pub fn placed_polynomial(&self) -> LaurentPoly {
        let f = self.prototile.encode();
        self.placements.iter().fold(LaurentPoly::zero(), |acc, p| {
            let term = f
                .substitute_powers(&p.scale)
                .expect("validated scale")
                .shift(&p.shift.0, &p.shift.1)
                .scale(&p.weight);
            acc + term
        })
    }

    /// Right side: `w X^{anchor} (X^l - 1)(Y^l - 1)`.
    pub fn target_polynomial(&self) -> LaurentPoly {
        LaurentPoly::corner_rectangle(&self.target_side, &self.target_side)
            .shift(&self.target_anchor.0, &self.target_anchor.1)
            .scale(&Rational::from_integer(self.target_weight.clone()))
    }

    pub fn is_integral(&self) -> bool {
        self.placements.iter().all(|p| p.weight.is_integer())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum CheckOutcome {
    Valid,
    /// The smallest monomial where the two sides differ.
    Mismatch {
        exponent: ExponentPair,
        placed: Rational,
        target: Rational,
    },
    Malformed(String),
}

impl CheckOutcome {
    pub fn is_valid(&self) -> bool {
        matches!(self, CheckOutcome::Valid)
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckOutcome::Valid => write!(f, "valid"),
            CheckOutcome::Mismatch {
                exponent,
                placed,
                target,
            } => write!(
                f,
                "mismatch at X^{{{}}} Y^{{{}}}: placements give {}, target needs {}",
                fmt_rational(&exponent.u),
                fmt_rational(&exponent.v),
                fmt_rational(placed),
                fmt_rational(target)
            ),
            CheckOutcome::Malformed(why) => write!(f, "malformed certificate: {why}"),
        }
    }
}

/// Checks the certificate identity exactly in the polynomial ring.
pub fn verify_certificate(c: &Certificate) -> CheckOutcome {
    if let Err(e) = c.validate() {
        return CheckOutcome::Malformed(e.to_string());
    }
    match c
        .placed_polynomial()
        .first_difference(&c.target_polynomial())
    {
        None => CheckOutcome::Valid,
        Some((exponent, placed, target)) => CheckOutcome::Mismatch {
            exponent,
            placed,
            target,
        },
    }
}

/// Upper bound on evaluated samples times placements in [`raster_check`].
pub const RASTER_BUDGET: u128 = 200_000_000;

/// A placed copy of the prototile on an integer sampling grid, with its
/// cell weights cleared to integers.
struct PlacedGrid<W> {
    xs: Vec<i64>,
    ys: Vec<i64>,
    cells: BTreeMap<(usize, usize), W>,
}

fn locate(cuts: &[i64], t: i64) -> Option<usize> {
    match cuts.binary_search(&t) {
        Ok(k) if k + 1 < cuts.len() => Some(k),
        Err(k) if k > 0 && k < cuts.len() => Some(k - 1),
        _ => None,
    }
}

/// Sums the placed weights at every sample centre and compares with the
/// target. Only copies whose x-range covers a sample column are consulted.
fn sample_grid<W>(
    grids: &[PlacedGrid<W>],
    x: (i64, i64),
    y: (i64, i64),
    target_box: (i64, i64, i64, i64),
    target: &W,
) -> bool
where
    W: Clone + Zero + PartialEq + Sync + for<'a> std::ops::AddAssign<&'a W>,
{
    let (ax, ay, bx, by) = target_box;
    let xs: Vec<i64> = (x.0 + 1..x.1).step_by(2).collect();
    xs.par_iter().all(|&sx| {
        let column: Vec<(usize, &PlacedGrid<W>)> = grids
            .iter()
            .filter_map(|g| locate(&g.xs, sx).map(|i| (i, g)))
            .collect();
        (y.0 + 1..y.1).step_by(2).all(|sy| {
            let mut total = W::zero();
            for (i, g) in &column {
                if let Some(w) = locate(&g.ys, sy).and_then(|j| g.cells.get(&(*i, j))) {
                    total += w;
                }
            }
            if ax < sx && sx < bx && ay < sy && sy < by {
                total == *target
            } else {
                total.is_zero()
            }
        })
    })
}

/// Samples the summed weight function of all placements on a grid finer
/// than every coordinate denominator, over the bounding box of the target
/// and all placements plus a one-sample margin. Every sample inside the
/// target must equal the target weight; every other sample must be zero.
pub fn raster_check(c: &Certificate, resolution: u32) -> Result<bool, CertifyError> {
    if resolution == 0 {
        return Err(CertifyError::BadResolution);
    }
    c.validate()?;
    let (ax, ay) = &c.target_anchor;
    let side = &c.target_side;
    let mut coords: Vec<Rational> = vec![ax.clone(), ay.clone(), ax + side, ay + side];
    let proto = &c.prototile;
    for p in &c.placements {
        coords.extend(proto.xcuts().iter().map(|x| x * &p.scale + &p.shift.0));
        coords.extend(proto.ycuts().iter().map(|y| y * &p.scale + &p.shift.1));
    }
    // Sample centres sit at odd multiples of one half-step.
    let unit = Rational::from_integer(common_denominator(&coords) * BigInt::from(2 * resolution));
    let to_grid = |q: &Rational| -> Result<i64, CertifyError> {
        (q * &unit)
            .to_integer()
            .to_i64()
            .ok_or(CertifyError::TooManySamples(u128::MAX, RASTER_BUDGET))
    };

    let (ax_g, ay_g) = (to_grid(ax)?, to_grid(ay)?);
    let side_g = to_grid(side)?;
    let mut x_range = (ax_g, ax_g + side_g);
    let mut y_range = (ay_g, ay_g + side_g);
    let xi = |x: &Rational| proto.xcuts().binary_search(x).expect("cut");
    let yi = |y: &Rational| proto.ycuts().binary_search(y).expect("cut");
    let base: Vec<((usize, usize), &Rational)> = proto
        .cells()
        .map(|(r, w)| ((xi(r.x0()), yi(r.y0())), w))
        .collect();
    let weight_denom = common_denominator(
        c.placements
            .iter()
            .flat_map(|p| std::iter::once(&p.weight))
            .chain(base.iter().map(|(_, w)| *w)),
    );
    let clear = Rational::from_integer(&weight_denom * &weight_denom);
    let mut grids: Vec<PlacedGrid<BigInt>> = Vec::with_capacity(c.placements.len());
    for p in &c.placements {
        let xs = proto
            .xcuts()
            .iter()
            .map(|x| to_grid(&(x * &p.scale + &p.shift.0)))
            .collect::<Result<Vec<_>, _>>()?;
        let ys = proto
            .ycuts()
            .iter()
            .map(|y| to_grid(&(y * &p.scale + &p.shift.1)))
            .collect::<Result<Vec<_>, _>>()?;
        if let (Some(&x0), Some(&x1), Some(&y0), Some(&y1)) =
            (xs.first(), xs.last(), ys.first(), ys.last())
        {
            x_range = (x_range.0.min(x0), x_range.1.max(x1));
            y_range = (y_range.0.min(y0), y_range.1.max(y1));
        }
        let cells = base
            .iter()
            .map(|(k, w)| (*k, (*w * &p.weight * &clear).to_integer()))
            .collect();
        grids.push(PlacedGrid { xs, ys, cells });
    }
    // One sample (two half-steps) of margin on every side.
    let (x_lo, x_hi) = (x_range.0 - 2, x_range.1 + 2);
    let (y_lo, y_hi) = (y_range.0 - 2, y_range.1 + 2);
    let samples = ((x_hi - x_lo) as u128 / 2) * ((y_hi - y_lo) as u128 / 2);
    if samples > RASTER_BUDGET {
        return Err(CertifyError::TooManySamples(samples, RASTER_BUDGET));
    }
    let target = &c.target_weight * (&weight_denom * &weight_denom);
    let target_box = (ax_g, ay_g, ax_g + side_g, ay_g + side_g);
    let (xr, yr) = ((x_lo, x_hi), (y_lo, y_hi));

    // Fast path when every partial sum provably fits in i128.
    let max_abs = grids
        .iter()
        .flat_map(|g| g.cells.values())
        .chain(std::iter::once(&target))
        .map(|v| v.abs())
        .max()
        .unwrap_or_default();
    let bound = &max_abs * BigInt::from(grids.len() + 1);
    if bound.to_i128().is_some() {
        let small: Vec<PlacedGrid<i128>> = grids
            .into_iter()
            .map(|g| PlacedGrid {
                xs: g.xs,
                ys: g.ys,
                cells: g
                    .cells
                    .into_iter()
                    .map(|(k, v)| (k, v.to_i128().expect("bounded")))
                    .collect(),
            })
            .collect();
        let t = target.to_i128().expect("bounded");
        return Ok(sample_grid(&small, xr, yr, target_box, &t));
    }
    Ok(sample_grid(&grids, xr, yr, target_box, &target))
}

/// Scales `1..=max_scale`, integer shifts in `[0, window]^2`, and target
/// squares lying inside `[0, window]^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_scale: u32,
    pub window: u32,
}

impl SearchBounds {
    pub fn new(max_scale: u32, window: u32) -> Self {
        SearchBounds { max_scale, window }
    }

    /// Number of placement unknowns: one per scale and shift.
    pub fn unknowns(&self) -> u128 {
        let side = u128::from(self.window) + 1;
        u128::from(self.max_scale) * side * side
    }
}

pub const DEFAULT_MAX_UNKNOWNS: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub bounds: SearchBounds,
    pub max_unknowns: usize,
}

impl From<SearchBounds> for SearchOptions {
    fn from(bounds: SearchBounds) -> Self {
        SearchOptions {
            bounds,
            max_unknowns: DEFAULT_MAX_UNKNOWNS,
        }
    }
}

/// One unknown of the search: the weight of `T(scale)` shifted by `shift`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Column {
    scale: i64,
    shift: (i64, i64),
}

/// A candidate target square `[x, x + side) x [y, y + side)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Candidate {
    side: i64,
    anchor: (i64, i64),
}

/// The search identity written cell by cell: since every term is a
/// multiple of `(X - 1)(Y - 1)`, comparing star factors is equivalent to
/// comparing tile polynomials.
struct CellSystem {
    columns: Vec<Column>,
    rows: BTreeMap<(i64, i64), usize>,
    matrix: IntMatrix,
    /// Common denominator the prototile weights were cleared with.
    denominator: BigInt,
    window: i64,
}

/// Cells of `T(k) + shift` with their weights.
fn placed_cells(cleared: &[((i64, i64), BigInt)], col: &Column) -> Vec<((i64, i64), BigInt)> {
    let k = col.scale;
    let mut out = Vec::with_capacity(cleared.len() * (k * k) as usize);
    for ((i, j), w) in cleared {
        for a in 0..k {
            for b in 0..k {
                out.push((
                    (k * i + a + col.shift.0, k * j + b + col.shift.1),
                    w.clone(),
                ));
            }
        }
    }
    out
}

impl CellSystem {
    /// Columns in `(scale, i, j)` lexicographic order.
    fn build(t: &LatticeTile, opts: &SearchOptions) -> Result<Self, SearchError> {
        let SearchBounds { max_scale, window } = opts.bounds;
        if max_scale == 0 || window == 0 {
            return Err(SearchError::BadBounds(max_scale, window));
        }
        if t.weighted_area().is_zero() {
            return Err(SearchError::ZeroArea);
        }
        let unknowns = opts.bounds.unknowns();
        if unknowns > opts.max_unknowns as u128 {
            return Err(SearchError::TooManyUnknowns {
                unknowns: usize::try_from(unknowns).unwrap_or(usize::MAX),
                ceiling: opts.max_unknowns,
            });
        }
        let l = i64::from(window);
        let columns: Vec<Column> = (1..=i64::from(max_scale))
            .flat_map(|k| {
                (0..=l).flat_map(move |i| {
                    (0..=l).map(move |j| Column {
                        scale: k,
                        shift: (i, j),
                    })
                })
            })
            .collect();

        let denominator = common_denominator(t.cells().map(|(_, w)| w));
        let cleared: Vec<((i64, i64), BigInt)> = t
            .cells()
            .map(|(&k, w)| {
                (
                    k,
                    (w * Rational::from_integer(denominator.clone())).to_integer(),
                )
            })
            .collect();
        let mut rows: BTreeMap<(i64, i64), usize> = BTreeMap::new();
        for x in 0..l {
            for y in 0..l {
                rows.insert((x, y), 0);
            }
        }
        for col in &columns {
            for (cell, _) in placed_cells(&cleared, col) {
                rows.insert(cell, 0);
            }
        }
        for (n, slot) in rows.values_mut().enumerate() {
            *slot = n;
        }
        let mut matrix = IntMatrix::zeros(rows.len(), columns.len());
        for (c, col) in columns.iter().enumerate() {
            for (cell, w) in placed_cells(&cleared, col) {
                matrix.set(rows[&cell], c, w);
            }
        }
        Ok(CellSystem {
            columns,
            rows,
            matrix,
            denominator,
            window: l,
        })
    }

    /// Sides ascending; for each side, anchors ordered by `(x + y, x)`.
    fn candidates(&self) -> Vec<Candidate> {
        let l = self.window;
        let mut out = Vec::new();
        for side in 1..=l {
            let room = l - side;
            let mut anchors: Vec<(i64, i64)> = (0..=room)
                .flat_map(|x| (0..=room).map(move |y| (x, y)))
                .collect();
            anchors.sort_by_key(|&(x, y)| (x + y, x));
            out.extend(anchors.into_iter().map(|anchor| Candidate { side, anchor }));
        }
        out
    }

    fn rhs(&self, cand: &Candidate) -> Vec<BigInt> {
        let mut b = vec![BigInt::zero(); self.rows.len()];
        for x in cand.anchor.0..cand.anchor.0 + cand.side {
            for y in cand.anchor.1..cand.anchor.1 + cand.side {
                b[self.rows[&(x, y)]] = self.denominator.clone();
            }
        }
        b
    }

    fn certificate(
        &self,
        t: &LatticeTile,
        cand: &Candidate,
        weights: &[Rational],
        w: BigInt,
    ) -> Certificate {
        let placements = self
            .columns
            .iter()
            .zip(weights)
            .filter(|(_, a)| !a.is_zero())
            .map(|(col, a)| {
                Placement::new(
                    a.clone(),
                    int(col.scale),
                    (int(col.shift.0), int(col.shift.1)),
                )
                .expect("nonzero weight, positive scale")
            })
            .collect();
        Certificate::new(
            t.to_weighted_tile(),
            placements,
            int(cand.side),
            (int(cand.anchor.0), int(cand.anchor.1)),
            w,
        )
        .expect("search output is well-formed")
    }
}

/// Rational-weight search: smallest side first, basic solution of the
/// cell-coefficient system. `None` means inconclusive within bounds.
pub fn search_q(
    t: &LatticeTile,
    opts: impl Into<SearchOptions>,
) -> Result<Option<Certificate>, SearchError> {
    let opts = opts.into();
    let sys = CellSystem::build(t, &opts)?;
    let cands = sys.candidates();
    let rhs: Vec<Vec<BigInt>> = cands.iter().map(|c| sys.rhs(c)).collect();
    let solver = RationalSystem::new(&sys.matrix, &rhs);
    let found = (0..cands.len())
        .into_par_iter()
        .find_map_first(|k| solver.solve(k).map(|x| (k, x)));
    Ok(found.map(|(k, x)| sys.certificate(t, &cands[k], &x, BigInt::one())))
}

fn require_integer_weights(t: &LatticeTile) -> Result<(), SearchError> {
    match t.cells().find(|(_, w)| !w.is_integer()) {
        Some((&(i, j), _)) => Err(SearchError::NonIntegerWeight(i, j)),
        None => Ok(()),
    }
}

/// Integer-weight search through a Hermite normal form of the same system.
/// `None` means inconclusive within bounds.
pub fn search_z(
    t: &LatticeTile,
    opts: impl Into<SearchOptions>,
) -> Result<Option<Certificate>, SearchError> {
    require_integer_weights(t)?;
    let opts = opts.into();
    let sys = CellSystem::build(t, &opts)?;
    let cands = sys.candidates();
    let solver = IntegerSystem::new(&sys.matrix);
    let found = cands
        .par_iter()
        .enumerate()
        .find_map_first(|(k, c)| solver.solve(&sys.rhs(c)).map(|x| (k, x)));
    Ok(found.map(|(k, x)| {
        let x = compact_integer_solution(&sys.matrix, &sys.rhs(&cands[k]), x);
        let weights: Vec<Rational> = x.into_iter().map(Rational::from_integer).collect();
        sys.certificate(t, &cands[k], &weights, BigInt::one())
    }))
}

/// Shrinks an integer solution of `A x = b`: free coordinates are reduced
/// against the echelon kernel basis, and the basic solution is taken
/// instead when it is itself integral and no larger.
fn compact_integer_solution(a: &IntMatrix, b: &[BigInt], mut x: Vec<BigInt>) -> Vec<BigInt> {
    let echelon = RationalSystem::new(a, std::slice::from_ref(&b.to_vec()));
    reduce_free_coordinates(&mut x, &echelon.kernel_basis());
    let size = |v: &[BigInt]| {
        let support = v.iter().filter(|e| !e.is_zero()).count();
        let l1: BigInt = v.iter().map(|e| e.abs()).sum();
        (support, l1)
    };
    match echelon.solve(0) {
        Some(basic) if basic.iter().all(|q| q.is_integer()) => {
            let basic: Vec<BigInt> = basic.into_iter().map(|q| q.to_integer()).collect();
            if size(&basic) <= size(&x) {
                basic
            } else {
                x
            }
        }
        _ => x,
    }
}

/// Runs the rational search and clears denominators: the result tiles the
/// square with multiplicity `w`, the common denominator of the weights.
pub fn search_weight_w(
    t: &LatticeTile,
    opts: impl Into<SearchOptions>,
) -> Result<Option<(BigInt, Certificate)>, SearchError> {
    require_integer_weights(t)?;
    let Some(mut cert) = search_q(t, opts)? else {
        return Ok(None);
    };
    let w = cert
        .placements
        .iter()
        .fold(BigInt::one(), |acc, p| acc.lcm(p.weight.denom()));
    let wq = Rational::from_integer(w.clone());
    for p in &mut cert.placements {
        p.weight = &p.weight * &wq;
    }
    cert.target_weight = w.clone();
    Ok(Some((w, cert)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    Rational,
    Integer,
    WeightW,
}

/// Searches for a certificate for an arbitrary rational tile by way of its
/// lattice form, then restates the placements in the tile's own coordinates.
pub fn search_tile(
    tile: &WeightedTile,
    mode: SearchMode,
    opts: impl Into<SearchOptions>,
) -> Result<Option<Certificate>, SearchError> {
    let form = tile.to_lattice()?;
    let found = match mode {
        SearchMode::Rational => search_q(&form.tile, opts)?,
        SearchMode::Integer => search_z(&form.tile, opts)?,
        SearchMode::WeightW => search_weight_w(&form.tile, opts)?.map(|(_, c)| c),
    };
    Ok(found.map(|mut cert| {
        // lattice = T(rho) + o, so k-scaled lattice copies are T(k rho) + k o.
        let (ox, oy) = (int(form.offset.0), int(form.offset.1));
        for p in &mut cert.placements {
            p.shift = (&p.shift.0 + &p.scale * &ox, &p.shift.1 + &p.scale * &oy);
            p.scale = &p.scale * &form.scale;
        }
        cert.prototile = tile.clone();
        cert
    }))
}
