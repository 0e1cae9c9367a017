//! Acceptance criteria, one line of output each. Runs without the libtest
//! harness so the lines always appear; exits nonzero if any criterion fails.

use std::collections::HashMap;
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shapetile::certify::{Certificate, Placement};
use shapetile::rational::{int, ratio};
use shapetile::slope::{class_areas_divisible, divisibility_membership};
use shapetile::{
    condition2_check, decide_q, decide_z, raster_check, relevant_slopes, search_tile, search_z,
    slope_decompose, square_poly, verify_certificate, LatticeTile, LaurentPoly, Rational, Rect,
    SearchBounds, SearchMode, Slope, WeightedTile, Witness,
};

const SEED: u64 = 0x5eed_7113;

struct Outcome {
    detail: String,
}

type Criterion = fn() -> Result<Outcome, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(elapsed <= limit, || {
        format!("took {elapsed:?}, limit {limit:?}")
    })
}

fn unit_tile(cells: &[(i64, i64)]) -> WeightedTile {
    LatticeTile::from_unit_cells(cells).to_weighted_tile()
}

fn rect(x0: Rational, x1: Rational, y0: Rational, y1: Rational) -> Rect {
    Rect::new(x0, x1, y0, y1).expect("positive extent")
}

fn corner_tromino() -> WeightedTile {
    unit_tile(&[(0, 0), (1, 0), (0, 1)])
}

fn notched(a: i64, b: i64, c: i64, d: i64) -> WeightedTile {
    WeightedTile::from_rects(&[
        (int(1), Rect::from_ints(0, a, 0, b).unwrap()),
        (int(-1), Rect::from_ints(a - c, a, b - d, b).unwrap()),
    ])
}

/// Weighted 3x3 tiling by the L-tromino at scales 1, 2, 3, read off the
/// coefficient polynomials of the identity checked in criterion 1.
fn tromino_certificate() -> Certificate {
    let mut placements = vec![Placement::from_ints(1, 1, 3, 3).unwrap()];
    for (x, y) in [(2, 2), (4, 0), (4, 1), (4, 2), (0, 4), (1, 4), (2, 4)] {
        placements.push(Placement::from_ints(-1, 1, x, y).unwrap());
    }
    placements.push(Placement::from_ints(1, 2, 1, 1).unwrap());
    placements.push(Placement::from_ints(-1, 2, 0, 0).unwrap());
    placements.push(Placement::from_ints(1, 3, 0, 0).unwrap());
    Certificate::new(
        corner_tromino(),
        placements,
        int(3),
        (int(1), int(1)),
        BigInt::one(),
    )
    .unwrap()
}

fn golden_identity() -> Result<Outcome, String> {
    let start = Instant::now();
    let f = corner_tromino().encode();
    let x1 = LaurentPoly::from_int_terms(&[(1, 0, 0), (-1, 1, 0)]);
    let y1 = LaurentPoly::from_int_terms(&[(1, 0, 0), (-1, 0, 1)]);
    let one_x_y = LaurentPoly::from_int_terms(&[(1, 0, 0), (1, 1, 0), (1, 0, 1)]);
    // (1 + X + Y)(X - 1)(Y - 1); the two sign flips cancel.
    ensure(f == &(&one_x_y * &x1) * &y1, || format!("f_T = {f}"))?;
    let h1 = LaurentPoly::from_int_terms(&[
        (1, 3, 3),
        (-1, 2, 2),
        (-1, 4, 0),
        (-1, 4, 1),
        (-1, 4, 2),
        (-1, 0, 4),
        (-1, 1, 4),
        (-1, 2, 4),
    ]);
    let xy_minus_one = LaurentPoly::from_int_terms(&[(1, 1, 1), (-1, 0, 0)]);
    let rhs = &h1 * &f
        + &xy_minus_one * &f.substitute_powers(&int(2)).unwrap()
        + f.substitute_powers(&int(3)).unwrap();
    let lhs = &LaurentPoly::from_int_terms(&[(1, 1, 1)]) * &square_poly(3).unwrap();
    ensure(lhs == rhs, || {
        format!("first difference {:?}", lhs.first_difference(&rhs))
    })?;
    let cert = tromino_certificate();
    ensure(verify_certificate(&cert).is_valid(), || {
        "certificate form rejected".into()
    })?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(Outcome {
        detail: format!("XY g_3 = h_1 f_T + (XY-1) f_T(2) + f_T(3) holds exactly ({elapsed:.2?})"),
    })
}

fn s_tetromino_verdicts() -> Result<Outcome, String> {
    let start = Instant::now();
    let t = unit_tile(&[(0, 0), (1, 0), (1, 1), (2, 1)]);
    let q = decide_q(&t).map_err(|e| e.to_string())?;
    ensure(q.answer && q.area == int(4), || {
        format!("Q verdict {q}, area {}", q.area)
    })?;
    let z = decide_z(&t).map_err(|e| e.to_string())?;
    let expected = Witness::SlopePrime(Slope::from_rise_run(1, 1).unwrap(), BigInt::from(2));
    ensure(!z.answer && z.witness == Some(expected), || {
        format!("Z verdict {z}")
    })?;
    let lattice = t.to_lattice().unwrap().tile;
    let classes = slope_decompose(&lattice, Slope::unit()).map_err(|e| e.to_string())?;
    let areas: Vec<BigInt> = classes.iter().map(|c| c.area.clone()).collect();
    ensure(areas == vec![BigInt::from(2), BigInt::from(2)], || {
        format!("class areas {areas:?}")
    })?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(1))?;
    Ok(Outcome {
        detail: format!("Q yes (area 4), Z no at mu=1 p=2, two classes of area 2 ({elapsed:.2?})"),
    })
}

fn corner_tromino_search() -> Result<Outcome, String> {
    let start = Instant::now();
    let t = corner_tromino();
    ensure(decide_z(&t).map_err(|e| e.to_string())?.answer, || {
        "decide_z said no".into()
    })?;
    let lattice = t.to_lattice().unwrap().tile;
    let cert = search_z(&lattice, SearchBounds::new(3, 5))
        .map_err(|e| e.to_string())?
        .ok_or("inconclusive within K=3, L=5")?;
    ensure(cert.target_side == int(3), || {
        format!("side {}", cert.target_side)
    })?;
    ensure(cert.target_weight.is_one() && cert.is_integral(), || {
        "not a w=1 integer certificate".into()
    })?;
    ensure(verify_certificate(&cert).is_valid(), || {
        "search output fails verification".into()
    })?;
    ensure(raster_check(&cert, 4).map_err(|e| e.to_string())?, || {
        "raster check disagrees".into()
    })?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(60))?;
    Ok(Outcome {
        detail: format!(
            "Z yes; K=3, L=5 search found a verified w=1 tiling of a 3x3 square with {} copies ({elapsed:.2?})",
            cert.placements.len()
        ),
    })
}

fn notched_family() -> Result<Outcome, String> {
    let start = Instant::now();
    let mut count = 0;
    for a in 2..=4 {
        for b in 2..=4 {
            for c in 1..a {
                for d in 1..b {
                    let t = notched(a, b, c, d);
                    let v = decide_z(&t).map_err(|e| e.to_string())?;
                    ensure(v.answer, || format!("({a},{b},{c},{d}): {v}"))?;
                    // Every relevant slope has a class of area one.
                    let lattice = t.to_lattice().unwrap().tile;
                    for s in relevant_slopes(&lattice) {
                        let classes = slope_decompose(&lattice, s).unwrap();
                        ensure(classes.iter().any(|k| k.area.abs().is_one()), || {
                            format!("({a},{b},{c},{d}) mu={s}: no class of area 1")
                        })?;
                    }
                    count += 1;
                }
            }
        }
    }
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(5))?;
    Ok(Outcome {
        detail: format!(
            "all {count} notched rectangles with a,b <= 4 answer Z yes ({elapsed:.2?})"
        ),
    })
}

fn random_rational(rng: &mut ChaCha8Rng, max_num: i64, dens: &[i64]) -> Rational {
    let d = *dens.choose(rng).unwrap();
    ratio(rng.gen_range(-max_num * d..=max_num * d), d)
}

fn random_weight(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let w = random_rational(rng, 3, &[1, 1, 1, 2, 3]);
        if !w.is_zero() {
            return w;
        }
    }
}

fn random_tile(rng: &mut ChaCha8Rng) -> WeightedTile {
    let n = rng.gen_range(1..=4);
    let rects: Vec<(Rational, Rect)> = (0..n)
        .map(|_| {
            let x0 = random_rational(rng, 3, &[1, 2, 3]);
            let y0 = random_rational(rng, 3, &[1, 2, 3]);
            let w = ratio(rng.gen_range(1..=6), *[1, 2, 3].choose(rng).unwrap());
            let h = ratio(rng.gen_range(1..=6), *[1, 2, 3].choose(rng).unwrap());
            (
                random_weight(rng),
                rect(x0.clone(), x0 + w, y0.clone(), y0 + h),
            )
        })
        .collect();
    WeightedTile::from_rects(&rects)
}

fn property_suite() -> Result<Outcome, String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut empties = 0;
    for k in 0..200 {
        let mut t = random_tile(&mut rng);
        if k % 10 == 9 {
            // Exact cancellation yields the empty tile.
            let mut rects = t.to_rects();
            rects.extend(t.to_rects().into_iter().map(|(w, r)| (-w, r)));
            t = WeightedTile::from_rects(&rects);
        }
        let f = t.encode();

        let (sx, sy) = (
            random_rational(&mut rng, 4, &[1, 2, 5]),
            random_rational(&mut rng, 4, &[1, 3]),
        );
        ensure(t.translate(&sx, &sy).encode() == f.shift(&sx, &sy), || {
            format!("tile {k}: translation law")
        })?;

        let rho = ratio(rng.gen_range(1..=7), rng.gen_range(1..=4));
        let scaled = t.rescale(&rho).unwrap().encode();
        ensure(scaled == f.substitute_powers(&rho).unwrap(), || {
            format!("tile {k}: scaling law")
        })?;

        let back = WeightedTile::decode(&f).map_err(|e| format!("tile {k}: decode failed: {e}"))?;
        ensure(back == t && back.to_rects() == t.to_rects(), || {
            format!("tile {k}: round trip")
        })?;

        ensure(f.is_zero() == t.is_empty(), || {
            format!("tile {k}: encode zero iff empty")
        })?;
        if t.is_empty() {
            empties += 1;
        }

        // Area from rectangles directly, and from the lattice star factor.
        let direct: Rational = t
            .cells()
            .map(|(r, w)| w * (r.x1() - r.x0()) * (r.y1() - r.y0()))
            .fold(Rational::zero(), |a, b| a + b);
        let form = t.to_lattice().unwrap();
        let star_area = form.tile.star_factor().eval_at_one() / (&form.scale * &form.scale);
        ensure(t.weighted_area() == direct && star_area == direct, || {
            format!("tile {k}: area")
        })?;
    }
    ensure(empties >= 20, || {
        format!("only {empties} empty tiles exercised")
    })?;
    Ok(Outcome {
        detail: format!(
            "200 random tiles: translation, scaling, round trip, encode injectivity, area = f*(1,1) ({:.2?})",
            start.elapsed()
        ),
    })
}

fn random_lattice_tile(rng: &mut ChaCha8Rng) -> LatticeTile {
    let n = rng.gen_range(1..=7);
    let cells: Vec<((i64, i64), i64)> = (0..n)
        .map(|_| {
            let w = *[-3, -2, -1, 1, 2, 3, 4, 6].choose(rng).unwrap();
            ((rng.gen_range(0..4), rng.gen_range(0..4)), w)
        })
        .collect();
    let mut merged: HashMap<(i64, i64), i64> = HashMap::new();
    for (c, w) in cells {
        *merged.entry(c).or_default() += w;
    }
    let mut v: Vec<((i64, i64), i64)> = merged.into_iter().filter(|(_, w)| *w != 0).collect();
    v.sort();
    LatticeTile::from_int_cells(&v)
}

/// Class areas of cells grouped by the line of slope `rise/run` through
/// them, computed without the library.
fn oracle_divisible(t: &LatticeTile, rise: i64, run: i64, n: i64) -> bool {
    let mut areas: HashMap<i64, BigInt> = HashMap::new();
    for (&(i, j), w) in t.cells() {
        *areas.entry(rise * i - run * j).or_default() += w.to_integer();
    }
    areas.values().all(|a| a.is_multiple_of(&BigInt::from(n)))
}

fn slope_oracle() -> Result<Outcome, String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let fixed: [(i64, i64); 10] = [
        (1, 1),
        (-1, 1),
        (2, 1),
        (-2, 1),
        (1, 2),
        (-1, 2),
        (1, 3),
        (3, 2),
        (-2, 3),
        (5, 1),
    ];
    let mut checks = 0;
    let mut divisible = 0;
    for k in 0..200 {
        let t = random_lattice_tile(&mut rng);
        let mut slopes: Vec<(i64, i64)> = fixed.to_vec();
        for s in relevant_slopes(&t) {
            // mu = -c/d
            slopes.push((-s.c(), s.d()));
        }
        for &(rise, run) in &slopes {
            let g = rise.gcd(&run);
            let (rise, run) = (rise / g, run / g);
            let s = Slope::from_rise_run(rise, run).unwrap();
            for n in [2, 3, 5] {
                let m = BigInt::from(n);
                let oracle = oracle_divisible(&t, rise, run, n);
                let membership = divisibility_membership(&t, s, &m).map_err(|e| e.to_string())?;
                let combinatorial = class_areas_divisible(&t, s, &m).map_err(|e| e.to_string())?;
                ensure(oracle == membership && oracle == combinatorial, || {
                    format!("tile {k} mu={rise}/{run} n={n}: oracle {oracle}, membership {membership}, classes {combinatorial}")
                })?;
                checks += 1;
                divisible += usize::from(oracle);
            }
        }
    }
    ensure(divisible > 0 && divisible < checks, || {
        "degenerate sample".into()
    })?;
    Ok(Outcome {
        detail: format!(
            "{checks} (tile, slope, n) cases agree, {divisible} divisible ({:.2?})",
            start.elapsed()
        ),
    })
}

fn pick_ratio(rng: &mut ChaCha8Rng, choices: &[(i64, i64)]) -> Rational {
    let (p, q) = *choices.choose(rng).unwrap();
    ratio(p, q)
}

/// An `a x b` rectangle of weight `w0` tiles the square of side `p1 p2`
/// in a grid of copies of weight `1/w0`.
fn rectangle_grid(rng: &mut ChaCha8Rng) -> Certificate {
    let (p1, q1) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
    let (p2, q2) = (rng.gen_range(1..=2), rng.gen_range(1..=2));
    let (a, b) = (ratio(p1, q1), ratio(p2, q2));
    let w0 = pick_ratio(rng, &[(1, 1), (2, 1), (-1, 1), (1, 2), (-3, 2)]);
    let proto =
        WeightedTile::from_rects(&[(w0.clone(), rect(int(0), a.clone(), int(0), b.clone()))]);
    let inv = w0.recip();
    let mut placements = Vec::new();
    for i in 0..p2 * q1 {
        for j in 0..p1 * q2 {
            placements
                .push(Placement::new(inv.clone(), int(1), (&a * int(i), &b * int(j))).unwrap());
        }
    }
    Certificate::new(
        proto,
        placements,
        int(p1 * p2),
        (int(0), int(0)),
        BigInt::one(),
    )
    .unwrap()
}

fn domino_certificate(rng: &mut ChaCha8Rng) -> Certificate {
    let w = rng.gen_range(1..=3);
    let proto = unit_tile(&[(0, 0), (0, 1)]);
    let placements = vec![
        Placement::from_ints(w, 1, 0, 0).unwrap(),
        Placement::from_ints(w, 1, 1, 0).unwrap(),
    ];
    Certificate::new(proto, placements, int(2), (int(0), int(0)), BigInt::from(w)).unwrap()
}

fn valid_certificate(rng: &mut ChaCha8Rng) -> Certificate {
    let mut c = match rng.gen_range(0..3) {
        0 => rectangle_grid(rng),
        1 => domino_certificate(rng),
        _ => tromino_certificate(),
    };
    // Cancelling pairs leave the sum unchanged.
    for _ in 0..rng.gen_range(0..=2) {
        let w = random_weight(rng);
        let scale = pick_ratio(rng, &[(1, 2), (1, 1), (3, 2), (2, 1)]);
        let shift = (
            random_rational(rng, 2, &[1, 2]),
            random_rational(rng, 2, &[1, 2]),
        );
        c.placements
            .push(Placement::new(w.clone(), scale.clone(), shift.clone()).unwrap());
        c.placements.push(Placement::new(-w, scale, shift).unwrap());
    }
    // A common similarity applied to everything.
    let rho = pick_ratio(rng, &[(1, 1), (1, 2), (2, 1)]);
    let (sx, sy) = (
        random_rational(rng, 1, &[1, 2]),
        random_rational(rng, 1, &[1, 2]),
    );
    for p in &mut c.placements {
        p.scale = &p.scale * &rho;
        p.shift = (&p.shift.0 * &rho + &sx, &p.shift.1 * &rho + &sy);
    }
    c.target_side = &c.target_side * &rho;
    c.target_anchor = (
        &c.target_anchor.0 * &rho + &sx,
        &c.target_anchor.1 * &rho + &sy,
    );
    c.placements.shuffle(rng);
    c
}

fn mutate(rng: &mut ChaCha8Rng, mut c: Certificate) -> Certificate {
    let k = rng.gen_range(0..c.placements.len());
    let delta = pick_ratio(rng, &[(1, 1), (-1, 1), (1, 2), (-1, 3)]);
    match rng.gen_range(0..7) {
        0 => {
            let w = &c.placements[k].weight + &delta;
            c.placements[k].weight = if w.is_zero() { &w + int(1) } else { w };
        }
        1 => c.placements[k].shift.0 += &delta,
        2 => c.placements[k].shift.1 += &delta,
        3 => c.placements[k].scale = &c.placements[k].scale * ratio(3, 2),
        4 => {
            c.placements.remove(k);
        }
        5 => c.target_anchor.0 += &delta,
        _ => c.target_weight += BigInt::one(),
    }
    c
}

fn verifier_oracle() -> Result<Outcome, String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 7);
    let mut invalid_mutants = 0;
    for k in 0..100 {
        let c = valid_certificate(&mut rng);
        let v = verify_certificate(&c).is_valid();
        let r = raster_check(&c, 8).map_err(|e| format!("valid {k}: {e}"))?;
        ensure(v && r, || {
            format!("valid certificate {k}: identity {v}, raster {r}")
        })?;
    }
    for k in 0..100 {
        let base = valid_certificate(&mut rng);
        let c = mutate(&mut rng, base);
        let v = verify_certificate(&c).is_valid();
        let r = raster_check(&c, 8).map_err(|e| format!("mutant {k}: {e}"))?;
        ensure(v == r, || format!("mutant {k}: identity {v}, raster {r}"))?;
        invalid_mutants += usize::from(!v);
    }
    ensure(invalid_mutants >= 90, || {
        format!("only {invalid_mutants} mutants were invalid")
    })?;
    Ok(Outcome {
        detail: format!(
            "identity and raster (resolution 8) agree on 100 valid and 100 mutated certificates, {invalid_mutants} mutants invalid ({:.2?})",
            start.elapsed()
        ),
    })
}

fn search_corpus() -> Vec<(&'static str, WeightedTile)> {
    let ints = |cells: &[((i64, i64), i64)]| LatticeTile::from_int_cells(cells).to_weighted_tile();
    vec![
        ("monomino", unit_tile(&[(0, 0)])),
        ("domino", unit_tile(&[(0, 0), (1, 0)])),
        ("vertical domino", unit_tile(&[(0, 0), (0, 1)])),
        ("straight tromino", unit_tile(&[(0, 0), (1, 0), (2, 0)])),
        ("L tromino", unit_tile(&[(0, 0), (1, 0), (0, 1)])),
        ("L tromino rotated", unit_tile(&[(0, 0), (1, 0), (1, 1)])),
        ("L tromino flipped", unit_tile(&[(1, 0), (0, 1), (1, 1)])),
        ("L tromino turned", unit_tile(&[(0, 0), (0, 1), (1, 1)])),
        (
            "square tetromino",
            unit_tile(&[(0, 0), (1, 0), (0, 1), (1, 1)]),
        ),
        (
            "straight tetromino",
            unit_tile(&[(0, 0), (1, 0), (2, 0), (3, 0)]),
        ),
        ("T tetromino", unit_tile(&[(0, 0), (1, 0), (2, 0), (1, 1)])),
        ("S tetromino", unit_tile(&[(0, 0), (1, 0), (1, 1), (2, 1)])),
        ("Z tetromino", unit_tile(&[(1, 0), (2, 0), (0, 1), (1, 1)])),
        ("L tetromino", unit_tile(&[(0, 0), (1, 0), (2, 0), (0, 1)])),
        (
            "P pentomino",
            unit_tile(&[(0, 0), (1, 0), (0, 1), (1, 1), (0, 2)]),
        ),
        ("split pair", unit_tile(&[(0, 0), (2, 0)])),
        ("diagonal pair", unit_tile(&[(0, 0), (1, 1)])),
        ("notched 2x2", notched(2, 2, 1, 1)),
        ("notched 3x2", notched(3, 2, 1, 1)),
        ("notched 3x3", notched(3, 3, 2, 1)),
        (
            "double tromino",
            ints(&[((0, 0), 2), ((1, 0), 2), ((0, 1), 2)]),
        ),
        ("uneven domino", ints(&[((0, 0), 1), ((1, 0), 2)])),
        (
            "heavy corner",
            ints(&[((0, 0), 3), ((1, 0), 1), ((0, 1), 1)]),
        ),
        ("signed pair", ints(&[((0, 0), 2), ((1, 1), -1)])),
        (
            "signed row",
            ints(&[((0, 0), 1), ((1, 0), -1), ((2, 0), 1)]),
        ),
        (
            "signed S",
            ints(&[((0, 0), 1), ((1, 0), 1), ((1, 1), -1), ((2, 1), 1)]),
        ),
        ("cancelling pair", ints(&[((0, 0), 1), ((1, 0), -1)])),
        (
            "checker",
            ints(&[((0, 0), 1), ((1, 0), -1), ((0, 1), -1), ((1, 1), 1)]),
        ),
        (
            "even diagonal",
            ints(&[((0, 0), 2), ((1, 1), 2), ((1, 0), 1), ((2, 1), 1)]),
        ),
        (
            "half-width rectangle",
            WeightedTile::from_rects(&[(int(1), rect(int(0), ratio(1, 2), int(0), int(1)))]),
        ),
        (
            "offset thirds",
            WeightedTile::from_rects(&[(
                int(1),
                rect(ratio(1, 3), ratio(4, 3), int(0), ratio(2, 3)),
            )]),
        ),
        (
            "scaled L",
            corner_tromino()
                .rescale(&ratio(1, 2))
                .unwrap()
                .translate(&ratio(1, 2), &int(1)),
        ),
    ]
}

fn search_soundness() -> Result<Outcome, String> {
    let start = Instant::now();
    let corpus = search_corpus();
    let bounds = SearchBounds::new(3, 4);
    let (mut found_z, mut found_q, mut z_no) = (0, 0, 0);
    for (name, t) in &corpus {
        let z = decide_z(t).map_err(|e| format!("{name}: {e}"))?;
        let q = decide_q(t).map_err(|e| format!("{name}: {e}"))?;
        if !z.answer {
            z_no += 1;
        }
        // Cross-check the slope report against the verdict.
        let report =
            condition2_check(&t.to_lattice().unwrap().tile).map_err(|e| format!("{name}: {e}"))?;
        ensure(!q.answer || report.passes() == z.answer, || {
            format!("{name}: report and verdict differ")
        })?;
        for mode in [SearchMode::Integer, SearchMode::Rational] {
            let found = match search_tile(t, mode, bounds) {
                Ok(c) => c,
                Err(shapetile::SearchError::ZeroArea) => {
                    ensure(!q.answer, || {
                        format!("{name}: zero-area error on a Q-yes tile")
                    })?;
                    None
                }
                Err(e) => return Err(format!("{name}: {e}")),
            };
            if let Some(c) = found {
                ensure(verify_certificate(&c).is_valid(), || {
                    format!("{name}: {mode:?} certificate fails")
                })?;
                match mode {
                    SearchMode::Integer => {
                        ensure(z.answer, || format!("{name}: integer certificate but Z no"))?;
                        ensure(c.is_integral(), || format!("{name}: fractional weights"))?;
                        found_z += 1;
                    }
                    _ => {
                        ensure(q.answer, || {
                            format!("{name}: rational certificate but Q no")
                        })?;
                        found_q += 1;
                    }
                }
            }
        }
    }
    ensure(corpus.len() >= 30 && z_no >= 3 && found_z >= 10, || {
        format!(
            "weak corpus: {} tiles, {z_no} Z-no, {found_z} found",
            corpus.len()
        )
    })?;
    Ok(Outcome {
        detail: format!(
            "{} tiles ({z_no} with Z no): {found_z} integer and {found_q} rational certificates, all verified, none contradicting a verdict ({:.2?})",
            corpus.len(),
            start.elapsed()
        ),
    })
}

fn main() {
    let criteria: [(&str, Criterion); 8] = [
        ("golden identity", golden_identity),
        ("S-tetromino verdicts", s_tetromino_verdicts),
        ("L-tromino search", corner_tromino_search),
        ("notched rectangle family", notched_family),
        ("tile property suite", property_suite),
        ("slope divisibility oracle", slope_oracle),
        ("verifier vs raster oracle", verifier_oracle),
        ("search soundness", search_soundness),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let result = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match result {
            Ok(o) => println!("criterion {} PASS {name}: {}", k + 1, o.detail),
            Err(e) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {e}", k + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
