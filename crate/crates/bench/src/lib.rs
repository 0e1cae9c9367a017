//! Fixtures shared by the criterion benches.

use shapetile::LatticeTile;

pub fn corner_tromino() -> LatticeTile {
    LatticeTile::from_unit_cells(&[(0, 0), (1, 0), (0, 1)])
}

pub fn s_tetromino() -> LatticeTile {
    LatticeTile::from_unit_cells(&[(0, 0), (1, 0), (1, 1), (2, 1)])
}

/// The `a x b` rectangle with its upper-right `c x d` corner removed.
pub fn notched_rectangle(a: i64, b: i64, c: i64, d: i64) -> LatticeTile {
    LatticeTile::from_cells(
        (0..a)
            .flat_map(|i| (0..b).map(move |j| (i, j)))
            .filter(|&(i, j)| i < a - c || j < b - d)
            .map(|cell| (cell, shapetile::rational::int(1))),
    )
}
