//! Exact dense linear algebra over the integers.
//!
//! Two solvers share one shape of problem: an integer matrix `A` and many
//! right-hand sides `b`. [`RationalSystem`] row-reduces `A` once by
//! fraction-free (Bareiss) elimination and answers `A x = b` over Q.
//! [`IntegerSystem`] computes a column Hermite normal form `A U = H` with `U`
//! unimodular and answers `A x = b` over Z.

use crate::rational::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense row-major integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = IntMatrix::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix");
            for (c, v) in row.iter().enumerate() {
                m.set(r, c, BigInt::from(*v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        (0..self.rows)
            .map(|r| {
                (0..self.cols)
                    .filter(|&c| !x[c].is_zero())
                    .map(|c| self.get(r, c) * &x[c])
                    .sum()
            })
            .collect()
    }
}

/// Row echelon form of `[A | B]` for many right-hand sides at once.
pub struct RationalSystem {
    cols: usize,
    rank: usize,
    pivots: Vec<usize>,
    /// Echelonized rows of the augmented matrix `[A | B]`.
    rows: Vec<Vec<BigInt>>,
}

impl RationalSystem {
    /// Eliminates `A` by Bareiss steps, carrying every right-hand side along.
    pub fn new(a: &IntMatrix, rhs: &[Vec<BigInt>]) -> Self {
        let (m, n) = (a.rows, a.cols);
        let width = n + rhs.len();
        let mut rows: Vec<Vec<BigInt>> = (0..m)
            .map(|r| {
                let mut row = Vec::with_capacity(width);
                row.extend((0..n).map(|c| a.get(r, c).clone()));
                row.extend(rhs.iter().map(|b| b[r].clone()));
                row
            })
            .collect();
        let mut prev = BigInt::one();
        let mut rank = 0;
        let mut pivots = Vec::new();
        for col in 0..n {
            if rank == m {
                break;
            }
            let Some(p) = (rank..m).find(|&r| !rows[r][col].is_zero()) else {
                continue;
            };
            rows.swap(rank, p);
            let (head, tail) = rows.split_at_mut(rank + 1);
            let pivot_row = &head[rank];
            let pivot = &pivot_row[col];
            for row in tail.iter_mut() {
                let factor = row[col].clone();
                if factor.is_zero() {
                    for v in row[col + 1..].iter_mut() {
                        if !v.is_zero() {
                            *v = &*v * pivot / &prev;
                        }
                    }
                    continue;
                }
                for j in col + 1..width {
                    let v = &row[j] * pivot - &factor * &pivot_row[j];
                    row[j] = if prev.is_one() { v } else { v / &prev };
                }
                row[col] = BigInt::zero();
            }
            prev = pivot_row[col].clone();
            pivots.push(col);
            rank += 1;
        }
        RationalSystem {
            cols: n,
            rank,
            pivots,
            rows,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The basic solution (free variables zero) for right-hand side `k`, or
    /// `None` when that system is inconsistent.
    pub fn solve(&self, k: usize) -> Option<Vec<Rational>> {
        let b = self.cols + k;
        if self.rows[self.rank..].iter().any(|row| !row[b].is_zero()) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.cols];
        for t in (0..self.rank).rev() {
            let row = &self.rows[t];
            let pc = self.pivots[t];
            let mut acc = Rational::from_integer(row[b].clone());
            for &qc in &self.pivots[t + 1..] {
                if !x[qc].is_zero() && !row[qc].is_zero() {
                    acc -= &x[qc] * Rational::from_integer(row[qc].clone());
                }
            }
            x[pc] = acc / Rational::from_integer(row[pc].clone());
        }
        Some(x)
    }

    /// One primitive integer kernel vector per free column `f`, equal to a
    /// positive multiple of `e_f` on the free coordinates.
    pub fn kernel_basis(&self) -> Vec<(usize, Vec<BigInt>)> {
        let mut is_pivot = vec![false; self.cols];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = vec![Rational::zero(); self.cols];
                x[f] = Rational::one();
                for t in (0..self.rank).rev() {
                    let row = &self.rows[t];
                    let pc = self.pivots[t];
                    let mut acc = -Rational::from_integer(row[f].clone());
                    for &qc in &self.pivots[t + 1..] {
                        if !x[qc].is_zero() && !row[qc].is_zero() {
                            acc -= &x[qc] * Rational::from_integer(row[qc].clone());
                        }
                    }
                    x[pc] = acc / Rational::from_integer(row[pc].clone());
                }
                let d = crate::rational::common_denominator(&x);
                let v: Vec<BigInt> = x
                    .iter()
                    .map(|q| (q * Rational::from_integer(d.clone())).to_integer())
                    .collect();
                let g = crate::rational::gcd_all(&v);
                (f, v.into_iter().map(|e| e / &g).collect())
            })
            .collect()
    }
}

/// Moves each free coordinate `x_f` into `(-m/2, m/2]` by subtracting
/// multiples of the kernel vector for `f`, where `m` is its `f` entry.
pub fn reduce_free_coordinates(x: &mut [BigInt], kernel: &[(usize, Vec<BigInt>)]) {
    for (f, k) in kernel {
        let m = &k[*f];
        let twice_m: BigInt = m * BigInt::from(2);
        let numer: BigInt = &x[*f] * BigInt::from(2) + m - BigInt::one();
        let q = numer.div_floor(&twice_m);
        if q.is_zero() {
            continue;
        }
        for (xi, ki) in x.iter_mut().zip(k) {
            if !ki.is_zero() {
                *xi -= &q * ki;
            }
        }
    }
}

/// Column Hermite normal form `A U = H`.
pub struct IntegerSystem {
    rows: usize,
    cols: usize,
    /// Columns of `H`; only the first `rank` are nonzero.
    h: Vec<Vec<BigInt>>,
    /// Columns of the unimodular transform `U`.
    u: Vec<Vec<BigInt>>,
    pivot_rows: Vec<usize>,
}

/// Nearest integer to `a / b`, ties toward negative infinity.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let (num, den) = if b.is_negative() {
        (-a, -b)
    } else {
        (a.clone(), b.clone())
    };
    (num * &two + &den).div_floor(&(den * two))
}

/// `col_target -= factor * col_source` for any two distinct columns.
fn sub_multiple(cols: &mut [Vec<BigInt>], target: usize, source: usize, factor: &BigInt) {
    let (t, s) = if target < source {
        let (left, right) = cols.split_at_mut(source);
        (&mut left[target], &right[0])
    } else {
        let (left, right) = cols.split_at_mut(target);
        (&mut right[0], &left[source])
    };
    for (a, b) in t.iter_mut().zip(s.iter()) {
        if !b.is_zero() {
            *a -= factor * b;
        }
    }
}

impl IntegerSystem {
    pub fn new(a: &IntMatrix) -> Self {
        let (m, n) = (a.rows, a.cols);
        let mut h: Vec<Vec<BigInt>> = (0..n)
            .map(|c| (0..m).map(|r| a.get(r, c).clone()).collect())
            .collect();
        let mut u: Vec<Vec<BigInt>> = (0..n)
            .map(|c| {
                let mut e = vec![BigInt::zero(); n];
                e[c] = BigInt::one();
                e
            })
            .collect();
        let mut pivot_rows = Vec::new();
        let mut t = 0;
        for r in 0..m {
            if t == n {
                break;
            }
            // Euclid steps against the smallest entry keep coefficients small.
            while let Some(best) = (t..n)
                .filter(|&c| !h[c][r].is_zero())
                .min_by(|&a, &b| h[a][r].abs().cmp(&h[b][r].abs()).then(a.cmp(&b)))
            {
                h.swap(t, best);
                u.swap(t, best);
                let pivot = h[t][r].clone();
                let mut done = true;
                for c in t + 1..n {
                    if h[c][r].is_zero() {
                        continue;
                    }
                    let q = round_div(&h[c][r], &pivot);
                    sub_multiple(&mut h, c, t, &q);
                    sub_multiple(&mut u, c, t, &q);
                    if !h[c][r].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if h[t][r].is_zero() {
                continue;
            }
            if h[t][r].is_negative() {
                for v in h[t].iter_mut().chain(u[t].iter_mut()) {
                    *v = -&*v;
                }
            }
            let pivot = h[t][r].clone();
            for s in 0..t {
                let q = h[s][r].div_floor(&pivot);
                if !q.is_zero() {
                    sub_multiple(&mut h, s, t, &q);
                    sub_multiple(&mut u, s, t, &q);
                }
            }
            pivot_rows.push(r);
            t += 1;
        }
        IntegerSystem {
            rows: m,
            cols: n,
            h,
            u,
            pivot_rows,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }

    /// An integer solution of `A x = b`, or `None` if none exists.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(b.len(), self.rows);
        let rank = self.rank();
        let mut y: Vec<BigInt> = Vec::with_capacity(rank);
        let residual = |r: usize, y: &[BigInt]| -> BigInt {
            let mut acc = b[r].clone();
            for (s, ys) in y.iter().enumerate() {
                if !ys.is_zero() && !self.h[s][r].is_zero() {
                    acc -= &self.h[s][r] * ys;
                }
            }
            acc
        };
        let mut r = 0;
        for t in 0..rank {
            let pr = self.pivot_rows[t];
            while r < pr {
                if !residual(r, &y).is_zero() {
                    return None;
                }
                r += 1;
            }
            let (q, rem) = residual(pr, &y).div_rem(&self.h[t][pr]);
            if !rem.is_zero() {
                return None;
            }
            y.push(q);
            r = pr + 1;
        }
        while r < self.rows {
            if !residual(r, &y).is_zero() {
                return None;
            }
            r += 1;
        }
        let mut x = vec![BigInt::zero(); self.cols];
        for (t, yt) in y.iter().enumerate() {
            if yt.is_zero() {
                continue;
            }
            for (xi, ui) in x.iter_mut().zip(&self.u[t]) {
                if !ui.is_zero() {
                    *xi += yt * ui;
                }
            }
        }
        self.shorten(&mut x);
        Some(x)
    }

    /// Size-reduces a solution against the integer kernel basis (the last
    /// columns of `U`), keeping only steps that shrink the squared norm.
    fn shorten(&self, x: &mut [BigInt]) {
        let kernel = &self.u[self.rank()..];
        let norms: Vec<BigInt> = kernel
            .iter()
            .map(|k| k.iter().map(|v| v * v).sum::<BigInt>())
            .collect();
        for _ in 0..4 {
            let mut changed = false;
            for (k, nk) in kernel.iter().zip(&norms) {
                if nk.is_zero() {
                    continue;
                }
                let dot: BigInt = x.iter().zip(k).map(|(a, b)| a * b).sum::<BigInt>();
                // nearest integer to dot / nk
                let twice_norm: BigInt = nk * BigInt::from(2);
                let numer: BigInt = &dot * BigInt::from(2) + nk;
                let q = numer.div_floor(&twice_norm);
                if q.is_zero() {
                    continue;
                }
                for (xi, ki) in x.iter_mut().zip(k) {
                    if !ki.is_zero() {
                        *xi -= &q * ki;
                    }
                }
                changed = true;
            }
            if !changed {
                break;
            }
        }
    }

    #[cfg(test)]
    fn h_matrix(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rows, self.cols);
        for (c, col) in self.h.iter().enumerate() {
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }
}
