//! Integer linear algebra: unimodular row reduction, Hermite normal form and
//! saturated integer kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// Row-reduces `rows` with unimodular operations, clearing columns
/// `0..ncols` below each pivot. Returns the rank over those columns; the rows
/// after the rank are zero on them.
///
/// Columns are cleared Euclid-style: the row with the smallest nonzero entry
/// becomes the pivot and the others are reduced modulo it. This keeps the
/// entries far smaller than pairwise extended-gcd transforms do.
fn echelonize(rows: &mut [Vec<BigInt>], ncols: usize) -> usize {
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        loop {
            let Some(piv) = (r..rows.len())
                .filter(|&i| !rows[i][c].is_zero())
                .min_by(|&a, &b| rows[a][c].magnitude().cmp(rows[b][c].magnitude()))
            else {
                break;
            };
            rows.swap(r, piv);
            let mut cleared = true;
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let f = rows[i][c].div_floor(&rows[r][c]);
                let (head, tail) = rows.split_at_mut(i);
                for (x, y) in tail[0].iter_mut().zip(&head[r]) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
                cleared &= tail[0][c].is_zero();
            }
            if cleared {
                r += 1;
                break;
            }
        }
    }
    r
}

/// Hermite normal form of the row lattice: echelon, positive pivots, entries
/// above each pivot reduced into `[0, pivot)`. Zero rows are dropped.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> IntMatrix {
    let Some(ncols) = rows.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut m = rows.to_vec();
    let rank = echelonize(&mut m, ncols);
    m.truncate(rank);
    let mut pivot_col = 0;
    for r in 0..m.len() {
        while m[r][pivot_col].is_zero() {
            pivot_col += 1;
        }
        if m[r][pivot_col].is_negative() {
            for x in m[r].iter_mut() {
                *x = -&*x;
            }
        }
        let piv = m[r][pivot_col].clone();
        for above in 0..r {
            let f = m[above][pivot_col].div_floor(&piv);
            if !f.is_zero() {
                let row = m[r].clone();
                for (x, y) in m[above].iter_mut().zip(&row) {
                    *x -= &f * y;
                }
            }
        }
    }
    m
}

/// A ℤ-basis of `{x ∈ ℤⁿ : A·x = 0}`, in Hermite normal form.
///
/// The basis comes from the unimodular transform that echelonizes Aᵀ, so the
/// returned lattice is saturated (it equals the rational kernel intersected
/// with ℤⁿ).
pub fn integer_kernel(a: &[Vec<BigInt>], ncols: usize) -> IntMatrix {
    let nrows = a.len();
    let mut aug: Vec<Vec<BigInt>> = (0..ncols)
        .map(|c| {
            let mut row: Vec<BigInt> = a.iter().map(|r| r[c].clone()).collect();
            row.extend((0..ncols).map(|k| {
                if k == c {
                    BigInt::one()
                } else {
                    BigInt::zero()
                }
            }));
            row
        })
        .collect();
    let rank = echelonize(&mut aug, nrows);
    let kernel: Vec<Vec<BigInt>> = aug[rank..]
        .iter()
        .map(|row| row[nrows..].to_vec())
        .collect();
    hermite_normal_form(&kernel)
}

/// Rank over ℚ by plain rational elimination.
pub fn rational_rank(a: &[Vec<BigInt>]) -> usize {
    let Some(ncols) = a.first().map(Vec::len) else {
        return 0;
    };
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        for i in r + 1..m.len() {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] / &m[r][c];
            for j in c..ncols {
                let t = &f * &m[r][j];
                m[i][j] -= t;
            }
        }
        r += 1;
    }
    r
}

pub fn mat_vec(a: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
    a.iter()
        .map(|row| row.iter().zip(x).map(|(u, v)| u * v).sum())
        .collect()
}

/// Solves `x = Σ cᵢ·basisᵢ` over ℤ for a basis in Hermite normal form.
pub fn hnf_coordinates(basis: &[Vec<BigInt>], x: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rest = x.to_vec();
    let mut coords = Vec::with_capacity(basis.len());
    for row in basis {
        let pc = row.iter().position(|v| !v.is_zero())?;
        let (q, r) = rest[pc].div_rem(&row[pc]);
        if !r.is_zero() {
            return None;
        }
        for (slot, v) in rest.iter_mut().zip(row) {
            *slot -= &q * v;
        }
        coords.push(q);
    }
    rest.iter().all(Zero::is_zero).then_some(coords)
}
