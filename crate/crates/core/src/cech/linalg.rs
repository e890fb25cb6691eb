//! Fraction-free (Bareiss) elimination over the integers for rational
//! linear systems.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::algebra::Rational;

/// Scales a rational row to integers.
fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    row.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect()
}

/// Row echelon form in place; pivots are never taken in columns `>= limit`.
/// Returns the pivot columns, one per leading row.
fn echelon(m: &mut [Vec<BigInt>], limit: usize) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..limit.min(cols) {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let v = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(a: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = a.iter().map(|r| integer_row(r)).collect();
    let cols = m.first().map_or(0, |r| r.len());
    echelon(&mut m, cols).len()
}

/// A particular solution of `a x = b` (free variables set to zero), or
/// `None` when the system is inconsistent.
pub fn solve(a: &[Vec<Rational>], b: &[Rational], ncols: usize) -> Option<Vec<Rational>> {
    assert_eq!(a.len(), b.len());
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut full = row.clone();
            full.push(rhs.clone());
            integer_row(&full)
        })
        .collect();
    let pivots = echelon(&mut m, ncols);
    let rank = pivots.len();
    if m.iter().skip(rank).any(|row| !row[ncols].is_zero()) {
        return None;
    }
    let mut x = alloc::vec![Rational::zero(); ncols];
    for (r, &c) in pivots.iter().enumerate().rev() {
        let mut acc = Rational::from_integer(m[r][ncols].clone());
        for j in c + 1..ncols {
            if !m[r][j].is_zero() && !x[j].is_zero() {
                acc -= Rational::from_integer(m[r][j].clone()) * &x[j];
            }
        }
        x[c] = acc / Rational::from_integer(m[r][c].clone());
    }
    Some(x)
}
