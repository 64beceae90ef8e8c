//! Row reduction over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::Rational;

/// Reduces `m` in place to reduced row echelon form and returns the pivot
/// columns.
pub fn rref(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let factor = m[i][c].clone();
                for j in 0..cols {
                    let delta = &factor * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Some solution of `a·x = b`, or `None` if the system is inconsistent.
/// Free variables are set to zero.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.first().map_or(0, |r| r.len());
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            row.iter()
                .cloned()
                .chain(std::iter::once(rhs.clone()))
                .collect()
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.contains(&n) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = aug[row][n].clone();
    }
    Some(x)
}

/// A basis of the right kernel of `a` (which has `ncols` columns).
pub fn kernel(a: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = a.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][f].clone();
            }
            v
        })
        .collect()
}

/// The primitive integer vector on the rational line through `v`, with the
/// first nonzero entry positive.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = if ints
        .iter()
        .find(|x| !x.is_zero())
        .is_some_and(|x| x.is_negative())
    {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    ints.into_iter().map(|x| x / &g * &sign).collect()
}
