//! Dense exact linear algebra over rational fields.
//!
//! Everything here is generic over the scalar so the same routines serve
//! `Rational64` lattice bookkeeping and `BigRational` matrix sweeps.

use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio, Rational64};
use num_traits::{Num, One, Signed, Zero};

pub type Matrix<F> = Vec<Vec<F>>;

/// Shorthand for a small `BigRational`.
pub fn big(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn to_big(q: &Rational64) -> BigRational {
    BigRational::new(BigInt::from(*q.numer()), BigInt::from(*q.denom()))
}

pub fn identity<F: Clone + Zero + One>(n: usize) -> Matrix<F> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect())
        .collect()
}

pub fn transpose<F: Clone>(m: &[Vec<F>]) -> Matrix<F> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mul<F: Clone + Num>(a: &[Vec<F>], b: &[Vec<F>]) -> Matrix<F> {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = F::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc = acc + row[k].clone() * b[k][j].clone();
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mul_vec<F: Clone + Num>(a: &[Vec<F>], v: &[F]) -> Vec<F> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(F::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
        })
        .collect()
}

/// Row-reduces a copy of `m` and returns (echelon form, pivot columns, sign of the
/// row permutation).
fn echelon<F>(m: &[Vec<F>]) -> (Matrix<F>, Vec<usize>, bool)
where
    F: Clone + Num + Neg<Output = F>,
{
    let mut a: Matrix<F> = m.to_vec();
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut pivots = Vec::new();
    let mut odd = false;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            odd = !odd;
        }
        let pivot = a[r][c].clone();
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let factor = a[i][c].clone() / pivot.clone();
            for j in c..cols {
                let delta = factor.clone() * a[r][j].clone();
                a[i][j] = a[i][j].clone() - delta;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots, odd)
}

pub fn rank<F>(m: &[Vec<F>]) -> usize
where
    F: Clone + Num + Neg<Output = F>,
{
    echelon(m).1.len()
}

pub fn det<F>(m: &[Vec<F>]) -> F
where
    F: Clone + Num + Neg<Output = F>,
{
    let n = m.len();
    let (a, pivots, odd) = echelon(m);
    if pivots.len() < n {
        return F::zero();
    }
    let mut d = F::one();
    for (i, row) in a.iter().enumerate() {
        d = d * row[i].clone();
    }
    if odd {
        -d
    } else {
        d
    }
}

/// Gauss–Jordan inverse; `None` for singular input.
pub fn inverse<F>(m: &[Vec<F>]) -> Option<Matrix<F>>
where
    F: Clone + Num + Neg<Output = F>,
{
    let n = m.len();
    let mut a: Matrix<F> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(p, c);
        let pivot = a[c][c].clone();
        for j in 0..2 * n {
            a[c][j] = a[c][j].clone() / pivot.clone();
        }
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let factor = a[i][c].clone();
            for j in 0..2 * n {
                let delta = factor.clone() * a[c][j].clone();
                a[i][j] = a[i][j].clone() - delta;
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Scales a rational vector to the primitive integer vector on the same line
/// whose first nonzero entry is positive. Returns `None` for the zero vector.
pub fn primitive_direction<T>(v: &[Ratio<T>]) -> Option<Vec<T>>
where
    T: Clone + Integer + Signed,
{
    let first = v.iter().position(|x| !x.is_zero())?;
    let lcm = v.iter().fold(T::one(), |acc, x| acc.lcm(x.denom()));
    let mut ints: Vec<T> = v
        .iter()
        .map(|x| x.numer().clone() * (lcm.clone() / x.denom().clone()))
        .collect();
    let g = ints.iter().fold(T::zero(), |acc, x| acc.gcd(x));
    for x in ints.iter_mut() {
        *x = x.clone() / g.clone();
    }
    if ints[first].is_negative() {
        for x in ints.iter_mut() {
            *x = -x.clone();
        }
    }
    Some(ints)
}
