//! Independent reference computations for integration tests. Nothing here
//! calls into the library's arithmetic kernels: matrices are read out as
//! plain dense rows and every result is recomputed from scratch.

#![allow(dead_code, clippy::needless_range_loop)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use flowcert::{IntMatrix, Label, PolyMatrix};

pub type Dense = Vec<Vec<BigInt>>;

pub fn dense(m: &IntMatrix) -> Dense {
    m.canonical().rows()
}

/// Rows and columns in the given label orders.
pub fn dense_in(m: &IntMatrix, rows: &[Label], cols: &[Label]) -> Dense {
    rows.iter()
        .map(|r| cols.iter().map(|c| m.at(r, c).expect("label present").clone()).collect())
        .collect()
}

pub fn sorted_labels(m: &IntMatrix) -> Vec<Label> {
    let mut v = m.row_labels().to_vec();
    v.sort();
    v
}

pub fn from_i64(rows: &[Vec<i64>]) -> Dense {
    rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

pub fn identity(n: usize) -> Dense {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn mul(a: &Dense, b: &Dense) -> Dense {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

pub fn sub(a: &Dense, b: &Dense) -> Dense {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.iter().zip(y).map(|(p, q)| p - q).collect())
        .collect()
}

pub fn transpose(a: &Dense) -> Dense {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn identity_minus(a: &Dense) -> Dense {
    sub(&identity(a.len()), a)
}

/// Gaussian elimination over the rationals.
pub fn det(a: &Dense) -> BigInt {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut sign = BigRational::one();
    let mut acc = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return BigInt::zero();
        };
        if p != c {
            m.swap(p, c);
            sign = -sign;
        }
        let pivot = m[c][c].clone();
        acc *= &pivot;
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] / &pivot;
            for k in c..n {
                let v = &f * &m[c][k];
                m[r][k] -= v;
            }
        }
    }
    let d = sign * acc;
    assert!(d.is_integer());
    d.to_integer()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    go(0, n, k, &mut cur, &mut out);
    out
}

/// gcd of all `k x k` minors.
pub fn determinantal_divisor(a: &Dense, k: usize) -> BigInt {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut g = BigInt::zero();
    for rs in subsets(rows, k) {
        for cs in subsets(cols, k) {
            let minor: Dense = rs.iter().map(|&i| cs.iter().map(|&j| a[i][j].clone()).collect()).collect();
            g = g.gcd(&det(&minor));
            if g.is_one() {
                return g;
            }
        }
    }
    g
}

/// Nonzero invariant factors `d_k / d_(k-1)`, including ones.
pub fn invariant_factors(a: &Dense) -> Vec<BigInt> {
    let k_max = a.len().min(a.first().map_or(0, Vec::len));
    let mut out = Vec::new();
    let mut prev = BigInt::one();
    for k in 1..=k_max {
        let d = determinantal_divisor(a, k);
        if d.is_zero() {
            break;
        }
        out.push(&d / &prev);
        prev = d;
    }
    out
}

/// Diagonal from plain elementary row and column operations: clear the
/// first row and column with the smallest entry as pivot, fix divisibility,
/// recurse.
pub fn elementary_diagonal(a: &Dense) -> Vec<BigInt> {
    let mut m = a.clone();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return diag;
            };
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            let p = m[t][t].clone();
            let mut done = true;
            for i in t + 1..rows {
                let q = m[i][t].div_floor(&p);
                for j in t..cols {
                    let v = &q * &m[t][j];
                    m[i][j] -= v;
                }
                done &= m[i][t].is_zero();
            }
            for j in t + 1..cols {
                let q = m[t][j].div_floor(&p);
                for i in t..rows {
                    let v = &q * &m[i][t];
                    m[i][j] -= v;
                }
                done &= m[t][j].is_zero();
            }
            if !done {
                continue;
            }
            if let Some(i) = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !m[i][j].is_multiple_of(&p))) {
                for j in t..cols {
                    let v = m[i][j].clone();
                    m[t][j] += v;
                }
                continue;
            }
            diag.push(p.abs());
            break;
        }
    }
    diag
}

/// `(torsion, free_rank)` of `Z^rows / image(a)`.
pub fn cokernel(a: &Dense) -> (Vec<BigInt>, usize) {
    let f = invariant_factors(a);
    let torsion = f.iter().filter(|d| !d.is_one()).cloned().collect();
    (torsion, a.len() - f.len())
}

/// Entrywise evaluation of a polynomial matrix at `x`, rows and columns in
/// the given orders.
pub fn eval_poly(m: &PolyMatrix, rows: &[Label], cols: &[Label], x: i64) -> Dense {
    let x = BigInt::from(x);
    rows.iter()
        .map(|r| {
            cols.iter()
                .map(|c| {
                    let p = m.at(r, c).expect("label present");
                    p.coeffs().iter().rev().fold(BigInt::zero(), |acc, k| acc * &x + k)
                })
                .collect()
        })
        .collect()
}

/// `reach[i][j]`: some power `k >= 1` has a positive `(i, j)` entry.
pub fn reach_by_powers(a: &Dense) -> Vec<Vec<bool>> {
    let n = a.len();
    let b: Vec<Vec<bool>> = a.iter().map(|r| r.iter().map(|x| x.is_positive()).collect()).collect();
    let mut reach = b.clone();
    let mut pow = b.clone();
    for _ in 1..n {
        let next: Vec<Vec<bool>> = (0..n)
            .map(|i| (0..n).map(|j| (0..n).any(|k| pow[i][k] && b[k][j])).collect())
            .collect();
        for i in 0..n {
            for j in 0..n {
                reach[i][j] |= next[i][j];
            }
        }
        pow = next;
    }
    reach
}

/// Cokernel functional of an essentially cyclic matrix by fixed-point
/// iteration of `c_j = sum_i c_i A(i, j)` off the cycle, starting from one on
/// the cycle and zero elsewhere.
pub fn cycle_functional(a: &Dense) -> (Vec<bool>, Vec<BigInt>) {
    let n = a.len();
    let reach = reach_by_powers(a);
    let on_cycle: Vec<bool> = (0..n).map(|i| reach[i][i]).collect();
    let mut c: Vec<BigInt> = on_cycle.iter().map(|&b| if b { BigInt::one() } else { BigInt::zero() }).collect();
    for _ in 0..=n {
        for j in 0..n {
            if on_cycle[j] {
                continue;
            }
            c[j] = (0..n).map(|i| &c[i] * &a[i][j]).sum();
        }
    }
    (on_cycle, c)
}
