//! Exact determinants.
//!
//! Integer matrices use fraction-free (Bareiss) elimination. Polynomial
//! matrices up to side [`COFACTOR_LIMIT`] use Laplace expansion memoized over
//! column subsets; larger ones are evaluated at enough integer points and
//! interpolated.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{IntMatrix, PolyMatrix};
use crate::parallel;
use crate::poly::Poly;

pub const COFACTOR_LIMIT: usize = 12;

pub trait Determinant {
    type Output;
    fn det(&self) -> Result<Self::Output>;
}

impl Determinant for IntMatrix {
    type Output = BigInt;
    fn det(&self) -> Result<BigInt> {
        det_int(self)
    }
}

impl Determinant for PolyMatrix {
    type Output = Poly;
    fn det(&self) -> Result<Poly> {
        det_poly(self)
    }
}

pub fn det_int(m: &IntMatrix) -> Result<BigInt> {
    let m = m.aligned_square()?;
    Ok(bareiss(m.rows()))
}

fn bareiss(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                // Exact by Sylvester's identity.
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub fn det_poly(m: &PolyMatrix) -> Result<Poly> {
    let m = m.aligned_square()?;
    if m.nrows() <= COFACTOR_LIMIT {
        Ok(det_cofactor(&m))
    } else {
        det_interpolate(&m)
    }
}

/// Laplace expansion along successive rows, sharing minors across branches.
pub fn det_cofactor(m: &PolyMatrix) -> Poly {
    let n = m.nrows();
    assert!(n < 31, "cofactor expansion limited to small matrices");
    if n == 0 {
        return Poly::one();
    }
    // minors[mask] = det of the last popcount(mask) rows on columns `mask`.
    let mut minors: Vec<Poly> = vec![Poly::zero(); 1 << n];
    minors[0] = Poly::one();
    for size in 1..=n {
        let row = n - size;
        let masks: Vec<u32> = (0u32..(1 << n)).filter(|m| m.count_ones() as usize == size).collect();
        let prev = &minors;
        let level = parallel::map_if(n >= 8, masks, |mask| {
            let mut acc = Poly::zero();
            let mut pos = 0usize;
            for j in 0..n {
                if mask & (1 << j) == 0 {
                    continue;
                }
                let a = m.get(row, j);
                if !a.is_zero() {
                    let sub = &prev[(mask & !(1 << j)) as usize];
                    if !sub.is_zero() {
                        let term = a * sub;
                        acc = if pos.is_multiple_of(2) { &acc + &term } else { &acc - &term };
                    }
                }
                pos += 1;
            }
            (mask, acc)
        });
        for (mask, v) in level {
            minors[mask as usize] = v;
        }
    }
    minors[(1usize << n) - 1].clone()
}

/// Evaluate at `0..=D` (D a degree bound) and interpolate exactly.
pub fn det_interpolate(m: &PolyMatrix) -> Result<Poly> {
    let m = m.aligned_square()?;
    let n = m.nrows();
    let row_bound: usize = (0..n)
        .map(|i| m.row(i).iter().filter_map(Poly::degree).max().unwrap_or(0))
        .sum();
    let col_bound: usize = (0..n)
        .map(|j| (0..n).filter_map(|i| m.get(i, j).degree()).max().unwrap_or(0))
        .sum();
    let bound = row_bound.min(col_bound);
    let points: Vec<BigInt> = (0..=bound).map(BigInt::from).collect();
    let values = parallel::map_if(true, points.clone(), |x| bareiss(m.eval(&x).rows()));
    interpolate(&points, &values)
}

/// Newton interpolation over the rationals, asserting an integral result.
fn interpolate(xs: &[BigInt], ys: &[BigInt]) -> Result<Poly> {
    let n = xs.len();
    let mut dd: Vec<BigRational> = ys.iter().map(|y| BigRational::from_integer(y.clone())).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = BigRational::from_integer(&xs[i] - &xs[i - level]);
            dd[i] = num / den;
        }
    }
    // Expand the Newton form by Horner from the highest divided difference.
    let mut coeffs: Vec<BigRational> = vec![BigRational::zero(); n];
    for k in (0..n).rev() {
        // coeffs <- coeffs * (t - x_k) + dd[k]
        let mut next = vec![BigRational::zero(); n];
        for (i, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i + 1 < n {
                next[i + 1] += c;
            }
            next[i] -= c * BigRational::from_integer(xs[k].clone());
        }
        next[0] += &dd[k];
        coeffs = next;
    }
    let mut out = Vec::with_capacity(n);
    for c in coeffs {
        if !c.denom().is_one() {
            let (q, r) = c.numer().div_rem(c.denom());
            if !r.is_zero() {
                return Err(Error::Internal(format!(
                    "interpolated determinant has non-integral coefficient {c}"
                )));
            }
            out.push(q);
        } else {
            out.push(c.to_integer());
        }
    }
    Ok(Poly::from_coeffs(out))
}
