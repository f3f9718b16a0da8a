//! Smith normal form with unimodular transforms, and cokernels.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::matrix::IntMatrix;

/// `left * input * right = diagonal_matrix()`.
///
/// Rows of `left` and columns of `right` are labeled by the canonically
/// sorted row and column labels of the input; the `k`-th diagonal entry sits
/// at the `k`-th label of each.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub left: IntMatrix,
    /// `min(rows, cols)` entries, nonzero ones first, each dividing the next.
    pub diagonal: Vec<BigInt>,
    pub right: IntMatrix,
}

impl SmithDecomposition {
    pub fn diagonal_matrix(&self) -> IntMatrix {
        let rows = self.left.row_labels().to_vec();
        let cols = self.right.col_labels().to_vec();
        let mut d = IntMatrix::zeros(rows, cols);
        for (k, x) in self.diagonal.iter().enumerate() {
            d.set(k, k, x.clone());
        }
        d
    }

    pub fn rank(&self) -> usize {
        self.diagonal.iter().filter(|d| !d.is_zero()).count()
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    left: Vec<Vec<BigInt>>,
    // Stored transposed: right_t[j] is column j of the right transform.
    right_t: Vec<Vec<BigInt>>,
    row_tag: Vec<usize>,
    col_tag: Vec<usize>,
}

fn identity_rows(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

fn axpy(dst: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    // dst -= q * src
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d -= q * s;
        }
    }
}

impl Work {
    fn m(&self) -> usize {
        self.a.len()
    }

    fn n(&self) -> usize {
        self.right_t.len()
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        self.a.swap(i, k);
        self.left.swap(i, k);
        self.row_tag.swap(i, k);
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        for row in &mut self.a {
            row.swap(j, k);
        }
        self.right_t.swap(j, k);
        self.col_tag.swap(j, k);
    }

    /// row[r] -= q * row[t]
    fn row_sub(&mut self, r: usize, q: &BigInt, t: usize) {
        let src = self.a[t].clone();
        axpy(&mut self.a[r], q, &src);
        let src = self.left[t].clone();
        axpy(&mut self.left[r], q, &src);
    }

    /// col[c] -= q * col[t]
    fn col_sub(&mut self, c: usize, q: &BigInt, t: usize) {
        for row in &mut self.a {
            let v = q * &row[t];
            row[c] -= v;
        }
        let src = self.right_t[t].clone();
        axpy(&mut self.right_t[c], q, &src);
    }

    /// Nonzero entry of least absolute value in the trailing submatrix;
    /// ties go to the canonically first (row, column) label pair.
    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.m() {
            for j in t..self.n() {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                best = match best {
                    None => Some((i, j)),
                    Some((bi, bj)) => {
                        let bx = &self.a[bi][bj];
                        let key = (x.magnitude(), self.row_tag[i], self.col_tag[j]);
                        let bkey = (bx.magnitude(), self.row_tag[bi], self.col_tag[bj]);
                        if key < bkey {
                            Some((i, j))
                        } else {
                            Some((bi, bj))
                        }
                    }
                };
            }
        }
        best
    }

    fn reduce(&mut self) {
        let k = self.m().min(self.n());
        for t in 0..k {
            loop {
                let Some((pi, pj)) = self.min_pivot(t) else {
                    return;
                };
                self.swap_rows(t, pi);
                self.swap_cols(t, pj);
                let p = self.a[t][t].clone();
                let mut clean = true;
                for r in t + 1..self.m() {
                    if self.a[r][t].is_zero() {
                        continue;
                    }
                    let q = self.a[r][t].div_floor(&p);
                    self.row_sub(r, &q, t);
                    clean &= self.a[r][t].is_zero();
                }
                for c in t + 1..self.n() {
                    if self.a[t][c].is_zero() {
                        continue;
                    }
                    let q = self.a[t][c].div_floor(&p);
                    self.col_sub(c, &q, t);
                    clean &= self.a[t][c].is_zero();
                }
                if !clean {
                    continue;
                }
                // Pivot must divide the whole trailing block.
                let bad = (t + 1..self.m()).find(|&r| {
                    (t + 1..self.n()).any(|c| !self.a[r][c].is_multiple_of(&p))
                });
                if let Some(r) = bad {
                    let src = self.a[r].clone();
                    for (d, s) in self.a[t].iter_mut().zip(&src) {
                        *d += s;
                    }
                    let src = self.left[r].clone();
                    for (d, s) in self.left[t].iter_mut().zip(&src) {
                        *d += s;
                    }
                    continue;
                }
                if p.is_negative() {
                    for x in &mut self.a[t] {
                        *x = -&*x;
                    }
                    for x in &mut self.left[t] {
                        *x = -&*x;
                    }
                }
                break;
            }
        }
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let m = m.canonical();
    let rows = m.row_labels().to_vec();
    let cols = m.col_labels().to_vec();
    let mut w = Work {
        a: m.rows(),
        left: identity_rows(rows.len()),
        right_t: identity_rows(cols.len()),
        row_tag: (0..rows.len()).collect(),
        col_tag: (0..cols.len()).collect(),
    };
    w.reduce();
    let k = rows.len().min(cols.len());
    let diagonal = (0..k).map(|i| w.a[i][i].clone()).collect();
    let left = IntMatrix::from_rows_labeled(rows.clone(), rows, w.left).expect("square transform");
    let right = IntMatrix::from_rows_labeled(cols.clone(), cols, w.right_t)
        .expect("square transform")
        .transpose();
    SmithDecomposition {
        left,
        diagonal,
        right,
    }
}

/// A finitely generated abelian group `Z^free_rank + Z/d1 + ... + Z/dk`
/// given by invariant factors `d1 | d2 | ... | dk`, each at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    #[serde(with = "crate::json::big_vec")]
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup {
            torsion: Vec::new(),
            free_rank: 0,
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }

    /// Group order, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        f.write_str(&parts.join(" + "))
    }
}

/// `Z^rows / image(M)`.
pub fn cokernel(m: &IntMatrix) -> AbelianGroup {
    let snf = smith_normal_form(m);
    group_from_diagonal(&snf.diagonal, m.nrows())
}

pub(crate) fn group_from_diagonal(diagonal: &[BigInt], rows: usize) -> AbelianGroup {
    let torsion: Vec<BigInt> = diagonal
        .iter()
        .filter(|d| !d.is_zero() && !d.is_one())
        .cloned()
        .collect();
    let rank = diagonal.iter().filter(|d| !d.is_zero()).count();
    AbelianGroup {
        torsion,
        free_rank: rows - rank,
    }
}
