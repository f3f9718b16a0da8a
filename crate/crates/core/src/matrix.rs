//! Dense matrices over `Z` and `Z[t]` with labeled index sets.
//!
//! Row and column labels are stored in a fixed order, but equality and every
//! operation treat them as sets: a product only requires the column label set
//! of the left factor to equal the row label set of the right factor.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::label::{default_labels, Label};
use crate::poly::Poly;

/// Coefficient domain of a matrix.
pub trait Scalar: Clone + PartialEq + fmt::Debug + Zero + One + Send + Sync + 'static {
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

pub(crate) fn bigint_to_json(x: &BigInt) -> Value {
    let n: serde_json::Number = x.to_string().parse().expect("integer literal is a JSON number");
    Value::Number(n)
}

pub(crate) fn bigint_from_json(v: &Value) -> Result<BigInt> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        other => return Err(Error::Json(format!("expected integer, found {other}"))),
    };
    text.parse::<BigInt>()
        .map_err(|_| Error::Json(format!("expected integer, found {text}")))
}

impl Scalar for BigInt {
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn to_json(&self) -> Value {
        bigint_to_json(self)
    }
    fn from_json(v: &Value) -> Result<Self> {
        bigint_from_json(v)
    }
}

impl std::ops::Add for Poly {
    type Output = Poly;
    fn add(self, rhs: Poly) -> Poly {
        &self + &rhs
    }
}

impl std::ops::Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly::zero()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::one()
    }
}

impl Scalar for Poly {
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn to_json(&self) -> Value {
        Value::Array(self.coeffs().iter().map(bigint_to_json).collect())
    }
    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Array(cs) => Ok(Poly::from_coeffs(
                cs.iter().map(bigint_from_json).collect::<Result<_>>()?,
            )),
            // A bare integer is accepted as a constant polynomial.
            Value::Number(_) | Value::String(_) => Ok(Poly::constant(bigint_from_json(v)?)),
            other => Err(Error::Json(format!("expected coefficient array, found {other}"))),
        }
    }
}

#[derive(Clone)]
pub struct Matrix<T> {
    row_labels: Vec<Label>,
    col_labels: Vec<Label>,
    entries: Vec<T>,
}

pub type IntMatrix = Matrix<BigInt>;
pub type PolyMatrix = Matrix<Poly>;

fn check_distinct(labels: &[Label]) -> Result<()> {
    let mut seen = BTreeSet::new();
    let dups: Vec<Label> = labels
        .iter()
        .filter(|l| !seen.insert((*l).clone()))
        .cloned()
        .collect();
    if dups.is_empty() {
        Ok(())
    } else {
        Err(Error::LabelCollision(dups))
    }
}

fn index_of(labels: &[Label]) -> HashMap<&Label, usize> {
    labels.iter().enumerate().map(|(i, l)| (l, i)).collect()
}

/// Same elements, ignoring order.
pub fn same_label_set(a: &[Label], b: &[Label]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a == b {
        return true;
    }
    let sa: BTreeSet<&Label> = a.iter().collect();
    b.iter().all(|l| sa.contains(l))
}

fn sorted_labels(labels: &[Label]) -> Vec<Label> {
    let mut v = labels.to_vec();
    v.sort();
    v
}

impl<T: Scalar> Matrix<T> {
    pub fn new(row_labels: Vec<Label>, col_labels: Vec<Label>, entries: Vec<T>) -> Result<Self> {
        check_distinct(&row_labels)?;
        check_distinct(&col_labels)?;
        if entries.len() != row_labels.len() * col_labels.len() {
            return Err(Error::Malformed(format!(
                "{} entries for a {}x{} matrix",
                entries.len(),
                row_labels.len(),
                col_labels.len()
            )));
        }
        Ok(Matrix {
            row_labels,
            col_labels,
            entries,
        })
    }

    pub fn from_rows_labeled(
        row_labels: Vec<Label>,
        col_labels: Vec<Label>,
        rows: Vec<Vec<T>>,
    ) -> Result<Self> {
        if rows.len() != row_labels.len() {
            return Err(Error::Malformed(format!(
                "{} rows but {} row labels",
                rows.len(),
                row_labels.len()
            )));
        }
        let mut entries = Vec::with_capacity(row_labels.len() * col_labels.len());
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != col_labels.len() {
                return Err(Error::Malformed(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    col_labels.len()
                )));
            }
            entries.extend(row);
        }
        Matrix::new(row_labels, col_labels, entries)
    }

    /// Rows with default labels `"1".."m"` and `"1".."n"`. An empty row list
    /// gives the 0x0 matrix.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        Matrix::from_rows_labeled(default_labels(m), default_labels(n), rows)
    }

    pub fn zeros(row_labels: Vec<Label>, col_labels: Vec<Label>) -> Self {
        let n = row_labels.len() * col_labels.len();
        Matrix {
            row_labels,
            col_labels,
            entries: vec![T::zero(); n],
        }
    }

    pub fn identity(labels: Vec<Label>) -> Self {
        let mut m = Matrix::zeros(labels.clone(), labels);
        for i in 0..m.nrows() {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn ncols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn row_labels(&self) -> &[Label] {
        &self.row_labels
    }

    pub fn col_labels(&self) -> &[Label] {
        &self.col_labels
    }

    /// Entry by storage position.
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.ncols() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        let n = self.ncols();
        self.entries[i * n + j] = v;
    }

    /// Entry by label.
    pub fn at(&self, row: &Label, col: &Label) -> Option<&T> {
        let i = self.row_labels.iter().position(|l| l == row)?;
        let j = self.col_labels.iter().position(|l| l == col)?;
        Some(self.get(i, j))
    }

    pub fn row(&self, i: usize) -> &[T] {
        let n = self.ncols();
        &self.entries[i * n..(i + 1) * n]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..self.nrows()).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Square in the labeled sense: the row and column label sets coincide.
    pub fn is_square(&self) -> bool {
        same_label_set(&self.row_labels, &self.col_labels)
    }

    pub fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.row_labels.clone(),
                cols: self.col_labels.clone(),
            })
        }
    }

    /// Reorder rows and columns. Both orders must be permutations of the
    /// existing label sets.
    pub fn reordered(&self, rows: &[Label], cols: &[Label]) -> Result<Self> {
        if rows == self.row_labels.as_slice() && cols == self.col_labels.as_slice() {
            return Ok(self.clone());
        }
        if !same_label_set(rows, &self.row_labels) {
            return Err(Error::LabelMismatch {
                context: "reorder rows",
                left: self.row_labels.clone(),
                right: rows.to_vec(),
            });
        }
        if !same_label_set(cols, &self.col_labels) {
            return Err(Error::LabelMismatch {
                context: "reorder cols",
                left: self.col_labels.clone(),
                right: cols.to_vec(),
            });
        }
        self.restrict(rows, cols)
    }

    /// Submatrix on the given rows and columns, in the given order.
    pub fn restrict(&self, rows: &[Label], cols: &[Label]) -> Result<Self> {
        let ri = index_of(&self.row_labels);
        let ci = index_of(&self.col_labels);
        let rpos = rows
            .iter()
            .map(|l| ri.get(l).copied().ok_or_else(|| Error::UnknownElement(l.clone())))
            .collect::<Result<Vec<_>>>()?;
        let cpos = cols
            .iter()
            .map(|l| ci.get(l).copied().ok_or_else(|| Error::UnknownElement(l.clone())))
            .collect::<Result<Vec<_>>>()?;
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &i in &rpos {
            for &j in &cpos {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix::new(rows.to_vec(), cols.to_vec(), entries)
    }

    /// Principal submatrix on `labels`.
    pub fn principal(&self, labels: &[Label]) -> Result<Self> {
        self.restrict(labels, labels)
    }

    /// Square matrix whose column order equals its row order.
    pub fn aligned_square(&self) -> Result<Self> {
        self.require_square()?;
        let rows = self.row_labels.clone();
        self.reordered(&rows, &rows)
    }

    /// Rows and columns sorted canonically.
    pub fn canonical(&self) -> Self {
        let r = sorted_labels(&self.row_labels);
        let c = sorted_labels(&self.col_labels);
        self.reordered(&r, &c).expect("sorted labels are a permutation")
    }

    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        if !same_label_set(&self.col_labels, &other.row_labels) {
            return Err(Error::LabelMismatch {
                context: "matrix product",
                left: self.col_labels.clone(),
                right: other.row_labels.clone(),
            });
        }
        let other = other.reordered(&self.col_labels, &other.col_labels)?;
        let (m, k, n) = (self.nrows(), self.ncols(), other.ncols());
        let mut entries = vec![T::zero(); m * n];
        for i in 0..m {
            let out = &mut entries[i * n..(i + 1) * n];
            for l in 0..k {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for (j, slot) in out.iter_mut().enumerate() {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        *slot = slot.add_ref(&a.mul_ref(b));
                    }
                }
            }
        }
        Ok(Matrix {
            row_labels: self.row_labels.clone(),
            col_labels: other.col_labels.clone(),
            entries,
        })
    }

    fn zip_with(&self, other: &Self, context: &'static str, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if !same_label_set(&self.row_labels, &other.row_labels) {
            return Err(Error::LabelMismatch {
                context,
                left: self.row_labels.clone(),
                right: other.row_labels.clone(),
            });
        }
        if !same_label_set(&self.col_labels, &other.col_labels) {
            return Err(Error::LabelMismatch {
                context,
                left: self.col_labels.clone(),
                right: other.col_labels.clone(),
            });
        }
        let other = other.reordered(&self.row_labels, &self.col_labels)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| f(a, b))
            .collect();
        Ok(Matrix {
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
            entries,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "matrix sum", T::add_ref)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, "matrix difference", T::sub_ref)
    }

    pub fn neg(&self) -> Self {
        self.map(T::neg_ref)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| c.mul_ref(x))
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            row_labels: self.row_labels.clone(),
            col_labels: self.col_labels.clone(),
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let (m, n) = (self.nrows(), self.ncols());
        let mut entries = Vec::with_capacity(m * n);
        for j in 0..n {
            for i in 0..m {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix {
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
            entries,
        }
    }

    /// `k`-th power of a square matrix; `k = 0` gives the identity.
    pub fn pow(&self, k: usize) -> Result<Self> {
        let base = self.aligned_square()?;
        let mut acc = Matrix::identity(base.row_labels.clone());
        for _ in 0..k {
            acc = acc.mat_mul(&base)?;
        }
        Ok(acc)
    }

    pub fn with_labels(&self, row_labels: Vec<Label>, col_labels: Vec<Label>) -> Result<Self> {
        Matrix::new(row_labels, col_labels, self.entries.clone())
    }

    pub fn map_labels(&self, rows: impl Fn(&Label) -> Label, cols: impl Fn(&Label) -> Label) -> Result<Self> {
        let r = self.row_labels.iter().map(rows).collect();
        let c = self.col_labels.iter().map(cols).collect();
        self.with_labels(r, c)
    }

    /// Assemble `[[tl, tr], [bl, br]]`. Row labels of the left blocks must
    /// agree with the right blocks, column labels of the top blocks with the
    /// bottom blocks; the top and bottom label sets must be disjoint.
    pub fn block2x2(tl: &Self, tr: &Self, bl: &Self, br: &Self) -> Result<Self> {
        let tr = tr.reordered(&tl.row_labels, &br.col_labels)?;
        let bl = bl.reordered(&br.row_labels, &tl.col_labels)?;
        let mut row_labels = tl.row_labels.clone();
        row_labels.extend(br.row_labels.iter().cloned());
        let mut col_labels = tl.col_labels.clone();
        col_labels.extend(br.col_labels.iter().cloned());
        let mut entries = Vec::with_capacity(row_labels.len() * col_labels.len());
        for i in 0..tl.nrows() {
            entries.extend(tl.row(i).iter().cloned());
            entries.extend(tr.row(i).iter().cloned());
        }
        for i in 0..br.nrows() {
            entries.extend(bl.row(i).iter().cloned());
            entries.extend(br.row(i).iter().cloned());
        }
        Matrix::new(row_labels, col_labels, entries)
    }

    /// Enlarge a square matrix by identity rows and columns on `extra`.
    pub fn stabilize(&self, extra: &[Label]) -> Result<Self> {
        let base = self.aligned_square()?;
        let collisions: Vec<Label> = extra
            .iter()
            .filter(|l| base.row_labels.contains(l))
            .cloned()
            .collect();
        if !collisions.is_empty() {
            return Err(Error::LabelCollision(collisions));
        }
        check_distinct(extra)?;
        let zero_tr = Matrix::zeros(base.row_labels.clone(), extra.to_vec());
        let zero_bl = Matrix::zeros(extra.to_vec(), base.row_labels.clone());
        Matrix::block2x2(&base, &zero_tr, &zero_bl, &Matrix::identity(extra.to_vec()))
    }

    /// Column labels of `self` where `other` has row labels, as a slice
    /// check usable before products.
    pub fn composable(&self, other: &Self) -> bool {
        same_label_set(&self.col_labels, &other.row_labels)
    }
}

impl IntMatrix {
    pub fn from_i64_rows(rows: &[&[i64]]) -> Result<Self> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn is_nonnegative(&self) -> bool {
        !self.entries.iter().any(Signed::is_negative)
    }

    pub fn first_negative(&self) -> Option<(Label, Label)> {
        let n = self.ncols();
        self.entries
            .iter()
            .position(Signed::is_negative)
            .map(|k| (self.row_labels[k / n].clone(), self.col_labels[k % n].clone()))
    }

    pub fn to_poly(&self) -> PolyMatrix {
        self.map(|x| Poly::constant(x.clone()))
    }

    /// `I - self` for a square matrix.
    pub fn identity_minus(&self) -> Result<Self> {
        let m = self.aligned_square()?;
        Matrix::identity(m.row_labels.clone()).sub(&m)
    }

    /// `I - t * self` over `Z[t]`.
    pub fn identity_minus_t(&self) -> Result<PolyMatrix> {
        let m = self.aligned_square()?;
        let t_m = m.map(|x| Poly::monomial(x.clone(), 1));
        PolyMatrix::identity(m.row_labels.clone()).sub(&t_m)
    }
}

impl PolyMatrix {
    /// Entrywise evaluation at `t = x`.
    pub fn eval(&self, x: &BigInt) -> IntMatrix {
        self.map(|p| p.eval(x))
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.entries.iter().filter_map(Poly::degree).max()
    }

    /// Multiply every entry by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        self.map(|p| p.shift(k))
    }
}

/// Entrywise exact evaluation at `t = x`.
pub fn poly_eval(m: &PolyMatrix, x: &BigInt) -> IntMatrix {
    m.eval(x)
}

impl<T: Scalar> PartialEq for Matrix<T> {
    fn eq(&self, other: &Self) -> bool {
        if !same_label_set(&self.row_labels, &other.row_labels)
            || !same_label_set(&self.col_labels, &other.col_labels)
        {
            return false;
        }
        match other.reordered(&self.row_labels, &self.col_labels) {
            Ok(o) => o.entries == self.entries,
            Err(_) => false,
        }
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix rows={:?} cols={:?}", self.row_labels, self.col_labels)?;
        for i in 0..self.nrows() {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn to_json_value(&self) -> Value {
        let rows: Vec<Value> = (0..self.nrows())
            .map(|i| Value::Array(self.row(i).iter().map(Scalar::to_json).collect()))
            .collect();
        let mut obj = serde_json::Map::new();
        obj.insert("rows".into(), Value::Array(rows));
        obj.insert("row_labels".into(), serde_json::to_value(&self.row_labels).expect("labels"));
        obj.insert("col_labels".into(), serde_json::to_value(&self.col_labels).expect("labels"));
        Value::Object(obj)
    }

    pub fn from_json_value(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Json("matrix must be an object with a \"rows\" field".into()))?;
        let rows_v = obj
            .get("rows")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Json("matrix is missing \"rows\"".into()))?;
        let rows = rows_v
            .iter()
            .map(|r| {
                r.as_array()
                    .ok_or_else(|| Error::Json("each row must be an array".into()))?
                    .iter()
                    .map(T::from_json)
                    .collect::<Result<Vec<T>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let labels = |key: &str, n: usize| -> Result<Vec<Label>> {
            match obj.get(key) {
                None | Some(Value::Null) => Ok(default_labels(n)),
                Some(v) => Ok(serde_json::from_value(v.clone())?),
            }
        };
        let m = rows.len();
        let row_labels = labels("row_labels", m)?;
        let n = match obj.get("col_labels") {
            Some(Value::Array(a)) => a.len(),
            _ => rows.first().map_or(0, Vec::len),
        };
        let col_labels = labels("col_labels", n)?;
        Matrix::from_rows_labeled(row_labels, col_labels, rows)
    }
}

impl<T: Scalar> Serialize for Matrix<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json_value().serialize(serializer)
    }
}

impl<'de, T: Scalar> Deserialize<'de> for Matrix<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(deserializer)?;
        Matrix::from_json_value(&v).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows).unwrap()
    }

    fn pm(rows: &[&[&[i64]]]) -> PolyMatrix {
        PolyMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|c| Poly::from_i64s(c)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn product_examples() {
        let a = im(&[&[1, 1], &[1, 1]]);
        let b = im(&[&[1], &[1]]);
        assert_eq!(a.mat_mul(&b).unwrap(), im(&[&[2], &[2]]));

        let m = im(&[&[3, -1], &[0, 7]]);
        let id = IntMatrix::identity(m.row_labels().to_vec());
        assert_eq!(id.mat_mul(&m).unwrap(), m);

        let p = pm(&[&[&[1, 1]]]);
        let q = pm(&[&[&[1, -1]]]);
        assert_eq!(p.mat_mul(&q).unwrap(), pm(&[&[&[1, 0, -1]]]));
    }

    #[test]
    fn product_label_mismatch_is_reported() {
        let a = im(&[&[1, 1]]);
        let b = im(&[&[1, 2, 3]]).transpose();
        match a.mat_mul(&b) {
            Err(Error::LabelMismatch { left, right, .. }) => {
                assert_eq!(left.len(), 2);
                assert_eq!(right.len(), 3);
            }
            other => panic!("expected label mismatch, got {other:?}"),
        }
    }

    #[test]
    fn product_respects_labels_not_positions() {
        let a = IntMatrix::from_rows_labeled(
            vec!["x".into()],
            vec!["p".into(), "q".into()],
            vec![vec![1.into(), 10.into()]],
        )
        .unwrap();
        let b = IntMatrix::from_rows_labeled(
            vec!["q".into(), "p".into()],
            vec!["z".into()],
            vec![vec![2.into()], vec![3.into()]],
        )
        .unwrap();
        // 1*3 + 10*2
        assert_eq!(a.mat_mul(&b).unwrap().get(0, 0), &BigInt::from(23));
    }

    #[test]
    fn eval_examples() {
        let m = pm(&[&[&[1, -2]]]);
        assert_eq!(m.eval(&BigInt::one()), im(&[&[-1]]));
        let u = pm(&[&[&[1, 2], &[4]], &[&[0, 0, -1], &[1, -2]]]);
        assert_eq!(u.eval(&BigInt::one()), im(&[&[3, 4], &[-1, -1]]));
    }

    #[test]
    fn stabilize_examples() {
        let m = im(&[&[2]]);
        let s = m.stabilize(&["x".into()]).unwrap();
        assert_eq!(s.rows(), im(&[&[2, 0], &[0, 1]]).rows());
        assert_eq!(m.stabilize(&[]).unwrap(), m);
        let id = IntMatrix::identity(default_labels(3));
        let big = id.stabilize(&["x".into(), "y".into()]).unwrap();
        assert_eq!(big.rows(), IntMatrix::identity(default_labels(5)).rows());
        assert!(matches!(
            m.stabilize(&["1".into()]),
            Err(Error::LabelCollision(_))
        ));
    }

    #[test]
    fn json_round_trip_with_defaults() {
        let v: Value = serde_json::from_str(r#"{"rows": [[1, 2], [3, 123456789012345678901234567890]]}"#).unwrap();
        let m = IntMatrix::from_json_value(&v).unwrap();
        assert_eq!(m.row_labels(), default_labels(2).as_slice());
        let s = serde_json::to_string(&m).unwrap();
        assert!(s.contains("123456789012345678901234567890"));
        let back: IntMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);

        let p: PolyMatrix = serde_json::from_str(r#"{"rows": [[[1, 2], []]]}"#).unwrap();
        assert_eq!(p.get(0, 0), &Poly::from_i64s(&[1, 2]));
        assert!(p.get(0, 1).is_zero());
    }

    #[test]
    fn ragged_rows_rejected() {
        let v: Value = serde_json::from_str(r#"{"rows": [[1, 2], [3]]}"#).unwrap();
        assert!(IntMatrix::from_json_value(&v).is_err());
    }
}
