//! The polynomial shift equivalence built from a shift-equivalence witness:
//!
//! ```text
//! [[I, 0], [t^l S, I]] [[I, -R], [0, I]] [[I - tA, 0], [0, I]] U = [[I, 0], [0, I - tB]]
//! U = [[W, R], [-t^l S, I - tB]],  W = I + tA + ... + (tA)^(l-1)
//! ```
//!
//! with explicit inverse `V` and `det U = 1`. Indices of `A` and `B` are
//! kept apart by the prefixes `a:` and `b:`.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::components::{validate_partitioned, PartitionedMatrix};
use crate::det::{det_int, det_poly};
use crate::error::{Error, Result};
use crate::label::Label;
use crate::matrix::{IntMatrix, Matrix, PolyMatrix, Scalar};
use crate::poly::Poly;
use crate::poset::{Partition, Poset};
use crate::shift::{verify_se, PartitionedSe, ShiftEquivalence};

pub const A_PREFIX: &str = "a:";
pub const B_PREFIX: &str = "b:";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PseCertificate {
    pub lower: PolyMatrix,
    pub upper: PolyMatrix,
    pub diag_a: PolyMatrix,
    pub intertwiner: PolyMatrix,
    pub inverse: PolyMatrix,
    pub rhs: PolyMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poset: Option<Poset>,
    /// Combined labels to poset elements.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Partition>,
    pub a_labels: Vec<Label>,
    pub b_labels: Vec<Label>,
    pub lag: usize,
    /// `i` in `(t^(l-i) S, t^i R)`; 0 is the standard equation.
    #[serde(default)]
    pub variant: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseReport {
    /// `lower * upper * diag_a * intertwiner = rhs`.
    pub equation: bool,
    pub uv_identity: bool,
    pub vu_identity: bool,
    pub det_one: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partitioned: Option<bool>,
    pub pass: bool,
}

fn prefixed(labels: &[Label], prefix: &str) -> Vec<Label> {
    labels.iter().map(|l| l.prefixed(prefix)).collect()
}

fn t_times(m: &IntMatrix, k: usize) -> PolyMatrix {
    m.map(|x| Poly::monomial(x.clone(), k))
}

/// `I + tM + ... + (tM)^(l-1)` by Horner accumulation.
fn geometric(m: &IntMatrix, lag: usize) -> Result<PolyMatrix> {
    let id = PolyMatrix::identity(m.row_labels().to_vec());
    let tm = t_times(m, 1);
    let mut w = id.clone();
    for _ in 1..lag {
        w = id.add(&tm.mat_mul(&w)?)?;
    }
    Ok(w)
}

fn zero(rows: &[Label], cols: &[Label]) -> PolyMatrix {
    PolyMatrix::zeros(rows.to_vec(), cols.to_vec())
}

/// Assemble the certificate for `se` using variant `i` (`0 <= i <= lag`).
pub fn build_pse(se: &ShiftEquivalence, variant: usize) -> Result<PseCertificate> {
    if !verify_se(se)?.pass {
        return Err(Error::InvalidWitness("shift equivalence equations fail".into()));
    }
    if variant > se.lag {
        return Err(Error::Malformed(format!(
            "variant {variant} exceeds the lag {}",
            se.lag
        )));
    }
    let a = se.a.canonical().aligned_square()?;
    let b = se.b.canonical().aligned_square()?;
    let la = prefixed(a.row_labels(), A_PREFIX);
    let lb = prefixed(b.row_labels(), B_PREFIX);
    let relabel = |m: &IntMatrix, rp: &str, cp: &str| m.map_labels(|l| l.prefixed(rp), |l| l.prefixed(cp));
    let a = relabel(&a, A_PREFIX, A_PREFIX)?;
    let b = relabel(&b, B_PREFIX, B_PREFIX)?;
    let r = relabel(&se.r, A_PREFIX, B_PREFIX)?;
    let s = relabel(&se.s, B_PREFIX, A_PREFIX)?;

    let ia = PolyMatrix::identity(la.clone());
    let ib = PolyMatrix::identity(lb.clone());
    let za_b = zero(&la, &lb);
    let zb_a = zero(&lb, &la);
    let ts = t_times(&s, se.lag - variant);
    let tr = t_times(&r, variant);
    let i_ta = ia.sub(&t_times(&a, 1))?;
    let i_tb = ib.sub(&t_times(&b, 1))?;

    let lower = Matrix::block2x2(&ia, &za_b, &ts, &ib)?;
    let upper = Matrix::block2x2(&ia, &tr.neg(), &zb_a, &ib)?;
    let diag_a = Matrix::block2x2(&i_ta, &za_b, &zb_a, &ib)?;
    let intertwiner = Matrix::block2x2(&geometric(&a, se.lag)?, &tr, &ts.neg(), &i_tb)?;
    let rhs = Matrix::block2x2(&ia, &za_b, &zb_a, &i_tb)?;
    let inverse = Matrix::block2x2(&i_ta, &tr.neg(), &ts, &geometric(&b, se.lag)?)?;
    Ok(PseCertificate {
        lower,
        upper,
        diag_a,
        intertwiner,
        inverse,
        rhs,
        poset: None,
        partition: None,
        a_labels: la,
        b_labels: lb,
        lag: se.lag,
        variant,
    })
}

/// Combined partition `a:i -> block of i`, `b:j -> block of j`.
pub fn combined_partition(a: &Partition, b: &Partition) -> Result<Partition> {
    a.map_labels(|l| l.prefixed(A_PREFIX))
        .merged(&b.map_labels(|l| l.prefixed(B_PREFIX)))
}

pub fn build_partitioned_pse(pse: &PartitionedSe, variant: usize) -> Result<PseCertificate> {
    let mut cert = build_pse(&pse.se, variant)?;
    cert.poset = Some(pse.poset.clone());
    cert.partition = Some(combined_partition(&pse.a_partition, &pse.b_partition)?);
    for (name, m) in cert.matrices() {
        let part = cert.partition.as_ref().expect("set");
        let v = validate_partitioned(m, &pse.poset, part, part)?;
        if !v.valid {
            return Err(Error::Internal(format!(
                "{name} is not partitioned: {:?}",
                v.violations
            )));
        }
    }
    Ok(cert)
}

impl PseCertificate {
    pub fn matrices(&self) -> [(&'static str, &PolyMatrix); 6] {
        [
            ("lower", &self.lower),
            ("upper", &self.upper),
            ("diag_a", &self.diag_a),
            ("intertwiner", &self.intertwiner),
            ("inverse", &self.inverse),
            ("rhs", &self.rhs),
        ]
    }

    fn map_matrices(&self, f: impl Fn(&PolyMatrix) -> Result<PolyMatrix>) -> Result<Self> {
        Ok(PseCertificate {
            lower: f(&self.lower)?,
            upper: f(&self.upper)?,
            diag_a: f(&self.diag_a)?,
            intertwiner: f(&self.intertwiner)?,
            inverse: f(&self.inverse)?,
            rhs: f(&self.rhs)?,
            ..self.clone()
        })
    }

    pub fn partitioned(&self, m: &PolyMatrix) -> Result<Option<PartitionedMatrix<Poly>>> {
        match (&self.poset, &self.partition) {
            (Some(poset), Some(part)) => Ok(Some(PartitionedMatrix::square(
                m.clone(),
                poset.clone(),
                part.clone(),
            )?)),
            _ => Ok(None),
        }
    }
}

fn is_identity<T: Scalar>(m: &Matrix<T>) -> bool {
    m.is_square() && *m == Matrix::identity(m.row_labels().to_vec())
}

/// Check the five-matrix equation, `UV = VU = I` and `det U = 1`, plus
/// partition compatibility when the certificate carries one. Nothing from
/// construction is trusted.
pub fn verify_pse(cert: &PseCertificate) -> Result<PseReport> {
    let product = |ms: &[&PolyMatrix]| -> Result<PolyMatrix> {
        let mut acc = ms[0].clone();
        for m in &ms[1..] {
            acc = acc.mat_mul(m)?;
        }
        Ok(acc)
    };
    let equation = product(&[&cert.lower, &cert.upper, &cert.diag_a, &cert.intertwiner])? == cert.rhs;
    let uv_identity = is_identity(&cert.intertwiner.mat_mul(&cert.inverse)?);
    let vu_identity = is_identity(&cert.inverse.mat_mul(&cert.intertwiner)?);
    let det_one = det_poly(&cert.intertwiner)? == Poly::one();
    let partitioned = match (&cert.poset, &cert.partition) {
        (Some(poset), Some(part)) => {
            let mut ok = true;
            for (_, m) in cert.matrices() {
                ok &= validate_partitioned(m, poset, part, part)?.valid;
            }
            Some(ok)
        }
        (None, None) => None,
        _ => Some(false),
    };
    Ok(PseReport {
        pass: equation && uv_identity && vu_identity && det_one && partitioned.unwrap_or(true),
        equation,
        uv_identity,
        vu_identity,
        det_one,
        partitioned,
    })
}

/// All six matrices cut down to the `{p, p}` block.
pub fn restrict_block(cert: &PseCertificate, p: &Label) -> Result<PseCertificate> {
    let (Some(poset), Some(part)) = (&cert.poset, &cert.partition) else {
        return Err(Error::Precondition("certificate carries no partition".into()));
    };
    if !poset.contains(p) {
        return Err(Error::UnknownElement(p.clone()));
    }
    let block = part.block(p);
    let mut out = cert.map_matrices(|m| m.principal(&block))?;
    out.poset = Some(Poset::antichain(vec![p.clone()])?);
    out.partition = Some(Partition::new(
        block.iter().map(|l| (l.clone(), p.clone())).collect(),
    ));
    out.a_labels.retain(|l| block.contains(l));
    out.b_labels.retain(|l| block.contains(l));
    Ok(out)
}

/// Integer matrices of the equation at `t = 1`:
/// `l1 * l2 * d * u1 = rhs`, with `v1` the inverse of `u1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlEquivalenceData {
    pub l1: IntMatrix,
    pub l2: IntMatrix,
    pub d: IntMatrix,
    pub u1: IntMatrix,
    pub v1: IntMatrix,
    pub rhs: IntMatrix,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poset: Option<Poset>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Partition>,
    pub a_labels: Vec<Label>,
    pub b_labels: Vec<Label>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlReport {
    pub equation: bool,
    pub inverse: bool,
    pub det_u1_one: bool,
    pub det_l1_one: bool,
    pub det_l2_one: bool,
    pub pass: bool,
}

pub fn specialize_at_one(cert: &PseCertificate) -> SlEquivalenceData {
    let one = BigInt::one();
    SlEquivalenceData {
        l1: cert.lower.eval(&one),
        l2: cert.upper.eval(&one),
        d: cert.diag_a.eval(&one),
        u1: cert.intertwiner.eval(&one),
        v1: cert.inverse.eval(&one),
        rhs: cert.rhs.eval(&one),
        poset: cert.poset.clone(),
        partition: cert.partition.clone(),
        a_labels: cert.a_labels.clone(),
        b_labels: cert.b_labels.clone(),
    }
}

impl SlEquivalenceData {
    pub fn verify(&self) -> Result<SlReport> {
        let lhs = self.l1.mat_mul(&self.l2)?.mat_mul(&self.d)?.mat_mul(&self.u1)?;
        let equation = lhs == self.rhs;
        let inverse = is_identity(&self.u1.mat_mul(&self.v1)?);
        let one = BigInt::one();
        let det_u1_one = det_int(&self.u1)? == one;
        let det_l1_one = det_int(&self.l1)? == one;
        let det_l2_one = det_int(&self.l2)? == one;
        Ok(SlReport {
            pass: equation && inverse && det_u1_one && det_l1_one && det_l2_one,
            equation,
            inverse,
            det_u1_one,
            det_l1_one,
            det_l2_one,
        })
    }

    pub fn partitioned(&self, m: &IntMatrix) -> Result<Option<PartitionedMatrix<BigInt>>> {
        match (&self.poset, &self.partition) {
            (Some(poset), Some(part)) => Ok(Some(PartitionedMatrix::square(
                m.clone(),
                poset.clone(),
                part.clone(),
            )?)),
            _ => Ok(None),
        }
    }

    /// `(L1 L2)^-1 = L2^-1 L1^-1`, both factors inverted in closed form.
    pub fn left_inverse(&self) -> Result<IntMatrix> {
        let l2_inv = unipotent_inverse(&self.l2)?;
        let l1_inv = unipotent_inverse(&self.l1)?;
        l2_inv.mat_mul(&l1_inv)
    }
}

/// Inverse of `I + N` with `N` supported off the diagonal in one 2x2 block
/// position, so that `N^2 = 0`: it is `I - N`.
fn unipotent_inverse(m: &IntMatrix) -> Result<IntMatrix> {
    let id = IntMatrix::identity(m.row_labels().to_vec());
    let n = m.sub(&id)?;
    if !n.mat_mul(&n)?.is_zero_matrix() {
        return Err(Error::Internal("factor is not elementary unipotent".into()));
    }
    id.sub(&n)
}
