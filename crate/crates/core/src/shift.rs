//! Shift-equivalence witnesses: verification, composition, reduction to
//! matrices without zero diagonal blocks, and lifting to partitioned form.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::components::{
    canonical_partition, check_m_p_delta, validate_partitioned, PartitionedMatrix, Reachability,
};
use crate::error::{Error, Result};
use crate::label::Label;
use crate::matrix::IntMatrix;
use crate::poset::{Partition, Poset};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Semiring {
    /// Nonnegative integers.
    #[default]
    Zplus,
    Z,
}

/// `A^lag = RS`, `B^lag = SR`, `AR = RB`, `SA = BS`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftEquivalence {
    #[serde(rename = "A")]
    pub a: IntMatrix,
    #[serde(rename = "B")]
    pub b: IntMatrix,
    #[serde(rename = "R")]
    pub r: IntMatrix,
    #[serde(rename = "S")]
    pub s: IntMatrix,
    pub lag: usize,
    #[serde(default)]
    pub semiring: Semiring,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeReport {
    pub a_pow_eq_rs: bool,
    pub b_pow_eq_sr: bool,
    pub ar_eq_rb: bool,
    pub sa_eq_bs: bool,
    /// Entries of all four matrices lie in the declared semiring.
    pub semiring_ok: bool,
    pub pass: bool,
}

impl ShiftEquivalence {
    pub fn new(a: IntMatrix, b: IntMatrix, r: IntMatrix, s: IntMatrix, lag: usize, semiring: Semiring) -> Self {
        ShiftEquivalence { a, b, r, s, lag, semiring }
    }

    /// Lag-one self-equivalence `R = A`, `S = I`.
    pub fn identity(a: &IntMatrix) -> Result<Self> {
        let a = a.aligned_square()?;
        let semiring = if a.is_nonnegative() { Semiring::Zplus } else { Semiring::Z };
        Ok(ShiftEquivalence {
            s: IntMatrix::identity(a.row_labels().to_vec()),
            r: a.clone(),
            b: a.clone(),
            a,
            lag: 1,
            semiring,
        })
    }

    /// The symmetric witness from `B` to `A`.
    pub fn inverse(&self) -> Self {
        ShiftEquivalence {
            a: self.b.clone(),
            b: self.a.clone(),
            r: self.s.clone(),
            s: self.r.clone(),
            lag: self.lag,
            semiring: self.semiring,
        }
    }

    fn check_shapes(&self) -> Result<()> {
        self.a.require_square()?;
        self.b.require_square()?;
        let want = [
            ("rows of R", self.r.row_labels(), self.a.row_labels()),
            ("columns of R", self.r.col_labels(), self.b.row_labels()),
            ("rows of S", self.s.row_labels(), self.b.row_labels()),
            ("columns of S", self.s.col_labels(), self.a.row_labels()),
        ];
        for (context, got, expected) in want {
            if !crate::matrix::same_label_set(got, expected) {
                return Err(Error::LabelMismatch {
                    context,
                    left: got.to_vec(),
                    right: expected.to_vec(),
                });
            }
        }
        if self.lag == 0 {
            return Err(Error::Malformed("lag must be positive".into()));
        }
        Ok(())
    }
}

pub fn verify_se(se: &ShiftEquivalence) -> Result<SeReport> {
    se.check_shapes()?;
    let a_pow_eq_rs = se.a.pow(se.lag)? == se.r.mat_mul(&se.s)?;
    let b_pow_eq_sr = se.b.pow(se.lag)? == se.s.mat_mul(&se.r)?;
    let ar_eq_rb = se.a.mat_mul(&se.r)? == se.r.mat_mul(&se.b)?;
    let sa_eq_bs = se.s.mat_mul(&se.a)? == se.b.mat_mul(&se.s)?;
    let semiring_ok = match se.semiring {
        Semiring::Z => true,
        Semiring::Zplus => [&se.a, &se.b, &se.r, &se.s].iter().all(|m| m.is_nonnegative()),
    };
    Ok(SeReport {
        pass: a_pow_eq_rs && b_pow_eq_sr && ar_eq_rb && sa_eq_bs && semiring_ok,
        a_pow_eq_rs,
        b_pow_eq_sr,
        ar_eq_rb,
        sa_eq_bs,
        semiring_ok,
    })
}

/// `first: A -> B` followed by `second: B -> C` gives `A -> C` with lags
/// added.
pub fn compose_se(first: &ShiftEquivalence, second: &ShiftEquivalence) -> Result<ShiftEquivalence> {
    if first.b != second.a {
        return Err(Error::InvalidWitness(
            "middle matrices of the composed equivalences differ".into(),
        ));
    }
    if first.semiring != second.semiring {
        return Err(Error::InvalidWitness("semirings of the composed equivalences differ".into()));
    }
    Ok(ShiftEquivalence {
        a: first.a.clone(),
        b: second.b.clone(),
        r: first.r.mat_mul(&second.r)?,
        s: second.s.mat_mul(&first.s)?,
        lag: first.lag + second.lag,
        semiring: first.semiring,
    })
}

/// A lag-one shift equivalence.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EsseWitness(pub ShiftEquivalence);

impl EsseWitness {
    pub fn new(se: ShiftEquivalence) -> Result<Self> {
        if se.lag != 1 {
            return Err(Error::InvalidWitness(format!("elementary step with lag {}", se.lag)));
        }
        Ok(EsseWitness(se))
    }

    pub fn se(&self) -> &ShiftEquivalence {
        &self.0
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SseChain {
    pub steps: Vec<EsseWitness>,
}

impl SseChain {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Every step verifies and consecutive steps chain exactly.
    pub fn verify(&self) -> Result<bool> {
        for step in &self.steps {
            if step.0.lag != 1 || !verify_se(&step.0)?.pass {
                return Ok(false);
            }
        }
        Ok(self.steps.windows(2).all(|w| w[0].0.b == w[1].0.a))
    }

    /// The composite equivalence, `None` for the empty chain.
    pub fn compose(&self) -> Result<Option<ShiftEquivalence>> {
        let mut it = self.steps.iter();
        let Some(first) = it.next() else {
            return Ok(None);
        };
        let mut acc = first.0.clone();
        for step in it {
            acc = compose_se(&acc, &step.0)?;
        }
        Ok(Some(acc))
    }
}

/// One elimination step around the trivial index at `k`: rows and columns
/// split into `F` (the rest), `k`, and `L` (everything reachable from `k`).
fn elimination_step(a: &IntMatrix, reach: &Reachability, k: usize) -> Result<EsseWitness> {
    let labels = a.row_labels();
    let n = labels.len();
    let in_l: Vec<bool> = (0..n).map(|j| reach.path(k, j)).collect();
    let new_pos: Vec<usize> = (0..n).filter(|&j| j != k).collect();
    let new_labels: Vec<Label> = new_pos.iter().map(|&j| labels[j].clone()).collect();
    let zero = BigInt::zero;

    let mut r = IntMatrix::zeros(labels.to_vec(), new_labels.clone());
    for i in 0..n {
        for (c, &j) in new_pos.iter().enumerate() {
            let v = if in_l[j] {
                a.get(i, j).clone()
            } else if i == j {
                BigInt::from(1)
            } else {
                zero()
            };
            r.set(i, c, v);
        }
    }
    let mut s = IntMatrix::zeros(new_labels.clone(), labels.to_vec());
    for (row, &i) in new_pos.iter().enumerate() {
        for j in 0..n {
            let v = if in_l[i] {
                if i == j { BigInt::from(1) } else { zero() }
            } else if in_l[j] {
                zero()
            } else {
                a.get(i, j).clone()
            };
            s.set(row, j, v);
        }
    }
    let b = s.mat_mul(&r)?;
    EsseWitness::new(ShiftEquivalence {
        a: a.clone(),
        b,
        r,
        s,
        lag: 1,
        semiring: Semiring::Zplus,
    })
}

/// Repeatedly remove trivial indices (those in no irreducible component) by
/// elementary strong shift equivalences, sinks of the condensation first.
pub fn eliminate_zero_diagonal_blocks(a: &IntMatrix) -> Result<(IntMatrix, SseChain)> {
    let mut current = a.canonical().aligned_square()?;
    let mut chain = SseChain::default();
    loop {
        let reach = Reachability::new(&current)?;
        if !(0..reach.sccs.len()).any(|k| reach.scc_is_cyclic(k)) {
            return Err(Error::Nilpotent);
        }
        let trivial = (0..reach.sccs.len()).find(|&k| !reach.scc_is_cyclic(k));
        let Some(scc) = trivial else {
            return Ok((current, chain));
        };
        let k = reach.sccs[scc][0];
        let step = elimination_step(&current, &reach, k)?;
        current = step.0.b.clone();
        chain.steps.push(step);
    }
}

/// A shift equivalence between the reduced forms of its ends.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedSe {
    pub chain_a: SseChain,
    pub chain_b: SseChain,
    pub se: ShiftEquivalence,
}

/// Transport `se: A -> B` to `A' -> B'` along the elimination chains.
pub fn reduce_se(se: &ShiftEquivalence) -> Result<ReducedSe> {
    let (_, chain_a) = eliminate_zero_diagonal_blocks(&se.a)?;
    let (_, chain_b) = eliminate_zero_diagonal_blocks(&se.b)?;
    let mut acc = match chain_a.compose()? {
        Some(c) => compose_se(&c.inverse(), se)?,
        None => se.clone(),
    };
    if let Some(c) = chain_b.compose()? {
        acc = compose_se(&acc, &c)?;
    }
    Ok(ReducedSe {
        chain_a,
        chain_b,
        se: acc,
    })
}

/// A shift equivalence whose four matrices are partitioned over one poset.
/// Rows of `R` and columns of `S` follow `a_partition`; columns of `R` and
/// rows of `S` follow `b_partition`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionedSe {
    pub se: ShiftEquivalence,
    pub poset: Poset,
    pub a_partition: Partition,
    pub b_partition: Partition,
}

impl PartitionedSe {
    fn part(&self, m: &IntMatrix, rows: &Partition, cols: &Partition) -> Result<PartitionedMatrix<BigInt>> {
        PartitionedMatrix::new(m.clone(), self.poset.clone(), rows.clone(), cols.clone())
    }

    pub fn a(&self) -> Result<PartitionedMatrix<BigInt>> {
        self.part(&self.se.a, &self.a_partition, &self.a_partition)
    }

    pub fn b(&self) -> Result<PartitionedMatrix<BigInt>> {
        self.part(&self.se.b, &self.b_partition, &self.b_partition)
    }

    pub fn r(&self) -> Result<PartitionedMatrix<BigInt>> {
        self.part(&self.se.r, &self.a_partition, &self.b_partition)
    }

    pub fn s(&self) -> Result<PartitionedMatrix<BigInt>> {
        self.part(&self.se.s, &self.b_partition, &self.a_partition)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftedSe {
    /// `p -> p~` from the component poset of `A` to that of `B`.
    pub poset_iso: BTreeMap<Label, Label>,
    pub partitioned: PartitionedSe,
}

fn violation(claim: &'static str, detail: String) -> Error {
    Error::ClaimViolation { claim, detail }
}

/// Component-wise matching `p -> p~` with `R{p,p~} S{p~,p} != 0`, checked
/// against every structural claim that makes the result a partitioned
/// shift equivalence over the component poset of `A`.
pub fn lift_se_to_partitioned(se: &ShiftEquivalence) -> Result<LiftedSe> {
    let report = verify_se(se)?;
    if !report.pass {
        return Err(Error::InvalidWitness("shift equivalence equations fail".into()));
    }
    if se.semiring != Semiring::Zplus {
        return Err(Error::Precondition("lifting requires a witness over Zplus".into()));
    }
    let precondition = |e: Error| match e {
        Error::TrivialIndices(ix) => {
            Error::Precondition(format!("indices in no irreducible component: {ix:?}"))
        }
        other => other,
    };
    let pa = canonical_partition(&se.a).map_err(precondition)?;
    let pb = canonical_partition(&se.b).map_err(precondition)?;
    let (poset_a, part_a) = (&pa.poset, &pa.row_partition);
    let (poset_b, part_b) = (&pb.poset, &pb.row_partition);
    let blk = |m: &IntMatrix, rp: &Partition, p: &Label, cp: &Partition, q: &Label| {
        m.restrict(&rp.block(p), &cp.block(q))
    };

    let mut forward = BTreeMap::new();
    for p in poset_a.elements() {
        let mut hits = Vec::new();
        for q in poset_b.elements() {
            let rs = blk(&se.r, part_a, p, part_b, q)?.mat_mul(&blk(&se.s, part_b, q, part_a, p)?)?;
            if !rs.is_zero_matrix() {
                hits.push(q.clone());
            }
        }
        if hits.len() != 1 {
            return Err(violation("1(i)", format!("element {p} matches {hits:?}")));
        }
        forward.insert(p.clone(), hits.pop().expect("one hit"));
    }
    let mut backward = BTreeMap::new();
    for q in poset_b.elements() {
        let mut hits = Vec::new();
        for p in poset_a.elements() {
            let sr = blk(&se.s, part_b, q, part_a, p)?.mat_mul(&blk(&se.r, part_a, p, part_b, q)?)?;
            if !sr.is_zero_matrix() {
                hits.push(p.clone());
            }
        }
        if hits.len() != 1 {
            return Err(violation("1(i)", format!("element {q} of B matches {hits:?}")));
        }
        backward.insert(q.clone(), hits.pop().expect("one hit"));
    }

    let a_pow = se.a.pow(se.lag)?;
    let b_pow = se.b.pow(se.lag)?;
    for (p, pt) in &forward {
        let r_blk = blk(&se.r, part_a, p, part_b, pt)?;
        let s_blk = blk(&se.s, part_b, pt, part_a, p)?;
        if blk(&a_pow, part_a, p, part_a, p)? != r_blk.mat_mul(&s_blk)? {
            return Err(violation("1(ii)", format!("A^lag block at {p}")));
        }
        if blk(&b_pow, part_b, pt, part_b, pt)? != s_blk.mat_mul(&r_blk)? {
            return Err(violation("1(ii)", format!("B^lag block at {pt}")));
        }
        if backward.get(pt) != Some(p) {
            return Err(violation("1(iii)", format!("{p} -> {pt} is not inverted")));
        }
    }
    for (q, qt) in &backward {
        if forward.get(qt) != Some(q) {
            return Err(violation("1(iii)", format!("{q} -> {qt} is not inverted")));
        }
    }
    for p in poset_a.elements() {
        for r in poset_a.elements() {
            if poset_a.le(p, r) != poset_b.le(&forward[p], &forward[r]) {
                return Err(violation("2", format!("order between {p} and {r} not preserved")));
            }
        }
    }
    for p in poset_a.elements() {
        for r in poset_a.elements() {
            let rt = &forward[r];
            let pt = &forward[p];
            let nonzero = !blk(&se.r, part_a, p, part_b, rt)?.is_zero_matrix()
                || !blk(&se.s, part_b, pt, part_a, r)?.is_zero_matrix();
            if nonzero && !poset_a.le(p, r) {
                return Err(violation("3", format!("nonzero block from {p} to {r}")));
            }
        }
    }

    let b_partition = part_b.map_elements(|q| backward[q].clone());
    let lifted = PartitionedSe {
        se: se.clone(),
        poset: poset_a.clone(),
        a_partition: part_a.clone(),
        b_partition,
    };
    for (m, rp, cp) in [
        (&se.a, &lifted.a_partition, &lifted.a_partition),
        (&se.b, &lifted.b_partition, &lifted.b_partition),
        (&se.r, &lifted.a_partition, &lifted.b_partition),
        (&se.s, &lifted.b_partition, &lifted.a_partition),
    ] {
        let v = validate_partitioned(m, &lifted.poset, rp, cp)?;
        if !v.valid {
            return Err(Error::Internal(format!(
                "lifted matrix is not partitioned: {:?}",
                v.violations
            )));
        }
    }
    for m in [lifted.a()?, lifted.b()?] {
        let verdict = check_m_p_delta(&m)?;
        if !verdict.holds() {
            return Err(Error::Internal(format!("lifted diagonal matrix: {verdict:?}")));
        }
    }
    Ok(LiftedSe {
        poset_iso: forward,
        partitioned: lifted,
    })
}

/// Blockwise check of the four equations for a partitioned witness.
pub fn verify_partitioned_se(pse: &PartitionedSe) -> Result<bool> {
    let (a, b, r, s) = (pse.a()?, pse.b()?, pse.r()?, pse.s()?);
    let lag = pse.se.lag;
    let mut a_pow = a.clone();
    let mut b_pow = b.clone();
    for _ in 1..lag {
        a_pow = a_pow.mat_mul(&a)?;
        b_pow = b_pow.mat_mul(&b)?;
    }
    let eqs = [
        (a_pow, r.mat_mul(&s)?),
        (b_pow, s.mat_mul(&r)?),
        (a.mat_mul(&r)?, r.mat_mul(&b)?),
        (s.mat_mul(&a)?, b.mat_mul(&s)?),
    ];
    for (lhs, rhs) in eqs {
        for p in pse.poset.elements() {
            for q in pse.poset.elements() {
                if lhs.block(p, q)? != rhs.block(p, q)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
