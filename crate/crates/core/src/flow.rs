//! Flow-equivalence invariants and certificates.
//!
//! Bowen-Franks data and Franks' decision for irreducible pairs, the
//! cokernel generator of an essentially cyclic matrix, positivity of
//! induced cokernel isomorphisms, blockwise unimodularity, and the staged
//! certificate that turns a shift equivalence into checkable evidence of
//! flow equivalence.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::components::{
    classify_square, irreducible_components, BlockClass, ComponentKind, PartitionedMatrix, Reachability,
};
use crate::det::det_int;
use crate::error::{Error, Result};
use crate::label::Label;
use crate::matrix::IntMatrix;
use crate::parallel::{self, Execution};
use crate::pse::{
    build_partitioned_pse, restrict_block, specialize_at_one, verify_pse, PseCertificate, PseReport,
    SlEquivalenceData, SlReport,
};
use crate::shift::{
    lift_se_to_partitioned, reduce_se, verify_partitioned_se, verify_se, LiftedSe, ReducedSe, SeReport,
    Semiring, ShiftEquivalence,
};
use crate::smith::{cokernel, AbelianGroup};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BowenFranksInvariant {
    /// Cokernel of `I - A`.
    pub group: AbelianGroup,
    /// `det(I - A)`.
    #[serde(with = "crate::json::big")]
    pub determinant: BigInt,
}

pub fn bowen_franks(a: &IntMatrix) -> Result<BowenFranksInvariant> {
    let a = a.aligned_square()?;
    if let Some((row, col)) = a.first_negative() {
        return Err(Error::NegativeEntry { row, col });
    }
    let m = a.identity_minus()?;
    Ok(BowenFranksInvariant {
        group: cokernel(&m),
        determinant: det_int(&m)?,
    })
}

pub fn is_permutation_matrix(m: &IntMatrix) -> bool {
    let Ok(m) = m.aligned_square() else {
        return false;
    };
    let n = m.nrows();
    let ones_in = |it: &mut dyn Iterator<Item = &BigInt>| {
        let mut count = 0;
        for x in it {
            if x.is_one() {
                count += 1;
            } else if !x.is_zero() {
                return false;
            }
        }
        count == 1
    };
    (0..n).all(|i| ones_in(&mut (0..n).map(|j| m.get(i, j))))
        && (0..n).all(|j| ones_in(&mut (0..n).map(|i| m.get(i, j))))
}

/// One irreducible component covering every index.
pub fn is_irreducible(m: &IntMatrix) -> Result<bool> {
    let report = irreducible_components(m)?;
    Ok(report.components.len() == 1 && report.trivial_indices.is_empty())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FranksVerdict {
    pub flow_equivalent: bool,
    pub a: BowenFranksInvariant,
    pub b: BowenFranksInvariant,
}

/// Flow equivalence of irreducible non-permutation matrices, decided by
/// equality of Bowen-Franks invariants.
pub fn franks_decide(a: &IntMatrix, b: &IntMatrix) -> Result<FranksVerdict> {
    for (name, m) in [("A", a), ("B", b)] {
        if !is_irreducible(m)? {
            return Err(Error::Precondition(format!("{name} is not irreducible")));
        }
        if is_permutation_matrix(m) {
            return Err(Error::Precondition(format!("{name} is a permutation matrix")));
        }
    }
    let (ia, ib) = (bowen_franks(a)?, bowen_franks(b)?);
    Ok(FranksVerdict {
        flow_equivalent: ia == ib,
        a: ia,
        b: ib,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bands {
    /// Indices not reachable from the cycle.
    pub n1: Vec<Label>,
    /// The cyclic component.
    pub p: Vec<Label>,
    /// Trivial indices reachable from the cycle.
    pub n2: Vec<Label>,
}

/// The class of `v` in the infinite cyclic cokernel of `I - A` is
/// `(c . v) [e]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleAnalysis {
    pub generator: Label,
    #[serde(with = "crate::json::big_map")]
    pub coefficients: BTreeMap<Label, BigInt>,
    pub bands: Bands,
}

impl CycleAnalysis {
    /// `c . m(:, col)` with rows of `m` labeled by indices of the analysed
    /// matrix.
    pub fn apply_to_column(&self, m: &IntMatrix, col: usize) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, l) in m.row_labels().iter().enumerate() {
            if let Some(c) = self.coefficients.get(l) {
                let x = m.get(i, col);
                if !c.is_zero() && !x.is_zero() {
                    acc += c * x;
                }
            }
        }
        acc
    }

    /// `c^T m = 0`.
    pub fn annihilates(&self, m: &IntMatrix) -> bool {
        (0..m.ncols()).all(|j| self.apply_to_column(m, j).is_zero())
    }
}

pub fn cycle_coefficients(a: &IntMatrix) -> Result<CycleAnalysis> {
    let a = a.canonical().aligned_square()?;
    let report = irreducible_components(&a)?;
    let cycle = match report.components.as_slice() {
        [c] if c.kind == ComponentKind::Cycle => c,
        [_] => {
            return Err(Error::NotEssentiallyCyclic(
                "the irreducible component is not a cyclic permutation".into(),
            ))
        }
        cs => {
            return Err(Error::NotEssentiallyCyclic(format!(
                "{} irreducible components",
                cs.len()
            )))
        }
    };
    let reach = Reachability::new(&a)?;
    let labels = a.row_labels();
    let p_pos: Vec<usize> = cycle.members.iter().map(|l| reach.position(l).expect("member")).collect();
    let (mut n1, mut n2) = (Vec::new(), Vec::new());
    for (j, l) in labels.iter().enumerate() {
        if cycle.members.contains(l) {
            continue;
        }
        if p_pos.iter().any(|&i| reach.path(i, j)) {
            n2.push(l.clone());
        } else {
            n1.push(l.clone());
        }
    }

    let mut coefficients: BTreeMap<Label, BigInt> = BTreeMap::new();
    for l in &n1 {
        coefficients.insert(l.clone(), BigInt::zero());
    }
    for l in &cycle.members {
        coefficients.insert(l.clone(), BigInt::one());
    }
    if !n2.is_empty() {
        let z = a.restrict(&cycle.members, &n2)?;
        let nil = a.principal(&n2)?;
        let mut inv = IntMatrix::identity(n2.clone());
        let mut pow = inv.clone();
        for _ in 1..n2.len() {
            pow = pow.mat_mul(&nil)?;
            inv = inv.add(&pow)?;
        }
        let zi = z.mat_mul(&inv)?;
        for (j, l) in zi.col_labels().iter().enumerate() {
            let sum: BigInt = (0..zi.nrows()).map(|i| zi.get(i, j).clone()).sum();
            coefficients.insert(l.clone(), sum);
        }
    }
    let analysis = CycleAnalysis {
        generator: cycle.members[0].clone(),
        coefficients,
        bands: Bands {
            n1,
            p: cycle.members.clone(),
            n2,
        },
    };
    if !analysis.annihilates(&a.identity_minus()?) {
        return Err(Error::Internal("cycle coefficients do not annihilate I - A".into()));
    }
    Ok(analysis)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositivityVerdict {
    /// `[U e] = kappa [e']`.
    #[serde(with = "crate::json::big")]
    pub kappa: BigInt,
    pub positive: bool,
    /// `U` is entrywise nonnegative, which forces `kappa >= 0`.
    pub nonnegative: bool,
    pub source_generator: Label,
    pub target_generator: Label,
}

/// Sign of the cokernel isomorphism `cok(I - source) -> cok(I - target)`
/// induced by `u` (rows labeled like `target`, columns like `source`).
pub fn check_positive_on_cycle(u: &IntMatrix, source: &IntMatrix, target: &IntMatrix) -> Result<PositivityVerdict> {
    let cs = cycle_coefficients(source)?;
    let ct = cycle_coefficients(target)?;
    let src = source.canonical();
    let u = u.reordered(target.canonical().row_labels(), src.row_labels())?;
    if !ct.annihilates(&u.mat_mul(&src.identity_minus()?)?) {
        return Err(Error::NotCokernelIsomorphism(
            "the matrix does not carry the image of I - source into the image of I - target".into(),
        ));
    }
    let col = u
        .col_labels()
        .iter()
        .position(|l| *l == cs.generator)
        .expect("generator is a source label");
    let kappa = ct.apply_to_column(&u, col);
    if kappa.abs() != BigInt::one() {
        return Err(Error::NotCokernelIsomorphism(format!(
            "generator maps to {kappa} times the target generator"
        )));
    }
    let nonnegative = u.is_nonnegative();
    if nonnegative && kappa.is_negative() {
        return Err(Error::Internal("nonnegative matrix induced a negative map".into()));
    }
    Ok(PositivityVerdict {
        positive: kappa.is_one(),
        kappa,
        nonnegative,
        source_generator: cs.generator,
        target_generator: ct.generator,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlPVerdict {
    pub holds: bool,
    #[serde(with = "crate::json::big_map")]
    pub block_dets: BTreeMap<Label, BigInt>,
}

/// Every diagonal block has determinant one.
pub fn check_sl_p(m: &PartitionedMatrix<BigInt>) -> Result<SlPVerdict> {
    if m.row_partition != m.col_partition {
        return Err(Error::Precondition("row and column partitions differ".into()));
    }
    let mut block_dets = BTreeMap::new();
    for p in m.poset.elements() {
        block_dets.insert(p.clone(), det_int(&m.diagonal_block(p)?)?);
    }
    Ok(SlPVerdict {
        holds: block_dets.values().all(One::is_one),
        block_dets,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeOptions {
    /// Also check positivity of the right multiplier on row cokernels.
    pub row_side_check: bool,
    pub variant: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    VerifySe,
    Reduction,
    Lift,
    Pse,
    AtOne,
    SlP,
    CycleMatch,
    Positivity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageFailure {
    pub stage: Stage,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlPStage {
    pub intertwiner: SlPVerdict,
    pub left_product: SlPVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleMatch {
    pub element: Label,
    pub partner: Label,
    pub a_class: BlockClass,
    pub b_class: BlockClass,
    pub matched: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockPositivity {
    pub element: Label,
    /// `(L1 L2)^-1` on the block.
    pub multiplier: IntMatrix,
    /// `I` minus the block of the right-hand side.
    pub source: IntMatrix,
    /// `I` minus the block of the diagonal factor.
    pub target: IntMatrix,
    pub l1_nonnegative: bool,
    /// `L2^-1 = [[I, R], [0, I]]` is nonnegative on the block.
    pub l2_inverse_nonnegative: bool,
    pub verdict: PositivityVerdict,
    /// Sign of `L1 L2` on the block, mapping back.
    #[serde(with = "crate::json::big")]
    pub forward_kappa: BigInt,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub row_side: Option<PositivityVerdict>,
}

impl BlockPositivity {
    pub fn positive(&self) -> bool {
        self.verdict.positive
            && self.forward_kappa.is_one()
            && self.row_side.as_ref().is_none_or(|v| v.positive)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeCertificate {
    pub input: ShiftEquivalence,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_report: Option<SeReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<ReducedSe>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lift: Option<LiftedSe>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pse: Option<PseCertificate>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pse_report: Option<PseReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub block_reports: Option<BTreeMap<Label, PseReport>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at_one: Option<SlEquivalenceData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at_one_report: Option<SlReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sl_p: Option<SlPStage>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cycle_match: Option<Vec<CycleMatch>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positivity: Option<Vec<BlockPositivity>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<StageFailure>,
    pub overall: bool,
}

const BUG_NOTE: &str =
    "internal error: a valid shift equivalence over Zplus never fails this stage, so this is an implementation bug";

fn stage_error(stage: Stage, e: impl std::fmt::Display) -> StageFailure {
    StageFailure {
        stage,
        message: format!("{e} ({BUG_NOTE})"),
    }
}

fn stage_failed(stage: Stage, what: &str) -> StageFailure {
    StageFailure {
        stage,
        message: format!("{what} ({BUG_NOTE})"),
    }
}

fn block_positivity(at_one: &SlEquivalenceData, p: &Label, row_side: bool) -> Result<BlockPositivity> {
    let part = at_one.partition.as_ref().expect("partitioned data");
    let block = part.block(p);
    let left = at_one.l1.mat_mul(&at_one.l2)?;
    let multiplier = at_one.left_inverse()?.principal(&block)?;
    let source = at_one.rhs.principal(&block)?.identity_minus()?;
    let target = at_one.d.principal(&block)?.identity_minus()?;
    let l1_nonnegative = at_one.l1.principal(&block)?.is_nonnegative();
    let id = IntMatrix::identity(at_one.l2.row_labels().to_vec());
    let l2_inverse = id.add(&id)?.sub(&at_one.l2)?;
    let l2_inverse_nonnegative = l2_inverse.principal(&block)?.is_nonnegative();
    let verdict = check_positive_on_cycle(&multiplier, &source, &target)?;
    let forward = check_positive_on_cycle(&left.principal(&block)?, &target, &source)?;
    let row_side = if row_side {
        let u1t = at_one.u1.principal(&block)?.transpose();
        Some(check_positive_on_cycle(&u1t, &target.transpose(), &source.transpose())?)
    } else {
        None
    };
    Ok(BlockPositivity {
        element: p.clone(),
        multiplier,
        source,
        target,
        l1_nonnegative,
        l2_inverse_nonnegative,
        verdict,
        forward_kappa: forward.kappa,
        row_side,
    })
}

fn cycle_matches(lift: &LiftedSe) -> Result<Vec<CycleMatch>> {
    let ps = &lift.partitioned;
    let (a, b) = (ps.a()?, ps.b()?);
    ps.poset
        .elements()
        .iter()
        .map(|p| {
            let a_class = classify_square(&a.diagonal_block(p)?)?;
            let b_class = classify_square(&b.diagonal_block(p)?)?;
            Ok(CycleMatch {
                element: p.clone(),
                partner: lift.poset_iso[p].clone(),
                matched: (a_class == BlockClass::CycleComponent) == (b_class == BlockClass::CycleComponent),
                a_class,
                b_class,
            })
        })
        .collect()
}

/// Run the staged pipeline. Failures are recorded in the certificate rather
/// than returned, so a negative certificate still shows how far it got.
pub fn fe_certificate(se: &ShiftEquivalence, options: FeOptions) -> FeCertificate {
    let mut cert = FeCertificate {
        input: se.clone(),
        input_report: None,
        reduction: None,
        lift: None,
        pse: None,
        pse_report: None,
        block_reports: None,
        at_one: None,
        at_one_report: None,
        sl_p: None,
        cycle_match: None,
        positivity: None,
        failure: None,
        overall: false,
    };
    if let Err(f) = run_pipeline(&mut cert, options) {
        cert.failure = Some(f);
        return cert;
    }
    cert.overall = true;
    cert
}

fn run_pipeline(cert: &mut FeCertificate, options: FeOptions) -> std::result::Result<(), StageFailure> {
    let input_err = |stage, e: Error| StageFailure {
        stage,
        message: e.to_string(),
    };
    let plus = ShiftEquivalence {
        semiring: Semiring::Zplus,
        ..cert.input.clone()
    };
    let report = verify_se(&plus).map_err(|e| input_err(Stage::VerifySe, e))?;
    let ok = report.pass;
    cert.input_report = Some(report);
    if !ok {
        return Err(StageFailure {
            stage: Stage::VerifySe,
            message: "input is not a shift equivalence over Zplus".into(),
        });
    }

    let reduced = reduce_se(&plus).map_err(|e| match e {
        Error::Nilpotent => input_err(Stage::Reduction, e),
        e => stage_error(Stage::Reduction, e),
    })?;
    cert.reduction = Some(reduced.clone());

    let lift = lift_se_to_partitioned(&reduced.se).map_err(|e| stage_error(Stage::Lift, e))?;
    cert.lift = Some(lift.clone());

    let pse = build_partitioned_pse(&lift.partitioned, options.variant).map_err(|e| stage_error(Stage::Pse, e))?;
    let pse_report = verify_pse(&pse).map_err(|e| stage_error(Stage::Pse, e))?;
    let elements = lift.partitioned.poset.elements().to_vec();
    let blocks = parallel::map(Execution::Parallel, elements.clone(), |p| {
        let sub = restrict_block(&pse, &p)?;
        Ok((p, verify_pse(&sub)?))
    })
    .into_iter()
    .collect::<Result<BTreeMap<Label, PseReport>>>()
    .map_err(|e| stage_error(Stage::Pse, e))?;
    let pse_ok = pse_report.pass && blocks.values().all(|r| r.pass);
    cert.pse = Some(pse.clone());
    cert.pse_report = Some(pse_report);
    cert.block_reports = Some(blocks);
    if !pse_ok {
        return Err(stage_failed(Stage::Pse, "polynomial equation check failed"));
    }

    let at_one = specialize_at_one(&pse);
    let sl_report = at_one.verify().map_err(|e| stage_error(Stage::AtOne, e))?;
    let sl_ok = sl_report.pass;
    cert.at_one = Some(at_one.clone());
    cert.at_one_report = Some(sl_report);
    if !sl_ok {
        return Err(stage_failed(Stage::AtOne, "equation at t = 1 failed"));
    }

    let sl_p = (|| -> Result<SlPStage> {
        let u1 = at_one.partitioned(&at_one.u1)?.expect("partitioned");
        let left = at_one.partitioned(&at_one.l1.mat_mul(&at_one.l2)?)?.expect("partitioned");
        Ok(SlPStage {
            intertwiner: check_sl_p(&u1)?,
            left_product: check_sl_p(&left)?,
        })
    })()
    .map_err(|e| stage_error(Stage::SlP, e))?;
    let sl_p_ok = sl_p.intertwiner.holds && sl_p.left_product.holds;
    cert.sl_p = Some(sl_p);
    if !sl_p_ok {
        return Err(stage_failed(Stage::SlP, "a diagonal block has determinant other than 1"));
    }

    let matches = cycle_matches(&lift).map_err(|e| stage_error(Stage::CycleMatch, e))?;
    let matched = matches.iter().all(|m| m.matched);
    let cycles: Vec<Label> = matches
        .iter()
        .filter(|m| m.a_class == BlockClass::CycleComponent)
        .map(|m| m.element.clone())
        .collect();
    cert.cycle_match = Some(matches);
    if !matched {
        return Err(stage_failed(Stage::CycleMatch, "cycle components are not matched"));
    }

    let positivity = parallel::map(Execution::Parallel, cycles, |p| {
        block_positivity(&at_one, &p, options.row_side_check)
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()
    .map_err(|e| stage_error(Stage::Positivity, e))?;
    let positive = positivity.iter().all(BlockPositivity::positive);
    cert.positivity = Some(positivity);
    if !positive {
        return Err(stage_failed(Stage::Positivity, "a cycle component is not mapped positively"));
    }
    Ok(())
}

impl FeCertificate {
    /// Recompute every recorded verdict from the recorded matrices and
    /// return the resulting overall verdict. Nothing computed during
    /// construction is trusted.
    pub fn reverify(&self) -> Result<bool> {
        let plus = ShiftEquivalence {
            semiring: Semiring::Zplus,
            ..self.input.clone()
        };
        if !verify_se(&plus)?.pass {
            return Ok(false);
        }
        let (Some(red), Some(lift), Some(pse), Some(at_one), Some(matches), Some(positivity)) = (
            &self.reduction,
            &self.lift,
            &self.pse,
            &self.at_one,
            &self.cycle_match,
            &self.positivity,
        ) else {
            return Ok(false);
        };
        if !red.chain_a.verify()? || !red.chain_b.verify()? || !verify_se(&red.se)?.pass {
            return Ok(false);
        }
        let chain_end = |chain: &crate::shift::SseChain, start: &IntMatrix| {
            chain.steps.last().map_or_else(|| start.clone(), |s| s.0.b.clone())
        };
        if red.chain_a.steps.first().is_some_and(|s| s.0.a != plus.a)
            || red.chain_b.steps.first().is_some_and(|s| s.0.a != plus.b)
            || chain_end(&red.chain_a, &plus.a) != red.se.a
            || chain_end(&red.chain_b, &plus.b) != red.se.b
            || lift.partitioned.se != red.se
            || !verify_partitioned_se(&lift.partitioned)?
        {
            return Ok(false);
        }
        if !verify_pse(pse)?.pass || pse.poset.as_ref() != Some(&lift.partitioned.poset) {
            return Ok(false);
        }
        for p in lift.partitioned.poset.elements() {
            if !verify_pse(&restrict_block(pse, p)?)?.pass {
                return Ok(false);
            }
        }
        if *at_one != specialize_at_one(pse) || !at_one.verify()?.pass {
            return Ok(false);
        }
        let u1 = at_one.partitioned(&at_one.u1)?.expect("partitioned");
        let left = at_one.partitioned(&at_one.l1.mat_mul(&at_one.l2)?)?.expect("partitioned");
        if !check_sl_p(&u1)?.holds || !check_sl_p(&left)?.holds {
            return Ok(false);
        }
        if *matches != cycle_matches(lift)? || !matches.iter().all(|m| m.matched) {
            return Ok(false);
        }
        let cycles: Vec<&Label> = matches
            .iter()
            .filter(|m| m.a_class == BlockClass::CycleComponent)
            .map(|m| &m.element)
            .collect();
        if cycles.len() != positivity.len() {
            return Ok(false);
        }
        for (p, recorded) in cycles.into_iter().zip(positivity) {
            let fresh = block_positivity(at_one, p, recorded.row_side.is_some())?;
            if fresh != *recorded || !fresh.positive() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::components::PartitionedMatrix;
    use crate::poset::{Partition, Poset};

    fn im(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows).unwrap()
    }

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn l(s: &str) -> Label {
        Label::from(s)
    }

    #[test]
    fn bowen_franks_examples() {
        let bf = bowen_franks(&im(&[&[2]])).unwrap();
        assert!(bf.group.is_trivial());
        assert_eq!(bf.determinant, big(-1));
        let bf = bowen_franks(&im(&[&[4]])).unwrap();
        assert_eq!(bf.group.torsion, vec![big(3)]);
        assert_eq!(bf.determinant, big(-3));
        let bf = bowen_franks(&im(&[&[1, 2], &[2, 1]])).unwrap();
        assert_eq!(bf.group.torsion, vec![big(2), big(2)]);
        assert_eq!(bf.determinant, big(-4));
    }

    #[test]
    fn franks_examples() {
        let v = franks_decide(&im(&[&[2]]), &im(&[&[1, 1], &[1, 1]])).unwrap();
        assert!(v.flow_equivalent);
        let v = franks_decide(&im(&[&[2]]), &im(&[&[3]])).unwrap();
        assert!(!v.flow_equivalent);
        assert_eq!(v.b.determinant, big(-2));
        assert!(franks_decide(&im(&[&[2]]), &im(&[&[2]])).unwrap().flow_equivalent);
        assert!(matches!(
            franks_decide(&im(&[&[0, 1], &[1, 0]]), &im(&[&[2]])),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            franks_decide(&im(&[&[2]]), &im(&[&[1, 1], &[0, 1]])),
            Err(Error::Precondition(_))
        ));
    }

    fn coeffs(a: &CycleAnalysis) -> Vec<i64> {
        a.coefficients.values().map(|c| c.try_into().unwrap()).collect()
    }

    #[test]
    fn cycle_coefficient_examples() {
        let c = cycle_coefficients(&im(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(coeffs(&c), vec![1, 1]);
        assert_eq!(c.generator, l("1"));

        let c = cycle_coefficients(&im(&[&[0, 1, 1], &[1, 0, 0], &[0, 0, 0]])).unwrap();
        assert_eq!(coeffs(&c), vec![1, 1, 1]);
        assert_eq!(c.bands.n2, vec![l("3")]);

        let c = cycle_coefficients(&im(&[&[0, 1], &[0, 1]])).unwrap();
        assert_eq!(coeffs(&c), vec![0, 1]);
        assert_eq!(c.bands.n1, vec![l("1")]);

        assert!(matches!(cycle_coefficients(&im(&[&[2]])), Err(Error::NotEssentiallyCyclic(_))));
    }

    #[test]
    fn longer_tail_coefficients() {
        // Cycle {1}, tail 1 -> 2 (weight 2), 2 -> 3 (weight 3), 1 -> 3 (weight 1).
        let a = im(&[&[1, 2, 1], &[0, 0, 3], &[0, 0, 0]]);
        let c = cycle_coefficients(&a).unwrap();
        assert_eq!(coeffs(&c), vec![1, 2, 7]);
    }

    #[test]
    fn positivity_examples() {
        let p = im(&[&[0, 1], &[1, 0]]);
        let id = IntMatrix::identity(p.row_labels().to_vec());
        let v = check_positive_on_cycle(&id, &p, &p).unwrap();
        assert_eq!(v.kappa, big(1));
        assert!(v.positive && v.nonnegative);

        let v = check_positive_on_cycle(&id.neg(), &p, &p).unwrap();
        assert_eq!(v.kappa, big(-1));
        assert!(!v.positive);

        let v = check_positive_on_cycle(&p, &p, &p).unwrap();
        assert_eq!(v.kappa, big(1));

        let two = id.add(&id).unwrap();
        assert!(matches!(
            check_positive_on_cycle(&two, &p, &p),
            Err(Error::NotCokernelIsomorphism(_))
        ));
    }

    #[test]
    fn sl_p_examples() {
        let poset = Poset::chain(vec![l("p"), l("q")]).unwrap();
        let part = Partition::from_blocks([(l("p"), vec![l("1")]), (l("q"), vec![l("2")])]).unwrap();
        let id = PartitionedMatrix::square(im(&[&[1, 0], &[0, 1]]), poset.clone(), part.clone()).unwrap();
        assert!(check_sl_p(&id).unwrap().holds);
        let neg = PartitionedMatrix::square(im(&[&[-1, 0], &[0, -1]]), poset, part).unwrap();
        let v = check_sl_p(&neg).unwrap();
        assert!(!v.holds);
        assert_eq!(det_int(&neg.matrix).unwrap(), big(1));
    }

    fn full_to_two() -> ShiftEquivalence {
        ShiftEquivalence::new(
            im(&[&[1, 1], &[1, 1]]),
            im(&[&[2]]),
            im(&[&[1], &[1]]),
            im(&[&[1, 1]]),
            1,
            Semiring::Zplus,
        )
    }

    #[test]
    fn certificate_non_cycle() {
        let cert = fe_certificate(&full_to_two(), FeOptions::default());
        assert!(cert.overall, "{:?}", cert.failure);
        assert!(cert.positivity.as_ref().unwrap().is_empty());
        assert!(cert.reverify().unwrap());
    }

    #[test]
    fn certificate_cycle() {
        let p = im(&[&[0, 1], &[1, 0]]);
        let se = ShiftEquivalence::identity(&p).unwrap();
        let cert = fe_certificate(&se, FeOptions { row_side_check: true, variant: 0 });
        assert!(cert.overall, "{:?}", cert.failure);
        let pos = cert.positivity.as_ref().unwrap();
        assert_eq!(pos.len(), 1);
        assert_eq!(pos[0].verdict.kappa, big(1));
        assert!(pos[0].l1_nonnegative && pos[0].l2_inverse_nonnegative);
        assert!(cert.reverify().unwrap());
    }

    #[test]
    fn certificate_rejects_invalid_witness() {
        let bad = ShiftEquivalence::new(im(&[&[2]]), im(&[&[3]]), im(&[&[1]]), im(&[&[1]]), 1, Semiring::Zplus);
        let cert = fe_certificate(&bad, FeOptions::default());
        assert!(!cert.overall);
        assert_eq!(cert.failure.as_ref().unwrap().stage, Stage::VerifySe);
        assert!(!cert.reverify().unwrap());
    }

    #[test]
    fn certificate_with_elimination() {
        let a = im(&[&[2, 1, 1], &[0, 0, 1], &[0, 0, 3]]);
        let cert = fe_certificate(&ShiftEquivalence::identity(&a).unwrap(), FeOptions::default());
        assert!(cert.overall, "{:?}", cert.failure);
        assert_eq!(cert.reduction.as_ref().unwrap().chain_a.len(), 1);
        assert!(cert.reverify().unwrap());
    }

    #[test]
    fn nilpotent_input_fails_at_reduction() {
        let a = im(&[&[0, 1], &[0, 0]]);
        let cert = fe_certificate(&ShiftEquivalence::identity(&a).unwrap(), FeOptions::default());
        let f = cert.failure.unwrap();
        assert_eq!(f.stage, Stage::Reduction);
        assert!(!f.message.contains("internal error"));
    }

    #[test]
    fn tampered_certificate_fails_recheck() {
        let p = im(&[&[0, 1], &[1, 0]]);
        let mut cert = fe_certificate(&ShiftEquivalence::identity(&p).unwrap(), FeOptions::default());
        let at_one = cert.at_one.as_mut().unwrap();
        let x = at_one.u1.get(0, 0).clone();
        at_one.u1.set(0, 0, x + 1);
        assert!(!cert.reverify().unwrap());
    }
}
