//! Irreducible components, component posets and poset-partitioned matrices.
//!
//! A square nonnegative matrix is read as a digraph with an edge `i -> j`
//! whenever `A(i, j) > 0`. Its irreducible components are the strongly
//! connected components that contain at least one edge; the remaining
//! vertices are "trivial" indices.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::Label;
use crate::matrix::{IntMatrix, Matrix, Scalar};
use crate::poset::{Partition, Poset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComponentKind {
    /// A cyclic permutation matrix (including the 1x1 matrix `[1]`).
    Cycle,
    IrreducibleNoncycle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    /// Canonically smallest member label.
    pub name: Label,
    pub members: Vec<Label>,
    pub kind: ComponentKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    pub components: Vec<Component>,
    pub trivial_indices: Vec<Label>,
    pub poset: Poset,
}

impl ComponentReport {
    pub fn component(&self, name: &Label) -> Option<&Component> {
        self.components.iter().find(|c| &c.name == name)
    }

    pub fn component_of(&self, index: &Label) -> Option<&Component> {
        self.components.iter().find(|c| c.members.contains(index))
    }
}

/// Strongly connected components of a digraph given by adjacency lists,
/// emitted sinks first (reverse topological order of the condensation).
pub(crate) fn tarjan(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut sccs = Vec::new();
    let mut counter = 0;
    for root in 0..n {
        if index[root] != usize::MAX {
            continue;
        }
        // (vertex, next neighbour position)
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = counter;
        low[root] = counter;
        counter += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < adj[v].len() {
                let w = adj[v][*pos];
                *pos += 1;
                if index[w] == usize::MAX {
                    index[w] = counter;
                    low[w] = counter;
                    counter += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(parent, _)) = call.last() {
                    low[parent] = low[parent].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut scc = Vec::new();
                    loop {
                        let w = stack.pop().expect("tarjan stack");
                        on_stack[w] = false;
                        scc.push(w);
                        if w == v {
                            break;
                        }
                    }
                    scc.sort_unstable();
                    sccs.push(scc);
                }
            }
        }
    }
    sccs
}

/// Path structure of a square nonnegative matrix.
#[derive(Clone, Debug)]
pub struct Reachability {
    pub labels: Vec<Label>,
    /// SCCs in reverse topological order (sinks first), members sorted by
    /// position in `labels`.
    pub sccs: Vec<Vec<usize>>,
    scc_of: Vec<usize>,
    cyclic: Vec<bool>,
    // reach[a][b]: SCC b reachable from SCC a by a path of length >= 0.
    reach: Vec<Vec<bool>>,
}

impl Reachability {
    /// Requires a square matrix with nonnegative entries.
    pub fn new(a: &IntMatrix) -> Result<Self> {
        let a = a.canonical().aligned_square()?;
        if let Some((row, col)) = a.first_negative() {
            return Err(Error::NegativeEntry { row, col });
        }
        let n = a.nrows();
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..n).filter(|&j| !a.get(i, j).is_zero()).collect())
            .collect();
        let sccs = tarjan(&adj);
        let mut scc_of = vec![0; n];
        for (k, scc) in sccs.iter().enumerate() {
            for &v in scc {
                scc_of[v] = k;
            }
        }
        let cyclic: Vec<bool> = sccs
            .iter()
            .map(|scc| scc.len() > 1 || !a.get(scc[0], scc[0]).is_zero())
            .collect();
        let m = sccs.len();
        let mut reach = vec![vec![false; m]; m];
        // Sinks come first, so successors are finished before predecessors.
        for k in 0..m {
            reach[k][k] = true;
            for &v in &sccs[k] {
                for &w in &adj[v] {
                    let t = scc_of[w];
                    if t != k {
                        let (lo, hi) = reach.split_at_mut(k);
                        debug_assert!(t < k);
                        for (dst, &src) in hi[0].iter_mut().zip(&lo[t]) {
                            *dst |= src;
                        }
                    }
                }
            }
        }
        Ok(Reachability {
            labels: a.row_labels().to_vec(),
            sccs,
            scc_of,
            cyclic,
            reach,
        })
    }

    pub fn position(&self, l: &Label) -> Option<usize> {
        self.labels.iter().position(|x| x == l)
    }

    /// Whether some `k > 0` has `A^k(i, j) > 0`.
    pub fn path(&self, i: usize, j: usize) -> bool {
        let (a, b) = (self.scc_of[i], self.scc_of[j]);
        if a == b {
            self.cyclic[a]
        } else {
            self.reach[a][b]
        }
    }

    pub fn scc_is_cyclic(&self, k: usize) -> bool {
        self.cyclic[k]
    }

    pub fn scc_of(&self, i: usize) -> usize {
        self.scc_of[i]
    }

    /// Indices reachable from `i` by a path of length at least one.
    pub fn successors_closure(&self, i: usize) -> Vec<usize> {
        (0..self.labels.len()).filter(|&j| self.path(i, j)).collect()
    }
}

/// Whether `m` is the matrix of a single cyclic permutation.
pub fn is_cyclic_permutation(m: &IntMatrix) -> bool {
    let Ok(m) = m.aligned_square() else {
        return false;
    };
    let n = m.nrows();
    if n == 0 {
        return false;
    }
    let mut target = vec![usize::MAX; n];
    let mut hit = vec![false; n];
    for i in 0..n {
        for j in 0..n {
            let x = m.get(i, j);
            if x.is_zero() {
                continue;
            }
            if !x.is_one() || target[i] != usize::MAX || hit[j] {
                return false;
            }
            target[i] = j;
            hit[j] = true;
        }
        if target[i] == usize::MAX {
            return false;
        }
    }
    // One orbit covering everything.
    let mut v = target[0];
    let mut len = 1;
    while v != 0 {
        v = target[v];
        len += 1;
        if len > n {
            return false;
        }
    }
    len == n
}

pub fn irreducible_components(a: &IntMatrix) -> Result<ComponentReport> {
    let reach = Reachability::new(a)?;
    let a = a.canonical();
    let labels = &reach.labels;
    let mut components = Vec::new();
    let mut comp_scc = Vec::new();
    let mut trivial_indices = Vec::new();
    for (k, scc) in reach.sccs.iter().enumerate() {
        let members: Vec<Label> = scc.iter().map(|&i| labels[i].clone()).collect();
        if reach.scc_is_cyclic(k) {
            let block = a.principal(&members)?;
            let kind = if is_cyclic_permutation(&block) {
                ComponentKind::Cycle
            } else {
                ComponentKind::IrreducibleNoncycle
            };
            components.push(Component {
                name: members[0].clone(),
                members,
                kind,
            });
            comp_scc.push(k);
        } else {
            trivial_indices.extend(members);
        }
    }
    let mut pairs = Vec::new();
    for (x, &kx) in comp_scc.iter().enumerate() {
        for (y, &ky) in comp_scc.iter().enumerate() {
            if x != y && reach.reach[kx][ky] {
                pairs.push((components[x].name.clone(), components[y].name.clone()));
            }
        }
    }
    let poset = Poset::from_relation(components.iter().map(|c| c.name.clone()).collect(), &pairs)
        .map_err(|e| Error::Internal(format!("component order: {e}")))?;
    components.sort_by(|x, y| x.name.cmp(&y.name));
    trivial_indices.sort();
    Ok(ComponentReport {
        components,
        trivial_indices,
        poset,
    })
}

/// Nonempty-block, compatibility-checked partitioned matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Scalar", deserialize = "T: Scalar"))]
pub struct PartitionedMatrix<T: Scalar> {
    pub matrix: Matrix<T>,
    pub poset: Poset,
    pub row_partition: Partition,
    pub col_partition: Partition,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionVerdict {
    pub valid: bool,
    /// `(row, col)` label pairs with a nonzero entry whose blocks `(r, s)`
    /// violate `r <= s`.
    pub violations: Vec<(Label, Label)>,
}

/// Compatibility of the zero pattern of `m` with the poset.
pub fn validate_partitioned<T: Scalar>(
    m: &Matrix<T>,
    poset: &Poset,
    row_partition: &Partition,
    col_partition: &Partition,
) -> Result<PartitionVerdict> {
    row_partition.check_covers(m.row_labels(), poset)?;
    col_partition.check_covers(m.col_labels(), poset)?;
    let mut violations = Vec::new();
    for (i, rl) in m.row_labels().iter().enumerate() {
        let r = &row_partition.assignment[rl];
        for (j, cl) in m.col_labels().iter().enumerate() {
            if m.get(i, j).is_zero() {
                continue;
            }
            let s = &col_partition.assignment[cl];
            if !poset.le(r, s) {
                violations.push((rl.clone(), cl.clone()));
            }
        }
    }
    violations.sort();
    Ok(PartitionVerdict {
        valid: violations.is_empty(),
        violations,
    })
}

impl<T: Scalar> PartitionedMatrix<T> {
    pub fn new(
        matrix: Matrix<T>,
        poset: Poset,
        row_partition: Partition,
        col_partition: Partition,
    ) -> Result<Self> {
        let v = validate_partitioned(&matrix, &poset, &row_partition, &col_partition)?;
        if !v.valid {
            return Err(Error::InvalidPartition(format!(
                "nonzero entries below the order at {:?}",
                v.violations
            )));
        }
        Ok(PartitionedMatrix {
            matrix,
            poset,
            row_partition,
            col_partition,
        })
    }

    /// Square matrix with equal row and column partitions.
    pub fn square(matrix: Matrix<T>, poset: Poset, partition: Partition) -> Result<Self> {
        PartitionedMatrix::new(matrix, poset, partition.clone(), partition)
    }

    pub fn block(&self, p: &Label, q: &Label) -> Result<Matrix<T>> {
        if !self.poset.contains(p) {
            return Err(Error::UnknownElement(p.clone()));
        }
        if !self.poset.contains(q) {
            return Err(Error::UnknownElement(q.clone()));
        }
        self.matrix
            .restrict(&self.row_partition.block(p), &self.col_partition.block(q))
    }

    pub fn diagonal_block(&self, p: &Label) -> Result<Matrix<T>> {
        self.block(p, p)
    }

    pub fn validate(&self) -> Result<PartitionVerdict> {
        validate_partitioned(&self.matrix, &self.poset, &self.row_partition, &self.col_partition)
    }

    /// Product with the induced partitions (rows of `self`, columns of
    /// `other`).
    pub fn mat_mul(&self, other: &Self) -> Result<Self> {
        if self.col_partition != other.row_partition {
            return Err(Error::InvalidPartition(
                "inner partitions of a partitioned product differ".into(),
            ));
        }
        Ok(PartitionedMatrix {
            matrix: self.matrix.mat_mul(&other.matrix)?,
            poset: self.poset.clone(),
            row_partition: self.row_partition.clone(),
            col_partition: other.col_partition.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum MpDeltaVerdict {
    Holds,
    /// Condition (1): the diagonal block is not an irreducible component.
    BlockNotComponent { element: Label },
    /// Condition (2): the order disagrees with block reachability.
    ReachabilityMismatch {
        p: Label,
        q: Label,
        related: bool,
        reachable: bool,
    },
    RowColumnPartitionsDiffer,
    NegativeEntry { row: Label, col: Label },
}

impl MpDeltaVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, MpDeltaVerdict::Holds)
    }
}

/// Membership in the class of partitioned matrices whose diagonal blocks are
/// exactly the irreducible components and whose order is reachability.
pub fn check_m_p_delta(a: &PartitionedMatrix<BigInt>) -> Result<MpDeltaVerdict> {
    if a.row_partition != a.col_partition {
        return Ok(MpDeltaVerdict::RowColumnPartitionsDiffer);
    }
    if let Some((row, col)) = a.matrix.first_negative() {
        return Ok(MpDeltaVerdict::NegativeEntry { row, col });
    }
    let report = irreducible_components(&a.matrix)?;
    let comp_sets: BTreeSet<Vec<Label>> = report.components.iter().map(|c| c.members.clone()).collect();
    for p in a.poset.elements() {
        if !comp_sets.contains(&a.row_partition.block(p)) {
            return Ok(MpDeltaVerdict::BlockNotComponent { element: p.clone() });
        }
    }
    let reach = Reachability::new(&a.matrix)?;
    let blocks: HashMap<&Label, Vec<usize>> = a
        .poset
        .elements()
        .iter()
        .map(|p| {
            let idx = a
                .row_partition
                .block(p)
                .iter()
                .map(|l| reach.position(l).expect("partition covers labels"))
                .collect();
            (p, idx)
        })
        .collect();
    for p in a.poset.elements() {
        for q in a.poset.elements() {
            let reachable = blocks[p].iter().any(|&i| blocks[q].iter().any(|&j| reach.path(i, j)));
            let related = a.poset.le(p, q);
            if reachable != related {
                return Ok(MpDeltaVerdict::ReachabilityMismatch {
                    p: p.clone(),
                    q: q.clone(),
                    related,
                    reachable,
                });
            }
        }
    }
    Ok(MpDeltaVerdict::Holds)
}

/// The unique partition by irreducible components, over the component poset.
pub fn canonical_partition(a: &IntMatrix) -> Result<PartitionedMatrix<BigInt>> {
    let report = irreducible_components(a)?;
    if !report.trivial_indices.is_empty() {
        return Err(Error::TrivialIndices(report.trivial_indices));
    }
    let partition = Partition::from_blocks(
        report
            .components
            .iter()
            .map(|c| (c.name.clone(), c.members.clone())),
    )?;
    PartitionedMatrix::square(a.clone(), report.poset, partition)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockClass {
    CycleComponent,
    IrreducibleNoncycle,
    /// Exactly one irreducible component, a cyclic permutation, plus at
    /// least one trivial index.
    EssentiallyCyclic,
    Other,
}

/// Classify a square nonnegative matrix on its own.
pub fn classify_square(m: &IntMatrix) -> Result<BlockClass> {
    if is_cyclic_permutation(m) {
        return Ok(BlockClass::CycleComponent);
    }
    let report = irreducible_components(m)?;
    Ok(match report.components.as_slice() {
        [c] if report.trivial_indices.is_empty() => match c.kind {
            ComponentKind::Cycle => BlockClass::CycleComponent,
            ComponentKind::IrreducibleNoncycle => BlockClass::IrreducibleNoncycle,
        },
        [c] if c.kind == ComponentKind::Cycle => BlockClass::EssentiallyCyclic,
        _ => BlockClass::Other,
    })
}

/// Essentially cyclic in the broad sense: the unique irreducible component is
/// a cyclic permutation (a cycle component itself qualifies).
pub fn is_essentially_cyclic(m: &IntMatrix) -> bool {
    matches!(
        classify_square(m),
        Ok(BlockClass::CycleComponent | BlockClass::EssentiallyCyclic)
    )
}

pub fn classify_block(a: &PartitionedMatrix<BigInt>, p: &Label) -> Result<BlockClass> {
    classify_square(&a.diagonal_block(p)?)
}

/// Per-element classification of every diagonal block.
pub fn classify_blocks(a: &PartitionedMatrix<BigInt>) -> Result<BTreeMap<Label, BlockClass>> {
    a.poset
        .elements()
        .iter()
        .map(|p| Ok((p.clone(), classify_block(a, p)?)))
        .collect()
}

/// Boolean-power oracle: `k > 0` with `A^k(i, j) > 0`, checked by powers up
/// to the side length.
pub fn reachable_by_powers(a: &IntMatrix) -> Result<Vec<Vec<bool>>> {
    let a = a.canonical().aligned_square()?;
    let n = a.nrows();
    let b = a.map(|x| if x.is_positive() { BigInt::one() } else { BigInt::zero() });
    let mut out = vec![vec![false; n]; n];
    let mut pow = b.clone();
    for _ in 0..n {
        for (i, row) in out.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                if !pow.get(i, j).is_zero() {
                    *cell = true;
                }
            }
        }
        pow = pow.mat_mul(&b)?.map(|x| if x.is_positive() { BigInt::one() } else { BigInt::zero() });
    }
    Ok(out)
}
