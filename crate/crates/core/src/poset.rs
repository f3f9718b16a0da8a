//! Finite posets and index partitions.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::Label;

/// A finite poset stored as its full (reflexive, transitive) order relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PosetRepr", into = "PosetRepr")]
pub struct Poset {
    elements: Vec<Label>,
    index: HashMap<Label, usize>,
    le: Vec<Vec<bool>>,
}

#[derive(Serialize, Deserialize)]
struct PosetRepr {
    elements: Vec<Label>,
    covers: Vec<(Label, Label)>,
}

impl TryFrom<PosetRepr> for Poset {
    type Error = Error;
    fn try_from(r: PosetRepr) -> Result<Self> {
        Poset::from_relation(r.elements, &r.covers)
    }
}

impl From<Poset> for PosetRepr {
    fn from(p: Poset) -> Self {
        PosetRepr {
            covers: p.covers(),
            elements: p.elements,
        }
    }
}

impl Poset {
    /// The order generated by `pairs` (each `(p, q)` meaning `p <= q`):
    /// reflexive-transitive closure, rejected unless antisymmetric.
    pub fn from_relation(elements: Vec<Label>, pairs: &[(Label, Label)]) -> Result<Self> {
        let mut elements = elements;
        elements.sort();
        let before = elements.len();
        elements.dedup();
        if elements.len() != before {
            return Err(Error::InvalidPoset("duplicate elements".into()));
        }
        let index: HashMap<Label, usize> =
            elements.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
        let n = elements.len();
        let mut le = vec![vec![false; n]; n];
        for (i, row) in le.iter_mut().enumerate() {
            row[i] = true;
        }
        for (p, q) in pairs {
            let i = *index.get(p).ok_or_else(|| Error::UnknownElement(p.clone()))?;
            let j = *index.get(q).ok_or_else(|| Error::UnknownElement(q.clone()))?;
            le[i][j] = true;
        }
        // Warshall closure.
        for k in 0..n {
            for i in 0..n {
                if le[i][k] {
                    for j in 0..n {
                        if le[k][j] {
                            le[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if le[i][j] && le[j][i] {
                    return Err(Error::InvalidPoset(format!(
                        "{} and {} are related both ways",
                        elements[i], elements[j]
                    )));
                }
            }
        }
        Ok(Poset { elements, index, le })
    }

    /// Accepts `relation` only if it already is a partial order (checked by
    /// enumeration), without closing it.
    pub fn from_order(elements: Vec<Label>, relation: &[(Label, Label)]) -> Result<Self> {
        let closed = Poset::from_relation(elements, relation)?;
        let given: BTreeSet<(&Label, &Label)> = relation.iter().map(|(p, q)| (p, q)).collect();
        for p in &closed.elements {
            if !given.contains(&(p, p)) {
                return Err(Error::InvalidPoset(format!("not reflexive at {p}")));
            }
        }
        for (p, q) in closed.pairs() {
            if !given.contains(&(&p, &q)) {
                return Err(Error::InvalidPoset(format!("not transitive: missing ({p}, {q})")));
            }
        }
        Ok(closed)
    }

    pub fn antichain(elements: Vec<Label>) -> Result<Self> {
        Poset::from_relation(elements, &[])
    }

    /// `elements[0] < elements[1] < ...` in the order given.
    pub fn chain(elements: Vec<Label>) -> Result<Self> {
        let pairs: Vec<(Label, Label)> = elements
            .windows(2)
            .map(|w| (w[0].clone(), w[1].clone()))
            .collect();
        Poset::from_relation(elements, &pairs)
    }

    pub fn elements(&self) -> &[Label] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, p: &Label) -> bool {
        self.index.contains_key(p)
    }

    pub fn position(&self, p: &Label) -> Option<usize> {
        self.index.get(p).copied()
    }

    /// `p <= q`; false when either is not an element.
    pub fn le(&self, p: &Label, q: &Label) -> bool {
        match (self.index.get(p), self.index.get(q)) {
            (Some(&i), Some(&j)) => self.le[i][j],
            _ => false,
        }
    }

    pub fn lt(&self, p: &Label, q: &Label) -> bool {
        p != q && self.le(p, q)
    }

    /// All related pairs `(p, q)` with `p <= q`, including `(p, p)`.
    pub fn pairs(&self) -> Vec<(Label, Label)> {
        let mut out = Vec::new();
        for (i, p) in self.elements.iter().enumerate() {
            for (j, q) in self.elements.iter().enumerate() {
                if self.le[i][j] {
                    out.push((p.clone(), q.clone()));
                }
            }
        }
        out
    }

    /// Cover relations (the transitive reduction).
    pub fn covers(&self) -> Vec<(Label, Label)> {
        let n = self.elements.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i == j || !self.le[i][j] {
                    continue;
                }
                let between = (0..n).any(|k| k != i && k != j && self.le[i][k] && self.le[k][j]);
                if !between {
                    out.push((self.elements[i].clone(), self.elements[j].clone()));
                }
            }
        }
        out
    }

    /// Elements listed so that `p < q` implies `p` comes first; ties broken
    /// canonically.
    pub fn linear_extension(&self) -> Vec<Label> {
        let n = self.elements.len();
        let mut placed = vec![false; n];
        let mut out = Vec::with_capacity(n);
        while out.len() < n {
            let next = (0..n)
                .find(|&j| !placed[j] && (0..n).all(|i| placed[i] || i == j || !self.le[i][j]))
                .expect("partial orders have minimal elements");
            placed[next] = true;
            out.push(self.elements[next].clone());
        }
        out
    }

    /// Whether `map` is a bijection onto `other` with
    /// `p <= r` iff `map(p) <= map(r)`.
    pub fn is_isomorphism(&self, other: &Poset, map: &BTreeMap<Label, Label>) -> bool {
        if self.len() != other.len() || map.len() != self.len() {
            return false;
        }
        let image: BTreeSet<&Label> = map.values().collect();
        if image.len() != other.len() || !image.iter().all(|q| other.contains(q)) {
            return false;
        }
        self.elements.iter().all(|p| {
            self.elements.iter().all(|r| match (map.get(p), map.get(r)) {
                (Some(pp), Some(rr)) => self.le(p, r) == other.le(pp, rr),
                _ => false,
            })
        })
    }
}

/// Assignment of matrix index labels to poset elements.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub assignment: BTreeMap<Label, Label>,
}

impl Partition {
    pub fn new(assignment: BTreeMap<Label, Label>) -> Self {
        Partition { assignment }
    }

    /// Build from explicit blocks, rejecting labels assigned twice.
    pub fn from_blocks<I, J>(blocks: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Label, J)>,
        J: IntoIterator<Item = Label>,
    {
        let mut assignment = BTreeMap::new();
        for (p, members) in blocks {
            for i in members {
                if let Some(prev) = assignment.insert(i.clone(), p.clone()) {
                    return Err(Error::InvalidPartition(format!(
                        "label {i} assigned to both {prev} and {p}"
                    )));
                }
            }
        }
        Ok(Partition { assignment })
    }

    pub fn element_of(&self, label: &Label) -> Option<&Label> {
        self.assignment.get(label)
    }

    /// Members of block `p`, canonically sorted.
    pub fn block(&self, p: &Label) -> Vec<Label> {
        self.assignment
            .iter()
            .filter(|(_, q)| *q == p)
            .map(|(i, _)| i.clone())
            .collect()
    }

    /// Every label of `labels` is assigned, nothing else is, every assigned
    /// element belongs to `poset`, and every block is nonempty.
    pub fn check_covers(&self, labels: &[Label], poset: &Poset) -> Result<()> {
        let set: BTreeSet<&Label> = labels.iter().collect();
        let missing: Vec<&Label> = labels.iter().filter(|l| !self.assignment.contains_key(*l)).collect();
        if !missing.is_empty() {
            return Err(Error::InvalidPartition(format!("unassigned labels {missing:?}")));
        }
        let extra: Vec<&Label> = self.assignment.keys().filter(|l| !set.contains(l)).collect();
        if !extra.is_empty() {
            return Err(Error::InvalidPartition(format!("labels not in the matrix {extra:?}")));
        }
        for p in self.assignment.values() {
            if !poset.contains(p) {
                return Err(Error::UnknownElement(p.clone()));
            }
        }
        let used: BTreeSet<&Label> = self.assignment.values().collect();
        let empty: Vec<&Label> = poset.elements().iter().filter(|p| !used.contains(p)).collect();
        if !empty.is_empty() {
            return Err(Error::InvalidPartition(format!("empty blocks {empty:?}")));
        }
        Ok(())
    }

    /// Rename keys with `f`, keeping block membership.
    pub fn map_labels(&self, f: impl Fn(&Label) -> Label) -> Partition {
        Partition {
            assignment: self.assignment.iter().map(|(k, v)| (f(k), v.clone())).collect(),
        }
    }

    /// Rename poset elements with `f`.
    pub fn map_elements(&self, f: impl Fn(&Label) -> Label) -> Partition {
        Partition {
            assignment: self.assignment.iter().map(|(k, v)| (k.clone(), f(v))).collect(),
        }
    }

    pub fn merged(&self, other: &Partition) -> Result<Partition> {
        Partition::from_blocks(
            self.assignment
                .iter()
                .chain(&other.assignment)
                .map(|(k, v)| (v.clone(), [k.clone()])),
        )
    }
}
