//! Seeded random instances: shift equivalences over Zplus assembled from
//! elementary steps, structured block-triangular matrices, essentially
//! cyclic matrices and positive cokernel isomorphisms between them.

use num_bigint::BigInt;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::components::irreducible_components;
use crate::label::default_labels;
use crate::matrix::IntMatrix;
use crate::shift::{compose_se, Semiring, ShiftEquivalence};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenConfig {
    pub max_side: usize,
    pub max_lag: usize,
    /// Bound on the entries of every matrix in a single elementary step.
    pub max_entry: i64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            max_side: 6,
            max_lag: 4,
            max_entry: 3,
        }
    }
}

/// How the first matrix of a random chain is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeedKind {
    /// `A = RS`, `B = SR` for random sparse factors.
    Product,
    /// Block upper triangular with the given number of irreducible
    /// components and trivial indices.
    Structured { components: usize, trivial: usize },
    /// Either of the above at random.
    Any,
}

#[derive(Clone, Copy, Debug)]
enum BlockKind {
    Cycle(usize),
    Irreducible(usize),
    Trivial,
}

impl BlockKind {
    fn size(self) -> usize {
        match self {
            BlockKind::Cycle(k) | BlockKind::Irreducible(k) => k,
            BlockKind::Trivial => 1,
        }
    }
}

pub struct Generator {
    rng: ChaCha8Rng,
    cfg: GenConfig,
}

fn from_rows(rows: Vec<Vec<i64>>) -> IntMatrix {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    let entries = rows.into_iter().flatten().map(BigInt::from).collect();
    IntMatrix::new(default_labels(n), default_labels(m), entries).expect("rectangular rows")
}

fn to_rows(m: &IntMatrix) -> Vec<Vec<i64>> {
    m.rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| i64::try_from(x).expect("small entry")).collect())
        .collect()
}

fn max_entry(m: &IntMatrix) -> Option<i64> {
    m.entries().iter().map(|x| i64::try_from(x).ok()).max().flatten()
}

impl Generator {
    pub fn new(seed: u64) -> Self {
        Generator::with_config(seed, GenConfig::default())
    }

    pub fn with_config(seed: u64, cfg: GenConfig) -> Self {
        Generator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            cfg,
        }
    }

    /// Independent stream for instance `index` of a batch, so results do
    /// not depend on scheduling.
    pub fn for_instance(seed: u64, index: u64, cfg: GenConfig) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Generator { rng, cfg }
    }

    pub fn config(&self) -> GenConfig {
        self.cfg
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn entry(&mut self, lo: i64) -> i64 {
        self.rng.random_range(lo..=self.cfg.max_entry)
    }

    fn sparse_entry(&mut self) -> i64 {
        match self.rng.random_range(0..20) {
            0..=9 => 0,
            10..=16 => 1,
            17..=18 => 2.min(self.cfg.max_entry),
            _ => self.cfg.max_entry,
        }
    }

    fn permutation(&mut self, n: usize) -> Vec<usize> {
        let mut p: Vec<usize> = (0..n).collect();
        p.shuffle(&mut self.rng);
        p
    }

    /// Conjugate by a random relabeling so that structure is not visible in
    /// the label order.
    fn shuffled(&mut self, rows: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
        let n = rows.len();
        let p = self.permutation(n);
        let mut out = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                out[p[i]][p[j]] = rows[i][j];
            }
        }
        out
    }

    fn block_matrix(&mut self, mut blocks: Vec<BlockKind>) -> IntMatrix {
        blocks.shuffle(&mut self.rng);
        let n: usize = blocks.iter().map(|b| b.size()).sum();
        let mut rows = vec![vec![0i64; n]; n];
        let mut start = 0;
        let mut starts = Vec::new();
        for &b in &blocks {
            starts.push(start);
            match b {
                BlockKind::Cycle(k) => {
                    for i in 0..k {
                        rows[start + i][start + (i + 1) % k] = 1;
                    }
                }
                BlockKind::Irreducible(1) => rows[start][start] = self.entry(2),
                BlockKind::Irreducible(k) => {
                    for i in 0..k {
                        for j in 0..k {
                            rows[start + i][start + j] = self.entry(1);
                        }
                    }
                }
                BlockKind::Trivial => {}
            }
            start += b.size();
        }
        for (x, &bx) in blocks.iter().enumerate() {
            for (y, &by) in blocks.iter().enumerate().skip(x + 1) {
                if !self.rng.random_bool(0.6) {
                    continue;
                }
                for i in 0..bx.size() {
                    for j in 0..by.size() {
                        rows[starts[x] + i][starts[y] + j] = self.sparse_entry();
                    }
                }
            }
        }
        from_rows(self.shuffled(rows))
    }

    fn component_block(&mut self, allow_cycles: bool) -> BlockKind {
        let k = self.rng.random_range(1..=2);
        if allow_cycles && self.rng.random_bool(0.4) {
            BlockKind::Cycle(k)
        } else {
            BlockKind::Irreducible(k)
        }
    }

    /// Block upper triangular matrix (up to relabeling) with `components`
    /// irreducible components and `trivial` trivial indices. Sizes are cut
    /// to fit the side bound.
    pub fn structured_matrix(&mut self, components: usize, trivial: usize) -> IntMatrix {
        let components = components.max(1);
        let mut blocks: Vec<BlockKind> = (0..components).map(|_| self.component_block(true)).collect();
        blocks.extend((0..trivial).map(|_| BlockKind::Trivial));
        loop {
            let n: usize = blocks.iter().map(|b| b.size()).sum();
            if n <= self.cfg.max_side {
                break;
            }
            if let Some(pos) = blocks.iter().position(|b| b.size() > 1) {
                blocks[pos] = match blocks[pos] {
                    BlockKind::Cycle(_) => BlockKind::Cycle(1),
                    _ => BlockKind::Irreducible(1),
                };
            } else if let Some(pos) = blocks.iter().position(|b| matches!(b, BlockKind::Trivial)) {
                blocks.remove(pos);
            } else {
                blocks.pop();
            }
        }
        self.block_matrix(blocks)
    }

    /// One cyclic permutation block plus trivial indices feeding into it or
    /// fed by it.
    pub fn essentially_cyclic(&mut self) -> IntMatrix {
        let k = self.rng.random_range(1..=3);
        let trivial = self.rng.random_range(0..=(self.cfg.max_side - k).min(3));
        let mut blocks = vec![BlockKind::Cycle(k)];
        blocks.extend((0..trivial).map(|_| BlockKind::Trivial));
        self.block_matrix(blocks)
    }

    /// `A = RS`, `B = SR` with sparse random factors and bounded entries;
    /// `None` if no acceptable pair turned up.
    pub fn product_pair(&mut self) -> Option<ShiftEquivalence> {
        for _ in 0..64 {
            let n = self.rng.random_range(1..=self.cfg.max_side.min(4));
            let m = self.rng.random_range(1..=self.cfg.max_side.min(4));
            let r: Vec<Vec<i64>> = (0..n).map(|_| (0..m).map(|_| self.sparse_entry()).collect()).collect();
            let s: Vec<Vec<i64>> = (0..m).map(|_| (0..n).map(|_| self.sparse_entry()).collect()).collect();
            let (r, s) = (from_rows(r), from_rows(s));
            let a = r.mat_mul(&s).expect("shapes");
            let b = s.mat_mul(&r).expect("shapes");
            let small = [&a, &b].iter().all(|x| max_entry(x).is_some_and(|e| e <= self.cfg.max_entry));
            let live = irreducible_components(&a).is_ok_and(|rep| !rep.components.is_empty());
            if small && live {
                return Some(ShiftEquivalence::new(a, b, r, s, 1, Semiring::Zplus));
            }
        }
        None
    }

    /// Out-split of row `v` of `a` into two nonzero parts.
    fn out_split(&mut self, a: &IntMatrix) -> Option<ShiftEquivalence> {
        let n = a.nrows();
        if n >= self.cfg.max_side {
            return None;
        }
        let rows = to_rows(a);
        let candidates: Vec<usize> = (0..n).filter(|&v| rows[v].iter().sum::<i64>() >= 2).collect();
        let &v = candidates.as_slice().choose(&mut self.rng)?;
        let (r1, r2) = loop {
            let r1: Vec<i64> = rows[v].iter().map(|&x| self.rng.random_range(0..=x)).collect();
            let r2: Vec<i64> = rows[v].iter().zip(&r1).map(|(x, y)| x - y).collect();
            if r1.iter().any(|&x| x > 0) && r2.iter().any(|&x| x > 0) {
                break (r1, r2);
            }
        };
        let mut d = vec![vec![0; n + 1]; n];
        for (i, row) in d.iter_mut().enumerate() {
            row[i] = 1;
        }
        d[v][n] = 1;
        let mut e = rows.clone();
        e[v] = r1;
        e.push(r2);
        let (d, e) = (from_rows(d), from_rows(e));
        let b = e.mat_mul(&d).expect("shapes");
        Some(ShiftEquivalence::new(a.clone(), b, d, e, 1, Semiring::Zplus))
    }

    fn in_split(&mut self, a: &IntMatrix) -> Option<ShiftEquivalence> {
        let w = self.out_split(&a.transpose())?;
        Some(ShiftEquivalence::new(
            a.clone(),
            w.b.transpose(),
            w.s.transpose(),
            w.r.transpose(),
            1,
            Semiring::Zplus,
        ))
    }

    fn relabel(&mut self, a: &IntMatrix) -> ShiftEquivalence {
        let n = a.nrows();
        let p = self.permutation(n);
        let mut q = vec![vec![0; n]; n];
        for (i, &pi) in p.iter().enumerate() {
            q[pi][i] = 1;
        }
        let q = from_rows(q);
        let r = a.mat_mul(&q.transpose()).expect("shapes");
        let b = q.mat_mul(&r).expect("shapes");
        ShiftEquivalence::new(a.clone(), b, r, q, 1, Semiring::Zplus)
    }

    /// A random elementary step starting at `a` (labels `1..n` in order).
    pub fn esse_step(&mut self, a: &IntMatrix) -> ShiftEquivalence {
        let roll = self.rng.random_range(0..10);
        let step = match roll {
            0..=3 => self.out_split(a),
            4..=7 => self.in_split(a),
            8 => Some(self.relabel(a)),
            _ => None,
        };
        step.unwrap_or_else(|| {
            if self.rng.random_bool(0.5) {
                self.relabel(a)
            } else {
                ShiftEquivalence::identity(a).expect("square")
            }
        })
    }

    /// Extend `first` by `steps` random elementary steps.
    pub fn extend_chain(&mut self, first: ShiftEquivalence, steps: usize) -> ShiftEquivalence {
        let mut acc = first;
        for _ in 0..steps {
            let next = self.esse_step(&acc.b);
            acc = compose_se(&acc, &next).expect("chained steps compose");
        }
        acc
    }

    fn finish(&mut self, se: ShiftEquivalence) -> ShiftEquivalence {
        if self.rng.random_bool(0.5) {
            se.inverse()
        } else {
            se
        }
    }

    /// Random shift equivalence with lag at most the configured bound.
    pub fn random_se(&mut self, kind: SeedKind) -> ShiftEquivalence {
        let lag = self.rng.random_range(1..=self.cfg.max_lag);
        let kind = match kind {
            SeedKind::Any if self.rng.random_bool(0.5) => SeedKind::Product,
            SeedKind::Any => {
                let components = self.rng.random_range(1..=3);
                let trivial = self.rng.random_range(0..=2);
                SeedKind::Structured { components, trivial }
            }
            k => k,
        };
        let first = match kind {
            SeedKind::Product => self.product_pair(),
            _ => None,
        };
        let se = match first {
            Some(first) => self.extend_chain(first, lag - 1),
            None => {
                let (components, trivial) = match kind {
                    SeedKind::Structured { components, trivial } => (components, trivial),
                    _ => (1, 0),
                };
                let a = self.structured_matrix(components, trivial);
                let first = self.esse_step(&a);
                self.extend_chain(first, lag - 1)
            }
        };
        self.finish(se)
    }

    /// Nonnegative `U` with `U (I - A) = (I - B) U`, `U` unimodular, built
    /// from a relabeling and elementary operations on source indices (zero
    /// columns). Returns `(U, B)`.
    pub fn positive_unimodular(&mut self, a: &IntMatrix) -> (IntMatrix, IntMatrix) {
        let n = a.nrows();
        let mut m = to_rows(a);
        let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        let sources: Vec<usize> = (0..n).filter(|&i| (0..n).all(|k| m[k][i] == 0)).collect();
        if !sources.is_empty() && n > 1 {
            for _ in 0..self.rng.random_range(1..=3) {
                let &i = sources.as_slice().choose(&mut self.rng).expect("nonempty");
                let j = loop {
                    let j = self.rng.random_range(0..n);
                    if j != i {
                        break j;
                    }
                };
                let x = self.rng.random_range(1..=2);
                // E = I + x e_i e_j^T; E A E^-1 = A + x e_i (row j of A).
                let row_j = m[j].clone();
                for (dst, src) in m[i].iter_mut().zip(&row_j) {
                    *dst += x * src;
                }
                let u_row_j = u[j].clone();
                for (dst, src) in u[i].iter_mut().zip(&u_row_j) {
                    *dst += x * src;
                }
            }
        }
        let p = self.permutation(n);
        let mut b = vec![vec![0; n]; n];
        let mut pu = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                b[p[i]][p[j]] = m[i][j];
            }
            pu[p[i]].clone_from(&u[i]);
        }
        (from_rows(pu), from_rows(b))
    }

    /// Uniform entries in `[lo, hi]`.
    pub fn int_matrix(&mut self, rows: usize, cols: usize, lo: i64, hi: i64) -> IntMatrix {
        let data = (0..rows)
            .map(|_| (0..cols).map(|_| self.rng.random_range(lo..=hi)).collect())
            .collect();
        from_rows(data)
    }
}
