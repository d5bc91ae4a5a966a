//! Finite posets and the order combinatorics built on them: strict pairs
//! and triples, interval lengths, extremal elements, and the two chain
//! equivalences on pairs (`~`) and triples (`≈`).
//!
//! Elements are labeled `1..=n` everywhere in the public API. Strict pairs
//! and triples are indexed in lexicographic order of their labels, and
//! these indices are the basis order used by every other module.

use alloc::vec::Vec;

use crate::dsu::UnionFind;
use crate::error::{Error, Result};

/// A strict pair `x < y`, by label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StrictPair {
    pub x: usize,
    pub y: usize,
}

/// A strict triple `x < y < z`, by label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StrictTriple {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

impl core::fmt::Display for StrictPair {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl core::fmt::Display for StrictTriple {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poset {
    n: usize,
    /// Reflexive order relation, row-major over 0-based indices.
    leq: Vec<bool>,
    /// `l(x, y)` for `x <= y`, zero elsewhere.
    lengths: Vec<usize>,
    pairs: Vec<StrictPair>,
    pair_ids: Vec<usize>,
    triples: Vec<StrictTriple>,
}

impl Poset {
    /// Builds the poset whose order is the reflexive-transitive closure of
    /// the given cover edges `(u, v)`, meaning `u < v`.
    pub fn from_hasse(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut leq = alloc::vec![false; n * n];
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for &(u, v) in edges {
            for label in [u, v] {
                if label == 0 || label > n {
                    return Err(Error::BadLabel { label, n });
                }
            }
            leq[(u - 1) * n + (v - 1)] = true;
        }
        Self::from_relation(n, leq)
    }

    /// Builds a poset from a row-major `n x n` relation matrix over 0-based
    /// indices. The matrix is closed reflexively and transitively first.
    pub fn from_relation(n: usize, mut leq: Vec<bool>) -> Result<Self> {
        assert_eq!(leq.len(), n * n, "relation matrix must be n x n");
        for i in 0..n {
            leq[i * n + i] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if !leq[i * n + k] {
                    continue;
                }
                for j in 0..n {
                    if leq[k * n + j] {
                        leq[i * n + j] = true;
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i * n + j] && leq[j * n + i] {
                    return Err(Error::CycleDetected { x: i + 1, y: j + 1 });
                }
            }
        }
        Ok(Self::build(n, leq))
    }

    pub fn chain(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (i, i + 1)).collect();
        Self::from_hasse(n, &edges).expect("a chain is acyclic")
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_hasse(n, &[]).expect("an antichain is acyclic")
    }

    fn build(n: usize, leq: Vec<bool>) -> Self {
        // A linear extension: strictly larger elements have strictly
        // larger down-sets.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (0..n).filter(|&j| leq[j * n + i]).count());

        let mut lengths = alloc::vec![0usize; n * n];
        for (pos, &y) in order.iter().enumerate() {
            for &z in &order[..pos] {
                if z == y || !leq[z * n + y] {
                    continue;
                }
                // every x <= z gets a chain through z to y
                for x in 0..n {
                    if leq[x * n + z] {
                        let cand = lengths[x * n + z] + 1;
                        if cand > lengths[x * n + y] {
                            lengths[x * n + y] = cand;
                        }
                    }
                }
            }
        }

        let mut pairs = Vec::new();
        let mut pair_ids = alloc::vec![NONE; n * n];
        for x in 0..n {
            for y in 0..n {
                if x != y && leq[x * n + y] {
                    pair_ids[x * n + y] = pairs.len();
                    pairs.push(StrictPair { x: x + 1, y: y + 1 });
                }
            }
        }
        let mut triples = Vec::new();
        for p in &pairs {
            for z in 0..n {
                if z + 1 != p.y && leq[(p.y - 1) * n + z] {
                    triples.push(StrictTriple {
                        x: p.x,
                        y: p.y,
                        z: z + 1,
                    });
                }
            }
        }
        Poset {
            n,
            leq,
            lengths,
            pairs,
            pair_ids,
            triples,
        }
    }

    /// Number of elements.
    pub fn size(&self) -> usize {
        self.n
    }

    fn check(&self, label: usize) -> Result<usize> {
        if label == 0 || label > self.n {
            Err(Error::BadLabel {
                label,
                n: self.n,
            })
        } else {
            Ok(label - 1)
        }
    }

    /// `x <= y`. Panics on labels outside `1..=n`.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        assert!(x >= 1 && x <= self.n && y >= 1 && y <= self.n, "label out of range");
        self.leq[(x - 1) * self.n + (y - 1)]
    }

    pub fn lt(&self, x: usize, y: usize) -> bool {
        x != y && self.leq(x, y)
    }

    pub fn comparable(&self, x: usize, y: usize) -> bool {
        self.leq(x, y) || self.leq(y, x)
    }

    /// True when the labels are pairwise comparable.
    pub fn is_chain(&self, labels: &[usize]) -> bool {
        labels
            .iter()
            .enumerate()
            .all(|(i, &a)| labels[i + 1..].iter().all(|&b| self.comparable(a, b)))
    }

    /// Strict pairs in lexicographic order; position = basis index.
    pub fn pairs(&self) -> &[StrictPair] {
        &self.pairs
    }

    pub fn pair(&self, index: usize) -> StrictPair {
        self.pairs[index]
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    /// Basis index of `x < y`, or `None` if `x < y` does not hold.
    pub fn pair_index(&self, x: usize, y: usize) -> Option<usize> {
        if x == 0 || y == 0 || x > self.n || y > self.n {
            return None;
        }
        match self.pair_ids[(x - 1) * self.n + (y - 1)] {
            NONE => None,
            i => Some(i),
        }
    }

    /// Strict triples in lexicographic order.
    pub fn triples(&self) -> &[StrictTriple] {
        &self.triples
    }

    /// Length of the longest chain in the closed interval `[x, y]`.
    pub fn interval_length(&self, x: usize, y: usize) -> Result<usize> {
        let (i, j) = (self.check(x)?, self.check(y)?);
        if !self.leq[i * self.n + j] {
            return Err(Error::NotComparable { x, y });
        }
        Ok(self.lengths[i * self.n + j])
    }

    /// `l(x, y)` for the pair with the given basis index.
    pub fn pair_length(&self, index: usize) -> usize {
        let p = self.pairs[index];
        self.lengths[(p.x - 1) * self.n + (p.y - 1)]
    }

    /// Length of the longest chain in the poset.
    pub fn length(&self) -> usize {
        (0..self.pairs.len())
            .map(|i| self.pair_length(i))
            .max()
            .unwrap_or(0)
    }

    pub fn min_elements(&self) -> Vec<usize> {
        (1..=self.n)
            .filter(|&x| (1..=self.n).all(|z| !self.lt(z, x)))
            .collect()
    }

    pub fn max_elements(&self) -> Vec<usize> {
        (1..=self.n)
            .filter(|&x| (1..=self.n).all(|z| !self.lt(x, z)))
            .collect()
    }

    pub fn is_minimal(&self, x: usize) -> bool {
        (1..=self.n).all(|z| !self.lt(z, x))
    }

    pub fn is_maximal(&self, x: usize) -> bool {
        (1..=self.n).all(|z| !self.lt(x, z))
    }

    /// Cover relations, lexicographically sorted.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        self.pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| self.pair_length(i) == 1)
            .map(|(_, p)| (p.x, p.y))
            .collect()
    }

    /// The isomorphic poset in which old label `i` becomes `perm[i - 1]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n;
        assert_eq!(perm.len(), n, "permutation length must equal poset size");
        let mut seen = alloc::vec![false; n];
        for &p in perm {
            let i = self.check(p)?;
            assert!(!seen[i], "not a permutation");
            seen[i] = true;
        }
        let mut leq = alloc::vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[(perm[i] - 1) * n + (perm[j] - 1)] = self.leq[i * n + j];
            }
        }
        Ok(Self::build(n, leq))
    }

    /// The order-dual poset (same labels, reversed relation).
    pub fn dual(&self) -> Self {
        let n = self.n;
        let mut leq = alloc::vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                leq[j * n + i] = self.leq[i * n + j];
            }
        }
        Self::build(n, leq)
    }

    /// Relation matrix over 0-based indices, row-major.
    pub fn relation(&self) -> &[bool] {
        &self.leq
    }

    /// The `~` partition of strict pairs: two pairs are directly linked
    /// when all four of their elements are pairwise comparable.
    pub fn sim_partition(&self) -> SimPartition {
        let m = self.pairs.len();
        let mut uf = UnionFind::new(m);
        for a in 0..m {
            let p = self.pairs[a];
            for b in (a + 1)..m {
                let q = self.pairs[b];
                if self.is_chain(&[p.x, p.y, q.x, q.y]) {
                    uf.union(a, b);
                }
            }
        }
        let (classes, class_of) = uf.labels();
        SimPartition { classes, class_of }
    }

    /// The `≈` partition of strict triples, together with its projection
    /// `(x, y, z) -> (x, z)` onto `~` classes.
    pub fn approx_partition(&self, sim: &SimPartition) -> Result<ApproxPartition> {
        let t = self.triples.len();
        let mut uf = UnionFind::new(t);
        for a in 0..t {
            let s = self.triples[a];
            for b in (a + 1)..t {
                let r = self.triples[b];
                if self.is_chain(&[s.x, s.y, s.z, r.x, r.y, r.z]) {
                    uf.union(a, b);
                }
            }
        }
        let (classes, class_of) = uf.labels();
        let mut proj = Vec::with_capacity(classes.len());
        for (c, members) in classes.iter().enumerate() {
            let outer = |i: usize| {
                let tr = self.triples[i];
                sim.class_of(self.pair_index(tr.x, tr.z).expect("x < z"))
            };
            let target = outer(members[0]);
            if members.iter().any(|&i| outer(i) != target) {
                return Err(Error::ProjectionBroken { class: c });
            }
            proj.push(target);
        }
        Ok(ApproxPartition {
            classes,
            class_of,
            proj,
        })
    }

    /// Whether `(x, z) ~ (u, w)` forces `(x, y, z) ≈ (u, v, w)`, i.e. every
    /// `~` class is the projection of at most one `≈` class.
    pub fn sufficient_condition_holds(&self) -> bool {
        let sim = self.sim_partition();
        let approx = self
            .approx_partition(&sim)
            .expect("projection of approx classes is well defined");
        let mut hits = alloc::vec![0usize; sim.len()];
        for c in 0..approx.len() {
            hits[approx.proj(c)] += 1;
        }
        hits.iter().all(|&h| h <= 1)
    }
}

/// Partition of strict pairs into `~` classes. Class ids are dense and
/// ordered by each class's smallest pair index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimPartition {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl SimPartition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Pair indices in the class, ascending.
    pub fn members(&self, class: usize) -> &[usize] {
        &self.classes[class]
    }

    pub fn class_of(&self, pair: usize) -> usize {
        self.class_of[pair]
    }

    /// Smallest pair index of the class.
    pub fn representative(&self, class: usize) -> usize {
        self.classes[class][0]
    }
}

/// Partition of strict triples into `≈` classes, with the projection onto
/// `~` classes of pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApproxPartition {
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
    proj: Vec<usize>,
}

impl ApproxPartition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Triple indices in the class, ascending.
    pub fn members(&self, class: usize) -> &[usize] {
        &self.classes[class]
    }

    pub fn class_of(&self, triple: usize) -> usize {
        self.class_of[triple]
    }

    pub fn representative(&self, class: usize) -> usize {
        self.classes[class][0]
    }

    /// The `~` class containing `(x, z)` for every `(x, y, z)` in the class.
    pub fn proj(&self, class: usize) -> usize {
        self.proj[class]
    }
}
