//! Exact sparse Gaussian elimination over any [`Field`].
//!
//! Rows and vectors are sparse: sorted `(column, value)` lists with no
//! explicit zeros. Subspaces are stored in reduced row-echelon form, which
//! is canonical, so subspace equality is plain equality of bases.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::field::Field;

pub type SparseRow<E> = Vec<(usize, E)>;

/// Sorts terms by column, merges duplicates and drops zeros.
pub fn normalize<F: Field>(field: &F, mut terms: Vec<(usize, F::Elem)>) -> SparseRow<F::Elem> {
    terms.sort_by_key(|t| t.0);
    let mut out: SparseRow<F::Elem> = Vec::with_capacity(terms.len());
    for (c, v) in terms {
        match out.last_mut() {
            Some(last) if last.0 == c => last.1 = field.add(&last.1, &v),
            _ => out.push((c, v)),
        }
    }
    out.retain(|(_, v)| !field.is_zero(v));
    out
}

/// `a - c * b` for sorted sparse rows.
fn sub_scaled<F: Field>(
    field: &F,
    a: &[(usize, F::Elem)],
    c: &F::Elem,
    b: &[(usize, F::Elem)],
) -> SparseRow<F::Elem> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, field.neg(&field.mul(c, &b[j].1))));
            j += 1;
        } else {
            let v = field.sub(&a[i].1, &field.mul(c, &b[j].1));
            if !field.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn scale_row<F: Field>(field: &F, c: &F::Elem, row: &[(usize, F::Elem)]) -> SparseRow<F::Elem> {
    if field.is_zero(c) {
        return Vec::new();
    }
    row.iter().map(|(i, v)| (*i, field.mul(c, v))).collect()
}

/// A homogeneous linear system given by sparse coefficient rows.
#[derive(Debug, Clone)]
pub struct LinearSystem<E> {
    cols: usize,
    rows: Vec<SparseRow<E>>,
}

impl<E: Clone> LinearSystem<E> {
    pub fn new(cols: usize) -> Self {
        LinearSystem {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[SparseRow<E>] {
        &self.rows
    }

    /// Adds a normalized row; empty rows are skipped.
    pub fn push(&mut self, row: SparseRow<E>) {
        debug_assert!(row.iter().all(|(c, _)| *c < self.cols));
        if !row.is_empty() {
            self.rows.push(row);
        }
    }
}

/// Incremental row echelon form with unit pivots.
struct Echelon<'f, F: Field> {
    field: &'f F,
    pivots: BTreeMap<usize, SparseRow<F::Elem>>,
}

impl<'f, F: Field> Echelon<'f, F> {
    fn new(field: &'f F) -> Self {
        Echelon {
            field,
            pivots: BTreeMap::new(),
        }
    }

    /// Eliminates leading entries until the lead column has no pivot.
    fn reduce(&self, mut row: SparseRow<F::Elem>) -> SparseRow<F::Elem> {
        while let Some((lead, c)) = row.first().cloned() {
            match self.pivots.get(&lead) {
                Some(p) => row = sub_scaled(self.field, &row, &c, p),
                None => break,
            }
        }
        row
    }

    fn insert(&mut self, row: SparseRow<F::Elem>) -> bool {
        let row = self.reduce(row);
        let Some((lead, c)) = row.first().cloned() else {
            return false;
        };
        let inv = self.field.inv(&c).expect("lead entry is nonzero");
        self.pivots.insert(lead, scale_row(self.field, &inv, &row));
        true
    }

    fn into_rref(mut self) -> Vec<SparseRow<F::Elem>> {
        let cols: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for &c in &cols {
            let mut row = self.pivots.remove(&c).expect("pivot present");
            let targets: Vec<(usize, F::Elem)> = row
                .iter()
                .skip(1)
                .filter(|(d, _)| self.pivots.contains_key(d))
                .cloned()
                .collect();
            for (d, v) in targets {
                if let Some(p) = self.pivots.get(&d) {
                    row = sub_scaled(self.field, &row, &v, p);
                }
            }
            self.pivots.insert(c, row);
        }
        self.pivots.into_values().collect()
    }
}

/// A subspace of `F^n`, stored as its reduced row-echelon basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace<E> {
    ambient_dim: usize,
    basis: Vec<SparseRow<E>>,
}

impl<E: Clone + PartialEq> Subspace<E> {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    /// The span of arbitrary (normalized) vectors.
    pub fn span<F: Field<Elem = E>>(field: &F, ambient_dim: usize, vectors: Vec<SparseRow<E>>) -> Self {
        let mut ech = Echelon::new(field);
        for v in vectors {
            debug_assert!(v.iter().all(|(c, _)| *c < ambient_dim));
            ech.insert(v);
        }
        Subspace {
            ambient_dim,
            basis: ech.into_rref(),
        }
    }

    pub fn full<F: Field<Elem = E>>(field: &F, ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: (0..ambient_dim).map(|i| alloc::vec![(i, field.one())]).collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Basis rows in reduced echelon form, pivots strictly increasing.
    pub fn basis(&self) -> &[SparseRow<E>] {
        &self.basis
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.basis.iter().map(|r| r[0].0).collect()
    }

    pub fn contains<F: Field<Elem = E>>(&self, field: &F, v: &[(usize, E)]) -> bool {
        let mut row: SparseRow<E> = v.to_vec();
        let mut k = 0;
        while let Some((lead, c)) = row.first().cloned() {
            while k < self.basis.len() && self.basis[k][0].0 < lead {
                k += 1;
            }
            if k == self.basis.len() || self.basis[k][0].0 != lead {
                return false;
            }
            row = sub_scaled(field, &row, &c, &self.basis[k]);
        }
        true
    }

    pub fn is_subspace_of<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> bool {
        self.basis.iter().all(|v| other.contains(field, v))
    }

    /// A vector lying in exactly one of the two subspaces, if they differ.
    pub fn difference_witness<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Option<SparseRow<E>> {
        self.basis
            .iter()
            .find(|v| !other.contains(field, v))
            .or_else(|| other.basis.iter().find(|v| !self.contains(field, v)))
            .cloned()
    }

    /// A uniformly weighted random combination of the basis.
    pub fn random_element<F: Field<Elem = E>, R: RngCore + ?Sized>(&self, field: &F, rng: &mut R) -> SparseRow<E> {
        let mut terms = Vec::new();
        for row in &self.basis {
            let c = field.sample(rng);
            if field.is_zero(&c) {
                continue;
            }
            terms.extend(row.iter().map(|(i, v)| (*i, field.mul(&c, v))));
        }
        normalize(field, terms)
    }
}

/// Kernel of a homogeneous system.
pub fn nullspace<F: Field>(field: &F, system: &LinearSystem<F::Elem>) -> Subspace<F::Elem> {
    let mut ech = Echelon::new(field);
    for row in &system.rows {
        ech.insert(row.clone());
    }
    let rref = ech.into_rref();
    let pivot_cols: Vec<usize> = rref.iter().map(|r| r[0].0).collect();
    let mut is_pivot = alloc::vec![false; system.cols];
    for &c in &pivot_cols {
        is_pivot[c] = true;
    }
    // column f of the RREF, as (pivot col, entry)
    let mut by_free: BTreeMap<usize, Vec<(usize, F::Elem)>> = BTreeMap::new();
    for row in &rref {
        let pivot = row[0].0;
        for (c, v) in row.iter().skip(1) {
            by_free.entry(*c).or_default().push((pivot, v.clone()));
        }
    }
    let mut vectors = Vec::new();
    for f in (0..system.cols).filter(|&c| !is_pivot[c]) {
        let mut terms = alloc::vec![(f, field.one())];
        if let Some(col) = by_free.get(&f) {
            terms.extend(col.iter().map(|(p, v)| (*p, field.neg(v))));
        }
        vectors.push(normalize(field, terms));
    }
    Subspace::span(field, system.cols, vectors)
}

/// Rank of a set of sparse rows.
pub fn rank<F: Field>(field: &F, rows: &[SparseRow<F::Elem>]) -> usize {
    let mut ech = Echelon::new(field);
    rows.iter().filter(|r| ech.insert((*r).clone())).count()
}

/// Inverse of a dense square matrix stored column-major.
pub fn invert<F: Field>(field: &F, dim: usize, matrix: &[F::Elem]) -> Result<Vec<F::Elem>> {
    if matrix.len() != dim * dim {
        return Err(Error::DimensionMismatch {
            expected: dim * dim,
            got: matrix.len(),
        });
    }
    // augmented rows [A | I], row-major
    let at = |r: usize, c: usize| matrix[c * dim + r].clone();
    let mut rows: Vec<Vec<F::Elem>> = (0..dim)
        .map(|r| {
            let mut row: Vec<F::Elem> = (0..dim).map(|c| at(r, c)).collect();
            row.extend((0..dim).map(|c| if c == r { field.one() } else { field.zero() }));
            row
        })
        .collect();
    for col in 0..dim {
        let pivot = (col..dim)
            .find(|&r| !field.is_zero(&rows[r][col]))
            .ok_or(Error::Singular)?;
        rows.swap(col, pivot);
        let inv = field.inv(&rows[col][col])?;
        for v in rows[col].iter_mut() {
            *v = field.mul(&inv, v);
        }
        let pivot_row = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == col || field.is_zero(&row[col]) {
                continue;
            }
            let c = row[col].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row) {
                *v = field.sub(v, &field.mul(&c, p));
            }
        }
    }
    let mut out = alloc::vec![field.zero(); dim * dim];
    for (r, row) in rows.iter().enumerate() {
        for c in 0..dim {
            out[c * dim + r] = row[dim + c].clone();
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use alloc::vec;
    use rand::Rng;

    #[test]
    fn identity_system_has_zero_kernel() {
        let f = Rationals;
        let mut s = LinearSystem::new(3);
        for i in 0..3 {
            s.push(vec![(i, f.one())]);
        }
        assert_eq!(nullspace(&f, &s).dim(), 0);
    }

    #[test]
    fn zero_system_has_full_kernel() {
        let f = PrimeField::new(3).unwrap();
        let s: LinearSystem<u32> = LinearSystem::new(3);
        let k = nullspace(&f, &s);
        assert_eq!(k.dim(), 3);
        assert_eq!(k, Subspace::full(&f, 3));
    }

    /// Dense rank by textbook elimination, independent of the sparse path.
    fn dense_rank(f: &PrimeField, mut m: Vec<Vec<u32>>, cols: usize) -> usize {
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
            m.swap(r, p);
            let inv = f.inv(&m[r][c]).unwrap();
            for i in 0..m.len() {
                if i != r && m[i][c] != 0 {
                    let k = f.mul(&m[i][c], &inv);
                    for j in 0..cols {
                        let t = f.mul(&k, &m[r][j]);
                        m[i][j] = f.sub(&m[i][j], &t);
                    }
                }
            }
            r += 1;
        }
        r
    }

    #[test]
    fn rank_nullity_on_random_gf3_systems() {
        let f = PrimeField::new(3).unwrap();
        let mut rng = crate::rng_from_seed(7);
        for _ in 0..200 {
            let rows = rng.gen_range(0..8);
            let cols = rng.gen_range(1..9);
            let dense: Vec<Vec<u32>> = (0..rows)
                .map(|_| (0..cols).map(|_| if rng.gen_bool(0.4) { f.sample(&mut rng) } else { 0 }).collect())
                .collect();
            let mut s = LinearSystem::new(cols);
            for row in &dense {
                s.push(normalize(&f, row.iter().enumerate().map(|(c, v)| (c, *v)).collect()));
            }
            let kernel = nullspace(&f, &s);
            let r = dense_rank(&f, dense.clone(), cols);
            assert_eq!(kernel.dim(), cols - r);
            assert_eq!(rank(&f, s.rows()), r);
            for v in kernel.basis() {
                for row in &dense {
                    let dot = v.iter().fold(0, |acc, (c, x)| f.add(&acc, &f.mul(x, &row[*c])));
                    assert_eq!(dot, 0);
                }
            }
        }
    }

    #[test]
    fn span_is_canonical_and_idempotent() {
        let f = Rationals;
        let q = |s: &str| f.parse(s).unwrap();
        let a = Subspace::span(&f, 3, vec![vec![(0, q("1")), (1, q("2"))], vec![(1, q("1")), (2, q("1"))]]);
        let b = Subspace::span(
            &f,
            3,
            vec![vec![(0, q("1")), (1, q("3")), (2, q("1"))], vec![(0, q("2")), (1, q("4"))]],
        );
        assert_eq!(a, b);
        let again = Subspace::span(&f, 3, a.basis().to_vec());
        assert_eq!(again, a);
        assert!(a.contains(&f, &[(0, q("1")), (2, q("-2"))]));
        assert!(!a.contains(&f, &[(2, q("1"))]));
        assert!(a.difference_witness(&f, &b).is_none());
        let c = Subspace::span(&f, 3, vec![vec![(2, q("1"))]]);
        assert!(a.difference_witness(&f, &c).is_some());
        assert!(c.difference_witness(&f, &a).is_some());
    }

    #[test]
    fn inverse_round_trip() {
        let f = PrimeField::new(5).unwrap();
        // columns: (1,2), (3,4)
        let m = vec![1, 2, 3, 4];
        let inv = invert(&f, 2, &m).unwrap();
        // m * inv = I, column-major
        for i in 0..2 {
            for j in 0..2 {
                let v = (0..2).fold(0, |acc, k| f.add(&acc, &f.mul(&m[k * 2 + i], &inv[j * 2 + k])));
                assert_eq!(v, u32::from(i == j));
            }
        }
        assert_eq!(invert(&f, 2, &[1, 2, 2, 4]), Err(Error::Singular));
    }
}
