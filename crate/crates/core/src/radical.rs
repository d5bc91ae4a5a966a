//! The radical `J = span{e_xy : x < y}` of the incidence algebra with its
//! product `e_xy · e_uv = δ_yu e_xv`, its annihilator, the square `J·J`,
//! and the centroid `Γ(J)`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::SparseRow;
use crate::poset::{ApproxPartition, Poset, SimPartition};
use crate::structures::BilinearProduct;

/// An element of `J`: a sparse map from pair indices to nonzero scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JElement<E> {
    dim: usize,
    coeffs: BTreeMap<usize, E>,
}

impl<E: Clone> JElement<E> {
    pub fn zero(dim: usize) -> Self {
        JElement {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `e_p`, `None` when zero.
    pub fn get(&self, pair: usize) -> Option<&E> {
        self.coeffs.get(&pair)
    }

    /// Nonzero terms in pair-index order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &E)> + '_ {
        self.coeffs.iter().map(|(k, v)| (*k, v))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.keys().copied()
    }

    pub fn to_sparse(&self) -> SparseRow<E> {
        self.coeffs.iter().map(|(k, v)| (*k, v.clone())).collect()
    }
}

/// A linear map `J -> J` as a dense matrix over the pair basis. Column `j`
/// holds the image of `e_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearEndo<E> {
    dim: usize,
    data: Vec<E>,
}

impl<E: Clone> LinearEndo<E> {
    /// Builds from column-major data of length `dim * dim`.
    pub fn from_column_major(dim: usize, data: Vec<E>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: data.len(),
            });
        }
        Ok(LinearEndo { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Coefficient of `e_row` in the image of `e_col`.
    pub fn entry(&self, row: usize, col: usize) -> &E {
        &self.data[col * self.dim + row]
    }

    pub fn column_major(&self) -> &[E] {
        &self.data
    }
}

/// A scalar per `~` class; equivalently a map on strict pairs that is
/// constant on chains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainConstantMap<E> {
    values: Vec<E>,
}

impl<E: Clone> ChainConstantMap<E> {
    pub fn from_class_values(values: Vec<E>) -> Self {
        ChainConstantMap { values }
    }

    /// Value on the given `~` class.
    pub fn class_value(&self, class: usize) -> &E {
        &self.values[class]
    }

    pub fn values(&self) -> &[E] {
        &self.values
    }
}

/// The algebra `(J(I(X, K)), ·)` for a fixed poset and field.
///
/// Holds the `~` and `≈` partitions and the annihilator mask, which every
/// construction on `J` needs.
#[derive(Debug, Clone)]
pub struct Radical<'p, F: Field> {
    poset: &'p Poset,
    field: F,
    sim: SimPartition,
    approx: ApproxPartition,
    in_ann: Vec<bool>,
}

impl<'p, F: Field> Radical<'p, F> {
    pub fn new(poset: &'p Poset, field: F) -> Result<Self> {
        let sim = poset.sim_partition();
        let approx = poset.approx_partition(&sim)?;
        let in_ann = poset
            .pairs()
            .iter()
            .map(|p| poset.is_minimal(p.x) && poset.is_maximal(p.y))
            .collect();
        Ok(Radical {
            poset,
            field,
            sim,
            approx,
            in_ann,
        })
    }

    pub fn poset(&self) -> &'p Poset {
        self.poset
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    /// `dim J`, the number of strict pairs.
    pub fn dim(&self) -> usize {
        self.poset.pair_count()
    }

    pub fn sim(&self) -> &SimPartition {
        &self.sim
    }

    pub fn approx(&self) -> &ApproxPartition {
        &self.approx
    }

    pub(crate) fn check_elem(&self, a: &JElement<F::Elem>) -> Result<()> {
        if a.dim != self.dim() {
            return Err(Error::MixedContext);
        }
        Ok(())
    }

    pub fn zero(&self) -> JElement<F::Elem> {
        JElement::zero(self.dim())
    }

    /// The basis vector `e_p`.
    pub fn basis(&self, pair: usize) -> JElement<F::Elem> {
        assert!(pair < self.dim(), "pair index out of range");
        let mut coeffs = BTreeMap::new();
        coeffs.insert(pair, self.field.one());
        JElement {
            dim: self.dim(),
            coeffs,
        }
    }

    /// Element from `(pair index, coefficient)` terms; repeated indices add.
    pub fn element(&self, terms: impl IntoIterator<Item = (usize, F::Elem)>) -> Result<JElement<F::Elem>> {
        let mut out = self.zero();
        for (i, v) in terms {
            if i >= self.dim() {
                return Err(Error::MixedContext);
            }
            self.add_term(&mut out, i, &v);
        }
        Ok(out)
    }

    /// Element from `((x, y), coefficient)` terms keyed by labels.
    pub fn element_by_labels(
        &self,
        terms: impl IntoIterator<Item = ((usize, usize), F::Elem)>,
    ) -> Result<JElement<F::Elem>> {
        let mut out = self.zero();
        for ((x, y), v) in terms {
            let i = self.pair_index(x, y)?;
            self.add_term(&mut out, i, &v);
        }
        Ok(out)
    }

    /// Basis index of `x < y`, with label errors.
    pub fn pair_index(&self, x: usize, y: usize) -> Result<usize> {
        let n = self.poset.size();
        for label in [x, y] {
            if label == 0 || label > n {
                return Err(Error::BadLabel { label, n });
            }
        }
        self.poset
            .pair_index(x, y)
            .ok_or(Error::NotComparable { x, y })
    }

    pub(crate) fn add_term(&self, a: &mut JElement<F::Elem>, pair: usize, v: &F::Elem) {
        if self.field.is_zero(v) {
            return;
        }
        let f = &self.field;
        match a.coeffs.get_mut(&pair) {
            Some(c) => {
                *c = f.add(c, v);
                if f.is_zero(c) {
                    a.coeffs.remove(&pair);
                }
            }
            None => {
                a.coeffs.insert(pair, v.clone());
            }
        }
    }

    /// `a + c * b`, in place.
    pub(crate) fn axpy(&self, a: &mut JElement<F::Elem>, c: &F::Elem, b: &JElement<F::Elem>) {
        if self.field.is_zero(c) {
            return;
        }
        for (i, v) in b.terms() {
            let t = self.field.mul(c, v);
            self.add_term(a, i, &t);
        }
    }

    pub fn add(&self, a: &JElement<F::Elem>, b: &JElement<F::Elem>) -> Result<JElement<F::Elem>> {
        self.check_elem(a)?;
        self.check_elem(b)?;
        let mut out = a.clone();
        self.axpy(&mut out, &self.field.one(), b);
        Ok(out)
    }

    pub fn sub(&self, a: &JElement<F::Elem>, b: &JElement<F::Elem>) -> Result<JElement<F::Elem>> {
        self.check_elem(a)?;
        self.check_elem(b)?;
        let mut out = a.clone();
        self.axpy(&mut out, &self.field.neg(&self.field.one()), b);
        Ok(out)
    }

    pub fn scale(&self, c: &F::Elem, a: &JElement<F::Elem>) -> JElement<F::Elem> {
        let mut out = self.zero();
        self.axpy(&mut out, c, a);
        out
    }

    /// `e_p · e_q`: `Some(x, v)` when `p = (x, y)` and `q = (y, v)`.
    pub fn mul_basis(&self, p: usize, q: usize) -> Option<usize> {
        let (a, b) = (self.poset.pair(p), self.poset.pair(q));
        if a.y == b.x {
            self.poset.pair_index(a.x, b.y)
        } else {
            None
        }
    }

    pub fn mul(&self, a: &JElement<F::Elem>, b: &JElement<F::Elem>) -> Result<JElement<F::Elem>> {
        self.check_elem(a)?;
        self.check_elem(b)?;
        let mut out = self.zero();
        for (p, u) in a.terms() {
            for (q, v) in b.terms() {
                if let Some(r) = self.mul_basis(p, q) {
                    let t = self.field.mul(u, v);
                    self.add_term(&mut out, r, &t);
                }
            }
        }
        Ok(out)
    }

    /// Pairs `x < y` with `x` minimal and `y` maximal; they span `Ann(J)`.
    pub fn ann_basis(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.in_ann[i]).collect()
    }

    pub fn is_ann_pair(&self, pair: usize) -> bool {
        self.in_ann[pair]
    }

    pub fn in_ann_span(&self, a: &JElement<F::Elem>) -> bool {
        a.support().all(|i| self.in_ann[i])
    }

    /// Pairs with `l(x, y) > 1`; they span `J·J`.
    pub fn jj_basis(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.poset.pair_length(i) > 1)
            .collect()
    }

    /// Pairs with `l(x, y) = 1`; they span the chosen complement of `J·J`.
    pub fn complement_basis(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.poset.pair_length(i) == 1)
            .collect()
    }

    /// The product `·` itself as a structure-constant table.
    pub fn dot_table(&self) -> BilinearProduct<F::Elem> {
        let dim = self.dim();
        let mut out = BilinearProduct::zero(dim);
        for p in 0..dim {
            for q in 0..dim {
                if let Some(r) = self.mul_basis(p, q) {
                    out.set_unchecked(p, q, self.basis(r));
                }
            }
        }
        out
    }

    pub fn endo_zero(&self) -> LinearEndo<F::Elem> {
        let d = self.dim();
        LinearEndo {
            dim: d,
            data: alloc::vec![self.field.zero(); d * d],
        }
    }

    pub fn endo_identity(&self) -> LinearEndo<F::Elem> {
        let mut id = self.endo_zero();
        for i in 0..self.dim() {
            id.data[i * id.dim + i] = self.field.one();
        }
        id
    }

    /// Builds the map sending `e_j` to `columns[j]`.
    pub fn endo_from_columns(&self, columns: &[JElement<F::Elem>]) -> Result<LinearEndo<F::Elem>> {
        if columns.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: columns.len(),
            });
        }
        let mut out = self.endo_zero();
        for (j, col) in columns.iter().enumerate() {
            self.check_elem(col)?;
            for (i, v) in col.terms() {
                out.data[j * out.dim + i] = v.clone();
            }
        }
        Ok(out)
    }

    pub fn endo_column(&self, phi: &LinearEndo<F::Elem>, col: usize) -> JElement<F::Elem> {
        let d = phi.dim;
        let mut out = self.zero();
        for (i, v) in phi.data[col * d..(col + 1) * d].iter().enumerate() {
            self.add_term(&mut out, i, v);
        }
        out
    }

    pub fn endo_apply(&self, phi: &LinearEndo<F::Elem>, a: &JElement<F::Elem>) -> Result<JElement<F::Elem>> {
        self.check_elem(a)?;
        if phi.dim != self.dim() {
            return Err(Error::MixedContext);
        }
        let mut out = self.zero();
        for (j, c) in a.terms() {
            for i in 0..phi.dim {
                let t = self.field.mul(c, &phi.data[j * phi.dim + i]);
                self.add_term(&mut out, i, &t);
            }
        }
        Ok(out)
    }

    /// `Σ c_k φ_k`.
    pub fn endo_combination(&self, terms: &[(F::Elem, &LinearEndo<F::Elem>)]) -> LinearEndo<F::Elem> {
        let mut out = self.endo_zero();
        for (c, phi) in terms {
            for (o, v) in out.data.iter_mut().zip(&phi.data) {
                *o = self.field.add(o, &self.field.mul(c, v));
            }
        }
        out
    }

    /// Checks `φ(a·b) = a·φ(b) = φ(a)·b` on all pairs of basis vectors.
    pub fn is_centroid(&self, phi: &LinearEndo<F::Elem>) -> bool {
        if phi.dim != self.dim() {
            return false;
        }
        let images: Vec<JElement<F::Elem>> = (0..self.dim()).map(|j| self.endo_column(phi, j)).collect();
        for p in 0..self.dim() {
            let ep = self.basis(p);
            for q in 0..self.dim() {
                let eq = self.basis(q);
                let lhs = match self.mul_basis(p, q) {
                    Some(r) => images[r].clone(),
                    None => self.zero(),
                };
                let left = self.mul(&ep, &images[q]).expect("same algebra");
                let right = self.mul(&images[p], &eq).expect("same algebra");
                if lhs != left || lhs != right {
                    return false;
                }
            }
        }
        true
    }

    /// `σ` from values on individual pairs. Every listed pair must agree
    /// with the others in its `~` class; classes with no listed pair get 0.
    pub fn sigma_from_pairs(&self, values: &[(usize, F::Elem)]) -> Result<ChainConstantMap<F::Elem>> {
        let mut by_class: Vec<Option<(usize, F::Elem)>> = alloc::vec![None; self.sim.len()];
        for (pair, v) in values {
            if *pair >= self.dim() {
                return Err(Error::MixedContext);
            }
            let c = self.sim.class_of(*pair);
            match &by_class[c] {
                Some((first, w)) if w != v => {
                    let (a, b) = (self.poset.pair(*first), self.poset.pair(*pair));
                    return Err(Error::ChainConflict {
                        first: (a.x, a.y),
                        second: (b.x, b.y),
                    });
                }
                Some(_) => {}
                None => by_class[c] = Some((*pair, v.clone())),
            }
        }
        Ok(ChainConstantMap {
            values: by_class
                .into_iter()
                .map(|e| e.map_or_else(|| self.field.zero(), |(_, v)| v))
                .collect(),
        })
    }

    pub fn sigma_constant(&self, c: F::Elem) -> ChainConstantMap<F::Elem> {
        ChainConstantMap {
            values: alloc::vec![c; self.sim.len()],
        }
    }

    /// The indicator `σ_D` of a `~` class.
    pub fn sigma_indicator(&self, class: usize) -> ChainConstantMap<F::Elem> {
        ChainConstantMap {
            values: (0..self.sim.len())
                .map(|c| if c == class { self.field.one() } else { self.field.zero() })
                .collect(),
        }
    }

    /// `σ(x, y)` for the pair with the given index.
    pub fn sigma_at<'s>(&self, sigma: &'s ChainConstantMap<F::Elem>, pair: usize) -> &'s F::Elem {
        sigma.class_value(self.sim.class_of(pair))
    }

    /// The diagonal map `φ_σ(e_xy) = σ(x, y) e_xy`.
    pub fn phi_sigma(&self, sigma: &ChainConstantMap<F::Elem>) -> LinearEndo<F::Elem> {
        let mut out = self.endo_zero();
        for i in 0..self.dim() {
            out.data[i * out.dim + i] = self.sigma_at(sigma, i).clone();
        }
        out
    }

    /// Elementary annihilator-valued maps `e_p -> e_a` for `l(p) = 1` and
    /// `a` in the annihilator basis. They span all annihilator-valued maps.
    pub fn annihilator_valued_map_basis(&self) -> Vec<LinearEndo<F::Elem>> {
        let ann = self.ann_basis();
        let mut out = Vec::new();
        for p in self.complement_basis() {
            for &a in &ann {
                let mut phi = self.endo_zero();
                phi.data[p * phi.dim + a] = self.field.one();
                out.push(phi);
            }
        }
        out
    }

    /// A spanning family of `Γ(J)`: `φ_{σ_D}` for every `~` class `D`,
    /// followed by the elementary annihilator-valued maps. Not necessarily
    /// linearly independent.
    pub fn centroid_basis(&self) -> Vec<LinearEndo<F::Elem>> {
        let mut out: Vec<LinearEndo<F::Elem>> = (0..self.sim.len())
            .map(|d| self.phi_sigma(&self.sigma_indicator(d)))
            .collect();
        out.extend(self.annihilator_valued_map_basis());
        out
    }
}
