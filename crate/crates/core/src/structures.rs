//! Bilinear products on `J` stored as structure-constant tables, the
//! compatibility predicates between two products, and the canonical
//! constructions: `*_φ`, `*_C` for `≈` classes, `*_D` for `~` classes,
//! mutations, annihilator-valued products from `μ`, and transport along
//! (anti)automorphisms.
//!
//! Every predicate is evaluated on basis triples only. Bilinearity makes
//! that equivalent to the identity for all elements.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::{Rng, RngCore};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg;
use crate::radical::{JElement, LinearEndo, Radical};

/// A bilinear product on `J`: `(p, q) -> e_p ∘ e_q`. Absent keys are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearProduct<E> {
    dim: usize,
    /// Row-major `dim * dim` slots.
    table: Vec<Option<JElement<E>>>,
}

impl<E: Clone> BilinearProduct<E> {
    pub fn zero(dim: usize) -> Self {
        BilinearProduct {
            dim,
            table: alloc::vec![None; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, p: usize, q: usize) -> Option<&JElement<E>> {
        self.table.get(p * self.dim + q)?.as_ref()
    }

    /// Nonzero entries in key order.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &JElement<E>)> + '_ {
        let d = self.dim;
        self.table
            .iter()
            .enumerate()
            .filter_map(move |(k, v)| v.as_ref().map(|v| ((k / d, k % d), v)))
    }

    pub fn is_zero(&self) -> bool {
        self.table.iter().all(Option::is_none)
    }

    pub(crate) fn set_unchecked(&mut self, p: usize, q: usize, value: JElement<E>) {
        self.table[p * self.dim + q] = if value.is_zero() { None } else { Some(value) };
    }

    /// Flattened coordinates `(p * dim + q) * dim + r`.
    pub fn to_sparse(&self) -> linalg::SparseRow<E> {
        let d = self.dim;
        let mut out = Vec::new();
        for ((p, q), v) in self.entries() {
            out.extend(v.terms().map(|(r, c)| ((p * d + q) * d + r, c.clone())));
        }
        out
    }
}

/// The two permutations of `{1, 2}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Permutation {
    Identity,
    Swap,
}

/// Values of an annihilator-valued product on pairs of length 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuTable<E> {
    entries: BTreeMap<(usize, usize), JElement<E>>,
}

impl<E: Clone> MuTable<E> {
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), &JElement<E>)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl<E: Clone> MuTable<E> {
    /// Validates keys (both of length 1) and values (inside `Ann(J)`).
    pub fn new<F: Field<Elem = E>>(
        rad: &Radical<'_, F>,
        entries: impl IntoIterator<Item = ((usize, usize), JElement<E>)>,
    ) -> Result<Self> {
        let poset = rad.poset();
        let mut map = BTreeMap::new();
        for ((p, q), v) in entries {
            if p >= rad.dim() || q >= rad.dim() || v.dim() != rad.dim() {
                return Err(Error::MixedContext);
            }
            for k in [p, q] {
                if poset.pair_length(k) != 1 {
                    let pr = poset.pair(k);
                    return Err(Error::BadMu(alloc::format!(
                        "key ({},{}) is not a cover pair",
                        pr.x,
                        pr.y
                    )));
                }
            }
            if !rad.in_ann_span(&v) {
                return Err(Error::BadMu(alloc::string::String::from(
                    "value leaves the annihilator",
                )));
            }
            if map.insert((p, q), v).is_some() {
                let (a, b) = (poset.pair(p), poset.pair(q));
                return Err(Error::DuplicateEntry {
                    a: (a.x, a.y),
                    b: (b.x, b.y),
                });
            }
        }
        map.retain(|_, v: &mut JElement<E>| !v.is_zero());
        Ok(MuTable { entries: map })
    }
}

/// Builds a product from explicit entries, rejecting repeated keys.
pub fn product_from_entries<F: Field>(
    rad: &Radical<'_, F>,
    entries: impl IntoIterator<Item = ((usize, usize), JElement<F::Elem>)>,
) -> Result<BilinearProduct<F::Elem>> {
    let mut out = BilinearProduct::zero(rad.dim());
    let mut seen = BTreeMap::new();
    for ((p, q), v) in entries {
        if p >= rad.dim() || q >= rad.dim() {
            return Err(Error::MixedContext);
        }
        rad.check_elem(&v)?;
        if seen.insert((p, q), ()).is_some() {
            let (a, b) = (rad.poset().pair(p), rad.poset().pair(q));
            return Err(Error::DuplicateEntry {
                a: (a.x, a.y),
                b: (b.x, b.y),
            });
        }
        out.set_unchecked(p, q, v);
    }
    Ok(out)
}

fn check_product<F: Field>(rad: &Radical<'_, F>, b: &BilinearProduct<F::Elem>) -> Result<()> {
    if b.dim != rad.dim() {
        return Err(Error::MixedContext);
    }
    Ok(())
}

/// `Σ c_k B_k`.
pub fn combine<F: Field>(
    rad: &Radical<'_, F>,
    terms: &[(F::Elem, &BilinearProduct<F::Elem>)],
) -> Result<BilinearProduct<F::Elem>> {
    let mut acc: BTreeMap<(usize, usize), JElement<F::Elem>> = BTreeMap::new();
    for (c, b) in terms {
        check_product(rad, b)?;
        for (k, v) in b.entries() {
            let slot = acc.entry(k).or_insert_with(|| rad.zero());
            rad.axpy(slot, c, v);
        }
    }
    let mut out = BilinearProduct::zero(rad.dim());
    for ((p, q), v) in acc {
        out.set_unchecked(p, q, v);
    }
    Ok(out)
}

pub fn add<F: Field>(
    rad: &Radical<'_, F>,
    a: &BilinearProduct<F::Elem>,
    b: &BilinearProduct<F::Elem>,
) -> Result<BilinearProduct<F::Elem>> {
    let one = rad.field().one();
    combine(rad, &[(one.clone(), a), (one, b)])
}

pub fn sub<F: Field>(
    rad: &Radical<'_, F>,
    a: &BilinearProduct<F::Elem>,
    b: &BilinearProduct<F::Elem>,
) -> Result<BilinearProduct<F::Elem>> {
    let f = rad.field();
    combine(rad, &[(f.one(), a), (f.neg(&f.one()), b)])
}

/// `a ∘ b` by bilinear extension of the table.
pub fn apply<F: Field>(
    rad: &Radical<'_, F>,
    b: &BilinearProduct<F::Elem>,
    x: &JElement<F::Elem>,
    y: &JElement<F::Elem>,
) -> Result<JElement<F::Elem>> {
    check_product(rad, b)?;
    rad.check_elem(x)?;
    rad.check_elem(y)?;
    let f = rad.field();
    let mut out = rad.zero();
    for (p, u) in x.terms() {
        for (q, v) in y.terms() {
            if let Some(val) = b.get(p, q) {
                rad.axpy(&mut out, &f.mul(u, v), val);
            }
        }
    }
    Ok(out)
}

/// `x ∘ e_r`.
fn apply_right_basis<F: Field>(
    rad: &Radical<'_, F>,
    b: &BilinearProduct<F::Elem>,
    x: &JElement<F::Elem>,
    r: usize,
) -> JElement<F::Elem> {
    let mut out = rad.zero();
    for (s, c) in x.terms() {
        if let Some(val) = b.get(s, r) {
            rad.axpy(&mut out, c, val);
        }
    }
    out
}

/// `e_p ∘ x`.
fn apply_left_basis<F: Field>(
    rad: &Radical<'_, F>,
    b: &BilinearProduct<F::Elem>,
    p: usize,
    x: &JElement<F::Elem>,
) -> JElement<F::Elem> {
    let mut out = rad.zero();
    for (s, c) in x.terms() {
        if let Some(val) = b.get(p, s) {
            rad.axpy(&mut out, c, val);
        }
    }
    out
}

/// The four mixed monomials of two products on one basis triple.
struct Monomials<E> {
    /// `(a ∘1 b) ∘2 c`
    l12: JElement<E>,
    /// `(a ∘2 b) ∘1 c`
    l21: JElement<E>,
    /// `a ∘1 (b ∘2 c)`
    r12: JElement<E>,
    /// `a ∘2 (b ∘1 c)`
    r21: JElement<E>,
}

/// Which monomials a predicate reads, in the order `l12, l21, r12, r21`.
type Needed = [bool; 4];

const ALL: Needed = [true; 4];

fn monomials<F: Field>(
    rad: &Radical<'_, F>,
    b1: &BilinearProduct<F::Elem>,
    b2: &BilinearProduct<F::Elem>,
    need: Needed,
    (p, q, r): (usize, usize, usize),
) -> Option<Monomials<F::Elem>> {
    let (v1pq, v2pq, v1qr, v2qr) = (b1.get(p, q), b2.get(p, q), b1.get(q, r), b2.get(q, r));
    if v1pq.is_none() && v2pq.is_none() && v1qr.is_none() && v2qr.is_none() {
        return None;
    }
    let zero = rad.zero();
    let eval = |wanted: bool, v: Option<&JElement<F::Elem>>, f: &dyn Fn(&JElement<F::Elem>) -> JElement<F::Elem>| {
        match v {
            Some(v) if wanted => f(v),
            _ => zero.clone(),
        }
    };
    Some(Monomials {
        l12: eval(need[0], v1pq, &|v| apply_right_basis(rad, b2, v, r)),
        l21: eval(need[1], v2pq, &|v| apply_right_basis(rad, b1, v, r)),
        r12: eval(need[2], v2qr, &|v| apply_left_basis(rad, b1, p, v)),
        r21: eval(need[3], v1qr, &|v| apply_left_basis(rad, b2, p, v)),
    })
}

fn all_triples<F: Field>(
    rad: &Radical<'_, F>,
    b1: &BilinearProduct<F::Elem>,
    b2: &BilinearProduct<F::Elem>,
    need: Needed,
    pred: impl Fn(&Monomials<F::Elem>) -> bool,
) -> bool {
    if b1.dim != rad.dim() || b2.dim != rad.dim() {
        return false;
    }
    let d = rad.dim();
    for p in 0..d {
        for q in 0..d {
            for r in 0..d {
                // every predicate holds when all four monomials vanish
                if let Some(m) = monomials(rad, b1, b2, need, (p, q, r)) {
                    if !pred(&m) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// The product `·` of `J` as a table.
pub fn dot_product<F: Field>(rad: &Radical<'_, F>) -> BilinearProduct<F::Elem> {
    rad.dot_table()
}

pub fn is_associative<F: Field>(rad: &Radical<'_, F>, b: &BilinearProduct<F::Elem>) -> bool {
    all_triples(rad, b, b, [true, false, true, false], |m| m.l12 == m.r12)
}

/// `(a ∘1 b) ∘2 c = a ∘σ(1) (b ∘σ(2) c)` and
/// `(a ∘2 b) ∘1 c = a ∘σ(2) (b ∘σ(1) c)`.
pub fn is_sigma_matching<F: Field>(
    rad: &Radical<'_, F>,
    b1: &BilinearProduct<F::Elem>,
    b2: &BilinearProduct<F::Elem>,
    sigma: Permutation,
) -> bool {
    match sigma {
        Permutation::Identity => all_triples(rad, b1, b2, ALL, |m| m.l12 == m.r12 && m.l21 == m.r21),
        Permutation::Swap => all_triples(rad, b1, b2, ALL, |m| m.l12 == m.r21 && m.l21 == m.r12),
    }
}

pub fn is_interchangeable<F: Field>(
    rad: &Radical<'_, F>,
    b1: &BilinearProduct<F::Elem>,
    b2: &BilinearProduct<F::Elem>,
) -> bool {
    all_triples(rad, b1, b2, ALL, |m| m.l12 == m.l21 && m.r12 == m.r21)
}

/// All four mixed monomials agree.
pub fn is_totally_compatible_with<F: Field>(
    rad: &Radical<'_, F>,
    b1: &BilinearProduct<F::Elem>,
    b2: &BilinearProduct<F::Elem>,
) -> bool {
    all_triples(rad, b1, b2, ALL, |m| m.l12 == m.l21 && m.l12 == m.r12 && m.l12 == m.r21)
}

/// All four mixed monomials vanish.
pub fn are_mutually_annihilating<F: Field>(
    rad: &Radical<'_, F>,
    b1: &BilinearProduct<F::Elem>,
    b2: &BilinearProduct<F::Elem>,
) -> bool {
    all_triples(rad, b1, b2, ALL, |m| {
        m.l12.is_zero() && m.l21.is_zero() && m.r12.is_zero() && m.r21.is_zero()
    })
}

/// Values lie in `Ann(J)` and both `(J·J) ∘ J` and `J ∘ (J·J)` vanish.
pub fn is_annihilator_valued<F: Field>(rad: &Radical<'_, F>, b: &BilinearProduct<F::Elem>) -> bool {
    if b.dim != rad.dim() {
        return false;
    }
    let poset = rad.poset();
    b.entries().all(|((p, q), v)| {
        poset.pair_length(p) == 1 && poset.pair_length(q) == 1 && rad.in_ann_span(v)
    })
}

/// A totally compatible structure: associative and totally compatible
/// with `·`.
pub fn is_totally_compatible_structure<F: Field>(rad: &Radical<'_, F>, b: &BilinearProduct<F::Elem>) -> bool {
    is_associative(rad, b) && is_totally_compatible_with(rad, &rad.dot_table(), b)
}

/// The annihilator-valued product with `e_p • e_q = μ(p, q)` on cover
/// pairs and zero elsewhere.
pub fn from_mu<F: Field>(rad: &Radical<'_, F>, mu: &MuTable<F::Elem>) -> BilinearProduct<F::Elem> {
    let mut out = BilinearProduct::zero(rad.dim());
    for ((p, q), v) in mu.entries() {
        out.set_unchecked(p, q, v.clone());
    }
    out
}

/// `a *_φ b = φ(a · b)`.
pub fn star_phi<F: Field>(rad: &Radical<'_, F>, phi: &LinearEndo<F::Elem>) -> Result<BilinearProduct<F::Elem>> {
    if phi.dim() != rad.dim() {
        return Err(Error::MixedContext);
    }
    if !rad.is_centroid(phi) {
        return Err(Error::NotCentroid);
    }
    let mut out = BilinearProduct::zero(rad.dim());
    for p in 0..rad.dim() {
        for q in 0..rad.dim() {
            if let Some(r) = rad.mul_basis(p, q) {
                out.set_unchecked(p, q, rad.endo_column(phi, r));
            }
        }
    }
    Ok(out)
}

/// `e_xy *_C e_yv = e_xv` when `(x, y, v)` lies in the `≈` class `C`.
pub fn star_approx_class<F: Field>(rad: &Radical<'_, F>, class: usize) -> BilinearProduct<F::Elem> {
    let poset = rad.poset();
    let mut out = BilinearProduct::zero(rad.dim());
    for &t in rad.approx().members(class) {
        let tr = poset.triples()[t];
        let idx = |x, y| poset.pair_index(x, y).expect("triple legs are pairs");
        out.set_unchecked(idx(tr.x, tr.y), idx(tr.y, tr.z), rad.basis(idx(tr.x, tr.z)));
    }
    out
}

/// `e_xy *_D e_yv = e_xv` when `(x, v)` lies in the `~` class `D`.
pub fn star_sim_class<F: Field>(rad: &Radical<'_, F>, class: usize) -> BilinearProduct<F::Elem> {
    let mut out = BilinearProduct::zero(rad.dim());
    for p in 0..rad.dim() {
        for q in 0..rad.dim() {
            if let Some(r) = rad.mul_basis(p, q) {
                if rad.sim().class_of(r) == class {
                    out.set_unchecked(p, q, rad.basis(r));
                }
            }
        }
    }
    out
}

/// The mutation `a ·_x b = a · x · b`.
pub fn mutation<F: Field>(rad: &Radical<'_, F>, x: &JElement<F::Elem>) -> Result<BilinearProduct<F::Elem>> {
    rad.check_elem(x)?;
    let mut out = BilinearProduct::zero(rad.dim());
    for p in 0..rad.dim() {
        let px = rad.mul(&rad.basis(p), x)?;
        if px.is_zero() {
            continue;
        }
        for q in 0..rad.dim() {
            out.set_unchecked(p, q, rad.mul(&px, &rad.basis(q))?);
        }
    }
    Ok(out)
}

/// `a ⋆ b = φ(φ⁻¹(a) ∘ φ⁻¹(b))`, or with the arguments of `∘` swapped
/// when `anti` is set. `φ` must be an automorphism (antiautomorphism) of
/// `(J, ·)`.
pub fn transport<F: Field>(
    rad: &Radical<'_, F>,
    b: &BilinearProduct<F::Elem>,
    phi: &LinearEndo<F::Elem>,
    anti: bool,
) -> Result<BilinearProduct<F::Elem>> {
    check_product(rad, b)?;
    if phi.dim() != rad.dim() {
        return Err(Error::MixedContext);
    }
    let d = rad.dim();
    let images: Vec<JElement<F::Elem>> = (0..d).map(|j| rad.endo_column(phi, j)).collect();
    for p in 0..d {
        for q in 0..d {
            let lhs = match rad.mul_basis(p, q) {
                Some(r) => images[r].clone(),
                None => rad.zero(),
            };
            let rhs = if anti {
                rad.mul(&images[q], &images[p])?
            } else {
                rad.mul(&images[p], &images[q])?
            };
            if lhs != rhs {
                return Err(if anti {
                    Error::NotAntiautomorphism
                } else {
                    Error::NotAutomorphism
                });
            }
        }
    }
    let inv = LinearEndo::from_column_major(d, linalg::invert(rad.field(), d, phi.column_major())?)?;
    let pre: Vec<JElement<F::Elem>> = (0..d).map(|j| rad.endo_column(&inv, j)).collect();
    let mut out = BilinearProduct::zero(d);
    for p in 0..d {
        for q in 0..d {
            let inner = if anti {
                apply(rad, b, &pre[q], &pre[p])?
            } else {
                apply(rad, b, &pre[p], &pre[q])?
            };
            if !inner.is_zero() {
                out.set_unchecked(p, q, rad.endo_apply(phi, &inner)?);
            }
        }
    }
    Ok(out)
}

/// The automorphism `e_xy -> τ(x, y) e_xy` with `τ(x, y) = g(x) / g(y)`.
/// `g` holds one nonzero scalar per element, in label order.
pub fn diagonal_automorphism<F: Field>(rad: &Radical<'_, F>, g: &[F::Elem]) -> Result<LinearEndo<F::Elem>> {
    let poset = rad.poset();
    if g.len() != poset.size() {
        return Err(Error::DimensionMismatch {
            expected: poset.size(),
            got: g.len(),
        });
    }
    let f = rad.field();
    let mut cols = Vec::with_capacity(rad.dim());
    for (i, p) in poset.pairs().iter().enumerate() {
        let tau = f.div(&g[p.x - 1], &g[p.y - 1])?;
        cols.push(rad.scale(&tau, &rad.basis(i)));
    }
    rad.endo_from_columns(&cols)
}

pub fn random_diagonal_automorphism<F: Field, R: RngCore + ?Sized>(
    rad: &Radical<'_, F>,
    rng: &mut R,
) -> LinearEndo<F::Elem> {
    let f = rad.field();
    let g: Vec<F::Elem> = (0..rad.poset().size()).map(|_| f.sample_nonzero(rng)).collect();
    diagonal_automorphism(rad, &g).expect("g is nonzero")
}

/// The map `e_xy -> e_{π(x) π(y)}` (or `e_{π(y) π(x)}` when `anti`), for a
/// permutation `π` of labels given as `perm[x - 1] = π(x)`.
pub fn relabeling_map<F: Field>(rad: &Radical<'_, F>, perm: &[usize], anti: bool) -> Result<LinearEndo<F::Elem>> {
    let poset = rad.poset();
    if perm.len() != poset.size() {
        return Err(Error::DimensionMismatch {
            expected: poset.size(),
            got: perm.len(),
        });
    }
    let mut cols = Vec::with_capacity(rad.dim());
    for p in poset.pairs() {
        let (a, b) = (perm[p.x - 1], perm[p.y - 1]);
        let (a, b) = if anti { (b, a) } else { (a, b) };
        let img = poset.pair_index(a, b).ok_or(if anti {
            Error::NotAntiautomorphism
        } else {
            Error::NotAutomorphism
        })?;
        cols.push(rad.basis(img));
    }
    rad.endo_from_columns(&cols)
}

/// A random `μ` with arbitrary annihilator values on random cover-pair
/// keys. The resulting product need not be associative.
pub fn random_mu<F: Field, R: RngCore + ?Sized>(rad: &Radical<'_, F>, rng: &mut R) -> MuTable<F::Elem> {
    let ann = rad.ann_basis();
    let keys = rad.complement_basis();
    let mut entries = Vec::new();
    if ann.is_empty() {
        return MuTable::new(rad, entries).expect("empty table");
    }
    for &p in &keys {
        for &q in &keys {
            if rng.gen_bool(0.5) {
                let v = random_in(rad, &ann, rng);
                entries.push(((p, q), v));
            }
        }
    }
    MuTable::new(rad, entries).expect("keys are cover pairs and values lie in the annihilator")
}

fn random_in<F: Field, R: RngCore + ?Sized>(rad: &Radical<'_, F>, support: &[usize], rng: &mut R) -> JElement<F::Elem> {
    let f = rad.field();
    let terms: Vec<(usize, F::Elem)> = support.iter().map(|&a| (a, f.sample(rng))).collect();
    rad.element(terms).expect("indices in range")
}

/// A random associative annihilator-valued product.
///
/// Cover pairs inside the annihilator are split at random into ones used
/// as keys and ones used as values; every value then lies in `J·J` or in
/// a pair that is never a key, so all triple products vanish.
pub fn random_ann_structure<F: Field, R: RngCore + ?Sized>(
    rad: &Radical<'_, F>,
    rng: &mut R,
) -> BilinearProduct<F::Elem> {
    let poset = rad.poset();
    let mut keys = Vec::new();
    let mut values = Vec::new();
    for i in 0..rad.dim() {
        let long = poset.pair_length(i) > 1;
        match (long, rad.is_ann_pair(i)) {
            (true, true) => values.push(i),
            (true, false) => {}
            (false, false) => keys.push(i),
            (false, true) => {
                if rng.gen_bool(0.5) {
                    keys.push(i)
                } else {
                    values.push(i)
                }
            }
        }
    }
    let mut out = BilinearProduct::zero(rad.dim());
    if values.is_empty() {
        return out;
    }
    for &p in &keys {
        for &q in &keys {
            if rng.gen_bool(0.5) {
                out.set_unchecked(p, q, random_in(rad, &values, rng));
            }
        }
    }
    out
}
