//! Exact linear-algebra cross-checks of the closed forms.
//!
//! Products of basis elements are recomputed here straight from the order
//! relation. The radical product, annihilator, `J·J`, the centroid and
//! the total compatibility identities never go through `radical` or
//! `structures` on the solved side, so agreement is meaningful.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::RngCore;

use crate::classify;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, LinearSystem, SparseRow, Subspace};
use crate::poset::Poset;
use crate::radical::Radical;
use crate::structures::{self, BilinearProduct};

/// Number of random solutions fed to `decompose` by the totcomp check.
pub const TOTCOMP_SAMPLES: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Mismatch,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Mismatch => "mismatch",
        }
    }
}

/// A vector lying on one side of a failed comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness<E> {
    pub detail: String,
    pub vector: SparseRow<E>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report<E> {
    pub check: &'static str,
    pub status: Status,
    pub dims: Vec<(&'static str, usize)>,
    pub witness: Option<Witness<E>>,
}

impl<E> Report<E> {
    pub fn is_ok(&self) -> bool {
        self.status == Status::Ok
    }

    pub fn ensure_ok(self) -> Result<Self> {
        match &self.witness {
            Some(w) if self.status == Status::Mismatch => {
                Err(Error::SpanMismatch(format!("{}: {}", self.check, w.detail)))
            }
            _ if self.status == Status::Mismatch => Err(Error::SpanMismatch(String::from(self.check))),
            _ => Ok(self),
        }
    }
}

/// Basis products from the order relation alone.
struct RawProduct {
    m: usize,
    table: Vec<Option<usize>>,
}

impl RawProduct {
    fn new(poset: &Poset) -> Self {
        let n = poset.size();
        let mut pairs = Vec::new();
        for x in 1..=n {
            for y in 1..=n {
                if x != y && poset.leq(x, y) {
                    pairs.push((x, y));
                }
            }
        }
        let index: BTreeMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let m = pairs.len();
        let mut table = alloc::vec![None; m * m];
        for (p, &(x, y)) in pairs.iter().enumerate() {
            for (q, &(u, v)) in pairs.iter().enumerate() {
                if y == u {
                    table[p * m + q] = index.get(&(x, v)).copied();
                }
            }
        }
        RawProduct { m, table }
    }

    fn mul(&self, p: usize, q: usize) -> Option<usize> {
        self.table[p * self.m + q]
    }
}

fn compare<F: Field>(
    field: &F,
    check: &'static str,
    solved: &Subspace<F::Elem>,
    closed: &Subspace<F::Elem>,
    mut dims: Vec<(&'static str, usize)>,
) -> Report<F::Elem> {
    dims.insert(0, ("closed_form", closed.dim()));
    dims.insert(0, ("solved", solved.dim()));
    dims.insert(0, ("ambient", solved.ambient_dim()));
    let witness = if let Some(v) = solved.difference_witness(field, closed) {
        Some(Witness {
            detail: String::from("solution outside the closed-form span"),
            vector: v,
        })
    } else {
        closed.difference_witness(field, solved).map(|v| Witness {
            detail: String::from("closed-form element violates the identities"),
            vector: v,
        })
    };
    Report {
        check,
        status: if witness.is_some() { Status::Mismatch } else { Status::Ok },
        dims,
        witness,
    }
}

fn push_grouped<F: Field>(field: &F, sys: &mut LinearSystem<F::Elem>, terms: BTreeMap<usize, Vec<(usize, F::Elem)>>) {
    for (_, row) in terms {
        sys.push(linalg::normalize(field, row));
    }
}

/// Adds `Σ sign * unknown` grouped by output coordinate.
fn add_terms<E: Clone>(acc: &mut BTreeMap<usize, Vec<(usize, E)>>, terms: &[(usize, usize)], sign: &E) {
    for &(t, u) in terms {
        acc.entry(t).or_default().push((u, sign.clone()));
    }
}

/// The space of bilinear products `*` with `·` and `*` totally
/// compatible. Unknown `((p * m + q) * m + r)` is the `e_r` coefficient of
/// `e_p * e_q`.
pub fn totcomp_linear_space<F: Field>(poset: &Poset, field: &F) -> Subspace<F::Elem> {
    let raw = RawProduct::new(poset);
    let m = raw.m;
    let idx = |p: usize, q: usize, r: usize| (p * m + q) * m + r;
    let mut sys = LinearSystem::new(m * m * m);
    let one = field.one();
    let minus = field.neg(&one);
    let mut mono: [Vec<(usize, usize)>; 4] = Default::default();
    for a in 0..m {
        for b in 0..m {
            for c in 0..m {
                for v in mono.iter_mut() {
                    v.clear();
                }
                // (a·b)*c
                if let Some(s) = raw.mul(a, b) {
                    mono[0].extend((0..m).map(|t| (t, idx(s, c, t))));
                }
                // (a*b)·c and a·(b*c)
                for r in 0..m {
                    if let Some(t) = raw.mul(r, c) {
                        mono[1].push((t, idx(a, b, r)));
                    }
                    if let Some(t) = raw.mul(a, r) {
                        mono[2].push((t, idx(b, c, r)));
                    }
                }
                // a*(b·c)
                if let Some(s) = raw.mul(b, c) {
                    mono[3].extend((0..m).map(|t| (t, idx(a, s, t))));
                }
                for k in 0..3 {
                    if mono[k].is_empty() && mono[k + 1].is_empty() {
                        continue;
                    }
                    let mut acc = BTreeMap::new();
                    add_terms(&mut acc, &mono[k], &one);
                    add_terms(&mut acc, &mono[k + 1], &minus);
                    push_grouped(field, &mut sys, acc);
                }
            }
        }
    }
    linalg::nullspace(field, &sys)
}

/// Compares the solved total compatibility space with the span of the
/// elementary annihilator-valued products and the class products `*_C`,
/// then feeds random associative solutions to `decompose`.
pub fn verify_totcomp_span<F: Field, R: RngCore + ?Sized>(
    rad: &Radical<'_, F>,
    rng: &mut R,
) -> Result<Report<F::Elem>> {
    let field = rad.field();
    let m = rad.dim();
    let ambient = m * m * m;
    let solved = totcomp_linear_space(rad.poset(), field);

    let ann = rad.ann_basis();
    let keys = rad.complement_basis();
    let mut elementary = Vec::new();
    for &p in &keys {
        for &q in &keys {
            for &a in &ann {
                elementary.push(alloc::vec![((p * m + q) * m + a, field.one())]);
            }
        }
    }
    let ann_span = Subspace::span(field, ambient, elementary.clone());
    let mut outside = 0;
    let mut family = elementary;
    for c in 0..rad.approx().len() {
        let v = structures::star_approx_class(rad, c).to_sparse();
        if !ann_span.contains(field, &v) {
            outside += 1;
        }
        family.push(v);
    }
    let closed = Subspace::span(field, ambient, family);
    let mut report = compare(
        field,
        "totcomp",
        &solved,
        &closed,
        alloc::vec![("ann_valued", ann_span.dim()), ("class_products_outside", outside)],
    );
    if !report.is_ok() {
        return Ok(report);
    }
    if solved.dim() != ann_span.dim() + outside {
        report.status = Status::Mismatch;
        report.witness = Some(Witness {
            detail: format!(
                "dimension {} differs from {} + {}",
                solved.dim(),
                ann_span.dim(),
                outside
            ),
            vector: Vec::new(),
        });
        return Ok(report);
    }
    let mut associative = 0;
    for _ in 0..TOTCOMP_SAMPLES {
        let v = solved.random_element(field, rng);
        let b = product_from_sparse(rad, &v)?;
        if !structures::is_associative(rad, &b) {
            continue;
        }
        associative += 1;
        if let Err(e) = classify::decompose(rad, &b) {
            report.status = Status::Mismatch;
            report.witness = Some(Witness {
                detail: format!("decompose failed on a sampled structure: {}", e),
                vector: v,
            });
            return Ok(report);
        }
    }
    report.dims.push(("sampled_associative", associative));
    Ok(report)
}

fn product_from_sparse<F: Field>(rad: &Radical<'_, F>, v: &[(usize, F::Elem)]) -> Result<BilinearProduct<F::Elem>> {
    let m = rad.dim();
    let mut grouped: BTreeMap<(usize, usize), Vec<(usize, F::Elem)>> = BTreeMap::new();
    for (u, c) in v {
        grouped.entry((u / (m * m), (u / m) % m)).or_default().push((u % m, c.clone()));
    }
    let entries = grouped
        .into_iter()
        .map(|(k, terms)| rad.element(terms).map(|e| (k, e)))
        .collect::<Result<Vec<_>>>()?;
    structures::product_from_entries(rad, entries)
}

/// Compares the solved centroid with the span of `centroid_basis`.
/// Unknown `j * m + i` is the `e_i` coefficient of `φ(e_j)`.
pub fn verify_centroid_span<F: Field>(rad: &Radical<'_, F>) -> Report<F::Elem> {
    let field = rad.field();
    let raw = RawProduct::new(rad.poset());
    let m = raw.m;
    let one = field.one();
    let minus = field.neg(&one);
    let mut sys = LinearSystem::new(m * m);
    let mut lhs = Vec::new();
    let mut mid = Vec::new();
    let mut rhs = Vec::new();
    for p in 0..m {
        for q in 0..m {
            lhs.clear();
            mid.clear();
            rhs.clear();
            // φ(e_p·e_q)
            if let Some(s) = raw.mul(p, q) {
                lhs.extend((0..m).map(|t| (t, s * m + t)));
            }
            for r in 0..m {
                // e_p·φ(e_q)
                if let Some(t) = raw.mul(p, r) {
                    mid.push((t, q * m + r));
                }
                // φ(e_p)·e_q
                if let Some(t) = raw.mul(r, q) {
                    rhs.push((t, p * m + r));
                }
            }
            for (a, b) in [(&lhs, &mid), (&mid, &rhs)] {
                let mut acc = BTreeMap::new();
                add_terms(&mut acc, a, &one);
                add_terms(&mut acc, b, &minus);
                push_grouped(field, &mut sys, acc);
            }
        }
    }
    let solved = linalg::nullspace(field, &sys);
    let family: Vec<SparseRow<F::Elem>> = rad
        .centroid_basis()
        .iter()
        .map(|phi| {
            let terms = phi.column_major().iter().cloned().enumerate().collect();
            linalg::normalize(field, terms)
        })
        .collect();
    let spanning = family.len();
    let closed = Subspace::span(field, m * m, family);
    compare(field, "centroid", &solved, &closed, alloc::vec![("spanning_family", spanning)])
}

/// Recomputes `Ann(J)` as the joint kernel of left and right
/// multiplications and `J·J` as the span of basis products.
pub fn verify_radical_closed_forms<F: Field>(rad: &Radical<'_, F>) -> Report<F::Elem> {
    let field = rad.field();
    let raw = RawProduct::new(rad.poset());
    let m = raw.m;
    let one = field.one();
    let mut sys = LinearSystem::new(m);
    for q in 0..m {
        let mut right: BTreeMap<usize, Vec<(usize, F::Elem)>> = BTreeMap::new();
        let mut left: BTreeMap<usize, Vec<(usize, F::Elem)>> = BTreeMap::new();
        for r in 0..m {
            if let Some(t) = raw.mul(r, q) {
                right.entry(t).or_default().push((r, one.clone()));
            }
            if let Some(t) = raw.mul(q, r) {
                left.entry(t).or_default().push((r, one.clone()));
            }
        }
        push_grouped(field, &mut sys, right);
        push_grouped(field, &mut sys, left);
    }
    let ann_solved = linalg::nullspace(field, &sys);
    let unit = |i: usize| alloc::vec![(i, field.one())];
    let ann_closed = Subspace::span(field, m, rad.ann_basis().into_iter().map(unit).collect());
    let ann = compare(field, "radical", &ann_solved, &ann_closed, Vec::new());

    let raw = &raw;
    let products: Vec<SparseRow<F::Elem>> = (0..m)
        .flat_map(|p| (0..m).filter_map(move |q| raw.mul(p, q)))
        .map(unit)
        .collect();
    let jj_solved = Subspace::span(field, m, products);
    let jj_closed = Subspace::span(field, m, rad.jj_basis().into_iter().map(unit).collect());
    let jj = compare(field, "radical", &jj_solved, &jj_closed, Vec::new());

    let dims = alloc::vec![
        ("ambient", m),
        ("ann_solved", ann_solved.dim()),
        ("ann_closed_form", ann_closed.dim()),
        ("jj_solved", jj_solved.dim()),
        ("jj_closed_form", jj_closed.dim()),
    ];
    let witness = ann
        .witness
        .map(|w| Witness {
            detail: format!("annihilator: {}", w.detail),
            vector: w.vector,
        })
        .or(jj.witness.map(|w| Witness {
            detail: format!("J·J: {}", w.detail),
            vector: w.vector,
        }));
    Report {
        check: "radical",
        status: if witness.is_some() { Status::Mismatch } else { Status::Ok },
        dims,
        witness,
    }
}
