//! Classification of totally compatible structures on `J`.
//!
//! Every totally compatible structure splits as an annihilator-valued
//! structure plus a combination `Σ α_C *_C` over `≈` classes. Properness
//! is decided from the `α` values of the pinned classes and then verified
//! directly.
//!
//! A triple `(x, y, z)` is long when one of its legs has length above 1,
//! and exposed when it is not long and `e_xz` lies outside `Ann(J)`. A
//! class containing a long or exposed triple is pinned: any `σ` with
//! `*_{φ_σ} - B` annihilator-valued must equal `α_C` on its projection.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::RngCore;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poset::StrictTriple;
use crate::radical::{ChainConstantMap, Radical};
use crate::structures::{self, BilinearProduct};

/// `B = bullet + Σ alpha[C] *_C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition<E> {
    alpha: Vec<E>,
    bullet: BilinearProduct<E>,
}

impl<E: Clone> Decomposition<E> {
    /// One coefficient per `≈` class, in class order.
    pub fn alpha(&self) -> &[E] {
        &self.alpha
    }

    /// The annihilator-valued part.
    pub fn bullet(&self) -> &BilinearProduct<E> {
        &self.bullet
    }
}

/// `B = *_{φ_σ} + bullet` with `bullet` an annihilator-valued structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropernessCertificate<E> {
    pub sigma: ChainConstantMap<E>,
    pub bullet: BilinearProduct<E>,
}

/// Two pinned `≈` classes over one `~` class with different `α`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonPropernessWitness<E> {
    pub sim_class: usize,
    pub triple1: StrictTriple,
    pub triple2: StrictTriple,
    pub alpha1: E,
    pub alpha2: E,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Properness<E> {
    Proper(PropernessCertificate<E>),
    NotProper(NonPropernessWitness<E>),
}

impl<E> Properness<E> {
    pub fn is_proper(&self) -> bool {
        matches!(self, Properness::Proper(_))
    }
}

/// `bullet + Σ alpha[C] *_C`.
pub fn compose<F: Field>(
    rad: &Radical<'_, F>,
    alpha: &[F::Elem],
    bullet: &BilinearProduct<F::Elem>,
) -> Result<BilinearProduct<F::Elem>> {
    if alpha.len() != rad.approx().len() {
        return Err(Error::DimensionMismatch {
            expected: rad.approx().len(),
            got: alpha.len(),
        });
    }
    let stars: Vec<BilinearProduct<F::Elem>> = (0..alpha.len())
        .map(|c| structures::star_approx_class(rad, c))
        .collect();
    let mut terms: Vec<(F::Elem, &BilinearProduct<F::Elem>)> = Vec::with_capacity(alpha.len() + 1);
    terms.push((rad.field().one(), bullet));
    terms.extend(alpha.iter().cloned().zip(stars.iter()));
    structures::combine(rad, &terms)
}

fn require_totally_compatible<F: Field>(rad: &Radical<'_, F>, b: &BilinearProduct<F::Elem>) -> Result<()> {
    if b.dim() != rad.dim() {
        return Err(Error::MixedContext);
    }
    if !structures::is_associative(rad, b) {
        return Err(Error::NotTotallyCompatible(String::from("product is not associative")));
    }
    if !structures::is_totally_compatible_with(rad, &rad.dot_table(), b) {
        return Err(Error::NotTotallyCompatible(String::from(
            "product is not totally compatible with the radical product",
        )));
    }
    Ok(())
}

fn legs<F: Field>(rad: &Radical<'_, F>, t: StrictTriple) -> (usize, usize, usize) {
    let p = rad.poset();
    let idx = |x, y| p.pair_index(x, y).expect("triple legs are pairs");
    (idx(t.x, t.y), idx(t.y, t.z), idx(t.x, t.z))
}

/// Reads `α_C` off every triple of every class.
fn read_alpha<F: Field>(rad: &Radical<'_, F>, b: &BilinearProduct<F::Elem>) -> Result<Vec<F::Elem>> {
    let f = rad.field();
    let triples = rad.poset().triples();
    let mut alpha = Vec::with_capacity(rad.approx().len());
    for c in 0..rad.approx().len() {
        let mut value: Option<F::Elem> = None;
        for &t in rad.approx().members(c) {
            let (p, q, r) = legs(rad, triples[t]);
            let coeff = b
                .get(p, q)
                .and_then(|v| v.get(r).cloned())
                .unwrap_or_else(|| f.zero());
            match &value {
                None => value = Some(coeff),
                Some(v) if *v != coeff => {
                    return Err(Error::InternalInconsistency(format!(
                        "coefficient varies inside the class of {}",
                        triples[rad.approx().representative(c)]
                    )))
                }
                Some(_) => {}
            }
        }
        alpha.push(value.expect("classes are nonempty"));
    }
    Ok(alpha)
}

/// Splits a totally compatible structure into its `*_C` coefficients and
/// annihilator-valued part. The split is verified by exact reconstruction.
pub fn decompose<F: Field>(rad: &Radical<'_, F>, b: &BilinearProduct<F::Elem>) -> Result<Decomposition<F::Elem>> {
    require_totally_compatible(rad, b)?;
    decompose_unchecked(rad, b)
}

fn decompose_unchecked<F: Field>(
    rad: &Radical<'_, F>,
    b: &BilinearProduct<F::Elem>,
) -> Result<Decomposition<F::Elem>> {
    let f = rad.field();
    let alpha = read_alpha(rad, b)?;
    let neg: Vec<F::Elem> = alpha.iter().map(|a| f.neg(a)).collect();
    let bullet = compose(rad, &neg, b)?;
    if !structures::is_annihilator_valued(rad, &bullet) {
        return Err(Error::InternalInconsistency(String::from(
            "remainder is not annihilator-valued",
        )));
    }
    if !structures::is_associative(rad, &bullet) {
        return Err(Error::InternalInconsistency(String::from("remainder is not associative")));
    }
    if compose(rad, &alpha, &bullet)? != *b {
        return Err(Error::InternalInconsistency(String::from("reconstruction differs")));
    }
    Ok(Decomposition { alpha, bullet })
}

/// For each `≈` class, its first long or exposed triple, if any.
pub fn pinned_classes<F: Field>(rad: &Radical<'_, F>) -> Vec<Option<StrictTriple>> {
    let poset = rad.poset();
    let triples = poset.triples();
    (0..rad.approx().len())
        .map(|c| {
            rad.approx().members(c).iter().map(|&t| triples[t]).find(|&t| {
                let (p, q, r) = legs(rad, t);
                let long = poset.pair_length(p) > 1 || poset.pair_length(q) > 1;
                long || !rad.is_ann_pair(r)
            })
        })
        .collect()
}

/// Decides whether a totally compatible structure has the form
/// `*_φ + bullet`, returning a checked certificate or a witness.
pub fn decide_proper<F: Field>(rad: &Radical<'_, F>, b: &BilinearProduct<F::Elem>) -> Result<Properness<F::Elem>> {
    let dec = decompose(rad, b)?;
    let pins = pinned_classes(rad);
    let mut forced: Vec<Option<(usize, StrictTriple)>> = alloc::vec![None; rad.sim().len()];
    for (c, pin) in pins.iter().enumerate() {
        let Some(t) = *pin else { continue };
        let d = rad.approx().proj(c);
        match forced[d] {
            None => forced[d] = Some((c, t)),
            Some((c0, t0)) if dec.alpha[c0] != dec.alpha[c] => {
                return Ok(Properness::NotProper(NonPropernessWitness {
                    sim_class: d,
                    triple1: t0,
                    triple2: t,
                    alpha1: dec.alpha[c0].clone(),
                    alpha2: dec.alpha[c].clone(),
                }));
            }
            Some(_) => {}
        }
    }
    let f = rad.field();
    let sigma = ChainConstantMap::from_class_values(
        forced
            .iter()
            .map(|e| e.map_or_else(|| f.zero(), |(c, _)| dec.alpha[c].clone()))
            .collect(),
    );
    let star = structures::star_phi(rad, &rad.phi_sigma(&sigma))?;
    let bullet = structures::sub(rad, b, &star)?;
    if !structures::is_annihilator_valued(rad, &bullet) || !structures::is_associative(rad, &bullet) {
        return Err(Error::VerificationFailed(String::from(
            "certificate remainder is not an annihilator-valued structure",
        )));
    }
    Ok(Properness::Proper(PropernessCertificate { sigma, bullet }))
}

/// Whether every totally compatible structure is annihilator-valued, which
/// happens exactly when the poset has length at most 2.
pub fn all_ann_valued<F: Field>(rad: &Radical<'_, F>) -> Result<bool> {
    let answer = rad.poset().length() <= 2;
    let dot = rad.dot_table();
    if answer {
        if !structures::is_annihilator_valued(rad, &dot) {
            return Err(Error::SelfCheckFailed(String::from(
                "radical product is not annihilator-valued",
            )));
        }
        for c in 0..rad.approx().len() {
            if !structures::is_annihilator_valued(rad, &structures::star_approx_class(rad, c)) {
                return Err(Error::SelfCheckFailed(format!(
                    "class star product of {} is not annihilator-valued",
                    rad.poset().triples()[rad.approx().representative(c)]
                )));
            }
        }
    } else if structures::is_annihilator_valued(rad, &dot) {
        return Err(Error::SelfCheckFailed(String::from(
            "radical product is annihilator-valued on a long poset",
        )));
    }
    Ok(answer)
}

/// Number of random structures `all_proper` checks when it answers true.
pub const PROPER_SAMPLES: usize = 20;

/// Whether every totally compatible structure is proper: true exactly when
/// each `~` class carries at most one pinned `≈` class.
pub fn all_proper<F: Field, R: RngCore + ?Sized>(rad: &Radical<'_, F>, rng: &mut R) -> Result<bool> {
    let pins = pinned_classes(rad);
    let mut fibers: Vec<Vec<usize>> = alloc::vec![Vec::new(); rad.sim().len()];
    for (c, pin) in pins.iter().enumerate() {
        if pin.is_some() {
            fibers[rad.approx().proj(c)].push(c);
        }
    }
    let mut answer = true;
    for fiber in fibers.iter().filter(|f| f.len() >= 2) {
        answer = false;
        let star = structures::star_approx_class(rad, fiber[0]);
        if decide_proper(rad, &star)?.is_proper() {
            return Err(Error::SelfCheckFailed(format!(
                "class star product of {} is proper despite a conflicting fiber",
                rad.poset().triples()[rad.approx().representative(fiber[0])]
            )));
        }
    }
    if answer {
        for _ in 0..PROPER_SAMPLES {
            let b = random_theorem_structure(rad, rng);
            if !decide_proper(rad, &b)?.is_proper() {
                return Err(Error::SelfCheckFailed(String::from(
                    "random structure is not proper",
                )));
            }
        }
    }
    Ok(answer)
}

/// `bullet + Σ α_C *_C` with random `α` and a random associative
/// annihilator-valued `bullet`.
pub fn random_theorem_structure<F: Field, R: RngCore + ?Sized>(
    rad: &Radical<'_, F>,
    rng: &mut R,
) -> BilinearProduct<F::Elem> {
    let alpha: Vec<F::Elem> = (0..rad.approx().len()).map(|_| rad.field().sample(rng)).collect();
    let bullet = structures::random_ann_structure(rad, rng);
    compose(rad, &alpha, &bullet).expect("one coefficient per class")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::poset::Poset;

    fn y6() -> Poset {
        Poset::from_hasse(6, &[(1, 2), (2, 3), (3, 5), (2, 4), (4, 6)]).unwrap()
    }
    fn y5() -> Poset {
        Poset::from_hasse(5, &[(1, 2), (2, 3), (3, 5), (2, 4)]).unwrap()
    }
    fn y4() -> Poset {
        Poset::from_hasse(4, &[(1, 2), (2, 3), (2, 4)]).unwrap()
    }
    fn t(x: usize, y: usize, z: usize) -> StrictTriple {
        StrictTriple { x, y, z }
    }

    #[test]
    fn decompose_class_star() {
        let p = y6();
        let rad = Radical::new(&p, Rationals).unwrap();
        let dec = decompose(&rad, &structures::star_approx_class(&rad, 0)).unwrap();
        assert_eq!(dec.alpha(), &[Rationals.one(), Rationals.zero()]);
        assert!(dec.bullet().is_zero());
    }

    #[test]
    fn decompose_dot_product() {
        for p in [y6(), y5(), y4(), Poset::chain(5)] {
            let f = PrimeField::new(3).unwrap();
            let rad = Radical::new(&p, f).unwrap();
            let dec = decompose(&rad, &rad.dot_table()).unwrap();
            assert!(dec.alpha().iter().all(|a| *a == 1));
            assert!(dec.bullet().is_zero());
        }
    }

    #[test]
    fn decompose_mu_plus_class() {
        let p = y5();
        let f = PrimeField::new(5).unwrap();
        let rad = Radical::new(&p, f).unwrap();
        let mut rng = crate::rng_from_seed(2);
        for _ in 0..20 {
            let bullet = structures::from_mu(&rad, &structures::random_mu(&rad, &mut rng));
            let two_d = structures::combine(&rad, &[(2, &structures::star_approx_class(&rad, 1))]).unwrap();
            let b = structures::add(&rad, &bullet, &two_d).unwrap();
            let dec = decompose(&rad, &b).unwrap();
            assert_eq!(compose(&rad, dec.alpha(), dec.bullet()).unwrap(), b);
            assert_eq!(dec.alpha()[0], 0);
        }
    }

    #[test]
    fn decompose_rejects_non_structures() {
        let p = Poset::chain(3);
        let rad = Radical::new(&p, Rationals).unwrap();
        let i = |x, y| p.pair_index(x, y).unwrap();
        let odd = structures::product_from_entries(&rad, [((i(1, 2), i(2, 3)), rad.basis(i(1, 2)))]).unwrap();
        assert!(matches!(decompose(&rad, &odd), Err(Error::NotTotallyCompatible(_))));
        assert!(matches!(decide_proper(&rad, &odd), Err(Error::NotTotallyCompatible(_))));
    }

    #[test]
    fn six_element_witness() {
        let p = y6();
        let rad = Radical::new(&p, Rationals).unwrap();
        let pins = pinned_classes(&rad);
        assert_eq!(pins, [Some(t(1, 2, 3)), Some(t(1, 2, 4))]);
        match decide_proper(&rad, &structures::star_approx_class(&rad, 0)).unwrap() {
            Properness::NotProper(w) => {
                assert_eq!(w.sim_class, 0);
                assert_eq!((w.triple1, w.triple2), (t(1, 2, 3), t(1, 2, 4)));
                assert_eq!((w.alpha1, w.alpha2), (Rationals.one(), Rationals.zero()));
            }
            Properness::Proper(_) => panic!("expected a witness"),
        }
        let mut rng = crate::rng_from_seed(0);
        assert!(!all_proper(&rad, &mut rng).unwrap());
    }

    #[test]
    fn five_element_certificate() {
        let p = y5();
        let f = PrimeField::new(5).unwrap();
        let rad = Radical::new(&p, f).unwrap();
        let b = compose(&rad, &[3, 1], &structures::BilinearProduct::zero(rad.dim())).unwrap();
        let Properness::Proper(cert) = decide_proper(&rad, &b).unwrap() else {
            panic!("expected a certificate")
        };
        assert_eq!(cert.sigma.values(), &[3]);
        let i = |x, y| p.pair_index(x, y).unwrap();
        // (1 - 3) e_14 on e_12 e_24
        let expected = structures::product_from_entries(&rad, [((i(1, 2), i(2, 4)), rad.scale(&3, &rad.basis(i(1, 4))))]).unwrap();
        assert_eq!(cert.bullet, expected);
        let mut rng = crate::rng_from_seed(0);
        assert!(all_proper(&rad, &mut rng).unwrap());
    }

    #[test]
    fn centroid_products_are_proper() {
        let p = y6();
        let f = PrimeField::new(3).unwrap();
        let rad = Radical::new(&p, f).unwrap();
        let basis = rad.centroid_basis();
        let mut rng = crate::rng_from_seed(4);
        for _ in 0..10 {
            let terms: Vec<_> = basis.iter().map(|phi| (f.sample(&mut rng), phi)).collect();
            let phi = rad.endo_combination(&terms);
            let b = structures::star_phi(&rad, &phi).unwrap();
            let Properness::Proper(cert) = decide_proper(&rad, &b).unwrap() else {
                panic!("star products are proper")
            };
            assert!(cert.bullet.entries().all(|(_, v)| rad.in_ann_span(v)));
        }
    }

    #[test]
    fn ann_valued_flags() {
        for (p, want) in [(y4(), true), (Poset::chain(4), false), (Poset::chain(3), true), (y5(), false)] {
            let rad = Radical::new(&p, Rationals).unwrap();
            assert_eq!(all_ann_valued(&rad).unwrap(), want);
        }
    }

    #[test]
    fn properness_is_field_independent_on_examples() {
        for p in [y6(), y5(), y4(), Poset::chain(4), Poset::antichain(3)] {
            let mut rng = crate::rng_from_seed(1);
            let q = all_proper(&Radical::new(&p, Rationals).unwrap(), &mut rng).unwrap();
            for m in [2, 3] {
                let rad = Radical::new(&p, PrimeField::new(m).unwrap()).unwrap();
                assert_eq!(all_proper(&rad, &mut rng).unwrap(), q);
            }
            if p.sufficient_condition_holds() {
                assert!(q);
            }
        }
    }

    #[test]
    fn compose_checks_length() {
        let p = y6();
        let rad = Radical::new(&p, Rationals).unwrap();
        assert_eq!(
            compose(&rad, &[Rationals.one()], &BilinearProduct::zero(rad.dim())),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        );
    }
}
