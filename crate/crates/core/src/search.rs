//! Enumeration of small posets and a per-poset survey of the
//! classification flags.

use alloc::string::String;
use alloc::vec::Vec;

use rand::RngCore;

use crate::classify;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::poset::Poset;
use crate::radical::Radical;

/// Largest size accepted by `enumerate_posets`.
pub const MAX_ENUMERATION: usize = 7;

/// Largest size accepted by `survey`.
pub const MAX_SURVEY: usize = 6;

/// Calls `f` with the relation matrix (row-major, reflexive) of every
/// partial order on `{1..n}`. Each order is produced exactly once by
/// adding element `k` above a down-closed set and below an up-closed set
/// of the first `k` elements.
pub fn for_each_relation(n: usize, mut f: impl FnMut(&[bool])) -> Result<()> {
    if n > MAX_ENUMERATION {
        return Err(Error::TooLarge {
            n,
            max: MAX_ENUMERATION,
        });
    }
    let mut leq = alloc::vec![false; n * n];
    extend(n, 0, &mut leq, &mut f);
    Ok(())
}

fn extend(n: usize, k: usize, leq: &mut [bool], f: &mut impl FnMut(&[bool])) {
    if k == n {
        f(leq);
        return;
    }
    leq[k * n + k] = true;
    for down in 0u32..(1 << k) {
        if !closed(n, k, leq, down, true) {
            continue;
        }
        for up in 0u32..(1 << k) {
            if up & down != 0 || !closed(n, k, leq, up, false) {
                continue;
            }
            let compatible = bits(down).all(|d| bits(up).all(|u| leq[d * n + u]));
            if !compatible {
                continue;
            }
            for d in bits(down) {
                leq[d * n + k] = true;
            }
            for u in bits(up) {
                leq[k * n + u] = true;
            }
            extend(n, k + 1, leq, f);
            for d in bits(down) {
                leq[d * n + k] = false;
            }
            for u in bits(up) {
                leq[k * n + u] = false;
            }
        }
    }
    leq[k * n + k] = false;
}

fn bits(mask: u32) -> impl Iterator<Item = usize> + Clone {
    (0..32).filter(move |i| mask >> i & 1 == 1)
}

/// Whether `mask` (a subset of the first `k` elements) is down-closed, or
/// up-closed when `down` is false.
fn closed(n: usize, k: usize, leq: &[bool], mask: u32, down: bool) -> bool {
    bits(mask).all(|a| {
        (0..k).all(|b| {
            let related = if down { leq[b * n + a] } else { leq[a * n + b] };
            !related || mask >> b & 1 == 1
        })
    })
}

/// Row-major bits of the strict order over ordered pairs `i ≠ j`.
fn encode(n: usize, lt: impl Fn(usize, usize) -> bool) -> u64 {
    let mut code = 0u64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                code = code << 1 | lt(i, j) as u64;
            }
        }
    }
    code
}

/// Encoding of the poset under its own labels.
pub fn encoding(p: &Poset) -> u64 {
    encode(p.size(), |i, j| p.lt(i + 1, j + 1))
}

/// The canonical representative of the isomorphism class, with its code.
///
/// Elements are sorted by (down-set size ascending, up-set size
/// descending); the code is the minimum encoding over relabelings that
/// keep that order, so the result is naturally labeled.
pub fn canonical_form(p: &Poset) -> (u64, Poset) {
    let n = p.size();
    let key = |x: usize| {
        let down = (1..=n).filter(|&y| p.leq(y, x)).count();
        let up = (1..=n).filter(|&y| p.leq(x, y)).count();
        (down, n - up)
    };
    let mut order: Vec<usize> = (1..=n).collect();
    order.sort_by_key(|&x| key(x));
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || key(order[i]) != key(order[start]) {
            blocks.push((start, i));
            start = i;
        }
    }
    let mut best: Option<(u64, Vec<usize>)> = None;
    permute_blocks(&mut order, &blocks, 0, &mut |ord| {
        let code = encode(n, |i, j| p.lt(ord[i], ord[j]));
        if best.as_ref().is_none_or(|(c, _)| code < *c) {
            best = Some((code, ord.to_vec()));
        }
    });
    let (code, ord) = best.expect("at least one ordering");
    let mut perm = alloc::vec![0; n];
    for (pos, &x) in ord.iter().enumerate() {
        perm[x - 1] = pos + 1;
    }
    let canon = p.relabel(&perm).expect("ordering is a permutation");
    (code, canon)
}

fn permute_blocks(order: &mut [usize], blocks: &[(usize, usize)], b: usize, f: &mut impl FnMut(&[usize])) {
    match blocks.get(b) {
        None => f(order),
        Some(&(lo, hi)) => permute_range(order, lo, hi, &mut |o| permute_blocks(o, blocks, b + 1, f)),
    }
}

/// Visits every permutation of `order[from..hi]` in place.
fn permute_range(order: &mut [usize], from: usize, hi: usize, f: &mut dyn FnMut(&mut [usize])) {
    if hi - from <= 1 {
        f(order);
        return;
    }
    for i in from..hi {
        order.swap(from, i);
        permute_range(order, from + 1, hi, f);
        order.swap(from, i);
    }
}

/// All partial orders on `n` labeled elements, or one canonical
/// representative per isomorphism class, ordered by encoding.
pub fn enumerate_posets(n: usize, up_to_iso: bool) -> Result<Vec<Poset>> {
    let mut out: Vec<(u64, Poset)> = Vec::new();
    let mut seen = alloc::collections::BTreeSet::new();
    let mut failure = None;
    for_each_relation(n, |leq| match Poset::from_relation(n, leq.to_vec()) {
        Ok(p) => {
            if up_to_iso {
                let (code, canon) = canonical_form(&p);
                if seen.insert(code) {
                    out.push((code, canon));
                }
            } else {
                out.push((encoding(&p), p));
            }
        }
        Err(e) => failure = Some(e),
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    out.sort_by_key(|(c, _)| *c);
    Ok(out.into_iter().map(|(_, p)| p).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetSurveyRow {
    pub n: usize,
    pub canonical_hasse: Vec<(usize, usize)>,
    pub length: usize,
    pub num_sim_classes: usize,
    pub num_approx_classes: usize,
    pub suff_cond: bool,
    pub all_ann_valued: bool,
    pub all_proper: bool,
}

impl PosetSurveyRow {
    /// `1-2;2-3` style edge list.
    pub fn hasse_string(&self) -> String {
        let parts: Vec<String> = self
            .canonical_hasse
            .iter()
            .map(|(u, v)| alloc::format!("{}-{}", u, v))
            .collect();
        parts.join(";")
    }
}

/// The survey row of one poset. The edge list is the poset's own.
pub fn survey_row<F: Field, R: RngCore + ?Sized>(poset: &Poset, field: &F, rng: &mut R) -> Result<PosetSurveyRow> {
    let rad = Radical::new(poset, field.clone())?;
    let row = PosetSurveyRow {
        n: poset.size(),
        canonical_hasse: poset.hasse_edges(),
        length: poset.length(),
        num_sim_classes: rad.sim().len(),
        num_approx_classes: rad.approx().len(),
        suff_cond: poset.sufficient_condition_holds(),
        all_ann_valued: classify::all_ann_valued(&rad)?,
        all_proper: classify::all_proper(&rad, rng)?,
    };
    if (row.suff_cond || row.all_ann_valued) && !row.all_proper {
        return Err(Error::SelfCheckFailed(alloc::format!(
            "implication violated for {}",
            row.hasse_string()
        )));
    }
    Ok(row)
}

/// The posets a survey of sizes `1..=n_max` covers, in row order: by
/// size, then canonical code, then own code.
pub fn survey_posets(n_max: usize, up_to_iso: bool) -> Result<Vec<Poset>> {
    if n_max > MAX_SURVEY {
        return Err(Error::TooLarge { n: n_max, max: MAX_SURVEY });
    }
    let mut out = Vec::new();
    for n in 1..=n_max {
        let mut batch: Vec<(u64, u64, Poset)> = enumerate_posets(n, up_to_iso)?
            .into_iter()
            .map(|p| (canonical_form(&p).0, encoding(&p), p))
            .collect();
        batch.sort_by_key(|(c, o, _)| (*c, *o));
        out.extend(batch.into_iter().map(|(_, _, p)| p));
    }
    Ok(out)
}

/// Sequential survey; each row draws from a generator seeded with
/// `seed` so rows do not depend on evaluation order.
pub fn survey<F: Field>(n_max: usize, up_to_iso: bool, field: &F, seed: u64) -> Result<Vec<PosetSurveyRow>> {
    survey_posets(n_max, up_to_iso)?
        .iter()
        .map(|p| survey_row(p, field, &mut crate::rng_from_seed(seed)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    fn count(n: usize) -> usize {
        let mut c = 0;
        for_each_relation(n, |_| c += 1).unwrap();
        c
    }

    /// Counts partial orders by filtering all `3^(n choose 2)` choices of
    /// `<`, `>` or incomparable per unordered pair.
    fn brute_count(n: usize) -> usize {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let total = 3usize.pow(pairs.len() as u32);
        let mut found = 0;
        for mut code in 0..total {
            let mut lt = alloc::vec![false; n * n];
            for &(i, j) in &pairs {
                match code % 3 {
                    1 => lt[i * n + j] = true,
                    2 => lt[j * n + i] = true,
                    _ => {}
                }
                code /= 3;
            }
            let transitive = (0..n).all(|a| {
                (0..n).all(|b| (0..n).all(|c| !(lt[a * n + b] && lt[b * n + c]) || lt[a * n + c]))
            });
            if transitive {
                found += 1;
            }
        }
        found
    }

    #[test]
    fn labeled_counts() {
        assert_eq!((0..=5).map(count).collect::<Vec<_>>(), [1, 1, 3, 19, 219, 4231]);
        for n in 1..=4 {
            assert_eq!(count(n), brute_count(n));
        }
    }

    #[test]
    fn unlabeled_counts() {
        let counts: Vec<usize> = (1..=5).map(|n| enumerate_posets(n, true).unwrap().len()).collect();
        assert_eq!(counts, [1, 2, 5, 16, 63]);
        assert_eq!(enumerate_posets(2, false).unwrap().len(), 3);
    }

    #[test]
    fn too_large() {
        assert_eq!(
            enumerate_posets(8, true).unwrap_err(),
            Error::TooLarge { n: 8, max: 7 }
        );
        assert!(survey_posets(7, true).is_err());
    }

    #[test]
    fn canonical_form_is_invariant_and_natural() {
        let p = Poset::from_hasse(5, &[(1, 2), (2, 3), (3, 5), (2, 4)]).unwrap();
        let (code, canon) = canonical_form(&p);
        for perm in [[5, 4, 3, 2, 1], [2, 1, 5, 3, 4], [3, 5, 1, 4, 2]] {
            let q = p.relabel(&perm).unwrap();
            assert_eq!(canonical_form(&q), (code, canon.clone()));
        }
        for (u, v) in canon.hasse_edges() {
            assert!(u < v);
        }
    }

    #[test]
    fn rows_flag_examples() {
        let f = PrimeField::new(2).unwrap();
        let y6 = Poset::from_hasse(6, &[(1, 2), (2, 3), (3, 5), (2, 4), (4, 6)]).unwrap();
        let row = survey_row(&y6, &f, &mut crate::rng_from_seed(0)).unwrap();
        assert!(!row.all_proper);
        let y5 = Poset::from_hasse(5, &[(1, 2), (2, 3), (3, 5), (2, 4)]).unwrap();
        let row = survey_row(&y5, &f, &mut crate::rng_from_seed(0)).unwrap();
        assert!(row.all_proper && !row.suff_cond);
        assert_eq!(row.hasse_string(), "1-2;2-3;2-4;3-5");
    }

    #[test]
    fn short_posets_are_ann_valued() {
        let f = PrimeField::new(2).unwrap();
        for row in survey(4, true, &f, 0).unwrap() {
            assert_eq!(row.all_ann_valued, row.length <= 2);
        }
    }
}
