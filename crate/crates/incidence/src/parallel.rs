//! Parallel drivers over independent posets.

use incidence_core::search::{self, PosetSurveyRow};
use incidence_core::{Field, Result};
use rayon::prelude::*;

/// The survey of sizes `1..=n_max`, rows computed on a rayon pool with
/// `jobs` threads (all cores when `None`). Every row uses its own
/// generator seeded with `seed`, so the output does not depend on `jobs`.
pub fn survey<F: Field>(
    n_max: usize,
    up_to_iso: bool,
    field: &F,
    seed: u64,
    jobs: Option<usize>,
) -> Result<Vec<PosetSurveyRow>> {
    let posets = search::survey_posets(n_max, up_to_iso)?;
    let work = || {
        posets
            .par_iter()
            .map(|p| search::survey_row(p, field, &mut incidence_core::rng_from_seed(seed)))
            .collect::<Result<Vec<_>>>()
    };
    match jobs {
        None => work(),
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .expect("thread pool")
            .install(work),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use incidence_core::PrimeField;

    #[test]
    fn matches_sequential_survey() {
        let f = PrimeField::new(2).unwrap();
        let seq = search::survey(4, false, &f, 7).unwrap();
        assert_eq!(survey(4, false, &f, 7, Some(3)).unwrap(), seq);
        assert_eq!(survey(4, false, &f, 7, None).unwrap(), seq);
    }
}
