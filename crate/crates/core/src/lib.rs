//! Totally compatible structures on the Jacobson radical `J(I(X, K))` of
//! the incidence algebra of a finite poset.
//!
//! The crate computes with the radical (products, annihilator, `J·J`,
//! centroid), builds and classifies bilinear structures on it, decides
//! whether a totally compatible structure is proper, and checks all
//! closed-form descriptions against an exact linear-algebra oracle.
//!
//! It is `no_std` and needs only `alloc`. File formats, the command line
//! and parallel drivers live in the `incidence` crate.

#![no_std]

extern crate alloc;

mod dsu;

pub mod classify;
pub mod error;
pub mod field;
pub mod linalg;
pub mod oracle;
pub mod poset;
pub mod radical;
pub mod search;
pub mod structures;

pub use classify::{Decomposition, NonPropernessWitness, Properness, PropernessCertificate};
pub use error::{Error, Result};
pub use field::{Field, FieldSpec, PrimeField, Rationals};
pub use poset::{ApproxPartition, Poset, SimPartition, StrictPair, StrictTriple};
pub use radical::{ChainConstantMap, JElement, LinearEndo, Radical};
pub use structures::{BilinearProduct, MuTable, Permutation};

/// Seeded generator used by every randomized self-check.
pub type Rng = rand_chacha::ChaCha8Rng;

/// Seed used when the caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x5eed_1dea;

pub fn rng_from_seed(seed: u64) -> Rng {
    <Rng as rand::SeedableRng>::seed_from_u64(seed)
}
