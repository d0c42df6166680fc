//! Set-similarity baselines and the occurrence-expansion adapters that let
//! them consume multiset streams.

pub mod adapter;
pub mod dothash;
pub mod hll;
pub mod maxloghash;
pub mod minhash;

pub use adapter::{expand_cm, expand_exact, AdapterKind, Expander, OccurrenceItem, SetAdapted};
pub use dothash::{dothash_estimate, DotHashAccumulator};
pub use hll::{hll_cardinality, hll_jaccard, rho, HllCardinality, HllRegisters};
pub use maxloghash::{maxloghash_estimate, MaxLogHashState};
pub use minhash::{minhash_estimate, MinHashSignature};

use crate::error::Result;
use crate::params::{Algo, ItemId, JaccardEstimate};

/// A set-similarity estimator fed with hashed set keys.
pub trait SetSketch {
    fn algo(&self) -> Algo;

    fn insert_key(&mut self, key: ItemId);

    fn estimate_set(&self, other: &Self) -> Result<JaccardEstimate>;
}
