//! Multiset Jaccard similarity sketches.
//!
//! Four sketch variants (`CmSimiSketch`, `CountSimiSketch`,
//! `FormalSimiSketch`, `SalsaSimiSketch`) estimate
//! `|A ∩ B| / |A ∪ B|` for two multiset streams from fixed-size counter
//! grids. Set-similarity baselines (MinHash, HyperLogLog, MaxLogHash,
//! DotHash) are included behind occurrence-expansion adapters, along with an
//! exact oracle, a Zipf stream generator, and an experiment harness.
//!
//! ```
//! use simisketch::{FormalSimiSketch, ItemId, SimilaritySketch};
//!
//! let mut a = FormalSimiSketch::with_budget(64 * 1024, 1, 42).unwrap();
//! let mut b = FormalSimiSketch::with_budget(64 * 1024, 1, 42).unwrap();
//! a.insert_all([1, 1, 2, 3].map(ItemId)).unwrap();
//! b.insert_all([1, 2, 2, 4].map(ItemId)).unwrap();
//! let j = a.estimate(&b).unwrap();
//! assert!((0.0..=1.0).contains(&j.value));
//! ```

pub mod baselines;
pub mod datagen;
pub mod error;
pub mod harness;
pub mod hashing;
pub mod oracle;
pub mod params;
pub mod sketch;

pub use baselines::{
    AdapterKind, DotHashAccumulator, Expander, HllRegisters, MaxLogHashState, MinHashSignature,
    OccurrenceItem, SetAdapted, SetSketch,
};
pub use datagen::{random_split, zipf_stream, ZipfSpec};
pub use error::{Error, Result};
pub use hashing::HashFamily;
pub use oracle::ExactMultiset;
pub use params::{
    derive_width, derive_width_bits, Algo, ItemId, JaccardEstimate, SimilaritySketch, SketchParams,
};
pub use sketch::{CmSimiSketch, CountSimiSketch, FormalSimiSketch, SalsaSimiSketch};
