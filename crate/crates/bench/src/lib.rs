//! Shared inputs for the criterion benches.

use simisketch::{random_split, zipf_stream, ItemId, ZipfSpec};

/// A Zipf(alpha) stream split in half, for a fixed seed.
pub fn zipf_pair(n_items: usize, n_distinct: usize, alpha: f64) -> (Vec<ItemId>, Vec<ItemId>) {
    let spec = ZipfSpec {
        n_items,
        n_distinct,
        alpha,
        seed: 0xbe7c,
    };
    let stream = zipf_stream(&spec).expect("valid spec");
    random_split(&stream, 0.5, 0xbe7d).expect("valid split")
}
