use crate::baselines::SetSketch;
use crate::error::{Error, Result};
use crate::hashing::HashFamily;
use crate::params::{Algo, ItemId, JaccardEstimate};

/// Running sum of per-item random unit vectors in `R^d`.
///
/// Each coordinate of an item's vector is `±1/√d`, the sign taken from one
/// bit of a per-block 64-bit hash. Cross terms between distinct items are
/// noise of order `√(|A||B|/d)`, so the estimate is only meaningful while
/// `d` is large next to `|A||B| / |A ∩ B|²`.
#[derive(Clone, Debug, PartialEq)]
pub struct DotHashAccumulator {
    vec: Vec<f64>,
    hash: HashFamily,
    card: u64,
}

impl DotHashAccumulator {
    pub const DEFAULT_DIM: usize = 1024;

    pub fn new(dim: usize, seed: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "DotHash dimension must be positive".into(),
            ));
        }
        Ok(DotHashAccumulator {
            vec: vec![0.0; dim],
            hash: HashFamily::new(seed, dim.div_ceil(64)),
            card: 0,
        })
    }

    pub fn dim(&self) -> usize {
        self.vec.len()
    }

    pub fn vector(&self) -> &[f64] {
        &self.vec
    }

    /// Number of set elements added.
    pub fn cardinality(&self) -> u64 {
        self.card
    }

    pub fn insert(&mut self, item: ItemId) {
        let scale = 1.0 / (self.vec.len() as f64).sqrt();
        for (block, chunk) in self.vec.chunks_mut(64).enumerate() {
            let bits = self.hash.raw_hash(item, block);
            for (t, v) in chunk.iter_mut().enumerate() {
                if (bits >> t) & 1 == 1 {
                    *v += scale;
                } else {
                    *v -= scale;
                }
            }
        }
        self.card += 1;
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.vec.iter().zip(&other.vec).map(|(a, b)| a * b).sum()
    }
}

/// `Î / (|A| + |B| − Î)` with `Î = a · b`.
pub fn dothash_estimate(
    a: &DotHashAccumulator,
    b: &DotHashAccumulator,
    card_a: u64,
    card_b: u64,
) -> Result<JaccardEstimate> {
    if a.dim() != b.dim() || a.hash.master_seed() != b.hash.master_seed() {
        return Err(Error::Incompatible(
            "DotHash accumulators differ in dimension or seed".into(),
        ));
    }
    let inter = a.dot(b);
    let union = card_a as f64 + card_b as f64 - inter;
    if union <= 0.0 {
        return Err(Error::Degenerate(format!(
            "estimated union {union} is not positive"
        )));
    }
    Ok(JaccardEstimate::new(inter / union, Algo::DotHash))
}

impl SetSketch for DotHashAccumulator {
    fn algo(&self) -> Algo {
        Algo::DotHash
    }

    fn insert_key(&mut self, key: ItemId) {
        self.insert(key);
    }

    fn estimate_set(&self, other: &Self) -> Result<JaccardEstimate> {
        dothash_estimate(self, other, self.card, other.card)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn acc(dim: usize, seed: u64, items: impl IntoIterator<Item = u64>) -> DotHashAccumulator {
        let mut a = DotHashAccumulator::new(dim, seed).unwrap();
        for x in items {
            a.insert(ItemId(x));
        }
        a
    }

    #[test]
    fn item_vectors_are_unit() {
        for x in 0..50 {
            let a = acc(200, 1, [x]);
            assert!((a.dot(&a) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_side_gives_zero() {
        let a = acc(256, 1, 0..20);
        let b = acc(256, 1, []);
        assert_eq!(dothash_estimate(&a, &b, 20, 0).unwrap().raw, 0.0);
        assert!(dothash_estimate(&b, &b, 0, 0).is_err());
        assert!(dothash_estimate(&a, &acc(128, 1, []), 20, 0).is_err());
    }

    #[test]
    fn identical_small_sets_near_one() {
        let n = 32;
        let mean: f64 = (0..50)
            .map(|seed| {
                let a = acc(4096, seed, 0..n);
                let b = acc(4096, seed, 0..n);
                dothash_estimate(&a, &b, n, n).unwrap().value
            })
            .sum::<f64>()
            / 50.0;
        assert!((mean - 1.0).abs() <= 0.05, "mean {mean}");
    }

    #[test]
    fn inner_product_is_unbiased_for_intersection() {
        // |A ∩ B| = 10
        let trials = 200;
        let mean: f64 = (0..trials)
            .map(|seed| acc(512, seed, 0..30).dot(&acc(512, seed, 20..50)))
            .sum::<f64>()
            / trials as f64;
        assert!((mean - 10.0).abs() < 0.5, "mean {mean}");
    }
}
