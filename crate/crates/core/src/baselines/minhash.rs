use crate::baselines::SetSketch;
use crate::error::{Error, Result};
use crate::hashing::HashFamily;
use crate::params::{Algo, ItemId, JaccardEstimate};

/// `k` per-row minima of the unit-interval hash.
#[derive(Clone, Debug, PartialEq)]
pub struct MinHashSignature {
    mins: Vec<f64>,
    hash: HashFamily,
    inserted: u64,
}

impl MinHashSignature {
    pub const DEFAULT_K: usize = 128;

    pub fn new(k: usize, seed: u64) -> Self {
        MinHashSignature {
            mins: vec![1.0; k],
            hash: HashFamily::new(seed, k),
            inserted: 0,
        }
    }

    pub fn k(&self) -> usize {
        self.mins.len()
    }

    pub fn mins(&self) -> &[f64] {
        &self.mins
    }

    pub fn is_empty(&self) -> bool {
        self.inserted == 0
    }

    #[inline]
    pub fn insert(&mut self, item: ItemId) {
        for (row, m) in self.mins.iter_mut().enumerate() {
            let h = self.hash.unit_hash(item, row);
            if h < *m {
                *m = h;
            }
        }
        self.inserted += 1;
    }
}

/// Fraction of rows whose minima agree.
pub fn minhash_estimate(a: &MinHashSignature, b: &MinHashSignature) -> Result<JaccardEstimate> {
    if a.k() != b.k() || a.hash.master_seed() != b.hash.master_seed() {
        return Err(Error::Incompatible(
            "MinHash signatures differ in k or seed".into(),
        ));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let agree = a.mins.iter().zip(&b.mins).filter(|(x, y)| x == y).count();
    Ok(JaccardEstimate::new(
        agree as f64 / a.k() as f64,
        Algo::MinHash,
    ))
}

impl SetSketch for MinHashSignature {
    fn algo(&self) -> Algo {
        Algo::MinHash
    }

    fn insert_key(&mut self, key: ItemId) {
        self.insert(key);
    }

    fn estimate_set(&self, other: &Self) -> Result<JaccardEstimate> {
        minhash_estimate(self, other)
    }
}
