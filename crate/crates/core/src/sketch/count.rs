use crate::error::{Error, Result};
use crate::hashing::HashFamily;
use crate::params::{Algo, ItemId, JaccardEstimate, SimilaritySketch, SketchParams};
use crate::sketch::signed_ratio;

/// Count-sketch shaped grid of signed counters. Every slot's sign-gated
/// magnitude ratio gets the same weight `1 / (rows * width)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountSimiSketch {
    params: SketchParams,
    counters: Vec<i32>,
    hash: HashFamily,
}

impl CountSimiSketch {
    pub const SLOT_BYTES: usize = 4;

    pub fn new(params: SketchParams) -> Self {
        CountSimiSketch {
            counters: vec![0; params.rows * params.width],
            hash: HashFamily::new(params.master_seed, params.rows),
            params,
        }
    }

    pub fn with_budget(memory_bytes: usize, rows: usize, seed: u64) -> Result<Self> {
        Ok(Self::new(SketchParams::from_budget(
            memory_bytes,
            rows,
            Self::SLOT_BYTES,
            seed,
        )?))
    }

    pub fn params(&self) -> &SketchParams {
        &self.params
    }

    #[inline]
    pub fn bucket(&self, item: ItemId, row: usize) -> usize {
        self.hash.index_hash(item, row, self.params.width)
    }

    #[inline]
    pub fn sign(&self, item: ItemId, row: usize) -> i32 {
        self.hash.sign_hash(item, row)
    }

    pub fn counter(&self, row: usize, slot: usize) -> i32 {
        self.counters[row * self.params.width + slot]
    }

    pub fn insert(&mut self, item: ItemId) -> Result<()> {
        let w = self.params.width;
        for row in 0..self.params.rows {
            let slot = self.bucket(item, row);
            if self.counters[row * w + slot]
                .checked_add(self.sign(item, row))
                .is_none()
            {
                return Err(Error::CounterOverflow { row, slot });
            }
        }
        for row in 0..self.params.rows {
            let slot = self.bucket(item, row);
            self.counters[row * w + slot] += self.sign(item, row);
        }
        Ok(())
    }

    /// Uniform average over all `rows * width` slots. Slots whose counters
    /// disagree in sign, or are zero on either side, contribute nothing.
    pub fn estimate_jaccard(&self, other: &Self) -> Result<JaccardEstimate> {
        self.params.check_compatible(&other.params)?;
        let total: f64 = self
            .counters
            .iter()
            .zip(&other.counters)
            .map(|(&a, &b)| signed_ratio(a as i64, b as i64))
            .sum();
        let raw = total / self.counters.len() as f64;
        Ok(JaccardEstimate::new(raw, Algo::Count))
    }

    pub fn merge(&self, other: &Self) -> Result<Self> {
        self.params.check_compatible(&other.params)?;
        let w = self.params.width;
        let counters = self
            .counters
            .iter()
            .zip(&other.counters)
            .enumerate()
            .map(|(i, (&a, &b))| {
                a.checked_add(b).ok_or(Error::CounterOverflow {
                    row: i / w,
                    slot: i % w,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CountSimiSketch {
            params: self.params,
            counters,
            hash: self.hash.clone(),
        })
    }
}

impl SimilaritySketch for CountSimiSketch {
    fn algo(&self) -> Algo {
        Algo::Count
    }

    fn insert(&mut self, item: ItemId) -> Result<()> {
        CountSimiSketch::insert(self, item)
    }

    fn estimate(&self, other: &Self) -> Result<JaccardEstimate> {
        self.estimate_jaccard(other)
    }
}
