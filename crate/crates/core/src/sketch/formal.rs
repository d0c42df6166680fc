use crate::error::{Error, Result};
use crate::hashing::HashFamily;
use crate::params::{Algo, ItemId, JaccardEstimate, SimilaritySketch, SketchParams};
use crate::sketch::weighted_row;

/// Two-field slot: `cm` counts arrivals, `c` sums their signs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FormalSlot {
    pub cm: u32,
    pub c: i32,
}

impl FormalSlot {
    fn checked_add(self, other: FormalSlot) -> Option<FormalSlot> {
        Some(FormalSlot {
            cm: self.cm.checked_add(other.cm)?,
            c: self.c.checked_add(other.c)?,
        })
    }
}

/// The weighted sketch: per row, each slot's signed-counter similarity is
/// weighted by its share of `Σ_j max(a.cm, b.cm)`, and rows are averaged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSimiSketch {
    params: SketchParams,
    slots: Vec<FormalSlot>,
    hash: HashFamily,
}

impl FormalSimiSketch {
    pub const SLOT_BYTES: usize = 8;

    pub fn new(params: SketchParams) -> Self {
        FormalSimiSketch {
            slots: vec![FormalSlot::default(); params.rows * params.width],
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

    pub fn slot(&self, row: usize, slot: usize) -> FormalSlot {
        self.slots[row * self.params.width + slot]
    }

    pub fn row(&self, row: usize) -> &[FormalSlot] {
        let w = self.params.width;
        &self.slots[row * w..(row + 1) * w]
    }

    pub fn is_empty(&self) -> bool {
        self.row(0).iter().all(|s| s.cm == 0)
    }

    pub fn insert(&mut self, item: ItemId) -> Result<()> {
        let w = self.params.width;
        for row in 0..self.params.rows {
            let slot = self.bucket(item, row);
            let delta = FormalSlot {
                cm: 1,
                c: self.sign(item, row),
            };
            if self.slots[row * w + slot].checked_add(delta).is_none() {
                return Err(Error::CounterOverflow { row, slot });
            }
        }
        for row in 0..self.params.rows {
            let slot = self.bucket(item, row);
            let s = &mut self.slots[row * w + slot];
            s.cm += 1;
            s.c += self.hash.sign_hash(item, row);
        }
        Ok(())
    }

    pub fn estimate_jaccard(&self, other: &Self) -> Result<JaccardEstimate> {
        self.params.check_compatible(&other.params)?;
        if self.is_empty() && other.is_empty() {
            return Err(Error::UndefinedSimilarity);
        }
        let total: f64 = (0..self.params.rows)
            .map(|row| {
                let pairs = self
                    .row(row)
                    .iter()
                    .zip(other.row(row))
                    .map(|(a, b)| (a.cm as u64, a.c as i64, b.cm as u64, b.c as i64));
                weighted_row(pairs).unwrap_or(0.0)
            })
            .sum();
        Ok(JaccardEstimate::new(
            total / self.params.rows as f64,
            Algo::Formal,
        ))
    }

    pub fn merge(&self, other: &Self) -> Result<Self> {
        self.params.check_compatible(&other.params)?;
        let w = self.params.width;
        let slots = self
            .slots
            .iter()
            .zip(&other.slots)
            .enumerate()
            .map(|(i, (&a, &b))| {
                a.checked_add(b).ok_or(Error::CounterOverflow {
                    row: i / w,
                    slot: i % w,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(FormalSimiSketch {
            params: self.params,
            slots,
            hash: self.hash.clone(),
        })
    }
}

impl SimilaritySketch for FormalSimiSketch {
    fn algo(&self) -> Algo {
        Algo::Formal
    }

    fn insert(&mut self, item: ItemId) -> Result<()> {
        FormalSimiSketch::insert(self, item)
    }

    fn estimate(&self, other: &Self) -> Result<JaccardEstimate> {
        self.estimate_jaccard(other)
    }
}
