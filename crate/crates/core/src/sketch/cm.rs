use crate::error::{Error, Result};
use crate::hashing::HashFamily;
use crate::params::{Algo, ItemId, JaccardEstimate, SimilaritySketch, SketchParams};

/// Count-min shaped grid of unsigned counters. The estimate is the smallest
/// per-row ratio `Σ min(a, b) / Σ max(a, b)`, which never falls below the
/// true multiset Jaccard similarity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmSimiSketch {
    params: SketchParams,
    counters: Vec<u32>,
    hash: HashFamily,
    total_inserted: u64,
}

impl CmSimiSketch {
    pub const SLOT_BYTES: usize = 4;

    pub fn new(params: SketchParams) -> Self {
        CmSimiSketch {
            counters: vec![0; params.rows * params.width],
            hash: HashFamily::new(params.master_seed, params.rows),
            params,
            total_inserted: 0,
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

    pub fn total_inserted(&self) -> u64 {
        self.total_inserted
    }

    pub fn is_empty(&self) -> bool {
        self.total_inserted == 0
    }

    /// Slot `item` lands in for `row`.
    #[inline]
    pub fn bucket(&self, item: ItemId, row: usize) -> usize {
        self.hash.index_hash(item, row, self.params.width)
    }

    pub fn counter(&self, row: usize, slot: usize) -> u32 {
        self.counters[row * self.params.width + slot]
    }

    pub fn row(&self, row: usize) -> &[u32] {
        let w = self.params.width;
        &self.counters[row * w..(row + 1) * w]
    }

    pub fn insert(&mut self, item: ItemId) -> Result<()> {
        let w = self.params.width;
        // check every row before touching any so a failed insert leaves no trace
        for row in 0..self.params.rows {
            let slot = self.bucket(item, row);
            if self.counters[row * w + slot] == u32::MAX {
                return Err(Error::CounterOverflow { row, slot });
            }
        }
        for row in 0..self.params.rows {
            let slot = self.bucket(item, row);
            self.counters[row * w + slot] += 1;
        }
        self.total_inserted += 1;
        Ok(())
    }

    /// Count-min point query: minimum over rows of the item's counters.
    pub fn frequency(&self, item: ItemId) -> u32 {
        (0..self.params.rows)
            .map(|row| self.counter(row, self.bucket(item, row)))
            .min()
            .unwrap_or(0)
    }

    /// `(Σ_j min, Σ_j max)` for one row.
    pub fn row_sums(&self, other: &Self, row: usize) -> (u64, u64) {
        self.row(row)
            .iter()
            .zip(other.row(row))
            .fold((0, 0), |(lo, hi), (&a, &b)| {
                (lo + a.min(b) as u64, hi + a.max(b) as u64)
            })
    }

    /// The estimate a single row gives, `None` if the row is empty on both sides.
    pub fn row_ratio(&self, other: &Self, row: usize) -> Option<f64> {
        let (lo, hi) = self.row_sums(other, row);
        (hi > 0).then(|| lo as f64 / hi as f64)
    }

    pub fn estimate_jaccard(&self, other: &Self) -> Result<JaccardEstimate> {
        self.params.check_compatible(&other.params)?;
        if self.is_empty() && other.is_empty() {
            return Err(Error::UndefinedSimilarity);
        }
        let raw = (0..self.params.rows)
            .filter_map(|row| self.row_ratio(other, row))
            .fold(f64::INFINITY, f64::min);
        Ok(JaccardEstimate::new(raw, Algo::Cm))
    }

    /// Counter-wise sum; equals sketching the concatenated streams.
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
        Ok(CmSimiSketch {
            params: self.params,
            counters,
            hash: self.hash.clone(),
            total_inserted: self.total_inserted + other.total_inserted,
        })
    }
}

impl SimilaritySketch for CmSimiSketch {
    fn algo(&self) -> Algo {
        Algo::Cm
    }

    fn insert(&mut self, item: ItemId) -> Result<()> {
        CmSimiSketch::insert(self, item)
    }

    fn estimate(&self, other: &Self) -> Result<JaccardEstimate> {
        self.estimate_jaccard(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::ExactMultiset;
    use proptest::prelude::*;

    const X1: ItemId = ItemId(11);
    const X2: ItemId = ItemId(22);
    const X3: ItemId = ItemId(33);

    fn sketch(rows: usize, width: usize, seed: u64, items: &[ItemId]) -> CmSimiSketch {
        let mut s = CmSimiSketch::new(SketchParams::new(rows, width, seed).unwrap());
        s.insert_all(items.iter().copied()).unwrap();
        s
    }

    fn find_seed(pred: impl Fn(&HashFamily) -> bool) -> u64 {
        (0..100_000u64)
            .find(|&s| pred(&HashFamily::new(s, 1)))
            .expect("no seed satisfies the layout")
    }

    #[test]
    fn insert_touches_one_counter_per_row() {
        let s = sketch(2, 16, 5, &[X1]);
        for row in 0..2 {
            assert_eq!(s.row(row).iter().filter(|&&c| c == 1).count(), 1);
            assert_eq!(s.row(row).iter().sum::<u32>(), 1);
        }
        let s = sketch(2, 16, 5, &[X1, X1]);
        for row in 0..2 {
            assert_eq!(s.counter(row, s.bucket(X1, row)), 2);
        }
        let items: Vec<ItemId> = (0..50).map(ItemId).collect();
        let s = sketch(3, 1, 5, &items);
        for row in 0..3 {
            assert_eq!(s.counter(row, 0), 50);
        }
    }

    #[test]
    fn injective_example_is_exact() {
        let seed = find_seed(|h| {
            let b: Vec<_> = [X1, X2, X3]
                .iter()
                .map(|&x| h.index_hash(x, 0, 4))
                .collect();
            b[0] != b[1] && b[0] != b[2] && b[1] != b[2]
        });
        let a = sketch(1, 4, seed, &[X1, X1, X2]);
        let b = sketch(1, 4, seed, &[X1, X3]);
        assert_eq!(a.row_sums(&b, 0), (1, 4));
        assert_eq!(a.estimate_jaccard(&b).unwrap().raw, 0.25);
    }

    #[test]
    fn collision_example_overestimates() {
        let seed = find_seed(|h| {
            let b: Vec<_> = [X1, X2, X3]
                .iter()
                .map(|&x| h.index_hash(x, 0, 4))
                .collect();
            b[1] == b[2] && b[0] != b[1]
        });
        let a = sketch(1, 4, seed, &[X1, X1, X2]);
        let b = sketch(1, 4, seed, &[X1, X3]);
        assert_eq!(a.row_sums(&b, 0), (2, 3));
        let est = a.estimate_jaccard(&b).unwrap();
        assert_eq!(est.raw, 2.0 / 3.0);
        assert!(est.raw >= 0.25);
    }

    #[test]
    fn identical_streams_give_one() {
        let items: Vec<ItemId> = (0..500).map(|i| ItemId(i % 37)).collect();
        let a = sketch(3, 8, 1, &items);
        let b = sketch(3, 8, 1, &items);
        assert_eq!(a.estimate_jaccard(&b).unwrap().raw, 1.0);
    }

    #[test]
    fn errors() {
        let a = sketch(1, 8, 1, &[]);
        let b = sketch(1, 8, 1, &[]);
        assert!(matches!(
            a.estimate_jaccard(&b),
            Err(Error::UndefinedSimilarity)
        ));
        let c = sketch(1, 8, 2, &[X1]);
        assert!(matches!(
            a.estimate_jaccard(&c),
            Err(Error::Incompatible(_))
        ));
        assert!(matches!(a.merge(&c), Err(Error::Incompatible(_))));
        // one empty side is fine: estimate is 0
        let d = sketch(1, 8, 1, &[X1]);
        assert_eq!(a.estimate_jaccard(&d).unwrap().raw, 0.0);
    }

    #[test]
    fn overflow_is_reported_not_wrapped() {
        let mut s = sketch(2, 1, 1, &[]);
        s.counters[1] = u32::MAX;
        assert!(matches!(
            s.insert(X1),
            Err(Error::CounterOverflow { row: 1, slot: 0 })
        ));
        // row 0 untouched by the failed insert
        assert_eq!(s.counter(0, 0), 0);
        assert_eq!(s.total_inserted(), 0);
    }

    #[test]
    fn merge_examples() {
        let s1 = [X1, X2, X2];
        let s2 = [X3, X1];
        let cat: Vec<_> = s1.iter().chain(&s2).copied().collect();
        let m = sketch(2, 8, 9, &s1).merge(&sketch(2, 8, 9, &s2)).unwrap();
        assert_eq!(m, sketch(2, 8, 9, &cat));
        let e = sketch(2, 8, 9, &[]);
        assert_eq!(
            sketch(2, 8, 9, &s1).merge(&e).unwrap(),
            sketch(2, 8, 9, &s1)
        );
        let m = sketch(2, 8, 9, &[X1])
            .merge(&sketch(2, 8, 9, &[X1]))
            .unwrap();
        for row in 0..2 {
            assert_eq!(m.counter(row, m.bucket(X1, row)), 2);
        }
    }

    #[test]
    fn frequency_never_underestimates() {
        let items: Vec<ItemId> = (0..2000).map(|i| ItemId(i * i % 101)).collect();
        let s = sketch(3, 16, 4, &items);
        let exact: ExactMultiset = items.iter().copied().collect();
        for (x, m) in exact.iter() {
            assert!(s.frequency(x) as u64 >= m);
        }
    }

    fn stream() -> impl Strategy<Value = Vec<ItemId>> {
        prop::collection::vec((0u64..60).prop_map(ItemId), 0..300)
    }

    proptest! {
        #[test]
        fn over_estimates_and_slot_bounds(
            a_items in stream(),
            b_items in stream(),
            rows in 1usize..4,
            width in 1usize..24,
            seed in any::<u64>(),
        ) {
            prop_assume!(!a_items.is_empty() || !b_items.is_empty());
            let a = sketch(rows, width, seed, &a_items);
            let b = sketch(rows, width, seed, &b_items);
            let ea: ExactMultiset = a_items.iter().copied().collect();
            let eb: ExactMultiset = b_items.iter().copied().collect();
            let truth = ea.jaccard(&eb).unwrap();
            let est = a.estimate_jaccard(&b).unwrap();
            prop_assert!(est.raw >= truth, "{} < {}", est.raw, truth);
            prop_assert_eq!(est.raw, b.estimate_jaccard(&a).unwrap().raw);

            // exact per-slot pre-images from the stream
            for row in 0..rows {
                let mut pa = vec![ExactMultiset::new(); width];
                let mut pb = vec![ExactMultiset::new(); width];
                for &x in &a_items { pa[a.bucket(x, row)].insert(x); }
                for &x in &b_items { pb[b.bucket(x, row)].insert(x); }
                for j in 0..width {
                    let (ca, cb) = (a.counter(row, j) as u64, b.counter(row, j) as u64);
                    prop_assert_eq!(ca, pa[j].cardinality());
                    prop_assert!(ca.min(cb) >= pa[j].intersect_cardinality(&pb[j]));
                    prop_assert!(ca.max(cb) <= pa[j].union_cardinality(&pb[j]));
                }
                prop_assert_eq!(a.row(row).iter().map(|&c| c as u64).sum::<u64>(), a.total_inserted());
            }
        }

        #[test]
        fn merge_is_concatenation(s1 in stream(), s2 in stream(), seed in any::<u64>()) {
            let cat: Vec<_> = s1.iter().chain(&s2).copied().collect();
            let m = sketch(2, 13, seed, &s1).merge(&sketch(2, 13, seed, &s2)).unwrap();
            prop_assert_eq!(m, sketch(2, 13, seed, &cat));
        }
    }
}
