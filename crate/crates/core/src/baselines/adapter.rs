use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::baselines::SetSketch;
use crate::error::{Error, Result};
use crate::hashing::{hash_with_seed, mix64};
use crate::params::{Algo, ItemId, JaccardEstimate, SimilaritySketch, SketchParams};
use crate::sketch::CmSimiSketch;

/// The `n`-th arrival of `base`, one element of a multiset's set image.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OccurrenceItem {
    pub base: ItemId,
    pub occurrence: u64,
}

impl OccurrenceItem {
    /// Hashed key fed to set sketches.
    #[inline]
    pub fn key(&self) -> ItemId {
        ItemId(hash_with_seed(
            self.base.0,
            mix64(self.occurrence ^ 0x6f63_6375_7272_656e),
        ))
    }
}

/// Which occurrence counter an adapter uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdapterKind {
    /// Full hash table of occurrence counts.
    Exact,
    /// Count-min point queries; may over-report under collisions.
    Cm,
}

impl fmt::Display for AdapterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AdapterKind::Exact => "exact",
            AdapterKind::Cm => "cm",
        })
    }
}

impl FromStr for AdapterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact" | "hash" | "table" => Ok(AdapterKind::Exact),
            "cm" | "count-min" => Ok(AdapterKind::Cm),
            _ => Err(Error::InvalidParameter(format!("unknown adapter `{s}`"))),
        }
    }
}

/// Streaming occurrence tagger.
#[derive(Clone, Debug)]
pub enum Expander {
    Exact(HashMap<ItemId, u64>),
    Cm(Box<CmSimiSketch>),
}

impl Expander {
    pub fn exact() -> Self {
        Expander::Exact(HashMap::new())
    }

    pub fn cm(params: SketchParams) -> Self {
        Expander::Cm(Box::new(CmSimiSketch::new(params)))
    }

    pub fn kind(&self) -> AdapterKind {
        match self {
            Expander::Exact(_) => AdapterKind::Exact,
            Expander::Cm(_) => AdapterKind::Cm,
        }
    }

    pub fn tag(&mut self, base: ItemId) -> Result<OccurrenceItem> {
        let occurrence = match self {
            Expander::Exact(table) => {
                let n = table.entry(base).or_insert(0);
                *n += 1;
                *n
            }
            Expander::Cm(cm) => {
                cm.insert(base)?;
                cm.frequency(base) as u64
            }
        };
        Ok(OccurrenceItem { base, occurrence })
    }
}

/// Exact expansion: the `n`-th arrival of `x` becomes `(x, n)`.
pub fn expand_exact<I>(items: I) -> Vec<OccurrenceItem>
where
    I: IntoIterator<Item = ItemId>,
{
    let mut ex = Expander::exact();
    items
        .into_iter()
        .map(|x| ex.tag(x).expect("exact tagging cannot fail"))
        .collect()
}

/// Count-min expansion: occurrence numbers come from a point query issued
/// right after each arrival is counted.
pub fn expand_cm<I>(items: I, cm_params: SketchParams) -> Result<Vec<OccurrenceItem>>
where
    I: IntoIterator<Item = ItemId>,
{
    let mut ex = Expander::cm(cm_params);
    items.into_iter().map(|x| ex.tag(x)).collect()
}

/// A set sketch behind an occurrence expander, usable wherever a multiset
/// similarity sketch is.
#[derive(Clone, Debug)]
pub struct SetAdapted<S> {
    expander: Expander,
    inner: S,
}

impl<S: SetSketch> SetAdapted<S> {
    pub fn new(expander: Expander, inner: S) -> Self {
        SetAdapted { expander, inner }
    }

    pub fn inner(&self) -> &S {
        &self.inner
    }

    pub fn adapter(&self) -> AdapterKind {
        self.expander.kind()
    }
}

impl<S: SetSketch> SimilaritySketch for SetAdapted<S> {
    fn algo(&self) -> Algo {
        self.inner.algo()
    }

    #[inline]
    fn insert(&mut self, item: ItemId) -> Result<()> {
        let occ = self.expander.tag(item)?;
        self.inner.insert_key(occ.key());
        Ok(())
    }

    fn estimate(&self, other: &Self) -> Result<JaccardEstimate> {
        self.inner.estimate_set(&other.inner)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::ingest::token_id;
    use crate::oracle::ExactMultiset;
    use proptest::prelude::*;
    use std::collections::HashSet;

    #[test]
    fn rose_expansion() {
        let words = ["a", "rose", "is", "a", "rose"];
        let ids: Vec<ItemId> = words.iter().map(|w| token_id(w)).collect();
        let got: Vec<(ItemId, u64)> = expand_exact(ids)
            .into_iter()
            .map(|o| (o.base, o.occurrence))
            .collect();
        let want: Vec<(ItemId, u64)> = [("a", 1), ("rose", 1), ("is", 1), ("a", 2), ("rose", 2)]
            .iter()
            .map(|&(w, n)| (token_id(w), n))
            .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn exact_expansion_basics() {
        let distinct: Vec<ItemId> = (0..10).map(ItemId).collect();
        assert!(expand_exact(distinct).iter().all(|o| o.occurrence == 1));
        let x = ItemId(4);
        let occ: Vec<u64> = expand_exact([x, x, x])
            .iter()
            .map(|o| o.occurrence)
            .collect();
        assert_eq!(occ, vec![1, 2, 3]);
    }

    #[test]
    fn cm_expansion_without_collisions_is_exact() {
        let items: Vec<ItemId> = (0..200).map(|i| ItemId(i % 17)).collect();
        let huge = SketchParams::new(4, 1 << 16, 1).unwrap();
        let (x, y) = (ItemId(1), ItemId(2));
        // 17 items across 65536 slots: every point query is exact
        let cm = expand_cm(items.clone(), huge).unwrap();
        assert_eq!(cm, expand_exact(items));
        let got: Vec<u64> = expand_cm([x, x], huge)
            .unwrap()
            .iter()
            .map(|o| o.occurrence)
            .collect();
        assert_eq!(got, vec![1, 2]);
        // one-slot CM: every item shares the counter
        let narrow = SketchParams::new(1, 1, 1).unwrap();
        let got: Vec<(ItemId, u64)> = expand_cm([x, y], narrow)
            .unwrap()
            .into_iter()
            .map(|o| (o.base, o.occurrence))
            .collect();
        assert_eq!(got, vec![(x, 1), (y, 2)]);
    }

    #[test]
    fn keys_separate_occurrences() {
        let keys: HashSet<ItemId> = (0..200u64)
            .flat_map(|b| {
                (1..50u64).map(move |o| {
                    OccurrenceItem {
                        base: ItemId(b),
                        occurrence: o,
                    }
                    .key()
                })
            })
            .collect();
        assert_eq!(keys.len(), 200 * 49);
    }

    proptest! {
        #[test]
        fn expansion_bridges_multiset_and_set_jaccard(
            a in prop::collection::vec((0u64..20).prop_map(ItemId), 1..80),
            b in prop::collection::vec((0u64..20).prop_map(ItemId), 1..80),
        ) {
            let ea = expand_exact(a.iter().copied());
            let eb = expand_exact(b.iter().copied());
            let sa: HashSet<_> = ea.iter().copied().collect();
            let sb: HashSet<_> = eb.iter().copied().collect();
            prop_assert_eq!(sa.len(), ea.len());
            let set_j = sa.intersection(&sb).count() as f64 / sa.union(&sb).count() as f64;
            let ma: ExactMultiset = a.into_iter().collect();
            let mb: ExactMultiset = b.into_iter().collect();
            prop_assert_eq!(set_j, ma.jaccard(&mb).unwrap());
        }

        #[test]
        fn cm_expansion_never_repeats_a_pair(
            a in prop::collection::vec((0u64..30).prop_map(ItemId), 1..200),
            width in 1usize..8,
        ) {
            let ex = expand_cm(a.iter().copied(), SketchParams::new(2, width, 3).unwrap()).unwrap();
            let exact = expand_exact(a.iter().copied());
            let set: HashSet<_> = ex.iter().copied().collect();
            prop_assert_eq!(set.len(), ex.len());
            for (c, e) in ex.iter().zip(&exact) {
                prop_assert!(c.occurrence >= e.occurrence);
            }
        }
    }
}
