//! Exact multiset algebra: the ground truth every sketch is measured against.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::params::ItemId;

/// Multiplicity map. Zero multiplicities are never stored, so the key set is
/// the support.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExactMultiset {
    counts: HashMap<ItemId, u64>,
    cardinality: u64,
}

impl ExactMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, item: ItemId) {
        self.insert_n(item, 1);
    }

    pub fn insert_n(&mut self, item: ItemId, n: u64) {
        if n == 0 {
            return;
        }
        *self.counts.entry(item).or_insert(0) += n;
        self.cardinality += n;
    }

    pub fn multiplicity(&self, item: ItemId) -> u64 {
        self.counts.get(&item).copied().unwrap_or(0)
    }

    /// `|A|`, the multiplicity sum.
    pub fn cardinality(&self) -> u64 {
        self.cardinality
    }

    /// `|Supp(A)|`.
    pub fn support_len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cardinality == 0
    }

    pub fn support(&self) -> impl Iterator<Item = ItemId> + '_ {
        self.counts.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (ItemId, u64)> + '_ {
        self.counts.iter().map(|(&k, &v)| (k, v))
    }

    fn combine(a: &Self, b: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        let mut out = ExactMultiset::new();
        for (x, ma) in a.iter() {
            out.insert_n(x, f(ma, b.multiplicity(x)));
        }
        for (x, mb) in b.iter() {
            if !a.counts.contains_key(&x) {
                out.insert_n(x, f(0, mb));
            }
        }
        out
    }

    /// `A ⊕ B`: pointwise sum.
    pub fn sum(&self, other: &Self) -> Self {
        Self::combine(self, other, |a, b| a + b)
    }

    /// `A ∪ B`: pointwise max.
    pub fn union(&self, other: &Self) -> Self {
        Self::combine(self, other, u64::max)
    }

    /// `A ∩ B`: pointwise min.
    pub fn intersect(&self, other: &Self) -> Self {
        Self::combine(self, other, u64::min)
    }

    /// `A \ B`: pointwise subtraction clamped at zero.
    pub fn difference(&self, other: &Self) -> Self {
        Self::combine(self, other, u64::saturating_sub)
    }

    /// `|A ∩ B|` without materializing the intersection.
    pub fn intersect_cardinality(&self, other: &Self) -> u64 {
        let (small, large) = if self.counts.len() <= other.counts.len() {
            (self, other)
        } else {
            (other, self)
        };
        small
            .iter()
            .map(|(x, m)| m.min(large.multiplicity(x)))
            .sum()
    }

    /// `|A ∪ B| = |A| + |B| − |A ∩ B|`.
    pub fn union_cardinality(&self, other: &Self) -> u64 {
        self.cardinality + other.cardinality - self.intersect_cardinality(other)
    }

    /// Exact multiset Jaccard similarity.
    pub fn jaccard(&self, other: &Self) -> Result<f64> {
        if self.is_empty() && other.is_empty() {
            return Err(Error::UndefinedSimilarity);
        }
        let inter = self.intersect_cardinality(other);
        let union = self.cardinality + other.cardinality - inter;
        Ok(inter as f64 / union as f64)
    }

    /// Greedy ε-subset: heaviest items first (ties by ascending id) until the
    /// kept items cover at least `(1 − ε)|A|`. Kept items keep their full
    /// multiplicity.
    pub fn epsilon_subset(&self, eps: f64) -> Self {
        let mut by_weight: Vec<(ItemId, u64)> = self.iter().collect();
        by_weight.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let target = (1.0 - eps) * self.cardinality as f64;
        let mut out = ExactMultiset::new();
        for (x, m) in by_weight {
            if out.cardinality as f64 >= target {
                break;
            }
            out.insert_n(x, m);
        }
        out
    }
}

impl FromIterator<ItemId> for ExactMultiset {
    fn from_iter<I: IntoIterator<Item = ItemId>>(iter: I) -> Self {
        let mut m = ExactMultiset::new();
        for x in iter {
            m.insert(x);
        }
        m
    }
}

impl Extend<ItemId> for ExactMultiset {
    fn extend<I: IntoIterator<Item = ItemId>>(&mut self, iter: I) {
        for x in iter {
            self.insert(x);
        }
    }
}
