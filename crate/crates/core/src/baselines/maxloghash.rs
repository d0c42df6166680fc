use crate::baselines::SetSketch;
use crate::error::{Error, Result};
use crate::hashing::HashFamily;
use crate::params::{Algo, ItemId, JaccardEstimate};

/// Asymptotic value of `α_n`, used for every `n >= 2`.
pub const ALPHA: f64 = 0.7213;

/// Per-row maximum of `⌊−log2 h_i(x)⌋` and whether that maximum was hit
/// exactly once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxLogHashState {
    maxlogs: Vec<i32>,
    unique: Vec<bool>,
    hash: HashFamily,
    inserted: u64,
}

impl MaxLogHashState {
    pub const DEFAULT_K: usize = 128;

    pub fn new(k: usize, seed: u64) -> Self {
        MaxLogHashState {
            maxlogs: vec![-1; k],
            unique: vec![true; k],
            hash: HashFamily::new(seed, k),
            inserted: 0,
        }
    }

    pub fn k(&self) -> usize {
        self.maxlogs.len()
    }

    pub fn maxlogs(&self) -> &[i32] {
        &self.maxlogs
    }

    pub fn unique_flags(&self) -> &[bool] {
        &self.unique
    }

    pub fn inserted(&self) -> u64 {
        self.inserted
    }

    /// Feed one set element.
    pub fn update(&mut self, item: ItemId) {
        for row in 0..self.maxlogs.len() {
            let l = (-self.hash.unit_hash(item, row).log2()).floor() as i32;
            let a = &mut self.maxlogs[row];
            if l == *a {
                self.unique[row] = false;
            } else if l > *a {
                *a = l;
                self.unique[row] = true;
            }
        }
        self.inserted += 1;
    }
}

/// `1 − Σ δ_i / (k α)`, where row `i` counts when the two maxima differ and
/// the larger one is unique.
pub fn maxloghash_estimate(
    s0: &MaxLogHashState,
    s1: &MaxLogHashState,
    union_card_hint: u64,
) -> Result<JaccardEstimate> {
    if s0.k() != s1.k() || s0.hash.master_seed() != s1.hash.master_seed() {
        return Err(Error::Incompatible(
            "MaxLogHash states differ in k or seed".into(),
        ));
    }
    if union_card_hint < 2 {
        return Err(Error::InvalidParameter(
            "MaxLogHash needs a union of at least two elements".into(),
        ));
    }
    let deltas = (0..s0.k())
        .filter(|&i| {
            let (a0, a1) = (s0.maxlogs[i], s1.maxlogs[i]);
            let chi = a0 != a1;
            let phi = (s0.unique[i] && a0 > a1) as u32 + (s1.unique[i] && a1 > a0) as u32;
            chi && phi > 0
        })
        .count();
    let raw = 1.0 - deltas as f64 / (s0.k() as f64 * ALPHA);
    Ok(JaccardEstimate::new(raw, Algo::MaxLogHash))
}

impl SetSketch for MaxLogHashState {
    fn algo(&self) -> Algo {
        Algo::MaxLogHash
    }

    fn insert_key(&mut self, key: ItemId) {
        self.update(key);
    }

    fn estimate_set(&self, other: &Self) -> Result<JaccardEstimate> {
        // the union is at least as large as either side
        maxloghash_estimate(self, other, self.inserted.max(other.inserted))
    }
}
