//! Shared domain types: item identifiers, sketch geometry, estimates, and the
//! insert/estimate contract every similarity estimator implements.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Opaque 64-bit item identifier. Equal ids are the same item for every hash.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ItemId(pub u64);

impl From<u64> for ItemId {
    fn from(v: u64) -> Self {
        ItemId(v)
    }
}

/// Geometry of a counter grid: `rows` arrays of `width` slots, all hashes
/// derived from `master_seed`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SketchParams {
    pub rows: usize,
    pub width: usize,
    pub master_seed: u64,
    /// Budget the width was derived from, when it came from one.
    pub memory_bytes: Option<usize>,
}

impl SketchParams {
    /// Explicit geometry. Used by tests and by adapters with fixed shapes.
    pub fn new(rows: usize, width: usize, master_seed: u64) -> Result<Self> {
        if rows == 0 || width == 0 {
            return Err(Error::InvalidParameter(format!(
                "rows ({rows}) and width ({width}) must both be at least 1"
            )));
        }
        Ok(SketchParams {
            rows,
            width,
            master_seed,
            memory_bytes: None,
        })
    }

    /// Geometry derived from a byte budget and a per-slot byte cost.
    pub fn from_budget(
        memory_bytes: usize,
        rows: usize,
        slot_bytes: usize,
        master_seed: u64,
    ) -> Result<Self> {
        let width = derive_width(memory_bytes, rows, slot_bytes)?;
        Ok(SketchParams {
            rows,
            width,
            master_seed,
            memory_bytes: Some(memory_bytes),
        })
    }

    /// Two sketches can be compared only when they hash identically.
    pub fn is_compatible(&self, other: &SketchParams) -> bool {
        self.rows == other.rows
            && self.width == other.width
            && self.master_seed == other.master_seed
    }

    pub(crate) fn check_compatible(&self, other: &SketchParams) -> Result<()> {
        if self.is_compatible(other) {
            Ok(())
        } else {
            Err(Error::Incompatible(format!(
                "rows/width/seed ({}, {}, {:#x}) vs ({}, {}, {:#x})",
                self.rows, self.width, self.master_seed, other.rows, other.width, other.master_seed
            )))
        }
    }
}

/// Counters per row that fit in `memory_bytes` when every slot costs
/// `slot_bytes` bytes: `floor(memory / (rows * slot_bytes))`.
pub fn derive_width(memory_bytes: usize, rows: usize, slot_bytes: usize) -> Result<usize> {
    if slot_bytes == 0 {
        return Err(Error::InvalidParameter(
            "slot_bytes must be positive".into(),
        ));
    }
    derive_width_bits(memory_bytes, rows, slot_bytes * 8)
}

/// Bit-granular variant of [`derive_width`] for layouts whose per-slot cost
/// is not a whole number of bytes.
pub fn derive_width_bits(memory_bytes: usize, rows: usize, slot_bits: usize) -> Result<usize> {
    if rows == 0 || slot_bits == 0 {
        return Err(Error::InvalidParameter(
            "rows and slot size must be positive".into(),
        ));
    }
    let width = memory_bytes
        .checked_mul(8)
        .ok_or_else(|| Error::InvalidParameter("memory budget too large".into()))?
        / (rows * slot_bits);
    if width == 0 {
        return Err(Error::BudgetTooSmall {
            memory_bytes,
            rows,
            slot_bits,
        });
    }
    Ok(width)
}

/// Every estimator the toolkit knows about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Cm,
    Count,
    Formal,
    Salsa,
    MinHash,
    Hll,
    MaxLogHash,
    DotHash,
}

impl Algo {
    pub const ALL: [Algo; 8] = [
        Algo::Cm,
        Algo::Count,
        Algo::Formal,
        Algo::Salsa,
        Algo::MinHash,
        Algo::Hll,
        Algo::MaxLogHash,
        Algo::DotHash,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algo::Cm => "cm",
            Algo::Count => "count",
            Algo::Formal => "formal",
            Algo::Salsa => "salsa",
            Algo::MinHash => "minhash",
            Algo::Hll => "hll",
            Algo::MaxLogHash => "maxloghash",
            Algo::DotHash => "dothash",
        }
    }

    /// Baselines only understand sets and need an occurrence-expansion adapter.
    pub fn is_baseline(self) -> bool {
        matches!(
            self,
            Algo::MinHash | Algo::Hll | Algo::MaxLogHash | Algo::DotHash
        )
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        Algo::ALL
            .into_iter()
            .find(|a| a.name() == lower)
            .or(match lower.as_str() {
                "mlh" => Some(Algo::MaxLogHash),
                "hyperloglog" => Some(Algo::Hll),
                _ => None,
            })
            .ok_or_else(|| Error::InvalidParameter(format!("unknown algorithm `{s}`")))
    }
}

/// A Jaccard estimate. `raw` is the estimator's unclamped output; `value`
/// is clamped into `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JaccardEstimate {
    pub value: f64,
    pub raw: f64,
    pub algo: Algo,
}

impl JaccardEstimate {
    pub fn new(raw: f64, algo: Algo) -> Self {
        JaccardEstimate {
            value: raw.clamp(0.0, 1.0),
            raw,
            algo,
        }
    }
}

/// Streaming insert plus pairwise estimation. Both sides of a pair must be
/// built from the same parameters.
pub trait SimilaritySketch {
    fn algo(&self) -> Algo;

    fn insert(&mut self, item: ItemId) -> Result<()>;

    fn estimate(&self, other: &Self) -> Result<JaccardEstimate>;

    fn insert_all<I>(&mut self, items: I) -> Result<()>
    where
        I: IntoIterator<Item = ItemId>,
        Self: Sized,
    {
        for item in items {
            self.insert(item)?;
        }
        Ok(())
    }
}
