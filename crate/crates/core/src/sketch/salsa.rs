//! Formal sketch over self-adjusting byte counters.
//!
//! Every row starts as `width` one-byte counters (one byte of `cm`, one byte
//! of `c`). When an update would push either field out of range, the
//! counter merges with its buddy, the equal-sized aligned neighbour, into a
//! counter twice as wide whose fields are the sums of the two. Hashing always
//! targets the original one-byte positions; an update to a byte that belongs
//! to a wider counter goes to that counter.
//!
//! Two sketches that merged differently are brought to a common layout by
//! [`align`] before estimating.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hashing::HashFamily;
use crate::params::{
    derive_width_bits, Algo, ItemId, JaccardEstimate, SimilaritySketch, SketchParams,
};
use crate::sketch::weighted_row;

/// One logical counter in a debug dump.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CounterExtent {
    pub start: usize,
    pub byte_len: usize,
    pub cm: u64,
    pub c: i64,
}

#[inline]
fn cm_max(len: usize) -> u64 {
    if len >= 8 {
        u64::MAX
    } else {
        (1u64 << (8 * len)) - 1
    }
}

#[inline]
fn c_fits(v: i64, len: usize) -> bool {
    if len >= 8 {
        return true;
    }
    let half = 1i64 << (8 * len - 1);
    (-half..half).contains(&v)
}

/// One ring of byte counters plus its merge map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SalsaRow {
    index: usize,
    cm_bytes: Vec<u8>,
    c_bytes: Vec<u8>,
    /// log2 of the byte length of the counter covering each position.
    levels: Vec<u8>,
}

impl SalsaRow {
    pub fn new(index: usize, width: usize) -> Self {
        debug_assert!(width.is_power_of_two());
        SalsaRow {
            index,
            cm_bytes: vec![0; width],
            c_bytes: vec![0; width],
            levels: vec![0; width],
        }
    }

    pub fn width(&self) -> usize {
        self.levels.len()
    }

    /// `(start, byte_len)` of the counter covering `pos`.
    #[inline]
    pub fn extent(&self, pos: usize) -> (usize, usize) {
        let len = 1usize << self.levels[pos];
        (pos & !(len - 1), len)
    }

    #[inline]
    fn read_cm(&self, start: usize, len: usize) -> u64 {
        if len == 1 {
            return self.cm_bytes[start] as u64;
        }
        let n = len.min(8);
        let mut buf = [0u8; 8];
        buf[..n].copy_from_slice(&self.cm_bytes[start..start + n]);
        u64::from_le_bytes(buf)
    }

    #[inline]
    fn read_c(&self, start: usize, len: usize) -> i64 {
        if len == 1 {
            return self.c_bytes[start] as i8 as i64;
        }
        let n = len.min(8);
        let mut buf = [0u8; 8];
        buf[..n].copy_from_slice(&self.c_bytes[start..start + n]);
        let shift = 64 - 8 * n as u32;
        ((u64::from_le_bytes(buf) << shift) as i64) >> shift
    }

    #[inline]
    fn write(&mut self, start: usize, len: usize, cm: u64, c: i64) {
        if len == 1 {
            self.cm_bytes[start] = cm as u8;
            self.c_bytes[start] = c as i8 as u8;
            return;
        }
        let n = len.min(8);
        self.cm_bytes[start..start + n].copy_from_slice(&cm.to_le_bytes()[..n]);
        self.c_bytes[start..start + n].copy_from_slice(&c.to_le_bytes()[..n]);
    }

    /// `(cm, c)` of the counter covering `pos`.
    pub fn value(&self, pos: usize) -> (u64, i64) {
        let (start, len) = self.extent(pos);
        (self.read_cm(start, len), self.read_c(start, len))
    }

    /// Logical counters in ring order.
    pub fn counters(&self) -> impl Iterator<Item = CounterExtent> + Clone + '_ {
        let mut pos = 0;
        std::iter::from_fn(move || {
            if pos >= self.width() {
                return None;
            }
            let (start, len) = self.extent(pos);
            pos = start + len;
            Some(CounterExtent {
                start,
                byte_len: len,
                cm: self.read_cm(start, len),
                c: self.read_c(start, len),
            })
        })
    }

    /// Per-position flags: bit `i` is set when positions `i` and `i + 1`
    /// (clockwise, wrapping) belong to the same counter.
    pub fn indicator_bits(&self) -> Vec<bool> {
        let w = self.width();
        (0..w)
            .map(|i| w > 1 && self.extent(i) == self.extent((i + 1) % w))
            .collect()
    }

    /// Fuse every counter inside the aligned region `[start, start + len)`
    /// into one counter of `len` bytes holding the summed fields.
    fn coalesce(&mut self, start: usize, len: usize) -> Result<()> {
        debug_assert!(len.is_power_of_two() && start.is_multiple_of(len));
        let mut cm = 0u64;
        let mut c = 0i64;
        let mut pos = start;
        while pos < start + len {
            let (s, l) = self.extent(pos);
            debug_assert!(s == pos && l <= len);
            cm = cm
                .checked_add(self.read_cm(s, l))
                .ok_or(Error::RowSaturated { row: self.index })?;
            c = c
                .checked_add(self.read_c(s, l))
                .ok_or(Error::RowSaturated { row: self.index })?;
            pos += l;
        }
        let level = len.trailing_zeros() as u8;
        self.levels[start..start + len].fill(level);
        self.cm_bytes[start..start + len].fill(0);
        self.c_bytes[start..start + len].fill(0);
        self.write(start, len, cm, c);
        Ok(())
    }

    /// Merge the counter covering `pos` with its buddy. A buddy region still
    /// split into smaller counters is folded in whole, so the result stays
    /// aligned.
    pub fn merge_on_overflow(&mut self, pos: usize) -> Result<()> {
        let (start, len) = self.extent(pos);
        if len >= self.width() {
            return Err(Error::RowSaturated { row: self.index });
        }
        let doubled = len * 2;
        self.coalesce(start & !(doubled - 1), doubled)
    }

    /// Add one arrival with the given sign at byte position `pos`, widening
    /// the counter first if either field would leave its range.
    pub fn add(&mut self, pos: usize, sign: i32) -> Result<()> {
        loop {
            let (start, len) = self.extent(pos);
            let cm = self.read_cm(start, len);
            let c = self.read_c(start, len);
            let next_c = c + sign as i64;
            if cm < cm_max(len) && c_fits(next_c, len) {
                self.write(start, len, cm + 1, next_c);
                return Ok(());
            }
            self.merge_on_overflow(pos)?;
        }
    }

    fn align_with(&mut self, other: &mut SalsaRow) -> Result<()> {
        let mut pos = 0;
        while pos < self.width() {
            let (_, la) = self.extent(pos);
            let (_, lb) = other.extent(pos);
            let len = la.max(lb);
            if la < len {
                self.coalesce(pos, len)?;
            }
            if lb < len {
                other.coalesce(pos, len)?;
            }
            pos += len;
        }
        Ok(())
    }
}

/// Formal similarity sketch over [`SalsaRow`]s.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SalsaSimiSketch {
    params: SketchParams,
    rows: Vec<SalsaRow>,
    hash: HashFamily,
}

impl SalsaSimiSketch {
    /// One byte of `cm`, one byte of `c`, and two merge-indicator bits.
    pub const SLOT_BITS: usize = 18;

    /// `params.width` must be a power of two.
    pub fn new(params: SketchParams) -> Result<Self> {
        if !params.width.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "width {} is not a power of two",
                params.width
            )));
        }
        Ok(SalsaSimiSketch {
            rows: (0..params.rows)
                .map(|i| SalsaRow::new(i, params.width))
                .collect(),
            hash: HashFamily::new(params.master_seed, params.rows),
            params,
        })
    }

    /// Width is the budget's slot count rounded down to a power of two.
    pub fn with_budget(memory_bytes: usize, rows: usize, seed: u64) -> Result<Self> {
        let width = derive_width_bits(memory_bytes, rows, Self::SLOT_BITS)?;
        let width = 1usize << width.ilog2();
        let mut params = SketchParams::new(rows, width, seed)?;
        params.memory_bytes = Some(memory_bytes);
        Self::new(params)
    }

    pub fn params(&self) -> &SketchParams {
        &self.params
    }

    pub fn row(&self, row: usize) -> &SalsaRow {
        &self.rows[row]
    }

    #[inline]
    pub fn bucket(&self, item: ItemId, row: usize) -> usize {
        self.hash.index_hash(item, row, self.params.width)
    }

    pub fn is_empty(&self) -> bool {
        self.rows[0].cm_bytes.iter().all(|&b| b == 0)
    }

    pub fn insert(&mut self, item: ItemId) -> Result<()> {
        for row in 0..self.params.rows {
            let pos = self.hash.index_hash(item, row, self.params.width);
            let sign = self.hash.sign_hash(item, row);
            self.rows[row].add(pos, sign)?;
        }
        Ok(())
    }

    /// Per-row `(start, byte_len, cm, c)` listing of every logical counter.
    pub fn dump(&self) -> Vec<Vec<CounterExtent>> {
        self.rows.iter().map(|r| r.counters().collect()).collect()
    }

    pub fn estimate_jaccard(&self, other: &Self) -> Result<JaccardEstimate> {
        self.params.check_compatible(&other.params)?;
        let mut a = self.clone();
        let mut b = other.clone();
        align(&mut a, &mut b)?;
        a.estimate_aligned(&b)
    }

    /// Estimate on operands already brought to a common layout.
    pub fn estimate_aligned(&self, other: &Self) -> Result<JaccardEstimate> {
        self.params.check_compatible(&other.params)?;
        if self.is_empty() && other.is_empty() {
            return Err(Error::UndefinedSimilarity);
        }
        let mut total = 0.0;
        for (ra, rb) in self.rows.iter().zip(&other.rows) {
            if ra.levels != rb.levels {
                return Err(Error::Incompatible("rows are not aligned".into()));
            }
            let pairs = ra
                .counters()
                .zip(rb.counters())
                .map(|(x, y)| (x.cm, x.c, y.cm, y.c));
            total += weighted_row(pairs).unwrap_or(0.0);
        }
        Ok(JaccardEstimate::new(
            total / self.params.rows as f64,
            Algo::Salsa,
        ))
    }
}

/// Coarsen both sketches in place until every row has identical counter
/// extents: wherever one side has a wider counter, the other folds the
/// matching region into one counter.
pub fn align(a: &mut SalsaSimiSketch, b: &mut SalsaSimiSketch) -> Result<()> {
    a.params.check_compatible(&b.params)?;
    for (ra, rb) in a.rows.iter_mut().zip(b.rows.iter_mut()) {
        ra.align_with(rb)?;
    }
    Ok(())
}

impl SimilaritySketch for SalsaSimiSketch {
    fn algo(&self) -> Algo {
        Algo::Salsa
    }

    fn insert(&mut self, item: ItemId) -> Result<()> {
        SalsaSimiSketch::insert(self, item)
    }

    fn estimate(&self, other: &Self) -> Result<JaccardEstimate> {
        self.estimate_jaccard(other)
    }
}
