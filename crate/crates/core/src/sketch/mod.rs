//! The four similarity sketch variants. Each pair of sketches shares one
//! [`HashFamily`](crate::hashing::HashFamily) so slot `j` of row `i` holds the
//! same item pre-image on both sides.

pub mod cm;
pub mod count;
pub mod formal;
pub mod salsa;

pub use cm::CmSimiSketch;
pub use count::CountSimiSketch;
pub use formal::{FormalSimiSketch, FormalSlot};
pub use salsa::{CounterExtent, SalsaRow, SalsaSimiSketch};

/// Subset similarity from two signed counters: ratio of magnitudes when the
/// signs agree, zero otherwise.
#[inline]
pub(crate) fn signed_ratio(a: i64, b: i64) -> f64 {
    if (a > 0 && b > 0) || (a < 0 && b < 0) {
        let (a, b) = (a.unsigned_abs(), b.unsigned_abs());
        a.min(b) as f64 / a.max(b) as f64
    } else {
        0.0
    }
}

/// One row of the weighted estimator: each slot's signed-counter similarity
/// weighted by its share of the row's max-cm mass. `None` when the row holds
/// no mass at all.
pub(crate) fn weighted_row<I>(slots: I) -> Option<f64>
where
    I: Iterator<Item = (u64, i64, u64, i64)> + Clone,
{
    let total: u64 = slots.clone().map(|(ma, _, mb, _)| ma.max(mb)).sum();
    if total == 0 {
        return None;
    }
    // one division at the end keeps integer-valued sums exact
    let num: f64 = slots
        .map(|(ma, ca, mb, cb)| ma.max(mb) as f64 * signed_ratio(ca, cb))
        .sum();
    Some(num / total as f64)
}
