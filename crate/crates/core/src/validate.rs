//! Pairwise X-set checks, independent of any search code.

use crate::error::Result;
use crate::graph::DifferenceFilter;
use crate::sets::ForbiddenSet;

/// The first pair `(a, b)` with `a < b` and `b - a` or `a - b` a nonzero
/// member of X, if any. Repeated elements are ignored.
pub fn forbidden_pair(x: &ForbiddenSet, set: &[i64]) -> Result<Option<(i64, i64)>> {
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let (Some(&lo), Some(&hi)) = (sorted.first(), sorted.last()) else {
        return Ok(None);
    };
    let span = (hi as i128 - lo as i128) as u64;
    let filter = DifferenceFilter::new(x, span)?;
    for (i, &a) in sorted.iter().enumerate() {
        for &b in &sorted[i + 1..] {
            if filter.forbids(b - a) {
                return Ok(Some((a, b)));
            }
        }
    }
    Ok(None)
}

pub fn is_x_set(x: &ForbiddenSet, set: &[i64]) -> Result<bool> {
    Ok(forbidden_pair(x, set)?.is_none())
}

/// Translate so the minimum is 1, sorted and deduplicated.
pub fn normalize(set: &[i64]) -> Vec<i64> {
    let mut out = set.to_vec();
    out.sort_unstable();
    out.dedup();
    if let Some(&min) = out.first() {
        for v in &mut out {
            *v = *v - min + 1;
        }
    }
    out
}
