//! Mixed-radix enumeration of `{1..=base}^len`, partitioned by index range.
//!
//! Index 0 is `(1, ..., 1)` and the first coordinate is the most significant
//! digit, so tuples come out in lexicographic order.

use std::ops::Range;

use rayon::prelude::*;

use crate::error::{ParkError, Result};

/// Partition count used when the caller does not pick one.
pub const DEFAULT_PARTITIONS: usize = 64;

/// `base^len`, or an error when it does not fit in a `u64`.
pub fn tuple_count(len: usize, base: usize) -> Result<u64> {
    (base as u64)
        .checked_pow(len as u32)
        .ok_or_else(|| ParkError::ParameterOutOfRange {
            what: "tuple space",
            value: format!("{base}^{len}"),
            range: "64-bit indices".to_string(),
        })
}

/// Walks a contiguous index range of the tuple space.
#[derive(Clone, Debug)]
pub struct TupleCursor {
    digits: Vec<u8>,
    base: u8,
    remaining: u64,
    started: bool,
}

impl TupleCursor {
    pub fn new(len: usize, base: usize, range: Range<u64>) -> Self {
        let mut digits = vec![1u8; len];
        let mut idx = range.start;
        for d in digits.iter_mut().rev() {
            *d = (idx % base as u64) as u8 + 1;
            idx /= base as u64;
        }
        Self {
            digits,
            base: base as u8,
            remaining: range.end.saturating_sub(range.start),
            started: false,
        }
    }

    /// Next tuple, or `None` once the range is exhausted.
    pub fn next_tuple(&mut self) -> Option<&[u8]> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        if self.started {
            for d in self.digits.iter_mut().rev() {
                if *d < self.base {
                    *d += 1;
                    break;
                }
                *d = 1;
            }
        }
        self.started = true;
        Some(&self.digits)
    }
}

/// Splits `0..total` into at most `parts` contiguous, nonempty ranges.
pub fn split_range(total: u64, parts: usize) -> Vec<Range<u64>> {
    let parts = (parts.max(1) as u64).min(total.max(1));
    let chunk = total / parts;
    let extra = total % parts;
    let mut start = 0;
    (0..parts)
        .map(|i| {
            let len = chunk + u64::from(i < extra);
            let r = start..start + len;
            start += len;
            r
        })
        .filter(|r| !r.is_empty())
        .collect()
}

/// Folds `visit` over every tuple of `{1..=base}^len` with one accumulator
/// per partition, then merges the accumulators in partition order.
pub(crate) fn fold_tuples<A, I, V, M>(
    len: usize,
    base: usize,
    parts: usize,
    init: I,
    visit: V,
    merge: M,
) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, &[u8]) + Sync,
    M: Fn(A, A) -> A,
{
    let total = tuple_count(len, base)?;
    let partials: Vec<A> = split_range(total, parts)
        .into_par_iter()
        .map(|range| {
            let mut acc = init();
            let mut cursor = TupleCursor::new(len, base, range);
            while let Some(t) = cursor.next_tuple() {
                visit(&mut acc, t);
            }
            acc
        })
        .collect();
    Ok(partials.into_iter().fold(init(), merge))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cursor_is_lexicographic() {
        let mut c = TupleCursor::new(2, 3, 0..9);
        let mut seen = Vec::new();
        while let Some(t) = c.next_tuple() {
            seen.push(t.to_vec());
        }
        assert_eq!(seen.len(), 9);
        assert_eq!(seen[0], vec![1, 1]);
        assert_eq!(seen[1], vec![1, 2]);
        assert_eq!(seen[3], vec![2, 1]);
        assert_eq!(seen[8], vec![3, 3]);
    }

    #[test]
    fn cursor_starts_mid_range() {
        let mut c = TupleCursor::new(3, 2, 5..7);
        assert_eq!(c.next_tuple(), Some(&[2, 1, 2][..]));
        assert_eq!(c.next_tuple(), Some(&[2, 2, 1][..]));
        assert_eq!(c.next_tuple(), None);
    }

    #[test]
    fn ranges_cover_exactly() {
        for (total, parts) in [(10, 3), (3, 10), (0, 4), (64, 64), (1, 1)] {
            let rs = split_range(total, parts);
            let mut next = 0;
            for r in &rs {
                assert_eq!(r.start, next);
                next = r.end;
            }
            assert_eq!(next, total);
        }
    }

    #[test]
    fn fold_matches_sequential() {
        let sum = |parts| {
            fold_tuples(
                4,
                4,
                parts,
                || 0u64,
                |acc, t| *acc += t.iter().map(|&d| d as u64).product::<u64>(),
                |a, b| a + b,
            )
            .unwrap()
        };
        // (1 + 2 + 3 + 4)^4
        assert_eq!(sum(1), 10_000);
        assert_eq!(sum(7), 10_000);
        assert_eq!(sum(1000), 10_000);
    }
}
