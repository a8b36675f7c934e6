//! Canonical-order search for the first failing tuple.
//!
//! Tuples are numbered in lexicographic order of their component indices
//! (first component slowest). Workers take interleaved blocks of that
//! numbering; the failure with the lowest number wins, so the result does
//! not depend on the worker count.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

const BLOCK: u64 = 512;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct SearchResult {
    /// Tuples evaluated in canonical order up to and including the failure.
    pub checked: u64,
    /// Size of the whole tuple space, saturated at `u64::MAX`.
    pub total: u64,
    pub truncated: bool,
    /// Component indices of the first failing tuple.
    pub failure: Option<Vec<usize>>,
}

/// Evaluates `holds` over every tuple of `axes` in canonical order, up to
/// `max_cases` tuples. An `Err` from `holds` counts as a failure at that
/// tuple and is returned if no earlier tuple fails.
pub(crate) fn search<E, F>(axes: &[usize], max_cases: u64, workers: usize, holds: F) -> Result<SearchResult, E>
where
    E: Send,
    F: Fn(&[usize]) -> Result<bool, E> + Sync,
{
    let total = axes.iter().try_fold(1u64, |acc, &n| acc.checked_mul(n as u64)).unwrap_or(u64::MAX);
    let limit = total.min(max_cases);
    let truncated = limit < total;

    let first = if workers <= 1 || limit <= BLOCK {
        scan(axes, 0, limit, &holds)
    } else {
        parallel(axes, limit, workers, &holds)
    };
    match first {
        None => Ok(SearchResult { checked: limit, total, truncated, failure: None }),
        Some((_, Err(e))) => Err(e),
        Some((idx, Ok(()))) => {
            Ok(SearchResult { checked: idx + 1, total, truncated, failure: Some(decode(axes, idx)) })
        }
    }
}

type Found<E> = Option<(u64, Result<(), E>)>;

fn scan<E, F>(axes: &[usize], start: u64, end: u64, holds: &F) -> Found<E>
where
    F: Fn(&[usize]) -> Result<bool, E>,
{
    let mut tuple = decode(axes, start);
    for idx in start..end {
        match holds(&tuple) {
            Ok(true) => {}
            Ok(false) => return Some((idx, Ok(()))),
            Err(e) => return Some((idx, Err(e))),
        }
        advance(axes, &mut tuple);
    }
    None
}

fn parallel<E, F>(axes: &[usize], limit: u64, workers: usize, holds: &F) -> Found<E>
where
    E: Send,
    F: Fn(&[usize]) -> Result<bool, E> + Sync,
{
    let blocks = limit.div_ceil(BLOCK);
    let next = AtomicU64::new(0);
    let best = AtomicU64::new(u64::MAX);
    let found: Mutex<Found<E>> = Mutex::new(None);
    std::thread::scope(|s| {
        for _ in 0..workers.min(blocks as usize) {
            s.spawn(|| loop {
                let b = next.fetch_add(1, Ordering::Relaxed);
                if b >= blocks {
                    break;
                }
                let start = b * BLOCK;
                // Blocks are handed out in increasing order, so nothing
                // later can beat a failure already recorded.
                if start > best.load(Ordering::Acquire) {
                    break;
                }
                let end = (start + BLOCK).min(limit);
                if let Some((idx, r)) = scan(axes, start, end, holds) {
                    let mut slot = found.lock().unwrap_or_else(|p| p.into_inner());
                    if slot.as_ref().is_none_or(|(i, _)| idx < *i) {
                        *slot = Some((idx, r));
                        best.fetch_min(idx, Ordering::AcqRel);
                    }
                    break;
                }
            });
        }
    });
    found.into_inner().unwrap_or_else(|p| p.into_inner())
}

pub(crate) fn decode(axes: &[usize], mut idx: u64) -> Vec<usize> {
    let mut out = vec![0; axes.len()];
    for (slot, &n) in out.iter_mut().zip(axes).rev() {
        if n == 0 {
            continue;
        }
        *slot = (idx % n as u64) as usize;
        idx /= n as u64;
    }
    out
}

fn advance(axes: &[usize], tuple: &mut [usize]) {
    for (slot, &n) in tuple.iter_mut().zip(axes).rev() {
        *slot += 1;
        if *slot < n {
            return;
        }
        *slot = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn never(_: &[usize]) -> Result<bool, ()> {
        Ok(true)
    }

    #[test]
    fn counts_and_truncation() {
        let r = search(&[5, 5, 5], 1_000, 1, never).unwrap();
        assert_eq!((r.checked, r.total, r.truncated), (125, 125, false));
        let r = search(&[5, 5, 5], 100, 4, never).unwrap();
        assert_eq!((r.checked, r.total, r.truncated), (100, 125, true));
        let r = search(&[0, 5], 100, 4, never).unwrap();
        assert_eq!((r.checked, r.total), (0, 0));
    }

    #[test]
    fn decode_is_lexicographic() {
        assert_eq!(decode(&[2, 3], 0), [0, 0]);
        assert_eq!(decode(&[2, 3], 1), [0, 1]);
        assert_eq!(decode(&[2, 3], 3), [1, 0]);
        let mut t = vec![0, 0];
        for i in 0..6 {
            assert_eq!(t, decode(&[2, 3], i));
            advance(&[2, 3], &mut t);
        }
    }

    #[test]
    fn errors_propagate_when_first() {
        let r: Result<SearchResult, &str> =
            search(&[10, 10], 100, 3, |t| if t[0] == 4 { Err("boom") } else { Ok(t != [7, 1]) });
        assert_eq!(r, Err("boom"));
        let r: Result<SearchResult, &str> =
            search(&[10, 10], 100, 3, |t| if t[0] == 8 { Err("boom") } else { Ok(t != [7, 1]) });
        assert_eq!(r.unwrap().failure, Some(vec![7, 1]));
    }

    proptest! {
        #[test]
        fn first_failure_is_independent_of_workers(
            axes in proptest::collection::vec(1usize..24, 1..4),
            bad in proptest::collection::vec(0u64..14000, 0..6),
            workers in 1usize..9,
            cap in 1u64..15000,
        ) {
            let total: u64 = axes.iter().map(|&n| n as u64).product();
            let bad: Vec<u64> = bad.into_iter().filter(|b| *b < total).collect();
            let holds = |t: &[usize]| -> Result<bool, ()> {
                let idx = t.iter().zip(&axes).fold(0u64, |acc, (&i, &n)| acc * n as u64 + i as u64);
                Ok(!bad.contains(&idx))
            };
            let seq = search(&axes, cap, 1, holds).unwrap();
            let par = search(&axes, cap, workers, holds).unwrap();
            prop_assert_eq!(&seq, &par);
            let expected = bad.iter().copied().filter(|&b| b < cap.min(total)).min();
            prop_assert_eq!(seq.failure.clone(), expected.map(|b| decode(&axes, b)));
        }
    }
}
