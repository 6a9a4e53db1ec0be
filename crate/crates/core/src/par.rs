//! Index-range map/reduce used by the grid scans and seed sweeps.
//!
//! With the `parallel` feature the work runs on the rayon pool; without it
//! the same closures run sequentially. Results are identical either way:
//! outputs are ordered by index and reductions are over exact integers.

use std::ops::Range;

/// Chunk length for grid scans; large enough to amortize scheduling.
const CHUNK: u64 = 1 << 14;

/// `f(i)` for every `i` in `range`, in index order.
pub fn map_range<T, F>(range: Range<u64>, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        range.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        range.map(f).collect()
    }
}

/// Number of indices in `range` for which `pred` holds.
pub fn count_range<F>(range: Range<u64>, pred: F) -> u64
where
    F: Fn(u64) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let chunks = chunk_bounds(&range);
        chunks
            .into_par_iter()
            .map(|r| r.filter(|&i| pred(i)).count() as u64)
            .sum()
    }
    #[cfg(not(feature = "parallel"))]
    {
        count_range_sequential(range, pred)
    }
}

/// Sequential reference for [`count_range`], always available so the two
/// paths can be compared.
pub fn count_range_sequential<F>(range: Range<u64>, pred: F) -> u64
where
    F: Fn(u64) -> bool,
{
    range.filter(|&i| pred(i)).count() as u64
}

#[cfg_attr(not(feature = "parallel"), allow(dead_code))]
fn chunk_bounds(range: &Range<u64>) -> Vec<Range<u64>> {
    let mut out = Vec::new();
    let mut start = range.start;
    while start < range.end {
        let end = (start + CHUNK).min(range.end);
        out.push(start..end);
        start = end;
    }
    out
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunks_cover_range() {
        let r = 3..(3 * CHUNK + 17);
        let chunks = chunk_bounds(&r);
        assert_eq!(chunks.first().unwrap().start, r.start);
        assert_eq!(chunks.last().unwrap().end, r.end);
        for w in chunks.windows(2) {
            assert_eq!(w[0].end, w[1].start);
        }
        assert!(chunk_bounds(&(5..5)).is_empty());
    }

    #[test]
    fn count_matches_sequential() {
        let pred = |i: u64| i % 7 == 3 || i.is_multiple_of(11);
        let r = 0..100_003;
        assert_eq!(count_range(r.clone(), pred), count_range_sequential(r, pred));
    }

    #[test]
    fn map_preserves_order() {
        let v = map_range(0..1000, |i| i * i);
        assert!(v.iter().enumerate().all(|(i, &x)| x == (i * i) as u64));
    }
}
