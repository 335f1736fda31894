//! Comparison-count bounds for sorting `n` keys and a merge-insertion sorter
//! that meets the upper bound.

use std::cell::Cell;
use std::cmp::Ordering;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub n: u64,
    /// ⌈log₂ n!⌉
    pub lower: u64,
    /// Σ_{k=2}^{n} ⌈log₂(3k/4)⌉
    pub upper: u64,
}

/// ⌈log₂ x⌉ for x ≥ 1, i.e. the bit length of x − 1.
fn ceil_log2_big(x: &BigUint) -> u64 {
    (x - 1u32).bits()
}

/// ⌈log₂(3k/4)⌉ for k ≥ 2: the smallest t with 2^(t+2) ≥ 3k.
pub fn merge_insertion_term(k: u64) -> u64 {
    let three_k = 3 * k;
    let ceil_log2 = u64::from(u64::BITS - (three_k - 1).leading_zeros());
    ceil_log2.saturating_sub(2)
}

pub fn comparison_bounds(n: u64) -> Result<BoundsReport> {
    if n == 0 {
        return Err(Error::Parameter("n must be at least 1".into()));
    }
    let factorial = (2..=n).fold(BigUint::from(1u32), |acc, k| acc * k);
    Ok(BoundsReport {
        n,
        lower: ceil_log2_big(&factorial),
        upper: (2..=n).map(merge_insertion_term).sum(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountingSortRun<T> {
    pub input: Vec<T>,
    pub output: Vec<T>,
    pub comparisons: u64,
}

/// Ford–Johnson merge insertion. Only key-vs-key comparisons are counted.
pub fn merge_insertion_sort<T: Ord + Clone>(seq: &[T]) -> CountingSortRun<T> {
    let count = Cell::new(0u64);
    let cmp = |a: usize, b: usize| {
        count.set(count.get() + 1);
        seq[a].cmp(&seq[b])
    };
    let order = fj_sort((0..seq.len()).collect(), &cmp);
    CountingSortRun {
        input: seq.to_vec(),
        output: order.into_iter().map(|i| seq[i].clone()).collect(),
        comparisons: count.get(),
    }
}

/// Sorts element ids with merge insertion, comparing through `cmp`.
fn fj_sort<F: Fn(usize, usize) -> Ordering>(items: Vec<usize>, cmp: &F) -> Vec<usize> {
    if items.len() < 2 {
        return items;
    }
    // Pair up; the larger of each pair goes on to the recursive sort.
    let mut partner = std::collections::HashMap::new();
    let mut larger = Vec::with_capacity(items.len() / 2);
    for pair in items.chunks_exact(2) {
        let (lo, hi) = match cmp(pair[0], pair[1]) {
            Ordering::Greater => (pair[1], pair[0]),
            _ => (pair[0], pair[1]),
        };
        partner.insert(hi, lo);
        larger.push(hi);
    }
    let straggler = (items.len() % 2 == 1).then(|| items[items.len() - 1]);

    let main = fj_sort(larger, cmp);
    // pending[i] is inserted below main[i]; the straggler has no bound.
    let pending: Vec<(usize, Option<usize>)> = main
        .iter()
        .map(|a| (partner[a], Some(*a)))
        .chain(straggler.map(|s| (s, None)))
        .collect();

    let mut chain = Vec::with_capacity(items.len());
    chain.push(pending[0].0);
    chain.extend(&main);

    // Insert pending[1..] in Jacobsthal groups, each group from its top down.
    // Group bounds are 1-based pending indices t_k = (2^(k+1) + (−1)^k) / 3.
    let mut done = 1usize;
    let mut prev_t = 1usize;
    let mut k = 2u32;
    while done < pending.len() {
        let t = if k.is_multiple_of(2) {
            ((1usize << (k + 1)) + 1) / 3
        } else {
            ((1usize << (k + 1)) - 1) / 3
        };
        let top = t.min(pending.len());
        for idx in (prev_t..top).rev() {
            let (b, bound) = pending[idx];
            let limit = match bound {
                Some(a) => chain
                    .iter()
                    .position(|&x| x == a)
                    .expect("partner in chain"),
                None => chain.len(),
            };
            let pos = binary_insert_pos(&chain[..limit], b, cmp);
            chain.insert(pos, b);
            done += 1;
        }
        prev_t = t;
        k += 1;
    }
    chain
}

fn binary_insert_pos<F: Fn(usize, usize) -> Ordering>(
    sorted: &[usize],
    x: usize,
    cmp: &F,
) -> usize {
    let (mut lo, mut hi) = (0, sorted.len());
    while lo < hi {
        let mid = (lo + hi) / 2;
        if cmp(x, sorted[mid]) == Ordering::Less {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// One pass over adjacent pairs; stops at the first inversion. Returns
/// whether the sequence is nondecreasing and how many comparisons were made.
pub fn is_sorted_scan<T: Ord>(seq: &[T]) -> (bool, u64) {
    let mut comparisons = 0;
    for w in seq.windows(2) {
        comparisons += 1;
        if w[0] > w[1] {
            return (false, comparisons);
        }
    }
    (true, comparisons)
}
