//! Round-structured compare-exchange schedules: the valley merge and a
//! bottom-up merge sort built from it.
//!
//! A round is a set of compare-exchanges on pairwise-disjoint lines, so its
//! pairs commute and may run in any order or all at once.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netcore::{Comparator, Network};

/// Compare-exchange on lines `(lo, hi)`, `lo < hi`; the smaller key goes to `lo`.
pub type Pair = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundSchedule {
    width: usize,
    rounds: Vec<Vec<Pair>>,
}

impl RoundSchedule {
    pub fn new(width: usize, rounds: Vec<Vec<Pair>>) -> Result<Self> {
        let mut last_round = vec![usize::MAX; width];
        for (r, round) in rounds.iter().enumerate() {
            if round.is_empty() {
                return Err(Error::Structural(format!("round {} is empty", r + 1)));
            }
            for &(i, j) in round {
                if i >= j || j >= width {
                    return Err(Error::Structural(format!(
                        "pair ({i}, {j}) invalid for width {width}"
                    )));
                }
                for line in [i, j] {
                    if last_round[line] == r {
                        return Err(Error::Structural(format!(
                            "line {line} appears twice in round {}",
                            r + 1
                        )));
                    }
                    last_round[line] = r;
                }
            }
        }
        Ok(RoundSchedule { width, rounds })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rounds(&self) -> &[Vec<Pair>] {
        &self.rounds
    }

    pub fn round_count(&self) -> usize {
        self.rounds.len()
    }

    pub fn comparison_count(&self) -> usize {
        self.rounds.iter().map(Vec::len).sum()
    }

    pub fn apply_in_place<T: Ord>(&self, values: &mut [T]) -> Result<()> {
        if values.len() != self.width {
            return Err(Error::Structural(format!(
                "sequence length {} does not match schedule width {}",
                values.len(),
                self.width
            )));
        }
        for round in &self.rounds {
            for &(i, j) in round {
                if values[i] > values[j] {
                    values.swap(i, j);
                }
            }
        }
        Ok(())
    }

    pub fn apply<T: Ord + Clone>(&self, seq: &[T]) -> Result<Vec<T>> {
        let mut out = seq.to_vec();
        self.apply_in_place(&mut out)?;
        Ok(out)
    }

    /// Each pair becomes a 2-comparator and each round boundary a round mark.
    pub fn to_network(&self) -> Network {
        let rounds = self
            .rounds
            .iter()
            .map(|round| {
                round
                    .iter()
                    .map(|&(i, j)| Comparator::pair(i, j).expect("i < j"))
                    .collect()
            })
            .collect();
        Network::from_rounds(self.width, rounds).expect("schedule rounds are disjoint")
    }
}

pub fn apply_schedule<T: Ord + Clone>(seq: &[T], schedule: &RoundSchedule) -> Result<Vec<T>> {
    schedule.apply(seq)
}

/// A nonincreasing run of `a_len` keys followed by a nondecreasing run of
/// `b_len` keys, starting at line `base` of a `width`-line sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MergeSpec {
    a_len: usize,
    b_len: usize,
    base: usize,
    width: usize,
}

impl MergeSpec {
    /// The runs fill the whole sequence: `base = 0`, `width = a_len + b_len`.
    pub fn new(a_len: usize, b_len: usize) -> Result<Self> {
        Self::placed(a_len, b_len, 0, a_len + b_len)
    }

    pub fn placed(a_len: usize, b_len: usize, base: usize, width: usize) -> Result<Self> {
        if a_len == 0 {
            return Err(Error::Parameter("decreasing run must be non-empty".into()));
        }
        if b_len < a_len {
            return Err(Error::Parameter(format!(
                "increasing run ({b_len}) must be at least as long as the decreasing run ({a_len})"
            )));
        }
        if base + a_len + b_len > width {
            return Err(Error::Parameter(format!(
                "runs end at {} beyond width {width}",
                base + a_len + b_len
            )));
        }
        Ok(MergeSpec {
            a_len,
            b_len,
            base,
            width,
        })
    }

    pub fn a_len(&self) -> usize {
        self.a_len
    }

    pub fn b_len(&self) -> usize {
        self.b_len
    }

    pub fn len(&self) -> usize {
        self.a_len + self.b_len
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

fn push_at(rounds: &mut Vec<Vec<Pair>>, depth: usize, pair: Pair) {
    if rounds.len() <= depth {
        rounds.resize_with(depth + 1, Vec::new);
    }
    rounds[depth].push(pair);
}

/// Stride halving over `[lo, lo + len)`: compare `(i, i + d)` with
/// `d = 2^(⌈log₂ len⌉ − 1)` wherever `i + d` is in range, then recurse on
/// `[lo, lo + d)` and `[lo + d, lo + len)` in the next round.
fn stride_halving(lo: usize, len: usize, depth: usize, rounds: &mut Vec<Vec<Pair>>) {
    if len < 2 {
        return;
    }
    let d = 1 << (ceil_log2(len) - 1);
    for i in lo..lo + len - d {
        push_at(rounds, depth, (i, i + d));
    }
    stride_halving(lo, d, depth + 1, rounds);
    stride_halving(lo + d, len - d, depth + 1, rounds);
}

/// Merges a valley (nonincreasing then nondecreasing) into ascending order in
/// `⌈log₂(a_len + b_len)⌉` rounds.
pub fn valley_merge_schedule(spec: &MergeSpec) -> RoundSchedule {
    let mut rounds = Vec::new();
    stride_halving(spec.base, spec.len(), 0, &mut rounds);
    RoundSchedule::new(spec.width, rounds).expect("stride halving pairs are disjoint")
}

/// Rounds merging two adjacent ascending runs, `[lo, lo + a)` and
/// `[lo + a, lo + a + b)`, with `a, b ≤ d = 2^(⌈log₂(a + b)⌉ − 1)`.
///
/// Reading the first run backwards turns the pair into a valley, so the
/// valley merge's first round compares line `lo + u` with its mirror
/// `lo + a + b − 1 − u`. The two halves that round leaves behind are bitonic
/// in physical order as well, and are finished by stride halving on each
/// half. The runs are placed in a conceptual block of `2d` lines, the first
/// run ending at the midpoint; pairs that would touch the empty padding are
/// dropped because padding never moves.
fn merge_runs(lo: usize, a: usize, b: usize, depth: usize, rounds: &mut Vec<Vec<Pair>>) {
    let d = 1usize << (ceil_log2(a + b) - 1);
    debug_assert!(a <= d && b <= d);
    let pad = d - a;
    let real = |p: usize| p >= pad && p < d + b;
    let phys = |p: usize| lo + p - pad;
    for p in pad..d {
        let q = 2 * d - 1 - p;
        if real(q) {
            push_at(rounds, depth, (phys(p), phys(q)));
        }
    }
    let mut s = d / 2;
    let mut level = depth + 1;
    while s >= 1 {
        for block in (0..2 * d).step_by(2 * s) {
            for p in block..block + s {
                if real(p) && real(p + s) {
                    push_at(rounds, level, (phys(p), phys(p + s)));
                }
            }
        }
        s /= 2;
        level += 1;
    }
}

/// Per-stage rounds of the bottom-up merge sort on `n` lines.
///
/// Runs are aligned to the right end, so at stage `j` every run has length
/// `2^(j−1)` except possibly the leftmost, and each merge pairs a run with the
/// full run to its right. All merges of a stage share the same rounds.
fn merge_sort_stages(n: usize) -> Vec<Vec<Vec<Pair>>> {
    let mut stages = Vec::new();
    let mut h = 1;
    while h < n {
        let mut rounds = Vec::new();
        let mut end = n;
        while end > h {
            let b_start = end - h;
            let a_start = b_start.saturating_sub(h);
            merge_runs(a_start, b_start - a_start, h, 0, &mut rounds);
            end = a_start;
        }
        stages.push(rounds);
        h *= 2;
    }
    stages
}

/// Bottom-up parallel merge sort. For `n = 2^t`, stage `j` costs exactly `j`
/// rounds, `t(t+1)/2` in total.
pub fn parallel_merge_sort_schedule(n: usize) -> Result<RoundSchedule> {
    if n == 0 {
        return Err(Error::Parameter("n must be at least 1".into()));
    }
    let rounds = merge_sort_stages(n).into_iter().flatten().collect();
    RoundSchedule::new(n, rounds)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRow {
    pub run_length: usize,
    pub run_count: usize,
    pub rounds: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageTable {
    pub n: usize,
    /// Starts with the unsorted state `(1, n, 0)`; row `j` describes the runs
    /// after stage `j` and the rounds that stage took.
    pub rows: Vec<StageRow>,
    pub total_rounds: usize,
}

/// Stage-by-stage cost of [`parallel_merge_sort_schedule`], for `n` a power of two.
pub fn schedule_stage_table(n: usize) -> Result<StageTable> {
    if !n.is_power_of_two() {
        return Err(Error::Parameter(format!(
            "n must be a power of two, got {n}"
        )));
    }
    let mut rows = vec![StageRow {
        run_length: 1,
        run_count: n,
        rounds: 0,
    }];
    for (j, stage) in merge_sort_stages(n).iter().enumerate() {
        let run_length = 1 << (j + 1);
        rows.push(StageRow {
            run_length,
            run_count: n / run_length,
            rounds: stage.len(),
        });
    }
    let total_rounds = rows.iter().map(|r| r.rounds).sum();
    Ok(StageTable {
        n,
        rows,
        total_rounds,
    })
}
