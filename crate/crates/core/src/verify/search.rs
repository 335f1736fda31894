//! Exhaustive search for the fewest window sorts that sort `n` lines.
//!
//! Pass sequences are enumerated by length, shortest first, and
//! lexicographically (by option index) within a length. The only pruning is
//! the rule that a pass never repeats the pass right before it, since sorting
//! the same window twice in a row is a no-op.
//!
//! Instead of running every candidate on all `2^n` inputs, the search walks
//! the sequence tree depth first and carries the set of unsorted 0-1 states
//! reachable after the current prefix. Sorted states stay sorted under any
//! window sort, so they are dropped; a sequence sorts every input exactly
//! when its set becomes empty. The last pass is decided by a table that
//! records, for each state, which options sort it outright.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construct::PassScheme;
use crate::error::{Error, Result};
use crate::netcore::{Comparator, Network};

/// Widest instance the state-set search accepts.
pub const SEARCH_WIDTH_LIMIT: usize = 20;

/// Widest instance allowed in [`SearchMode::ArbitrarySubsets`].
pub const SUBSET_WIDTH_LIMIT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    /// Passes sort contiguous windows `[o, o + window)`.
    Contiguous,
    /// Passes sort any `window`-subset of the lines.
    ArbitrarySubsets,
}

impl std::fmt::Display for SearchMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SearchMode::Contiguous => "contiguous",
            SearchMode::ArbitrarySubsets => "arbitrary-subsets",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchSpec {
    n: usize,
    window: usize,
    max_passes: usize,
    mode: SearchMode,
}

impl SearchSpec {
    pub fn new(n: usize, window: usize, max_passes: usize, mode: SearchMode) -> Result<Self> {
        if window < 2 || window > n {
            return Err(Error::Parameter(format!(
                "window must satisfy 2 ≤ window ≤ n, got window={window} n={n}"
            )));
        }
        if max_passes == 0 {
            return Err(Error::Parameter("max_passes must be at least 1".into()));
        }
        if mode == SearchMode::ArbitrarySubsets && n > SUBSET_WIDTH_LIMIT {
            return Err(Error::Parameter(format!(
                "arbitrary-subsets mode is limited to n ≤ {SUBSET_WIDTH_LIMIT}, got {n}"
            )));
        }
        if n > SEARCH_WIDTH_LIMIT {
            return Err(Error::Resource {
                msg: format!("search is limited to n ≤ {SEARCH_WIDTH_LIMIT}, got {n}"),
                progress: 0,
            });
        }
        Ok(SearchSpec {
            n,
            window,
            max_passes,
            mode,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn max_passes(&self) -> usize {
        self.max_passes
    }

    pub fn mode(&self) -> SearchMode {
        self.mode
    }

    /// The pass options in enumeration order.
    pub fn options(&self) -> Vec<Vec<usize>> {
        match self.mode {
            SearchMode::Contiguous => (0..=self.n - self.window)
                .map(|o| (o..o + self.window).collect())
                .collect(),
            SearchMode::ArbitrarySubsets => combinations(self.n, self.window),
        }
    }

    /// Nominal cost of searching all sequences of `len` passes:
    /// `options^len × 2^n`, saturating.
    pub fn cost(&self, len: usize) -> u128 {
        let m = self.options().len() as u128;
        let mut c: u128 = 1 << self.n;
        for _ in 0..len {
            c = c.saturating_mul(m);
        }
        c
    }
}

/// Lexicographic `k`-subsets of `0..n`.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    /// Window start offsets, in contiguous mode.
    Offsets(Vec<usize>),
    /// Explicit line sets, in arbitrary-subsets mode.
    Subsets(Vec<Vec<usize>>),
}

impl Witness {
    pub fn len(&self) -> usize {
        match self {
            Witness::Offsets(o) => o.len(),
            Witness::Subsets(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_network(&self, n: usize, window: usize) -> Result<Network> {
        match self {
            Witness::Offsets(o) => Ok(PassScheme::new(n, window, o.clone())?.to_network()),
            Witness::Subsets(s) => Network::new(
                n,
                s.iter()
                    .map(|l| Comparator::new(l.clone()))
                    .collect::<Result<_>>()?,
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchResult {
    pub found: bool,
    pub min_passes: Option<usize>,
    pub witness: Option<Witness>,
    /// Pass sequences a sequential length-then-lexicographic enumeration
    /// decides before stopping (repeat-pruned sequences excluded).
    pub sequences_tested: u64,
}

/// Finds the shortest, then lexicographically first, pass sequence that
/// sorts all inputs. Lengths whose nominal cost exceeds `budget` are not
/// started; the error reports how many sequences were already decided.
pub fn search_min_passes(spec: &SearchSpec, budget: u64) -> Result<SearchResult> {
    let engine = Engine::new(spec);
    let m = engine.options.len();
    let mut tested: u64 = 0;
    for len in 1..=spec.max_passes {
        if spec.cost(len) > u128::from(budget) {
            return Err(Error::Resource {
                msg: format!(
                    "searching {len}-pass sequences costs {} > budget {budget}",
                    spec.cost(len)
                ),
                progress: tested,
            });
        }
        if let Some(seq) = engine.search_length(len) {
            tested = tested.saturating_add(rank(&seq, m).saturating_add(1));
            let witness = match spec.mode {
                SearchMode::Contiguous => Witness::Offsets(seq),
                SearchMode::ArbitrarySubsets => Witness::Subsets(
                    seq.iter()
                        .map(|&o| engine.options[o].lines.clone())
                        .collect(),
                ),
            };
            return Ok(SearchResult {
                found: true,
                min_passes: Some(len),
                witness: Some(witness),
                sequences_tested: tested,
            });
        }
        tested = tested.saturating_add(sequences_of_length(m, len));
    }
    Ok(SearchResult {
        found: false,
        min_passes: None,
        witness: None,
        sequences_tested: tested,
    })
}

/// Repeat-free sequences of `len` passes over `m` options: `m (m−1)^(len−1)`.
fn sequences_of_length(m: usize, len: usize) -> u64 {
    (m as u64).saturating_mul(pow_saturating(m as u64 - 1, len - 1))
}

fn pow_saturating(base: u64, exp: usize) -> u64 {
    (0..exp).fold(1u64, |acc, _| acc.saturating_mul(base))
}

/// Position of a repeat-free sequence in lexicographic order.
fn rank(seq: &[usize], m: usize) -> u64 {
    seq.iter().enumerate().fold(0u64, |r, (i, &o)| {
        let smaller = match i {
            0 => o,
            _ => o - usize::from(seq[i - 1] < o),
        };
        let completions = pow_saturating(m as u64 - 1, seq.len() - 1 - i);
        r.saturating_add((smaller as u64).saturating_mul(completions))
    })
}

struct PassOption {
    lines: Vec<usize>,
    mask: u32,
    tops: Vec<u32>,
}

struct Engine {
    n: usize,
    options: Vec<PassOption>,
    words: usize,
    /// `sorts[s * words ..][o]` is set when option `o` sorts state `s`.
    sorts: Vec<u64>,
    full: u32,
}

impl Engine {
    fn new(spec: &SearchSpec) -> Self {
        let n = spec.n;
        let options: Vec<PassOption> = spec
            .options()
            .into_iter()
            .map(|lines| {
                let mask = lines.iter().fold(0u32, |m, &i| m | (1 << i));
                let mut tops = vec![0u32];
                let mut acc = 0u32;
                for &i in lines.iter().rev() {
                    acc |= 1 << i;
                    tops.push(acc);
                }
                PassOption { lines, mask, tops }
            })
            .collect();
        let m = options.len();
        let words = m.div_ceil(64);
        let full = (1u32 << n) - 1;
        let mut engine = Engine {
            n,
            options,
            words,
            sorts: vec![0; (1usize << n) * words],
            full,
        };
        for s in 0..(1u32 << n) {
            for o in 0..m {
                if engine.sorted(engine.image(o, s)) {
                    engine.sorts[s as usize * words + o / 64] |= 1 << (o % 64);
                }
            }
        }
        engine
    }

    #[inline]
    fn image(&self, o: usize, s: u32) -> u32 {
        let opt = &self.options[o];
        let ones = (s & opt.mask).count_ones() as usize;
        (s & !opt.mask) | opt.tops[ones]
    }

    #[inline]
    fn sorted(&self, s: u32) -> bool {
        s == 0 || s == self.full & !((1u32 << s.trailing_zeros()) - 1)
    }

    fn root(&self) -> Vec<u32> {
        (0..(1u32 << self.n)).filter(|&s| !self.sorted(s)).collect()
    }

    fn all_options(&self) -> Vec<u64> {
        let m = self.options.len();
        (0..self.words)
            .map(|w| {
                let bits = (m - w * 64).min(64);
                if bits == 64 {
                    u64::MAX
                } else {
                    (1u64 << bits) - 1
                }
            })
            .collect()
    }

    /// Lexicographically first repeat-free sequence of exactly `len` passes
    /// that sorts every input.
    fn search_length(&self, len: usize) -> Option<Vec<usize>> {
        let root = self.root();
        if len == 1 {
            let mut prefix = Vec::new();
            let mut stamps = Stamps::new(self.n);
            return self
                .dfs(&root, &mut prefix, len, &mut stamps)
                .then_some(prefix);
        }
        let best = AtomicUsize::new(usize::MAX);
        let found: Vec<Option<Vec<usize>>> = (0..self.options.len())
            .into_par_iter()
            .map(|first| {
                if first > best.load(Ordering::Relaxed) {
                    return None;
                }
                let mut stamps = Stamps::new(self.n);
                let child = self.child_set(&root, first, &mut stamps);
                let mut prefix = vec![first];
                if self.dfs(&child, &mut prefix, len, &mut stamps) {
                    best.fetch_min(first, Ordering::Relaxed);
                    Some(prefix)
                } else {
                    None
                }
            })
            .collect();
        found.into_iter().flatten().next()
    }

    fn child_set(&self, set: &[u32], o: usize, stamps: &mut Stamps) -> Vec<u32> {
        stamps.next();
        let mut child = Vec::with_capacity(set.len());
        for &s in set {
            let t = self.image(o, s);
            if !self.sorted(t) && stamps.insert(t) {
                child.push(t);
            }
        }
        child
    }

    /// AND of the "sorts this state" rows over `states`, stopping early once
    /// nothing is left.
    fn finishing_options<I: Iterator<Item = u32>>(&self, states: I, acc: &mut [u64]) {
        for s in states {
            let row = &self.sorts[s as usize * self.words..(s as usize + 1) * self.words];
            let mut any = 0;
            for (a, r) in acc.iter_mut().zip(row) {
                *a &= r;
                any |= *a;
            }
            if any == 0 {
                return;
            }
        }
    }

    fn lowest_except(&self, acc: &mut [u64], except: Option<usize>) -> Option<usize> {
        if let Some(e) = except {
            acc[e / 64] &= !(1u64 << (e % 64));
        }
        acc.iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn dfs(&self, set: &[u32], prefix: &mut Vec<usize>, len: usize, stamps: &mut Stamps) -> bool {
        let remaining = len - prefix.len();
        let last = prefix.last().copied();
        match remaining {
            1 => {
                let mut acc = self.all_options();
                self.finishing_options(set.iter().copied(), &mut acc);
                if let Some(o) = self.lowest_except(&mut acc, last) {
                    prefix.push(o);
                    return true;
                }
                false
            }
            2 => {
                for o in (0..self.options.len()).filter(|&o| Some(o) != last) {
                    let mut acc = self.all_options();
                    self.finishing_options(set.iter().map(|&s| self.image(o, s)), &mut acc);
                    if let Some(o2) = self.lowest_except(&mut acc, Some(o)) {
                        prefix.extend([o, o2]);
                        return true;
                    }
                }
                false
            }
            _ => {
                for o in (0..self.options.len()).filter(|&o| Some(o) != last) {
                    let child = self.child_set(set, o, stamps);
                    prefix.push(o);
                    if self.dfs(&child, prefix, len, stamps) {
                        return true;
                    }
                    prefix.pop();
                }
                false
            }
        }
    }
}

/// Generation-stamped membership set over `0..2^n`.
struct Stamps {
    marks: Vec<u32>,
    generation: u32,
}

impl Stamps {
    fn new(n: usize) -> Self {
        Stamps {
            marks: vec![0; 1 << n],
            generation: 0,
        }
    }

    fn next(&mut self) {
        if self.generation == u32::MAX {
            self.marks.iter_mut().for_each(|m| *m = 0);
            self.generation = 0;
        }
        self.generation += 1;
    }

    fn insert(&mut self, s: u32) -> bool {
        let m = &mut self.marks[s as usize];
        if *m == self.generation {
            false
        } else {
            *m = self.generation;
            true
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::zero_one_verify;

    #[test]
    fn stooge_three_is_minimal() {
        let spec = SearchSpec::new(3, 2, 3, SearchMode::Contiguous).unwrap();
        let r = search_min_passes(&spec, u64::MAX).unwrap();
        assert!(r.found);
        assert_eq!(r.min_passes, Some(3));
        assert_eq!(r.witness, Some(Witness::Offsets(vec![0, 1, 0])));
        // Two options: 2 one-pass + 2 two-pass sequences, then [0,1,0] is first.
        assert_eq!(r.sequences_tested, 2 + 2 + 1);
    }

    #[test]
    fn full_window_is_one_pass() {
        for mode in [SearchMode::Contiguous, SearchMode::ArbitrarySubsets] {
            let spec = SearchSpec::new(5, 5, 1, mode).unwrap();
            let r = search_min_passes(&spec, u64::MAX).unwrap();
            assert_eq!(r.min_passes, Some(1));
            assert_eq!(r.sequences_tested, 1);
        }
    }

    #[test]
    fn not_found_counts_everything() {
        let spec = SearchSpec::new(4, 2, 2, SearchMode::Contiguous).unwrap();
        let r = search_min_passes(&spec, u64::MAX).unwrap();
        assert!(!r.found);
        assert_eq!(r.sequences_tested, 3 + 3 * 2);
    }

    #[test]
    fn budget_reports_progress() {
        let spec = SearchSpec::new(4, 2, 5, SearchMode::Contiguous).unwrap();
        // 3^2 × 16 = 144 fits, 3^3 × 16 = 432 does not.
        match search_min_passes(&spec, 200) {
            Err(Error::Resource { progress, .. }) => assert_eq!(progress, 3 + 6),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn spec_validation() {
        assert!(SearchSpec::new(4, 1, 2, SearchMode::Contiguous).is_err());
        assert!(SearchSpec::new(4, 5, 2, SearchMode::Contiguous).is_err());
        assert!(SearchSpec::new(4, 2, 0, SearchMode::Contiguous).is_err());
        assert!(SearchSpec::new(11, 5, 2, SearchMode::ArbitrarySubsets).is_err());
        assert!(SearchSpec::new(11, 5, 2, SearchMode::Contiguous).is_ok());
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(4, 2),
            vec![
                vec![0, 1],
                vec![0, 2],
                vec![0, 3],
                vec![1, 2],
                vec![1, 3],
                vec![2, 3]
            ]
        );
        assert_eq!(combinations(8, 4).len(), 70);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
    }

    #[test]
    fn rank_enumerates_in_order() {
        // Enumerate repeat-free sequences of length 3 over 4 options directly.
        let m = 4;
        let mut expected = 0u64;
        for a in 0..m {
            for b in (0..m).filter(|&b| b != a) {
                for c in (0..m).filter(|&c| c != b) {
                    assert_eq!(rank(&[a, b, c], m), expected);
                    expected += 1;
                }
            }
        }
        assert_eq!(expected, sequences_of_length(m, 3));
    }

    #[test]
    fn subset_witness_verifies() {
        let spec = SearchSpec::new(6, 4, 3, SearchMode::ArbitrarySubsets).unwrap();
        let r = search_min_passes(&spec, u64::MAX).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(Some(w.len()), r.min_passes);
        let net = w.to_network(6, 4).unwrap();
        assert!(zero_one_verify(&net).unwrap().valid());
    }
}
