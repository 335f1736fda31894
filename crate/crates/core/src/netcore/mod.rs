//! Comparator networks over k-sorters and their application to key sequences.
//!
//! A [`Comparator`] names a set of lines that are sorted jointly in one step.
//! Smaller keys move toward lower line indices, so a network that sorts
//! leaves its output ascending in line order. Window sorting is stable with
//! respect to position order, which makes application deterministic on
//! multisets of keys that compare equal.

mod format;

pub use format::{read_network, write_network};

use crate::error::{Error, Result};

/// A k-sorter acting on an arbitrary set of lines, stored strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Comparator {
    lines: Vec<usize>,
}

impl Comparator {
    pub fn new(lines: Vec<usize>) -> Result<Self> {
        if lines.len() < 2 {
            return Err(Error::Structural(format!(
                "comparator needs at least 2 lines, got {}",
                lines.len()
            )));
        }
        if lines.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Structural(format!(
                "comparator lines must be strictly increasing: {lines:?}"
            )));
        }
        Ok(Comparator { lines })
    }

    /// Classic 2-line compare-exchange.
    pub fn pair(lo: usize, hi: usize) -> Result<Self> {
        Self::new(vec![lo, hi])
    }

    /// The contiguous window `[start, start + len)`.
    pub fn window(start: usize, len: usize) -> Result<Self> {
        Self::new((start..start + len).collect())
    }

    pub fn lines(&self) -> &[usize] {
        &self.lines
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn max_line(&self) -> usize {
        *self.lines.last().expect("comparator has at least 2 lines")
    }

    /// Bit mask of the lines, for networks no wider than 64 lines.
    pub(crate) fn mask(&self) -> u64 {
        self.lines.iter().fold(0u64, |m, &i| m | (1u64 << i))
    }

    /// `tops[j]` is the mask of the `j` highest lines of this comparator.
    pub(crate) fn top_masks(&self) -> Vec<u64> {
        let mut tops = Vec::with_capacity(self.lines.len() + 1);
        let mut acc = 0u64;
        tops.push(acc);
        for &i in self.lines.iter().rev() {
            acc |= 1u64 << i;
            tops.push(acc);
        }
        tops
    }

    pub fn apply_in_place<T: Ord + Clone>(&self, values: &mut [T]) -> Result<()> {
        if self.max_line() >= values.len() {
            return Err(Error::Structural(format!(
                "index {} ≥ sequence length {}",
                self.max_line(),
                values.len()
            )));
        }
        let mut window: Vec<T> = self.lines.iter().map(|&i| values[i].clone()).collect();
        window.sort();
        for (&i, v) in self.lines.iter().zip(window) {
            values[i] = v;
        }
        Ok(())
    }

    pub fn apply<T: Ord + Clone>(&self, seq: &[T]) -> Result<Vec<T>> {
        let mut out = seq.to_vec();
        self.apply_in_place(&mut out)?;
        Ok(out)
    }
}

/// An ordered list of comparators on `width` lines, optionally split into
/// rounds whose comparators touch pairwise-disjoint lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    width: usize,
    comparators: Vec<Comparator>,
    /// Comparator indices at which a new round starts. Strictly increasing,
    /// each in `1..comparators.len()`. `None` means no round structure.
    round_marks: Option<Vec<usize>>,
}

impl Network {
    pub fn new(width: usize, comparators: Vec<Comparator>) -> Result<Self> {
        Self::with_marks(width, comparators, None)
    }

    /// The empty network on `width` lines.
    pub fn identity(width: usize) -> Result<Self> {
        Self::new(width, Vec::new())
    }

    /// Builds a round-structured network. Empty rounds are rejected.
    pub fn from_rounds(width: usize, rounds: Vec<Vec<Comparator>>) -> Result<Self> {
        let mut comparators = Vec::new();
        let mut marks = Vec::new();
        for (r, round) in rounds.into_iter().enumerate() {
            if round.is_empty() {
                return Err(Error::Structural(format!("round {} is empty", r + 1)));
            }
            if r > 0 {
                marks.push(comparators.len());
            }
            comparators.extend(round);
        }
        Self::with_marks(width, comparators, Some(marks))
    }

    pub(crate) fn with_marks(
        width: usize,
        comparators: Vec<Comparator>,
        round_marks: Option<Vec<usize>>,
    ) -> Result<Self> {
        if width == 0 {
            return Err(Error::Structural("network width must be at least 1".into()));
        }
        for c in &comparators {
            if c.max_line() >= width {
                return Err(Error::Structural(format!(
                    "index {} ≥ width {}",
                    c.max_line(),
                    width
                )));
            }
        }
        let mut net = Network {
            width,
            comparators,
            round_marks,
        };
        if let Some(marks) = &net.round_marks {
            let n = net.comparators.len();
            let mut prev = 0;
            for &m in marks {
                if m <= prev || m >= n {
                    return Err(Error::Structural(format!(
                        "invalid round mark {m} for {n} comparators"
                    )));
                }
                prev = m;
            }
            if let Some((round, line)) = net.first_round_conflict() {
                return Err(Error::Structural(format!(
                    "line {line} appears twice in round {}",
                    round + 1
                )));
            }
        }
        // A single round carries no boundary, so it is stored as unstructured.
        if net.round_marks.as_ref().is_some_and(Vec::is_empty) {
            net.round_marks = None;
        }
        Ok(net)
    }

    /// First (round index, line) pair where a line is reused inside a round.
    fn first_round_conflict(&self) -> Option<(usize, usize)> {
        let mut seen = vec![usize::MAX; self.width];
        for (r, round) in self.rounds().enumerate() {
            for c in round {
                for &i in c.lines() {
                    if seen[i] == r {
                        return Some((r, i));
                    }
                    seen[i] = r;
                }
            }
        }
        None
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Number of comparators.
    pub fn size(&self) -> usize {
        self.comparators.len()
    }

    /// Largest comparator size, 0 for the empty network.
    pub fn arity(&self) -> usize {
        self.comparators
            .iter()
            .map(Comparator::len)
            .max()
            .unwrap_or(0)
    }

    /// Checks that every comparator fits a declared arity `k`.
    pub fn check_arity(&self, k: usize) -> Result<()> {
        match self.comparators.iter().find(|c| c.len() > k) {
            Some(c) => Err(Error::Structural(format!(
                "comparator {:?} exceeds arity {k}",
                c.lines()
            ))),
            None => Ok(()),
        }
    }

    pub fn comparators(&self) -> &[Comparator] {
        &self.comparators
    }

    pub fn round_marks(&self) -> Option<&[usize]> {
        self.round_marks.as_deref()
    }

    /// Comparators grouped by round. Without round marks the whole network is
    /// a single group.
    pub fn rounds(&self) -> impl Iterator<Item = &[Comparator]> + '_ {
        let marks = self.round_marks.as_deref().unwrap_or(&[]);
        let bounds: Vec<usize> = std::iter::once(0)
            .chain(marks.iter().copied())
            .chain(std::iter::once(self.comparators.len()))
            .collect();
        (0..bounds.len() - 1)
            .map(move |r| &self.comparators[bounds[r]..bounds[r + 1]])
            .filter(|round| !round.is_empty())
    }

    pub fn round_count(&self) -> usize {
        match &self.round_marks {
            Some(m) => m.len() + 1,
            None => usize::from(!self.comparators.is_empty()),
        }
    }

    /// A new network with `extra` appended after the existing comparators.
    /// Round structure is dropped.
    pub fn extended(&self, extra: impl IntoIterator<Item = Comparator>) -> Result<Self> {
        let mut comparators = self.comparators.clone();
        comparators.extend(extra);
        Network::new(self.width, comparators)
    }

    pub fn apply_in_place<T: Ord + Clone>(&self, values: &mut [T]) -> Result<()> {
        if values.len() != self.width {
            return Err(Error::Structural(format!(
                "sequence length {} does not match network width {}",
                values.len(),
                self.width
            )));
        }
        for c in &self.comparators {
            c.apply_in_place(values)?;
        }
        Ok(())
    }

    pub fn apply<T: Ord + Clone>(&self, seq: &[T]) -> Result<Vec<T>> {
        let mut out = seq.to_vec();
        self.apply_in_place(&mut out)?;
        Ok(out)
    }

    /// Applies the network to a 0-1 input packed as bits (bit i = line i).
    /// Only valid for widths up to 64.
    pub(crate) fn bit_program(&self) -> BitProgram {
        BitProgram {
            steps: self
                .comparators
                .iter()
                .map(|c| (c.mask(), c.top_masks()))
                .collect(),
        }
    }
}

/// Precompiled form of a network acting on 0-1 inputs packed in a `u64`.
/// Sorting a window of 0-1 values just moves its ones to the window's top lines.
#[derive(Debug, Clone)]
pub(crate) struct BitProgram {
    steps: Vec<(u64, Vec<u64>)>,
}

impl BitProgram {
    #[inline]
    pub(crate) fn run(&self, mut x: u64) -> u64 {
        for (mask, tops) in &self.steps {
            let ones = (x & mask).count_ones() as usize;
            x = (x & !mask) | tops[ones];
        }
        x
    }
}

/// True when the packed 0-1 word of `width` bits is sorted ascending, i.e. all
/// ones sit on the highest lines.
#[inline]
pub(crate) fn bits_sorted(x: u64, width: usize) -> bool {
    if x == 0 {
        return true;
    }
    let full = if width == 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    };
    let low_zeros = (1u64 << x.trailing_zeros()) - 1;
    x == full & !low_zeros
}

/// Unpacks bit i of `x` into position i.
pub(crate) fn unpack_bits(x: u64, width: usize) -> Vec<i64> {
    (0..width).map(|i| ((x >> i) & 1) as i64).collect()
}

pub fn is_sorted<T: Ord>(seq: &[T]) -> bool {
    seq.windows(2).all(|w| w[0] <= w[1])
}
