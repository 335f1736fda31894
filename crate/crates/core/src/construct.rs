//! Generators for the k-sorter network families: the triangle scheme and the
//! window-pass (stooge) schemes.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netcore::{Comparator, Network};

/// Parameters of a triangle scheme: `n` lines, comparators of at most `k` lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TriangleSpec {
    n: usize,
    k: usize,
}

impl TriangleSpec {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if k < 2 || k > n {
            return Err(Error::Parameter(format!(
                "triangle scheme needs 2 ≤ k ≤ n, got n={n} k={k}"
            )));
        }
        Ok(TriangleSpec { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Windows of the chain that drives the maximum of lines `[0, p)` to line
    /// `p - 1`. Windows start every `k - 1` lines so neighbours share exactly
    /// one line; the last one is cut short at `p`.
    fn chain(&self, p: usize) -> impl Iterator<Item = (usize, usize)> {
        let k = self.k;
        (0..p - 1)
            .step_by(k - 1)
            .map(move |start| (start, (start + k).min(p) - start))
    }

    pub fn build(&self) -> Network {
        let mut comparators = Vec::new();
        for p in (self.k + 1..=self.n).rev() {
            for (start, len) in self.chain(p) {
                comparators.push(Comparator::window(start, len).expect("chain window ≥ 2"));
            }
        }
        comparators.push(Comparator::window(0, self.k).expect("k ≥ 2"));
        Network::new(self.n, comparators).expect("windows lie inside the width")
    }

    /// Σ_{p=k}^{n} ⌈(p−1)/(k−1)⌉, the size of [`TriangleSpec::build`].
    pub fn size(&self) -> usize {
        (self.k..=self.n)
            .map(|p| (p - 1).div_ceil(self.k - 1))
            .sum()
    }
}

/// The triangle (n, k) scheme. For every prefix length p = n, n−1, …, k+1 a
/// chain of overlapping k-sorters moves the largest key of lines `[0, p)` to
/// line `p − 1`; one final k-sorter on `[0, k)` finishes.
pub fn triangle(n: usize, k: usize) -> Result<Network> {
    Ok(TriangleSpec::new(n, k)?.build())
}

/// Closed-form size `(n(n−1) − (k−1)(k−2)) / (2(k−1))`, which drops the
/// ceilings of the per-stage chain lengths. Exact at k = 2.
pub fn triangle_size_formula(n: usize, k: usize) -> Result<Ratio<u64>> {
    let spec = TriangleSpec::new(n, k)?;
    let (n, k) = (spec.n as u64, spec.k as u64);
    Ok(Ratio::new(n * (n - 1) - (k - 1) * (k - 2), 2 * (k - 1)))
}

/// A sequence of sorts over contiguous windows `[o, o + window)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassScheme {
    n: usize,
    window: usize,
    offsets: Vec<usize>,
}

impl PassScheme {
    pub fn new(n: usize, window: usize, offsets: Vec<usize>) -> Result<Self> {
        if window < 2 || window > n {
            return Err(Error::Parameter(format!(
                "window must satisfy 2 ≤ window ≤ n, got window={window} n={n}"
            )));
        }
        if let Some(o) = offsets.iter().find(|&&o| o > n - window) {
            return Err(Error::Parameter(format!(
                "offset {o} exceeds n − window = {}",
                n - window
            )));
        }
        Ok(PassScheme { n, window, offsets })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn offsets(&self) -> &[usize] {
        &self.offsets
    }

    /// One comparator per offset, in offset order.
    pub fn to_network(&self) -> Network {
        let comparators = self
            .offsets
            .iter()
            .map(|&o| Comparator::window(o, self.window).expect("window ≥ 2"))
            .collect();
        Network::new(self.n, comparators).expect("offsets validated")
    }
}

pub fn pass_scheme_to_network(scheme: &PassScheme) -> Network {
    scheme.to_network()
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum StoogeOrder {
    /// First two-thirds, last two-thirds, first two-thirds.
    #[default]
    FirstLastFirst,
    /// Last two-thirds, first two-thirds, last two-thirds.
    LastFirstLast,
}

/// Three passes of window 2n/3.
pub fn stooge_scheme(n: usize) -> Result<PassScheme> {
    stooge_scheme_with_order(n, StoogeOrder::FirstLastFirst)
}

pub fn stooge_scheme_with_order(n: usize, order: StoogeOrder) -> Result<PassScheme> {
    if n < 3 || !n.is_multiple_of(3) {
        return Err(Error::Parameter(format!(
            "stooge scheme needs n divisible by 3 and n ≥ 3, got {n}"
        )));
    }
    let third = n / 3;
    let offsets = match order {
        StoogeOrder::FirstLastFirst => vec![0, third, 0],
        StoogeOrder::LastFirstLast => vec![third, 0, third],
    };
    PassScheme::new(n, 2 * third, offsets)
}
