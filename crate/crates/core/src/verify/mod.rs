//! Sorting verification by the 0-1 principle, a permutation-enumeration cross
//! check, and exhaustive searches for short window-pass schemes.
//!
//! 0-1 inputs are enumerated in lexicographic order of the tuple
//! `(line 0, line 1, …)`, i.e. as the integers `0..2^n` read with line 0 as
//! the most significant bit. A failing network reports the first failing input
//! in that order, so reports are the same no matter how the input space is
//! split across workers.

mod postulations;
mod search;

pub use postulations::{check_postulations, PostulationEntry, PostulationReport, Verdict};
pub use search::{search_min_passes, SearchMode, SearchResult, SearchSpec, Witness};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netcore::{bits_sorted, is_sorted, unpack_bits, Network};

/// Largest width [`zero_one_verify`] will enumerate exhaustively.
pub const ZERO_ONE_WIDTH_LIMIT: usize = 30;

/// Default width limit for [`permutation_verify`].
pub const PERMUTATION_WIDTH_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub input: Vec<i64>,
    pub output: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    valid: bool,
    inputs_tested: u64,
    counterexample: Option<Counterexample>,
}

impl VerificationReport {
    pub fn passed(inputs_tested: u64) -> Self {
        VerificationReport {
            valid: true,
            inputs_tested,
            counterexample: None,
        }
    }

    pub fn failed(inputs_tested: u64, counterexample: Counterexample) -> Self {
        VerificationReport {
            valid: false,
            inputs_tested,
            counterexample: Some(counterexample),
        }
    }

    pub fn valid(&self) -> bool {
        self.valid
    }

    pub fn inputs_tested(&self) -> u64 {
        self.inputs_tested
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        self.counterexample.as_ref()
    }
}

/// Runs the network on all `2^width` 0-1 inputs.
pub fn zero_one_verify(net: &Network) -> Result<VerificationReport> {
    let n = net.width();
    if n > ZERO_ONE_WIDTH_LIMIT {
        return Err(Error::Resource {
            msg: format!(
                "width {n} exceeds the exhaustive limit of {ZERO_ONE_WIDTH_LIMIT}; use sampling mode"
            ),
            progress: 0,
        });
    }
    let prog = net.bit_program();
    let total = 1u64 << n;
    // Packed words keep line i in bit i, so the enumeration index is reversed.
    let packed = |rank: u64| rank.reverse_bits() >> (64 - n as u32) & (total - 1);
    let first_bad = (0..total)
        .into_par_iter()
        .find_first(|&rank| !bits_sorted(prog.run(packed(rank)), n));
    Ok(match first_bad {
        None => VerificationReport::passed(total),
        Some(rank) => {
            let x = packed(rank);
            VerificationReport::failed(
                rank + 1,
                Counterexample {
                    input: unpack_bits(x, n),
                    output: unpack_bits(prog.run(x), n),
                },
            )
        }
    })
}

/// Runs the network on every permutation of `1..=width`, in lexicographic
/// order. Independent of the bit-packed engine behind [`zero_one_verify`].
pub fn permutation_verify(net: &Network, width_limit: usize) -> Result<VerificationReport> {
    let n = net.width();
    if n > width_limit {
        return Err(Error::Resource {
            msg: format!("width {n} exceeds the permutation limit of {width_limit}"),
            progress: 0,
        });
    }
    let mut perm: Vec<i64> = (1..=n as i64).collect();
    let mut tested = 0u64;
    loop {
        tested += 1;
        let out = net.apply(&perm)?;
        if !is_sorted(&out) {
            return Ok(VerificationReport::failed(
                tested,
                Counterexample {
                    input: perm,
                    output: out,
                },
            ));
        }
        if !next_permutation(&mut perm) {
            return Ok(VerificationReport::passed(tested));
        }
    }
}

/// Random 0-1 inputs for networks too wide to enumerate. A passing report
/// only means no counterexample turned up among `samples` inputs.
pub fn zero_one_sample(net: &Network, samples: u64, seed: u64) -> Result<VerificationReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut input = vec![0i64; net.width()];
    for t in 0..samples {
        input
            .iter_mut()
            .for_each(|v| *v = i64::from(rng.gen::<bool>()));
        let out = net.apply(&input)?;
        if !is_sorted(&out) {
            return Ok(VerificationReport::failed(
                t + 1,
                Counterexample { input, output: out },
            ));
        }
    }
    Ok(VerificationReport::passed(samples))
}

fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).unwrap();
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::triangle;
    use crate::netcore::Comparator;

    #[test]
    fn triangle_is_valid() {
        let r = zero_one_verify(&triangle(4, 2).unwrap()).unwrap();
        assert!(r.valid());
        assert_eq!(r.inputs_tested(), 16);
        assert!(r.counterexample().is_none());
        let p = permutation_verify(&triangle(4, 2).unwrap(), PERMUTATION_WIDTH_LIMIT).unwrap();
        assert!(p.valid());
        assert_eq!(p.inputs_tested(), 24);
    }

    #[test]
    fn single_pair_on_three_lines_fails() {
        let net = Network::new(3, vec![Comparator::pair(0, 1).unwrap()]).unwrap();
        let r = zero_one_verify(&net).unwrap();
        assert!(!r.valid());
        let cex = r.counterexample().unwrap();
        // (0,0,1) is sorted, (0,1,0) is the first failure.
        assert_eq!(cex.input, vec![0, 1, 0]);
        assert_eq!(cex.output, vec![0, 1, 0]);
        assert_eq!(r.inputs_tested(), 3);
    }

    #[test]
    fn empty_width_one_is_valid() {
        let r = zero_one_verify(&Network::identity(1).unwrap()).unwrap();
        assert!(r.valid());
        assert_eq!(r.inputs_tested(), 2);
    }

    #[test]
    fn identity_width_two_permutation_counterexample() {
        let r = permutation_verify(&Network::identity(2).unwrap(), 8).unwrap();
        assert!(!r.valid());
        assert_eq!(r.counterexample().unwrap().input, vec![2, 1]);
    }

    #[test]
    fn width_limits() {
        let wide = Network::identity(31).unwrap();
        assert!(matches!(
            zero_one_verify(&wide),
            Err(Error::Resource { .. })
        ));
        let nine = Network::identity(9).unwrap();
        assert!(matches!(
            permutation_verify(&nine, PERMUTATION_WIDTH_LIMIT),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn sampling_finds_obvious_failures() {
        let wide = triangle(40, 5).unwrap();
        assert!(zero_one_sample(&wide, 200, 7).unwrap().valid());
        let broken = Network::identity(40).unwrap();
        let r = zero_one_sample(&broken, 200, 7).unwrap();
        assert!(!r.valid());
        assert!(!is_sorted(&r.counterexample().unwrap().output));
    }

    #[test]
    fn permutations_in_order() {
        let mut v = vec![1, 2, 3];
        let mut seen = vec![v.clone()];
        while next_permutation(&mut v) {
            seen.push(v.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[1], vec![1, 3, 2]);
        assert_eq!(seen[5], vec![3, 2, 1]);
    }
}
