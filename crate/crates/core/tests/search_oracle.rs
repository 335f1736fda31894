//! Pass search checked against naive enumeration of pass sequences, each
//! verified from scratch with the 0-1 verifier.

use knet::verify::{search_min_passes, zero_one_verify, SearchMode, SearchSpec, Witness};
use knet::Error;

fn witness_of(mode: SearchMode, options: &[Vec<usize>], seq: &[usize]) -> Witness {
    match mode {
        SearchMode::Contiguous => Witness::Offsets(seq.iter().map(|&i| options[i][0]).collect()),
        SearchMode::ArbitrarySubsets => {
            Witness::Subsets(seq.iter().map(|&i| options[i].clone()).collect())
        }
    }
}

/// Every repeat-free sequence of option indices of length `len`, lexicographic.
fn sequences(m: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|s: Vec<usize>| {
                let last = s.last().copied();
                (0..m)
                    .filter(move |&o| last != Some(o))
                    .map(move |o| {
                        let mut t = s.clone();
                        t.push(o);
                        t
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    out
}

/// (min passes, first witness, sequences examined) by brute force.
fn naive(spec: &SearchSpec) -> (Option<usize>, Option<Witness>, u64) {
    let options = spec.options();
    let mut tested = 0;
    for len in 1..=spec.max_passes() {
        for seq in sequences(options.len(), len) {
            tested += 1;
            let w = witness_of(spec.mode(), &options, &seq);
            let net = w.to_network(spec.n(), spec.window()).unwrap();
            if zero_one_verify(&net).unwrap().valid() {
                return (Some(len), Some(w), tested);
            }
        }
    }
    (None, None, tested)
}

fn check(n: usize, window: usize, max: usize, mode: SearchMode) {
    let spec = SearchSpec::new(n, window, max, mode).unwrap();
    let r = search_min_passes(&spec, u64::MAX).unwrap();
    let (min, witness, tested) = naive(&spec);
    assert_eq!(r.min_passes, min, "n={n} window={window} {mode}");
    assert_eq!(r.found, min.is_some());
    assert_eq!(r.witness, witness, "n={n} window={window} {mode}");
    assert_eq!(r.sequences_tested, tested, "n={n} window={window} {mode}");
}

#[test]
fn contiguous_matches_brute_force() {
    for (n, window, max) in [
        (3, 2, 4),
        (4, 2, 6),
        (4, 3, 4),
        (5, 3, 5),
        (5, 4, 4),
        (6, 4, 3),
        (6, 3, 6),
        (7, 5, 4),
        (8, 4, 5),
        (9, 6, 3),
        (12, 7, 4),
    ] {
        check(n, window, max, SearchMode::Contiguous);
    }
}

#[test]
fn subsets_match_brute_force() {
    for (n, window, max) in [(3, 2, 3), (4, 2, 5), (4, 3, 3), (5, 3, 3), (6, 4, 3)] {
        check(n, window, max, SearchMode::ArbitrarySubsets);
    }
}

#[test]
fn full_window_sorts_in_one_pass() {
    for mode in [SearchMode::Contiguous, SearchMode::ArbitrarySubsets] {
        let spec = SearchSpec::new(6, 6, 2, mode).unwrap();
        let r = search_min_passes(&spec, u64::MAX).unwrap();
        assert_eq!(r.min_passes, Some(1));
        assert_eq!(r.sequences_tested, 1);
    }
}

#[test]
fn budget_exhaustion_reports_progress() {
    let spec = SearchSpec::new(8, 4, 5, SearchMode::ArbitrarySubsets).unwrap();
    match search_min_passes(&spec, 10_000_000) {
        Err(Error::Resource { progress, .. }) => assert!(progress > 0),
        other => panic!("expected a resource error, got {other:?}"),
    }
}
