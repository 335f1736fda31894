use knet::bounds::{comparison_bounds, is_sorted_scan, merge_insertion_sort, merge_insertion_term};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Lower bound by repeated doubling against n! in u128 (exact up to n = 33).
fn oracle_lower(n: u128) -> u64 {
    let fact: u128 = (1..=n).product();
    let mut t = 0;
    let mut p = 1u128;
    while p < fact {
        p *= 2;
        t += 1;
    }
    t
}

/// Smallest t with 2^t · 4 ≥ 3k, found by counting up.
fn oracle_term(k: u128) -> u64 {
    (0u32..).find(|&t| (4u128 << t) >= 3 * k).unwrap() as u64
}

#[test]
fn bounds_match_exact_oracle() {
    for n in 1..=33u64 {
        let r = comparison_bounds(n).unwrap();
        assert_eq!(r.lower, oracle_lower(n.into()), "lower at n={n}");
        let upper: u64 = (2..=u128::from(n)).map(oracle_term).sum();
        assert_eq!(r.upper, upper, "upper at n={n}");
        assert!(r.lower <= r.upper);
    }
    assert!(comparison_bounds(0).is_err());
}

#[test]
fn known_values() {
    let table = [
        (1, 0, 0),
        (2, 1, 1),
        (3, 3, 3),
        (4, 5, 5),
        (5, 7, 7),
        (12, 29, 30),
    ];
    for (n, lower, upper) in table {
        let r = comparison_bounds(n).unwrap();
        assert_eq!((r.lower, r.upper), (lower, upper), "n={n}");
    }
    assert_eq!(merge_insertion_term(2), 1);
    assert_eq!(merge_insertion_term(4), 2);
    assert_eq!(merge_insertion_term(6), 3);
    assert_eq!(merge_insertion_term(11), 4);
}

#[test]
fn wide_inputs_use_big_factorials() {
    let r = comparison_bounds(100).unwrap();
    assert_eq!(r.lower, 525);
    assert!(r.upper >= r.lower);
}

fn for_each_permutation(v: &mut Vec<u32>, i: usize, f: &mut impl FnMut(&[u32])) {
    if i == v.len() {
        f(v);
        return;
    }
    for j in i..v.len() {
        v.swap(i, j);
        for_each_permutation(v, i + 1, f);
        v.swap(i, j);
    }
}

#[test]
fn merge_insertion_worst_case_equals_upper_bound() {
    for n in 1..=8u32 {
        let upper = comparison_bounds(u64::from(n)).unwrap().upper;
        let mut worst = 0;
        let mut v: Vec<u32> = (0..n).collect();
        for_each_permutation(&mut v, 0, &mut |p| {
            let run = merge_insertion_sort(p);
            assert_eq!(run.input, p);
            assert!(is_sorted_scan(&run.output).0);
            worst = worst.max(run.comparisons);
        });
        assert_eq!(worst, upper, "n={n}");
    }
}

#[test]
fn merge_insertion_handles_duplicates_and_random_inputs() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for n in 0..=64 {
        let upper = if n == 0 {
            0
        } else {
            comparison_bounds(n as u64).unwrap().upper
        };
        for _ in 0..30 {
            let v: Vec<i8> = (0..n).map(|_| rng.gen_range(-3..3)).collect();
            let run = merge_insertion_sort(&v);
            let mut expect = v.clone();
            expect.sort();
            assert_eq!(run.output, expect);
            assert!(run.comparisons <= upper);
        }
    }
}

#[test]
fn sorted_scan_counts_until_first_descent() {
    assert_eq!(is_sorted_scan::<u8>(&[]), (true, 0));
    assert_eq!(is_sorted_scan(&[1, 2, 3]), (true, 2));
    assert_eq!(is_sorted_scan(&[1, 3, 2, 0]), (false, 2));
}
