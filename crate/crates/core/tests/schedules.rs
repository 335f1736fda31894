use knet::netcore::is_sorted;
use knet::parallel::{
    apply_schedule, parallel_merge_sort_schedule, schedule_stage_table, valley_merge_schedule,
    MergeSpec, RoundSchedule, StageRow,
};
use knet::verify::zero_one_verify;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rounds_disjoint(s: &RoundSchedule) -> bool {
    s.rounds().iter().all(|round| {
        let mut seen = vec![false; s.width()];
        round.iter().all(|&(a, b)| {
            let fresh = a < b && !seen[a] && !seen[b];
            seen[a] = true;
            seen[b] = true;
            fresh
        })
    })
}

#[test]
fn merge_sort_sorts_every_width_up_to_sixteen() {
    for n in 1..=16 {
        let s = parallel_merge_sort_schedule(n).unwrap();
        assert!(rounds_disjoint(&s), "n={n}");
        let t = (usize::BITS - (n.max(1) - 1).leading_zeros()) as usize;
        assert!(
            s.round_count() <= t * (t + 1) / 2,
            "n={n}: {} rounds",
            s.round_count()
        );
        assert!(zero_one_verify(&s.to_network()).unwrap().valid(), "n={n}");
    }
}

#[test]
fn merge_sort_sorts_random_permutations() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [17, 31, 64, 100, 255, 1000] {
        let s = parallel_merge_sort_schedule(n).unwrap();
        assert!(rounds_disjoint(&s));
        for _ in 0..20 {
            let mut v: Vec<usize> = (0..n).collect();
            v.shuffle(&mut rng);
            assert!(is_sorted(&apply_schedule(&v, &s).unwrap()), "n={n}");
        }
    }
}

#[test]
fn stage_table_for_eight() {
    let t = schedule_stage_table(8).unwrap();
    let rows: Vec<_> = t
        .rows
        .iter()
        .map(|r| (r.run_length, r.run_count, r.rounds))
        .collect();
    assert_eq!(rows, vec![(1, 8, 0), (2, 4, 1), (4, 2, 2), (8, 1, 3)]);
    assert_eq!(t.total_rounds, 6);
    assert!(schedule_stage_table(12).is_err());
}

#[test]
fn stage_rounds_grow_by_one() {
    for k in 1..=10 {
        let t = schedule_stage_table(1 << k).unwrap();
        assert_eq!(t.rows.len(), k + 1);
        for (j, row) in t.rows.iter().enumerate() {
            assert_eq!(
                *row,
                StageRow {
                    run_length: 1 << j,
                    run_count: 1 << (k - j),
                    rounds: j
                }
            );
        }
    }
}

#[test]
fn valley_merge_sorts_valleys_of_distinct_keys() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for a in 1..=20 {
        for b in a..=20 {
            let s = valley_merge_schedule(&MergeSpec::new(a, b).unwrap());
            assert!(rounds_disjoint(&s));
            for _ in 0..5 {
                let mut keys: Vec<u32> = (0..(a + b) as u32).collect();
                keys.shuffle(&mut rng);
                let (left, right) = keys.split_at_mut(a);
                left.sort_by(|x, y| y.cmp(x));
                right.sort();
                assert!(is_sorted(&s.apply(&keys).unwrap()), "a={a} b={b}");
            }
        }
    }
}

#[test]
fn placed_valley_merge_leaves_other_lines_alone() {
    let spec = MergeSpec::placed(2, 3, 1, 8).unwrap();
    let s = valley_merge_schedule(&spec);
    let out = s.apply(&[9, 5, 4, 1, 2, 6, 0, 7]).unwrap();
    assert_eq!(out, vec![9, 1, 2, 4, 5, 6, 0, 7]);
    assert!(MergeSpec::placed(2, 3, 4, 8).is_err());
    assert!(MergeSpec::new(3, 2).is_err());
    assert!(MergeSpec::new(0, 2).is_err());
}

#[test]
fn schedule_validation() {
    assert!(RoundSchedule::new(4, vec![vec![(0, 1), (1, 2)]]).is_err());
    assert!(RoundSchedule::new(4, vec![vec![(0, 4)]]).is_err());
    assert!(RoundSchedule::new(4, vec![vec![(2, 1)]]).is_err());
    assert!(RoundSchedule::new(4, vec![vec![]]).is_err());
    let s = RoundSchedule::new(4, vec![vec![(0, 1), (2, 3)], vec![(1, 2)]]).unwrap();
    assert_eq!(s.apply(&[2, 1, 4, 3]).unwrap(), vec![1, 2, 3, 4]);
    assert!(parallel_merge_sort_schedule(0).is_err());
}
