mod common;

use std::collections::BTreeMap;

use arena_core::fixtures::fixture_map;
use arena_core::physics::Side;
use arena_core::scenarios::{
    run_integrated, series_outcome, shuffle_schedule, GameKind, IntegratedConfig, IntegratedError,
    Outcome, Reason,
};
use common::zero_sum;
use proptest::prelude::*;

fn kinds_subset() -> impl Strategy<Value = Vec<GameKind>> {
    (4usize..=6).prop_flat_map(|n| {
        Just(GameKind::ALL.to_vec())
            .prop_shuffle()
            .prop_map(move |v| v[..n].to_vec())
    })
}

fn outcome_of(code: u8) -> Outcome {
    match code % 3 {
        0 => Outcome::win(Side::A, Reason::GoalCrossed),
        1 => Outcome::win(Side::B, Reason::BorderTouched),
        _ => Outcome::draw(Reason::Timeout),
    }
}

proptest! {
    #[test]
    fn schedule_is_a_seeded_permutation(kinds in kinds_subset(), seed in any::<u64>()) {
        let cfg = IntegratedConfig::new(kinds.clone(), seed).unwrap();
        let order = shuffle_schedule(&cfg);
        let mut sorted = order.clone();
        sorted.sort();
        let mut expected = kinds;
        expected.sort();
        prop_assert_eq!(sorted, expected);
        prop_assert_eq!(shuffle_schedule(&cfg), order);
    }

    #[test]
    fn series_result_is_the_majority(codes in prop::collection::vec(0u8..3, 4..=6), seed in any::<u64>()) {
        let games: Vec<Outcome> = codes.iter().map(|c| outcome_of(*c)).collect();
        let a = codes.iter().filter(|c| **c == 0).count();
        let b = codes.iter().filter(|c| **c == 1).count();
        let o = zero_sum(&series_outcome(&games));
        prop_assert_eq!(o.reason, Reason::Majority);
        prop_assert_eq!(o.winner(), if a > b { Some(Side::A) } else if b > a { Some(Side::B) } else { None });

        let kinds = GameKind::ALL[..codes.len()].to_vec();
        let maps = kinds.iter().map(|k| (*k, fixture_map(*k))).collect();
        let cfg = IntegratedConfig::new(kinds, seed).unwrap();
        let mut next = games.iter();
        let mut seeds = Vec::new();
        let report = run_integrated(&cfg, &maps, seed, |kind, map, s| {
            assert_eq!(map.kind, kind);
            seeds.push(s);
            *next.next().unwrap()
        }).unwrap();
        prop_assert_eq!(report.outcome, o);
        prop_assert_eq!(report.games, games);
        prop_assert_eq!(report.schedule, shuffle_schedule(&cfg));
        seeds.dedup();
        prop_assert_eq!(seeds.len(), codes.len());
    }
}

#[test]
fn majority_examples() {
    let a = Outcome::win(Side::A, Reason::GoalCrossed);
    let b = Outcome::win(Side::B, Reason::GoalCrossed);
    assert_eq!(series_outcome(&[a, a, a, b]).winner(), Some(Side::A));
    assert_eq!(
        series_outcome(&[a, a, b, b]),
        Outcome::draw(Reason::Majority)
    );
    assert_eq!(
        series_outcome(&[a, b, a, b, a, b]),
        Outcome::draw(Reason::Majority)
    );
}

#[test]
fn invalid_configs_are_rejected() {
    assert_eq!(
        IntegratedConfig::new(GameKind::ALL[..3].to_vec(), 0),
        Err(IntegratedError::Length(3))
    );
    let dup = vec![
        GameKind::Running,
        GameKind::Running,
        GameKind::Curling,
        GameKind::Football,
    ];
    assert_eq!(
        IntegratedConfig::new(dup, 0),
        Err(IntegratedError::Duplicate(GameKind::Running))
    );
    let cfg = IntegratedConfig::new(GameKind::ALL[..4].to_vec(), 0).unwrap();
    let mut maps = BTreeMap::new();
    maps.insert(GameKind::Running, fixture_map(GameKind::Running));
    let err = run_integrated(&cfg, &maps, 0, |_, _, _| Outcome::draw(Reason::Timeout)).unwrap_err();
    assert!(matches!(err, IntegratedError::MissingMap(_)));
}
