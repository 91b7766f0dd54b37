mod common;

use arena_core::fixtures::{all_fixture_maps, fixture_map, fixture_text};
use arena_core::geom::Vec2;
use arena_core::physics::{Action, BodyKind, DiscBody, Side};
use arena_core::scenarios::{
    agent_id, init_game, parse_map, step_game, GameError, GameEvent, GameKind, GameResult,
    GameState, MapErrorKind, Outcome, Phase, Reason,
};
use common::zero_sum;
use proptest::prelude::*;

fn play_out(
    mut s: GameState,
    mut act: impl FnMut(&GameState) -> (Action, Action),
) -> (GameState, Vec<GameEvent>) {
    let mut log = Vec::new();
    while !s.is_terminal() {
        let (a, b) = act(&s);
        let (next, mut events) = step_game(&s, a, b).unwrap();
        log.append(&mut events);
        s = next;
    }
    zero_sum(&s.outcome.unwrap());
    (s, log)
}

#[test]
fn curling_starts_with_a_single_rock_for_a() {
    let s = init_game(GameKind::Curling, &fixture_map(GameKind::Curling), 0).unwrap();
    let t = s.turn().unwrap();
    assert_eq!(t.turn_side, Side::A);
    assert_eq!(t.throws_remaining, [3, 3]);
    assert_eq!(s.world.bodies.len(), 1);
    assert_eq!(s.world.bodies[0].kind, BodyKind::Rock);
    assert!(s.is_controllable(Side::A));
    assert!(!s.is_controllable(Side::B));
}

#[test]
fn curling_ignores_the_idle_side() {
    let map = fixture_map(GameKind::Curling);
    let mut s = init_game(GameKind::Curling, &map, 4).unwrap();
    for _ in 0..200 {
        let a = Action::new(50.0, 0.05);
        let busy_action = Action::new(100.0, -0.5);
        let (zero, busy) = match s.turn().unwrap().turn_side {
            Side::A => (
                step_game(&s, a, Action::ZERO),
                step_game(&s, a, busy_action),
            ),
            Side::B => (
                step_game(&s, Action::ZERO, a),
                step_game(&s, busy_action, a),
            ),
        };
        let (zero, busy) = (zero.unwrap().0, busy.unwrap().0);
        assert_eq!(zero.world, busy.world);
        assert_eq!(zero.phase, busy.phase);
        s = zero;
    }
}

#[test]
fn curling_plays_six_rocks_and_scores_nearest() {
    let map = fixture_map(GameKind::Curling);
    let s = init_game(GameKind::Curling, &map, 11).unwrap();
    let push = |s: &GameState| {
        let t = s.turn().unwrap();
        let a = if t.turn_step < 20 {
            Action::new(100.0, 0.0)
        } else {
            Action::ZERO
        };
        match t.turn_side {
            Side::A => (a, Action::ZERO),
            Side::B => (Action::ZERO, a),
        }
    };
    let (end, log) = play_out(s, push);
    let started = log
        .iter()
        .filter(|e| matches!(e, GameEvent::TurnStarted { .. }))
        .count();
    let released = log
        .iter()
        .filter(|e| matches!(e, GameEvent::Released { .. }))
        .count();
    assert_eq!(started, 5);
    assert_eq!(released, 6);
    assert_eq!(end.outcome.unwrap().reason, Reason::NearestRock);
    assert!(end.turn().unwrap().finished);
    assert_eq!(end.turn().unwrap().throws_remaining, [0, 0]);
}

#[test]
fn curling_energy_carries_over_between_rocks() {
    let map = fixture_map(GameKind::Curling);
    let mut s = init_game(GameKind::Curling, &map, 2).unwrap();
    let mut spent = None;
    while s.turn().unwrap().throws_remaining[0] == 3 {
        let a = if s.turn().unwrap().turn_side == Side::A {
            Action::new(100.0, 0.0)
        } else {
            Action::ZERO
        };
        s = step_game(&s, a, Action::ZERO).unwrap().0;
        if spent.is_none() && s.turn().unwrap().release_done {
            spent = Some(s.turn().unwrap().energy_pool[0]);
        }
    }
    let pool = spent.expect("first rock was released");
    assert!(pool < 1000.0);
    // B throws next; once A is back on turn its rock starts from the pool.
    while s.turn().unwrap().turn_side != Side::A {
        s = step_game(&s, Action::ZERO, Action::ZERO).unwrap().0;
    }
    let rock = s
        .world
        .body(s.turn().unwrap().active_rock.unwrap())
        .unwrap();
    assert_eq!(rock.energy, pool);
    assert_eq!(s.energy_fraction(Side::A), pool / 1000.0);
}

#[test]
fn unreleased_rocks_are_removed() {
    let map = fixture_map(GameKind::Curling);
    let s = init_game(GameKind::Curling, &map, 2).unwrap();
    let first = s.turn().unwrap().active_rock.unwrap();
    let mut s = s;
    for _ in 0..150 {
        s = step_game(&s, Action::ZERO, Action::ZERO).unwrap().0;
    }
    assert!(s.world.body(first).is_none());
    let t = s.turn().unwrap();
    assert_eq!(t.turn_side, Side::B);
    assert_eq!(t.throws_remaining, [2, 3]);
}

#[test]
fn curling_nearest_rock_example() {
    let map = fixture_map(GameKind::Curling);
    let mut s = init_game(GameKind::Curling, &map, 0).unwrap();
    let center = map.center_point().unwrap();
    s.world.bodies.clear();
    let rock = |id, side, offset: Vec2| {
        DiscBody::object(id, BodyKind::Rock, center + offset, 15.0, 1.0, Some(side))
    };
    s.world.insert_body(rock(40, Side::A, Vec2::new(1.0, 0.0)));
    s.world
        .insert_body(rock(41, Side::B, Vec2::new(0.0, -32.0)));
    s.world
        .insert_body(rock(42, Side::B, Vec2::new(-31.0, 2.0)));
    if let Phase::Turns(t) = &mut s.phase {
        t.active_rock = None;
        t.throws_remaining = [0, 0];
        t.finished = true;
    }
    let (end, _) = step_game(&s, Action::ZERO, Action::ZERO).unwrap();
    assert_eq!(
        end.outcome,
        Some(Outcome::win(Side::A, Reason::NearestRock))
    );
}

#[test]
fn billiard_starts_with_a_to_move() {
    let map = fixture_map(GameKind::Billiard);
    let s = init_game(GameKind::Billiard, &map, 0).unwrap();
    assert!(s.is_controllable(Side::A));
    assert!(!s.is_controllable(Side::B));
    assert_eq!(s.turn().unwrap().throws_remaining, [6, 6]);
    let balls = s
        .world
        .bodies
        .iter()
        .filter(|b| b.kind == BodyKind::Billiard)
        .count();
    assert_eq!(balls, 6);
}

#[test]
fn billiard_turns_alternate_and_end_by_potted_count() {
    let map = fixture_map(GameKind::Billiard);
    let s = init_game(GameKind::Billiard, &map, 5).unwrap();
    let (end, log) = play_out(s, |s| {
        let t = s.turn().unwrap();
        let a = if t.turn_step < 15 {
            Action::new(100.0, 0.1)
        } else {
            Action::ZERO
        };
        (a, a)
    });
    let sides: Vec<Side> = log
        .iter()
        .filter_map(|e| match e {
            GameEvent::TurnStarted { side, .. } => Some(*side),
            _ => None,
        })
        .collect();
    assert!(sides.windows(2).all(|w| w[0] != w[1]));
    let o = end.outcome.unwrap();
    assert_eq!(o.reason, Reason::MostPotted);
    let expected = match end.potted[0].cmp(&end.potted[1]) {
        std::cmp::Ordering::Greater => GameResult::AWins,
        std::cmp::Ordering::Less => GameResult::BWins,
        std::cmp::Ordering::Equal => GameResult::Draw,
    };
    assert_eq!(o.result, expected);
}

#[test]
fn billiard_ball_in_pocket_is_credited_to_its_owner() {
    let map = fixture_map(GameKind::Billiard);
    let mut s = init_game(GameKind::Billiard, &map, 0).unwrap();
    let id = s
        .world
        .bodies
        .iter()
        .find(|b| b.kind == BodyKind::Billiard && b.owner == Some(Side::B))
        .unwrap()
        .id;
    let ball = s.world.body_mut(id).unwrap();
    ball.position = Vec2::new(120.0, 220.0);
    ball.velocity = Vec2::new(400.0, 400.0);
    let (next, events) = step_game(&s, Action::ZERO, Action::ZERO).unwrap();
    assert!(events
        .iter()
        .any(|e| matches!(e, GameEvent::Potted { owner: Side::B, .. })));
    assert_eq!(next.potted, [0, 1]);
    assert!(next.world.body(id).is_none());
}

#[test]
fn running_tie_is_a_draw() {
    let mut map = fixture_map(GameKind::Running);
    map.params.heading_jitter = 0.0;
    let s = init_game(GameKind::Running, &map, 0).unwrap();
    let (end, _) = play_out(s, |_| (Action::new(100.0, 0.0), Action::new(100.0, 0.0)));
    assert_eq!(end.outcome, Some(Outcome::draw(Reason::GoalCrossed)));
}

#[test]
fn wrestling_border_touch_loses() {
    let map = fixture_map(GameKind::Wrestling);
    let mut s = init_game(GameKind::Wrestling, &map, 0).unwrap();
    let a = s.world.body_mut(agent_id(Side::A)).unwrap();
    a.position = Vec2::new(-140.0, 0.0);
    a.velocity = Vec2::new(-300.0, 0.0);
    let (end, _) = step_game(&s, Action::ZERO, Action::ZERO).unwrap();
    assert_eq!(
        end.outcome,
        Some(Outcome::win(Side::B, Reason::BorderTouched))
    );
}

#[test]
fn goals_award_the_other_side() {
    for kind in [GameKind::TableHockey, GameKind::Football] {
        let map = fixture_map(kind);
        for (dir, winner) in [(-1.0, Side::B), (1.0, Side::A)] {
            let mut s = init_game(kind, &map, 0).unwrap();
            let ball = s
                .world
                .bodies
                .iter_mut()
                .find(|b| !b.kind.is_agent())
                .unwrap();
            let goal_y = if kind == GameKind::Football {
                270.0
            } else {
                220.0
            };
            ball.position = Vec2::new(0.0, dir * (goal_y - 20.0));
            ball.velocity = Vec2::new(0.0, dir * 600.0);
            let (end, _) = step_game(&s, Action::ZERO, Action::ZERO).unwrap();
            assert_eq!(
                end.outcome,
                Some(Outcome::win(winner, Reason::GoalCrossed)),
                "{kind}"
            );
        }
    }
}

#[test]
fn hockey_agent_cannot_cross_the_midline() {
    let map = fixture_map(GameKind::TableHockey);
    let mut s = init_game(GameKind::TableHockey, &map, 0).unwrap();
    s.world.body_mut(agent_id(Side::A)).unwrap().position = Vec2::new(100.0, -100.0);
    for _ in 0..100 {
        s = step_game(&s, Action::new(100.0, 0.0), Action::ZERO)
            .unwrap()
            .0;
        let a = s.world.body(agent_id(Side::A)).unwrap();
        assert!(a.position.y + a.radius <= 1e-6, "agent at {:?}", a.position);
        if s.is_terminal() {
            break;
        }
    }
}

#[test]
fn terminal_states_refuse_to_step() {
    let mut map = fixture_map(GameKind::Running);
    map.limits.max_steps = 1;
    let s = init_game(GameKind::Running, &map, 0).unwrap();
    let (end, _) = step_game(&s, Action::ZERO, Action::ZERO).unwrap();
    assert_eq!(
        zero_sum(&end.outcome.unwrap()),
        Outcome::draw(Reason::Timeout)
    );
    assert!(matches!(
        step_game(&end, Action::ZERO, Action::ZERO),
        Err(GameError::Terminal)
    ));
}

#[test]
fn kind_mismatch_is_rejected() {
    let map = fixture_map(GameKind::Football);
    assert!(matches!(
        init_game(GameKind::Curling, &map, 0),
        Err(GameError::KindMismatch { .. })
    ));
}

#[test]
fn mirrored_fixtures_are_valid_maps() {
    for map in all_fixture_maps() {
        let m = map.mirrored();
        let reparsed =
            parse_map(&m.to_json().to_string()).unwrap_or_else(|e| panic!("{}: {e:?}", map.name));
        assert_eq!(reparsed.checksum, m.checksum);
        let back = m.mirrored();
        assert_eq!(
            (&back.shapes, &back.spawns, &back.objects),
            (&map.shapes, &map.spawns, &map.objects)
        );
        assert_eq!(back.params, map.params);
    }
}

fn with_shapes_removed(
    kind: GameKind,
    pred: impl Fn(&serde_json::Value) -> bool,
) -> serde_json::Value {
    let mut doc: serde_json::Value = serde_json::from_str(fixture_text(kind)).unwrap();
    doc["shapes"].as_array_mut().unwrap().retain(|s| !pred(s));
    doc
}

#[test]
fn required_elements_are_enforced() {
    let cases = [
        (GameKind::Running, "finish"),
        (GameKind::Wrestling, "border"),
        (GameKind::TableHockey, "goal_a"),
        (GameKind::Football, "goal_b"),
        (GameKind::Curling, "release"),
        (GameKind::Billiard, "pocket"),
    ];
    for (kind, tag) in cases {
        let doc = with_shapes_removed(kind, |s| s["tag"] == tag);
        let errs = parse_map(&doc.to_string()).unwrap_err();
        assert!(
            errs.iter().any(|e| e.kind == MapErrorKind::MissingElement),
            "{kind}: {errs:?}"
        );
    }
    let mut doc: serde_json::Value =
        serde_json::from_str(fixture_text(GameKind::TableHockey)).unwrap();
    doc["objects"]
        .as_array_mut()
        .unwrap()
        .retain(|o| o["kind"] != "midline");
    let errs = parse_map(&doc.to_string()).unwrap_err();
    assert!(errs.iter().any(|e| e.kind == MapErrorKind::MissingElement));
}

#[test]
fn color_must_match_material() {
    let mut doc: serde_json::Value = serde_json::from_str(fixture_text(GameKind::Running)).unwrap();
    doc["shapes"][0]["color"] = 1.into();
    assert!(parse_map(&doc.to_string()).is_err());
    doc["shapes"][0]["color"] = 42.into();
    let errs = parse_map(&doc.to_string()).unwrap_err();
    assert!(errs.iter().any(|e| e.kind == MapErrorKind::UnknownColor));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn every_episode_ends_zero_sum(kind_index in 0usize..6, seed in any::<u64>(), fa in -100.0f64..100.0, fb in -100.0f64..100.0, sa in -0.5f64..0.5, sb in -0.5f64..0.5) {
        let kind = GameKind::ALL[kind_index];
        let s = init_game(kind, &fixture_map(kind), seed).unwrap();
        let mut steps = 0;
        let (end, _) = play_out(s, |_| {
            steps += 1;
            (Action::new(fa, sa), Action::new(fb, sb))
        });
        prop_assert!(end.step <= end.map.limits.max_steps);
        prop_assert_eq!(end.step, steps);
    }
}
