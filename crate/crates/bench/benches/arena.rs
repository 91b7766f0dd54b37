use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use arena_core::agent::{run_episode, EpisodeOptions, RandomPolicy, Seat};
use arena_core::fixtures::fixture_map;
use arena_core::observation::{ColorTable, VisionParams};
use arena_core::scenarios::{init_game, step_game, GameKind, GameState};
use arena_core::tournament::{initial_standings, swiss_pair, PairHistory, PlayerEntry};
use arena_core::{Action, Side};

fn warmed_up(kind: GameKind, steps: u32) -> GameState {
    let map = fixture_map(kind);
    let mut state = init_game(kind, &map, 1).unwrap();
    let push = Action {
        force: 60.0,
        steer: 0.2,
    };
    for _ in 0..steps {
        if state.is_terminal() {
            break;
        }
        state = step_game(&state, push, push).unwrap().0;
    }
    state
}

fn physics(c: &mut Criterion) {
    let mut g = c.benchmark_group("step_game");
    for kind in [GameKind::Football, GameKind::Billiard, GameKind::Curling] {
        let state = warmed_up(kind, 40);
        let a = Action {
            force: 80.0,
            steer: -0.1,
        };
        g.bench_function(kind.to_string(), |b| {
            b.iter(|| step_game(black_box(&state), a, a).unwrap())
        });
    }
    g.finish();
}

fn observation(c: &mut Criterion) {
    let state = warmed_up(GameKind::Football, 40);
    let vision = VisionParams::default();
    let colors = ColorTable::default();
    c.bench_function("observe football", |b| {
        b.iter(|| state.observe(black_box(Side::A), &vision, &colors))
    });
}

fn pairing(c: &mut Criterion) {
    let mut g = c.benchmark_group("swiss_pair");
    for n in [8usize, 32, 128] {
        let players: Vec<PlayerEntry> = (0..n)
            .map(|i| PlayerEntry {
                id: format!("p{i:03}"),
                name: format!("P{i}"),
                agent: "noop".into(),
                seed_rank: i as u32 + 1,
            })
            .collect();
        let standings = initial_standings(&players);
        let mut history = PairHistory::default();
        for i in (0..n - 1).step_by(2) {
            history.record(&players[i].id, &players[i + 1].id);
        }
        g.bench_function(n.to_string(), |b| {
            b.iter(|| swiss_pair(black_box(&standings), &history, 1).unwrap())
        });
    }
    g.finish();
}

fn episodes(c: &mut Criterion) {
    let mut g = c.benchmark_group("episode");
    g.sample_size(10);
    for kind in [GameKind::Running, GameKind::Football] {
        let map = fixture_map(kind);
        g.bench_function(kind.to_string(), |b| {
            b.iter_batched(
                || {
                    (
                        Seat::policy(RandomPolicy::new(1)),
                        Seat::policy(RandomPolicy::new(2)),
                    )
                },
                |(mut a, mut s)| {
                    run_episode(kind, &map, [&mut a, &mut s], 5, &EpisodeOptions::default())
                        .unwrap()
                },
                BatchSize::SmallInput,
            )
        });
    }
    g.finish();
}

criterion_group!(benches, physics, observation, pairing, episodes);
criterion_main!(benches);
