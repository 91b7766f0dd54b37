mod common;

use std::collections::BTreeMap;
use std::time::Duration;

use arena_core::agent::{
    decode_message, parse_replay, run_episode, run_series, verify_replay, Agent, AgentFault,
    AgentSpec, EpisodeOptions, EpisodeRecord, Message, Noop, RandomPolicy, ReplayError,
    ScriptedForward, Seat,
};
use arena_core::fixtures::fixture_map;
use arena_core::physics::Side;
use arena_core::scenarios::{
    series_outcome, EpisodeLimits, GameKind, IntegratedConfig, Outcome, Reason,
};
use common::zero_sum;

const SH_FORWARD: &str = r#"cmd:while read -r line; do case "$line" in *'"type":"hello"'*) echo '{"type":"ready","name":"sh-forward"}';; *'"type":"observe"'*) echo '{"type":"act","force":100.0,"steer":0.0}';; esac; done"#;
const SH_GARBAGE: &str = r#"cmd:read -r line; echo '{"type":"ready","name":"junk"}'; while read -r line; do echo garbage; done"#;
const SH_SLOW: &str = r#"cmd:while read -r line; do case "$line" in *'"type":"hello"'*) echo '{"type":"ready","name":"slow"}';; *'"type":"observe"'*) sleep 0.3; echo '{"type":"act","force":0.0,"steer":0.0}';; esac; done"#;
const SH_QUITTER: &str = r#"cmd:read -r l; echo '{"type":"ready","name":"quitter"}'; read -r l; read -r l; echo '{"type":"act","force":0.0,"steer":0.0}'; exit 0"#;

fn spec(s: &str) -> AgentSpec {
    s.parse().unwrap()
}

fn episode(kind: GameKind, a: &mut Seat, b: &mut Seat, seed: u64) -> EpisodeRecord {
    let r = run_episode(
        kind,
        &fixture_map(kind),
        [a, b],
        seed,
        &EpisodeOptions::default(),
    )
    .unwrap();
    zero_sum(&r.outcome);
    r
}

/// In-process agent that answers every observation with an unparseable line.
struct Garbage {
    pending: Vec<Message>,
    replies: usize,
}

impl Agent for Garbage {
    fn label(&self) -> String {
        "garbage".into()
    }

    fn send(&mut self, msg: &Message) -> Result<(), AgentFault> {
        if let Message::Hello { .. } = msg {
            self.pending.push(Message::Ready {
                name: "garbage".into(),
            });
        }
        if let Message::Observe { .. } = msg {
            self.replies += 1;
        }
        Ok(())
    }

    fn recv(&mut self, _deadline: Option<Duration>) -> Result<Message, AgentFault> {
        if let Some(m) = self.pending.pop() {
            return Ok(m);
        }
        Ok(decode_message("garbage")?)
    }
}

#[test]
fn noop_vs_noop_times_out_as_a_draw() {
    let r = episode(
        GameKind::Running,
        &mut Seat::policy(Noop),
        &mut Seat::policy(Noop),
        0,
    );
    assert_eq!(r.outcome, Outcome::draw(Reason::Timeout));
    assert_eq!(r.step_count(), 500);
    assert_eq!(r.violation_counts(), [0, 0]);
}

#[test]
fn forward_beats_noop_from_either_side() {
    let r = episode(
        GameKind::Running,
        &mut Seat::policy(ScriptedForward::default()),
        &mut Seat::policy(Noop),
        3,
    );
    assert_eq!(r.outcome, Outcome::win(Side::A, Reason::GoalCrossed));
    let r = episode(
        GameKind::Running,
        &mut Seat::policy(Noop),
        &mut Seat::policy(ScriptedForward::default()),
        3,
    );
    assert_eq!(r.outcome, Outcome::win(Side::B, Reason::GoalCrossed));
}

#[test]
fn garbage_forfeits_after_three_violations() {
    let mut bad = Seat::new(Box::new(Garbage {
        pending: Vec::new(),
        replies: 0,
    }));
    let r = episode(GameKind::Running, &mut Seat::policy(Noop), &mut bad, 1);
    assert_eq!(r.outcome, Outcome::win(Side::A, Reason::Forfeit));
    // Two violating steps are played; the third violation ends the episode.
    assert_eq!(r.step_count(), 2);
    assert_eq!(r.violation_counts(), [0, 2]);
    assert!(r
        .steps
        .iter()
        .all(|s| s.violations[1].as_deref() == Some("syntax")));
    assert!(r
        .steps
        .iter()
        .all(|s| s.actions[1] == arena_core::physics::Action::ZERO));
}

#[test]
fn external_agent_plays_without_violations() {
    let mut a = spec(SH_FORWARD).seat(Some(Duration::from_millis(100)));
    let r = episode(GameKind::Running, &mut a, &mut Seat::policy(Noop), 0);
    assert_eq!(r.header.agents[0], "sh-forward");
    assert_eq!(r.violation_counts()[0], 0);
    assert!(r.steps.iter().all(|s| s.actions[0].force == 100.0));
}

#[test]
fn external_garbage_forfeits() {
    let mut b = spec(SH_GARBAGE).seat(Some(Duration::from_millis(100)));
    let r = episode(GameKind::Wrestling, &mut Seat::policy(Noop), &mut b, 0);
    assert_eq!(r.outcome, Outcome::win(Side::A, Reason::Forfeit));
    assert_eq!(r.violation_counts(), [0, 2]);
}

#[test]
fn late_replies_count_as_timeouts() {
    let mut a = spec(SH_SLOW).seat(Some(Duration::from_millis(100)));
    let r = episode(GameKind::Football, &mut a, &mut Seat::policy(Noop), 0);
    assert_eq!(r.outcome, Outcome::win(Side::B, Reason::Forfeit));
    assert!(r
        .steps
        .iter()
        .all(|s| s.violations[0].as_deref() == Some("timeout")));
}

#[test]
fn failed_start_forfeits_immediately() {
    let mut a = spec("cmd:exit 1").seat(Some(Duration::from_millis(100)));
    let r = episode(GameKind::Running, &mut a, &mut Seat::policy(Noop), 0);
    assert_eq!(r.outcome, Outcome::win(Side::B, Reason::Forfeit));
    assert_eq!(r.step_count(), 0);
    assert!(a.is_crashed());

    let mut a = spec("cmd:exit 1").seat(None);
    let mut b = spec("cmd:exit 3").seat(None);
    let r = episode(GameKind::Running, &mut a, &mut b, 0);
    assert_eq!(r.outcome, Outcome::draw(Reason::Forfeit));
    assert!(r.outcome.is_double_forfeit());
}

#[test]
fn closed_stream_forfeits_at_once() {
    let mut a = spec(SH_QUITTER).seat(Some(Duration::from_secs(2)));
    let r = episode(GameKind::Running, &mut a, &mut Seat::policy(Noop), 0);
    assert_eq!(r.outcome, Outcome::win(Side::B, Reason::Forfeit));
    assert_eq!(r.step_count(), 1);
}

#[test]
fn replay_round_trips_and_verifies() {
    for kind in GameKind::ALL {
        let map = fixture_map(kind);
        let r = episode(
            kind,
            &mut Seat::policy(RandomPolicy::new(1)),
            &mut Seat::policy(RandomPolicy::new(2)),
            9,
        );
        let text = r.to_text();
        let back = parse_replay(&text).unwrap();
        assert_eq!(back, r);
        verify_replay(&back, &map).unwrap();
        let last = text.lines().last().unwrap();
        assert!(last.starts_with("{\"type\":\"seal\""));
    }
}

#[test]
fn same_seed_gives_identical_replays() {
    let run = || {
        episode(
            GameKind::Football,
            &mut Seat::policy(RandomPolicy::new(5)),
            &mut Seat::policy(RandomPolicy::new(6)),
            42,
        )
        .to_text()
    };
    assert_eq!(run(), run());
}

#[test]
fn tampering_is_detected() {
    let map = fixture_map(GameKind::Running);
    let r = episode(
        GameKind::Running,
        &mut Seat::policy(RandomPolicy::new(1)),
        &mut Seat::policy(Noop),
        2,
    );
    let text = r.to_text();

    let edited = text.replacen("\"step\":3,", "\"step\":3, ", 1);
    assert!(matches!(
        parse_replay(&edited),
        Err(ReplayError::HashMismatch { .. })
    ));

    let unsealed: String = text
        .lines()
        .take(text.lines().count() - 1)
        .map(|l| format!("{l}\n"))
        .collect();
    assert_eq!(parse_replay(&unsealed), Err(ReplayError::MissingSeal));

    // A resealed record with doctored positions fails re-simulation.
    let mut steps = r.steps.clone();
    steps[4].bodies[0].position.x += 1e-9;
    let forged = EpisodeRecord::new(r.header.clone(), steps, r.outcome);
    let forged = parse_replay(&forged.to_text()).unwrap();
    assert_eq!(
        verify_replay(&forged, &map),
        Err(ReplayError::Diverged { step: 5 })
    );

    let other = fixture_map(GameKind::Wrestling);
    assert!(matches!(
        verify_replay(&r, &other),
        Err(ReplayError::ChecksumMismatch { .. })
    ));
}

#[test]
fn step_limit_override_is_recorded() {
    let opts = EpisodeOptions {
        limits: Some(EpisodeLimits { max_steps: 7 }),
        ..Default::default()
    };
    let map = fixture_map(GameKind::Wrestling);
    let r = run_episode(
        GameKind::Wrestling,
        &map,
        [&mut Seat::policy(Noop), &mut Seat::policy(Noop)],
        0,
        &opts,
    )
    .unwrap();
    assert_eq!(r.step_count(), 7);
    assert_eq!(r.header.max_steps, 7);
    verify_replay(&r, &map).unwrap();
}

#[test]
fn series_runs_every_scheduled_game() {
    let kinds = vec![
        GameKind::Running,
        GameKind::Wrestling,
        GameKind::Football,
        GameKind::TableHockey,
    ];
    let config = IntegratedConfig::new(kinds.clone(), 8).unwrap();
    let maps: BTreeMap<GameKind, _> = kinds.iter().map(|k| (*k, fixture_map(*k))).collect();
    let mut a = Seat::policy(ScriptedForward::default());
    let mut b = Seat::policy(RandomPolicy::new(4));
    let (report, records) = run_series(
        &config,
        &maps,
        [&mut a, &mut b],
        3,
        &EpisodeOptions::default(),
    )
    .unwrap();
    assert_eq!(records.len(), 4);
    let kinds_played: Vec<GameKind> = records.iter().map(|r| r.header.kind).collect();
    assert_eq!(kinds_played, report.schedule);
    let outcomes: Vec<Outcome> = records.iter().map(|r| zero_sum(&r.outcome)).collect();
    assert_eq!(report.games, outcomes);
    assert_eq!(zero_sum(&report.outcome), series_outcome(&outcomes));
    for (i, r) in records.iter().enumerate() {
        assert_eq!(r.header.episode_index, i as u32);
        // Every game starts from full energy.
        assert!(r
            .header
            .bodies
            .iter()
            .filter(|b| b.kind.is_agent())
            .all(|b| b.energy == 1000.0));
    }
}
