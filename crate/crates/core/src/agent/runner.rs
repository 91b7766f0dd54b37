//! Drives two seats through complete episodes and integrated series.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use crate::observation::{ColorTable, VisionParams};
use crate::physics::{Action, Side};
use crate::scenarios::{
    init_game, run_integrated, step_game, EpisodeLimits, GameError, GameKind, IntegratedConfig,
    IntegratedError, MapSpec, Outcome, Reason, SeriesReport,
};

use super::protocol::{Message, PROTOCOL_VERSION};
use super::record::{EpisodeRecord, ReplayHeader, StepEntry, REPLAY_FORMAT, REPLAY_VERSION};
use super::seat::{seat_side, AgentFault, Seat};

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeOptions {
    pub vision: VisionParams,
    pub colors: ColorTable,
    /// Overrides the map's step limit.
    pub limits: Option<EpisodeLimits>,
    pub episode_index: u32,
    /// Consecutive violations that forfeit the episode.
    pub max_violations: u32,
}

impl Default for EpisodeOptions {
    fn default() -> Self {
        Self {
            vision: VisionParams::default(),
            colors: ColorTable::default(),
            limits: None,
            episode_index: 0,
            max_violations: 3,
        }
    }
}

fn forfeit(forfeits: [bool; 2]) -> Option<Outcome> {
    match forfeits {
        [true, true] => Some(Outcome::draw(Reason::Forfeit)),
        [true, false] => Some(Outcome::win(Side::B, Reason::Forfeit)),
        [false, true] => Some(Outcome::win(Side::A, Reason::Forfeit)),
        [false, false] => None,
    }
}

/// Plays one episode to termination and returns its sealed record.
///
/// Late, malformed or missing replies become the zero action and count as a
/// violation; `max_violations` consecutive violations, a closed stream or a
/// failed start forfeit the episode.
pub fn run_episode(
    kind: GameKind,
    map: &MapSpec,
    mut seats: [&mut Seat; 2],
    seed: u64,
    opts: &EpisodeOptions,
) -> Result<EpisodeRecord, GameError> {
    let mut map = map.clone();
    if let Some(limits) = opts.limits {
        map.limits = limits;
    }
    let mut state = init_game(kind, &map, seed)?;

    let hello = Message::Hello {
        protocol_version: PROTOCOL_VERSION,
        grid_size: opts.vision.grid_size,
        limits: map.limits,
    };
    let mut failed = [false; 2];
    for (i, seat) in seats.iter_mut().enumerate() {
        failed[i] = !seat.ensure_started(&hello);
        if !failed[i] {
            let reset = Message::Reset {
                episode_index: opts.episode_index,
                side: seat_side(i),
            };
            if let Err(e) = seat.agent.send(&reset) {
                seat.crash(e.to_string());
                failed[i] = true;
            }
        }
    }
    let header = ReplayHeader {
        format: REPLAY_FORMAT.into(),
        version: REPLAY_VERSION,
        engine_version: env!("CARGO_PKG_VERSION").into(),
        map_name: map.name.clone(),
        map_checksum: map.checksum.clone(),
        kind,
        seed,
        episode_index: opts.episode_index,
        max_steps: map.limits.max_steps,
        agents: [seats[0].name(), seats[1].name()],
        bodies: state.world.bodies.clone(),
    };

    let mut steps = Vec::new();
    let mut consecutive = [0u32; 2];
    let mut outcome = forfeit(failed);
    while outcome.is_none() {
        let mut sent = [false; 2];
        for (i, seat) in seats.iter_mut().enumerate() {
            let obs = state.observe(seat_side(i), &opts.vision, &opts.colors);
            let msg = Message::Observe {
                step: state.step,
                grid: obs.grid,
                energy_fraction: obs.energy_fraction,
                controllable: obs.controllable,
            };
            match seat.agent.send(&msg) {
                Ok(()) => sent[i] = true,
                Err(e) => seat.crash(e.to_string()),
            }
        }
        let start = Instant::now();
        let mut actions = [Action::ZERO; 2];
        let mut violations: [Option<String>; 2] = [None, None];
        for (i, seat) in seats.iter_mut().enumerate() {
            if !sent[i] {
                violations[i] = Some("closed".into());
                continue;
            }
            let deadline = seat
                .step_deadline()
                .map(|d| d.checked_sub(start.elapsed()).unwrap_or(Duration::ZERO));
            let reply = seat.agent.recv(deadline).and_then(|m| match m {
                Message::Act { force, steer } => Ok(Action::new(force, steer)),
                other => Err(AgentFault::Unexpected(other.type_name())),
            });
            match reply {
                Ok(a) => actions[i] = a,
                Err(e) => {
                    let code = match &e {
                        AgentFault::Timeout => "timeout".to_string(),
                        AgentFault::Malformed(p) => p.code().to_string(),
                        AgentFault::Unexpected(_) => "unexpected".to_string(),
                        AgentFault::Closed | AgentFault::Spawn(_) => {
                            seat.crash(e.to_string());
                            "closed".to_string()
                        }
                    };
                    violations[i] = Some(code);
                }
            }
        }
        let mut forfeits = [false; 2];
        for i in 0..2 {
            if violations[i].is_some() {
                consecutive[i] += 1;
            } else {
                consecutive[i] = 0;
            }
            forfeits[i] = consecutive[i] >= opts.max_violations || seats[i].is_crashed();
        }
        outcome = forfeit(forfeits);
        if outcome.is_some() {
            break;
        }
        let (next, events) = step_game(&state, actions[0], actions[1])?;
        state = next;
        steps.push(StepEntry {
            step: state.step,
            actions,
            violations,
            bodies: state.world.bodies.clone(),
            events,
        });
        outcome = state.outcome;
    }
    let outcome = outcome.expect("loop exits with an outcome");
    for seat in seats {
        if !seat.is_crashed() {
            let msg = Message::Result {
                outcome: outcome.result,
                reason: outcome.reason,
            };
            if let Err(e) = seat.agent.send(&msg) {
                seat.crash(e.to_string());
            }
        }
    }
    Ok(EpisodeRecord::new(header, steps, outcome))
}

/// Plays an integrated series; every game starts from full energy.
pub fn run_series(
    config: &IntegratedConfig,
    maps: &BTreeMap<GameKind, MapSpec>,
    seats: [&mut Seat; 2],
    seed: u64,
    opts: &EpisodeOptions,
) -> Result<(SeriesReport, Vec<EpisodeRecord>), IntegratedError> {
    for (kind, map) in maps {
        if map.kind != *kind {
            return Err(IntegratedError::MissingMap(*kind));
        }
    }
    let [a, b] = seats;
    let mut records = Vec::new();
    let mut index = opts.episode_index;
    let report = run_integrated(config, maps, seed, |kind, map, episode_seed| {
        let o = EpisodeOptions {
            episode_index: index,
            ..opts.clone()
        };
        index += 1;
        match run_episode(kind, map, [&mut *a, &mut *b], episode_seed, &o) {
            Ok(r) => {
                let outcome = r.outcome;
                records.push(r);
                outcome
            }
            Err(_) => Outcome::draw(Reason::Forfeit),
        }
    })?;
    Ok((report, records))
}
