use std::collections::{BTreeMap, BTreeSet};
use std::sync::Mutex;
use std::time::Duration;

use crate::agent::{run_episode, run_series, AgentSpec, EpisodeOptions, Seat};
use crate::fixtures::fixture_map;
use crate::scenarios::{GameKind, IntegratedConfig, MapSpec, Outcome, Reason};

use super::{EpisodePlayer, GameSpec, PlayerEntry, PlayerId};

/// Plays real episodes between agents launched from their descriptors.
/// A player whose agent crashes forfeits every later episode.
pub struct AgentEpisodePlayer {
    pub game: GameSpec,
    /// `(from_round, map)` in listing order.
    pub pool: Vec<(u32, MapSpec)>,
    pub deadline: Option<Duration>,
    pub options: EpisodeOptions,
    crashed: Mutex<BTreeSet<PlayerId>>,
}

impl AgentEpisodePlayer {
    pub fn new(game: GameSpec, pool: Vec<(u32, MapSpec)>, deadline: Option<Duration>) -> Self {
        Self {
            game,
            pool,
            deadline,
            options: EpisodeOptions::default(),
            crashed: Mutex::new(BTreeSet::new()),
        }
    }

    /// First pool map of `kind` eligible in `round`, else the bundled map.
    pub fn map_for(&self, kind: GameKind, round: u32) -> MapSpec {
        self.pool
            .iter()
            .find(|(from, m)| m.kind == kind && *from <= round)
            .map(|(_, m)| m.clone())
            .unwrap_or_else(|| fixture_map(kind))
    }

    pub fn crashed_players(&self) -> BTreeSet<PlayerId> {
        self.crashed.lock().expect("crash set lock").clone()
    }

    fn seat(&self, p: &PlayerEntry) -> Seat {
        let spec: AgentSpec = p.agent.parse().unwrap_or(AgentSpec::Noop);
        let mut seat = if self.crashed.lock().expect("crash set lock").contains(&p.id) {
            let mut s = AgentSpec::Noop.seat(None);
            s.crash("crashed earlier in the tournament");
            s
        } else {
            spec.seat(self.deadline)
        };
        if p.agent.parse::<AgentSpec>().is_err() {
            seat.crash(format!("invalid agent descriptor '{}'", p.agent));
        }
        seat
    }
}

impl EpisodePlayer for AgentEpisodePlayer {
    fn play(
        &self,
        a: &PlayerEntry,
        b: &PlayerEntry,
        round: u32,
        episode_index: u32,
        seed: u64,
    ) -> Outcome {
        let mut sa = self.seat(a);
        let mut sb = self.seat(b);
        let opts = EpisodeOptions {
            episode_index,
            ..self.options.clone()
        };
        let outcome = match &self.game {
            GameSpec::Single { kind } => {
                let map = self.map_for(*kind, round);
                run_episode(*kind, &map, [&mut sa, &mut sb], seed, &opts)
                    .map(|r| r.outcome)
                    .unwrap_or(Outcome::draw(Reason::Forfeit))
            }
            GameSpec::Integrated {
                kinds,
                shuffle_seed,
            } => {
                let config = IntegratedConfig {
                    kinds: kinds.clone(),
                    shuffle_seed: shuffle_seed.unwrap_or(seed),
                    maps: BTreeMap::new(),
                };
                let maps: BTreeMap<GameKind, MapSpec> = kinds
                    .iter()
                    .map(|k| (*k, self.map_for(*k, round)))
                    .collect();
                run_series(&config, &maps, [&mut sa, &mut sb], seed, &opts)
                    .map(|(report, _)| report.outcome)
                    .unwrap_or(Outcome::draw(Reason::Forfeit))
            }
        };
        let mut crashed = self.crashed.lock().expect("crash set lock");
        for (seat, p) in [(&sa, a), (&sb, b)] {
            if seat.is_crashed() {
                crashed.insert(p.id.clone());
            }
        }
        outcome
    }
}
