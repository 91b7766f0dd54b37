use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::path::Path;

use crate::agent::AgentSpec;
use crate::fixtures::fixture_by_name;
use crate::scenarios::{parse_map, GameKind, MapErrors, MapSpec};

use super::{PlayerEntry, TournamentError, TournamentSettings};

/// Tournament configuration file (TOML).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TournamentConfig {
    pub players: Vec<PlayerConfig>,
    #[serde(default)]
    pub rounds: Option<u32>,
    #[serde(default = "default_episodes")]
    pub episodes_per_match: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_jobs")]
    pub jobs: usize,
    /// Per-step reply deadline for external agents.
    #[serde(default = "default_deadline")]
    pub deadline_ms: u64,
    pub game: GameSpec,
    #[serde(default)]
    pub maps: Vec<MapPoolEntry>,
}

fn default_episodes() -> u32 {
    2
}

fn default_jobs() -> usize {
    1
}

fn default_deadline() -> u64 {
    100
}

fn default_from_round() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerConfig {
    pub id: String,
    #[serde(default)]
    pub name: Option<String>,
    pub agent: String,
    #[serde(default)]
    pub seed_rank: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum GameSpec {
    Single {
        kind: GameKind,
    },
    Integrated {
        kinds: Vec<GameKind>,
        /// Fixed schedule seed; by default each episode shuffles with its own seed.
        #[serde(default)]
        shuffle_seed: Option<u64>,
    },
}

impl GameSpec {
    pub fn kinds(&self) -> Vec<GameKind> {
        match self {
            GameSpec::Single { kind } => vec![*kind],
            GameSpec::Integrated { kinds, .. } => kinds.clone(),
        }
    }
}

/// One map in the pool: a file path (relative to the config file) or a
/// bundled map name. The map becomes eligible from `from_round` on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapPoolEntry {
    #[serde(default)]
    pub path: Option<String>,
    #[serde(default)]
    pub builtin: Option<String>,
    #[serde(default = "default_from_round")]
    pub from_round: u32,
}

impl TournamentConfig {
    pub fn parse(text: &str) -> Result<Self, TournamentError> {
        let cfg: TournamentConfig =
            toml::from_str(text).map_err(|e| TournamentError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), TournamentError> {
        if self.players.len() < 2 {
            return Err(TournamentError::TooFewPlayers(self.players.len()));
        }
        let mut seen = BTreeSet::new();
        for p in &self.players {
            if !seen.insert(&p.id) {
                return Err(TournamentError::DuplicatePlayer(p.id.clone()));
            }
            p.agent
                .parse::<AgentSpec>()
                .map_err(|e| TournamentError::Config(format!("player '{}': {e}", p.id)))?;
        }
        if self.episodes_per_match == 0 || !self.episodes_per_match.is_multiple_of(2) {
            return Err(TournamentError::OddEpisodes(self.episodes_per_match));
        }
        if self.jobs == 0 {
            return Err(TournamentError::Config("jobs must be at least 1".into()));
        }
        if let GameSpec::Integrated { kinds, .. } = &self.game {
            crate::scenarios::IntegratedConfig::new(kinds.clone(), 0)
                .map_err(|e| TournamentError::Config(e.to_string()))?;
        }
        for (i, m) in self.maps.iter().enumerate() {
            if m.path.is_some() == m.builtin.is_some() {
                return Err(TournamentError::Config(format!(
                    "maps[{i}]: set exactly one of 'path' or 'builtin'"
                )));
            }
        }
        Ok(())
    }

    pub fn players(&self) -> Vec<PlayerEntry> {
        self.players
            .iter()
            .enumerate()
            .map(|(i, p)| PlayerEntry {
                id: p.id.clone(),
                name: p.name.clone().unwrap_or_else(|| p.id.clone()),
                agent: p.agent.clone(),
                seed_rank: p.seed_rank.unwrap_or(i as u32 + 1),
            })
            .collect()
    }

    pub fn settings(&self) -> TournamentSettings {
        TournamentSettings {
            rounds: self.rounds,
            episodes_per_match: self.episodes_per_match,
            seed: self.seed,
            jobs: self.jobs,
        }
    }

    /// Loads the map pool, resolving paths against `base_dir`.
    pub fn load_pool(&self, base_dir: &Path) -> Result<Vec<(u32, MapSpec)>, TournamentError> {
        self.maps
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let spec = match (&m.path, &m.builtin) {
                    (Some(p), _) => {
                        let path = base_dir.join(p);
                        let text = std::fs::read_to_string(&path).map_err(|e| {
                            TournamentError::Config(format!("maps[{i}]: {}: {e}", path.display()))
                        })?;
                        parse_map(&text).map_err(|errs| {
                            TournamentError::Config(format!("maps[{i}]: {}", MapErrors(&errs)))
                        })?
                    }
                    (None, Some(name)) => fixture_by_name(name).ok_or_else(|| {
                        TournamentError::Config(format!("maps[{i}]: no bundled map '{name}'"))
                    })?,
                    (None, None) => unreachable!("validated"),
                };
                Ok((m.from_round, spec))
            })
            .collect()
    }
}
