//! Maps, per-scenario rules and the shuffled integrated series.

mod game;
mod integrated;
mod map;
mod outcome;

use serde::{Deserialize, Serialize};
use std::fmt;

pub use game::{
    agent_id, check_outcome, init_game, step_game, GameError, GameEvent, GameState, Phase,
    TurnPhase,
};
pub use integrated::{
    run_integrated, series_outcome, shuffle_schedule, IntegratedConfig, IntegratedError,
    SeriesReport,
};
pub use map::{
    canonical_checksum, midline_shape, parse_map, Bounds, EpisodeLimits, MapError, MapErrorKind,
    MapErrors, MapObject, MapSpec, Pose, ScenarioParams, MAP_FORMAT_VERSION,
};
pub use outcome::{GameResult, Outcome, Reason};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameKind {
    Running,
    Wrestling,
    Curling,
    TableHockey,
    Football,
    Billiard,
}

impl GameKind {
    pub const ALL: [GameKind; 6] = [
        GameKind::Running,
        GameKind::Wrestling,
        GameKind::Curling,
        GameKind::TableHockey,
        GameKind::Football,
        GameKind::Billiard,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GameKind::Running => "running",
            GameKind::Wrestling => "wrestling",
            GameKind::Curling => "curling",
            GameKind::TableHockey => "table_hockey",
            GameKind::Football => "football",
            GameKind::Billiard => "billiard",
        }
    }

    pub fn parse(s: &str) -> Option<GameKind> {
        let norm = s.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        GameKind::ALL
            .into_iter()
            .find(|k| k.as_str() == norm || (norm == "hockey" && *k == GameKind::TableHockey))
    }

    /// Turns alternate and only one side acts at a time.
    pub fn is_turn_based(self) -> bool {
        matches!(self, GameKind::Curling | GameKind::Billiard)
    }

    pub fn default_max_steps(self) -> u32 {
        if self.is_turn_based() {
            1000
        } else {
            500
        }
    }
}

impl fmt::Display for GameKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for GameKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GameKind::parse(s).ok_or_else(|| format!("unknown game kind '{s}'"))
    }
}
