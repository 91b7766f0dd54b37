use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::physics::Side;

use super::map::MapSpec;
use super::outcome::{Outcome, Reason};
use super::GameKind;

/// A series of 4 to 6 distinct scenarios played in seeded-shuffled order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegratedConfig {
    pub kinds: Vec<GameKind>,
    pub shuffle_seed: u64,
    /// Optional map name or path per kind; kinds without an entry use the
    /// first map of that kind in the pool.
    #[serde(default)]
    pub maps: BTreeMap<GameKind, String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntegratedError {
    #[error("integrated series needs 4 to 6 kinds, got {0}")]
    Length(usize),
    #[error("kind {0} listed more than once")]
    Duplicate(GameKind),
    #[error("no map available for kind {0}")]
    MissingMap(GameKind),
}

impl IntegratedConfig {
    pub fn new(kinds: Vec<GameKind>, shuffle_seed: u64) -> Result<Self, IntegratedError> {
        let cfg = Self {
            kinds,
            shuffle_seed,
            maps: BTreeMap::new(),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), IntegratedError> {
        if !(4..=6).contains(&self.kinds.len()) {
            return Err(IntegratedError::Length(self.kinds.len()));
        }
        for (i, k) in self.kinds.iter().enumerate() {
            if self.kinds[..i].contains(k) {
                return Err(IntegratedError::Duplicate(*k));
            }
        }
        Ok(())
    }
}

/// Seeded uniform permutation of the configured kinds.
pub fn shuffle_schedule(config: &IntegratedConfig) -> Vec<GameKind> {
    let mut order = config.kinds.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(config.shuffle_seed);
    order.shuffle(&mut rng);
    order
}

/// Majority of game wins; equal counts draw.
pub fn series_outcome(games: &[Outcome]) -> Outcome {
    let wins = |side| games.iter().filter(|o| o.winner() == Some(side)).count();
    let (a, b) = (wins(Side::A), wins(Side::B));
    match a.cmp(&b) {
        std::cmp::Ordering::Greater => Outcome::win(Side::A, Reason::Majority),
        std::cmp::Ordering::Less => Outcome::win(Side::B, Reason::Majority),
        std::cmp::Ordering::Equal => Outcome::draw(Reason::Majority),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub schedule: Vec<GameKind>,
    pub games: Vec<Outcome>,
    pub outcome: Outcome,
}

/// Plays every scheduled game through `play(kind, map, episode_seed)`, which
/// runs one complete episode with fresh energy and reports its outcome
/// (agent failures already turned into forfeits).
pub fn run_integrated<F>(
    config: &IntegratedConfig,
    maps: &BTreeMap<GameKind, MapSpec>,
    seed: u64,
    mut play: F,
) -> Result<SeriesReport, IntegratedError>
where
    F: FnMut(GameKind, &MapSpec, u64) -> Outcome,
{
    config.validate()?;
    for k in &config.kinds {
        if !maps.contains_key(k) {
            return Err(IntegratedError::MissingMap(*k));
        }
    }
    let schedule = shuffle_schedule(config);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let games: Vec<Outcome> = schedule
        .iter()
        .map(|k| {
            let episode_seed: u64 = rng.gen();
            play(*k, &maps[k], episode_seed)
        })
        .collect();
    Ok(SeriesReport {
        outcome: series_outcome(&games),
        schedule,
        games,
    })
}
