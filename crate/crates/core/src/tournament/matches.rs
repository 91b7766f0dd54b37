use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use crate::physics::Side;
use crate::scenarios::{Outcome, Reason};

use super::{PlayerEntry, PlayerId, TournamentError};

/// Plays single episodes between two registered players.
pub trait EpisodePlayer: Sync {
    /// One episode with `a` on side A and `b` on side B.
    fn play(
        &self,
        a: &PlayerEntry,
        b: &PlayerEntry,
        round: u32,
        episode_index: u32,
        seed: u64,
    ) -> Outcome;
}

/// One episode of a match, seen from the board.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchEpisode {
    /// Player on side A for this episode.
    pub side_a: PlayerId,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatchResult {
    pub pair: (PlayerId, PlayerId),
    pub outcomes: Vec<MatchEpisode>,
    /// Match points for the two players of `pair`.
    pub points: (f64, f64),
}

/// Seed of episode `e` in a match. Both halves of a side-swapped couple
/// share one seed so spawn perturbations are identical.
pub fn episode_seed(match_seed: u64, e: u32) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(match_seed);
    rng.set_stream(u64::from(e / 2));
    rng.gen()
}

/// Match points for the players on sides (A, B): a win is 1, a draw 0.5 each,
/// a double forfeit 0 each.
pub fn episode_points(o: &Outcome) -> (f64, f64) {
    if o.is_double_forfeit() {
        return (0.0, 0.0);
    }
    match o.winner() {
        Some(Side::A) => (1.0, 0.0),
        Some(Side::B) => (0.0, 1.0),
        None => (0.5, 0.5),
    }
}

/// Plays `episodes` episodes between `p` and `q`, alternating sides with `p`
/// on side A first.
pub fn run_match(
    p: &PlayerEntry,
    q: &PlayerEntry,
    player: &dyn EpisodePlayer,
    round: u32,
    episodes: u32,
    seed: u64,
) -> Result<MatchResult, TournamentError> {
    if episodes == 0 || !episodes.is_multiple_of(2) {
        return Err(TournamentError::OddEpisodes(episodes));
    }
    let mut outcomes = Vec::with_capacity(episodes as usize);
    let mut points = (0.0, 0.0);
    for e in 0..episodes {
        let s = episode_seed(seed, e);
        let p_on_a = e % 2 == 0;
        let (a, b) = if p_on_a { (p, q) } else { (q, p) };
        let outcome = player.play(a, b, round, e, s);
        let (pa, pb) = episode_points(&outcome);
        if p_on_a {
            points.0 += pa;
            points.1 += pb;
        } else {
            points.0 += pb;
            points.1 += pa;
        }
        outcomes.push(MatchEpisode {
            side_a: a.id.clone(),
            outcome,
        });
    }
    Ok(MatchResult {
        pair: (p.id.clone(), q.id.clone()),
        outcomes,
        points,
    })
}

/// Stand-in players with known strengths. The stronger side of a strength
/// gap `d` wins with probability `1 - base^d`; equal strengths draw.
#[derive(Debug, Clone)]
pub struct StrengthStub {
    pub strengths: BTreeMap<PlayerId, f64>,
    pub base: f64,
}

impl StrengthStub {
    pub fn new(strengths: BTreeMap<PlayerId, f64>) -> Self {
        Self {
            strengths,
            base: 0.1,
        }
    }

    pub fn win_probability(&self, gap: f64) -> f64 {
        1.0 - self.base.powf(gap)
    }
}

impl EpisodePlayer for StrengthStub {
    fn play(
        &self,
        a: &PlayerEntry,
        b: &PlayerEntry,
        _round: u32,
        _episode_index: u32,
        seed: u64,
    ) -> Outcome {
        let sa = self.strengths.get(&a.id).copied().unwrap_or(0.0);
        let sb = self.strengths.get(&b.id).copied().unwrap_or(0.0);
        if sa == sb {
            return Outcome::draw(Reason::Timeout);
        }
        let (strong, weak) = if sa > sb {
            (Side::A, Side::B)
        } else {
            (Side::B, Side::A)
        };
        let p = self.win_probability((sa - sb).abs());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::from(a.seed_rank) << 32 | u64::from(b.seed_rank));
        let winner = if rng.gen_bool(p) { strong } else { weak };
        Outcome::win(winner, Reason::GoalCrossed)
    }
}
