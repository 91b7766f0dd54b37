use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use super::standings::{ranking_order, StandingsRow};
use super::{PlayerId, TournamentError};

/// Field sizes up to this are searched exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 10;
/// Node budget for the bounded search used on larger fields.
const SEARCH_BUDGET: u64 = 2_000_000;

/// How often each unordered pair has met.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PairHistory {
    counts: BTreeMap<(PlayerId, PlayerId), u32>,
}

fn key(a: &PlayerId, b: &PlayerId) -> (PlayerId, PlayerId) {
    if a <= b {
        (a.clone(), b.clone())
    } else {
        (b.clone(), a.clone())
    }
}

impl PairHistory {
    pub fn record(&mut self, a: &PlayerId, b: &PlayerId) {
        *self.counts.entry(key(a, b)).or_default() += 1;
    }

    pub fn times_played(&self, a: &PlayerId, b: &PlayerId) -> u32 {
        self.counts.get(&key(a, b)).copied().unwrap_or(0)
    }

    pub fn has_played(&self, a: &PlayerId, b: &PlayerId) -> bool {
        self.times_played(a, b) > 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pairing {
    /// Pairs in board order; the higher-ranked player comes first.
    pub pairs: Vec<(PlayerId, PlayerId)>,
    pub bye: Option<PlayerId>,
}

/// Pairs one round.
///
/// Players are ranked by points, Buchholz and seed rank. With an odd field
/// the lowest-ranked player without a bye sits out. The rest are matched
/// so that the number of rematches is minimal; among equally good matchings
/// the first in greedy order wins (the best remaining player takes the best
/// remaining partner, backtracking only when needed), which reduces to
/// 1v2, 3v4, ... when no rematch is in the way.
pub fn swiss_pair(
    standings: &[StandingsRow],
    history: &PairHistory,
    _round_index: u32,
) -> Result<Pairing, TournamentError> {
    if standings.is_empty() {
        return Err(TournamentError::EmptyField);
    }
    let mut ranked: Vec<&StandingsRow> = standings.iter().collect();
    ranked.sort_by(|a, b| ranking_order(a, b));

    let mut bye = None;
    if ranked.len() % 2 == 1 {
        let idx = ranked
            .iter()
            .rposition(|r| !r.had_bye)
            .unwrap_or(ranked.len() - 1);
        bye = Some(ranked.remove(idx).player_id.clone());
    }
    let n = ranked.len();
    let cost: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| u32::from(history.has_played(&ranked[i].player_id, &ranked[j].player_id)))
                .collect()
        })
        .collect();
    let budget = if n <= EXHAUSTIVE_LIMIT {
        u64::MAX
    } else {
        SEARCH_BUDGET
    };
    let partner = best_matching(&cost, budget);
    let pairs = (0..n)
        .filter(|&i| partner[i] > i)
        .map(|i| {
            (
                ranked[i].player_id.clone(),
                ranked[partner[i]].player_id.clone(),
            )
        })
        .collect();
    Ok(Pairing { pairs, bye })
}

/// Minimum-cost perfect matching on `0..n` (n even), preferring the
/// lexicographically first `partner` vector among ties. The search pairs the
/// lowest unmatched index with candidates in increasing order and prunes
/// branches that cannot beat the best matching found so far.
pub fn best_matching(cost: &[Vec<u32>], budget: u64) -> Vec<usize> {
    struct Search<'a> {
        cost: &'a [Vec<u32>],
        partner: Vec<usize>,
        best: Option<(u32, Vec<usize>)>,
        nodes: u64,
        budget: u64,
    }

    impl Search<'_> {
        fn run(&mut self, acc: u32) {
            self.nodes += 1;
            if let Some((b, _)) = &self.best {
                if acc >= *b || (self.nodes > self.budget) {
                    return;
                }
            }
            let n = self.partner.len();
            let Some(i) = (0..n).find(|&i| self.partner[i] == usize::MAX) else {
                self.best = Some((acc, self.partner.clone()));
                return;
            };
            for j in i + 1..n {
                if self.partner[j] != usize::MAX {
                    continue;
                }
                self.partner[i] = j;
                self.partner[j] = i;
                self.run(acc + self.cost[i][j]);
                self.partner[i] = usize::MAX;
                self.partner[j] = usize::MAX;
                if matches!(self.best, Some((0, _))) {
                    return;
                }
            }
        }
    }

    let n = cost.len();
    assert!(n.is_multiple_of(2), "perfect matching needs an even count");
    let mut s = Search {
        cost,
        partner: vec![usize::MAX; n],
        best: None,
        nodes: 0,
        budget,
    };
    s.run(0);
    s.best.map(|(_, p)| p).unwrap_or_default()
}
