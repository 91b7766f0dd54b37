use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::{MatchResult, PlayerEntry, PlayerId, TournamentError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandingsRow {
    pub player_id: PlayerId,
    pub seed_rank: u32,
    pub points: f64,
    pub buchholz: f64,
    /// Opponents in round order (a bye adds nothing).
    pub opponents_played: Vec<PlayerId>,
    pub had_bye: bool,
    pub rounds_played: u32,
}

impl StandingsRow {
    pub fn new(player: &PlayerEntry) -> Self {
        Self {
            player_id: player.id.clone(),
            seed_rank: player.seed_rank,
            points: 0.0,
            buchholz: 0.0,
            opponents_played: Vec::new(),
            had_bye: false,
            rounds_played: 0,
        }
    }
}

/// Orders rows by points, then Buchholz (both descending), then seed rank.
pub fn ranking_order(a: &StandingsRow, b: &StandingsRow) -> Ordering {
    b.points
        .total_cmp(&a.points)
        .then(b.buchholz.total_cmp(&a.buchholz))
        .then(a.seed_rank.cmp(&b.seed_rank))
        .then(a.player_id.cmp(&b.player_id))
}

pub fn initial_standings(players: &[PlayerEntry]) -> Vec<StandingsRow> {
    let mut rows: Vec<StandingsRow> = players.iter().map(StandingsRow::new).collect();
    rows.sort_by(ranking_order);
    rows
}

/// Round points from one match: the side with strictly more match points
/// gets 1, an even match gives 0.5 each.
pub fn round_points(result: &MatchResult) -> (f64, f64) {
    let (p, q) = result.points;
    match p.total_cmp(&q) {
        Ordering::Greater => (1.0, 0.0),
        Ordering::Less => (0.0, 1.0),
        Ordering::Equal => (0.5, 0.5),
    }
}

/// Applies one round of results (and the bye, if any) and recomputes
/// Buchholz from current points. Rows come back in ranking order.
pub fn update_standings(
    standings: &[StandingsRow],
    results: &[MatchResult],
    bye: Option<&PlayerId>,
) -> Result<Vec<StandingsRow>, TournamentError> {
    let mut rows: BTreeMap<PlayerId, StandingsRow> = standings
        .iter()
        .map(|r| (r.player_id.clone(), r.clone()))
        .collect();
    for m in results {
        let (a, b) = &m.pair;
        for id in [a, b] {
            if !rows.contains_key(id) {
                return Err(TournamentError::UnknownPlayer(id.clone()));
            }
        }
        let (pa, pb) = round_points(m);
        for (id, opp, pts) in [(a, b, pa), (b, a, pb)] {
            let row = rows.get_mut(id).expect("checked above");
            row.points += pts;
            row.opponents_played.push(opp.clone());
            row.rounds_played += 1;
        }
    }
    if let Some(id) = bye {
        let row = rows
            .get_mut(id)
            .ok_or_else(|| TournamentError::UnknownPlayer(id.clone()))?;
        row.points += 1.0;
        row.had_bye = true;
        row.rounds_played += 1;
    }
    let points: BTreeMap<PlayerId, f64> = rows.iter().map(|(k, r)| (k.clone(), r.points)).collect();
    for row in rows.values_mut() {
        row.buchholz = row.opponents_played.iter().map(|o| points[o]).sum();
    }
    let mut out: Vec<StandingsRow> = rows.into_values().collect();
    out.sort_by(ranking_order);
    Ok(out)
}
