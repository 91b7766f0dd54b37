//! Bundled maps, one per scenario kind.

use crate::scenarios::{parse_map, GameKind, MapSpec};

pub const RUNNING_STRAIGHT: &str = include_str!("../maps/running_straight.json");
pub const WRESTLING_RING: &str = include_str!("../maps/wrestling_ring.json");
pub const CURLING_SHEET: &str = include_str!("../maps/curling_sheet.json");
pub const TABLE_HOCKEY_RINK: &str = include_str!("../maps/table_hockey_rink.json");
pub const FOOTBALL_PITCH: &str = include_str!("../maps/football_pitch.json");
pub const BILLIARD_TABLE: &str = include_str!("../maps/billiard_table.json");

/// Source text of the bundled map for `kind`.
pub fn fixture_text(kind: GameKind) -> &'static str {
    match kind {
        GameKind::Running => RUNNING_STRAIGHT,
        GameKind::Wrestling => WRESTLING_RING,
        GameKind::Curling => CURLING_SHEET,
        GameKind::TableHockey => TABLE_HOCKEY_RINK,
        GameKind::Football => FOOTBALL_PITCH,
        GameKind::Billiard => BILLIARD_TABLE,
    }
}

pub fn fixture_map(kind: GameKind) -> MapSpec {
    parse_map(fixture_text(kind)).expect("bundled maps are valid")
}

pub fn all_fixture_maps() -> Vec<MapSpec> {
    GameKind::ALL.into_iter().map(fixture_map).collect()
}

/// Looks a bundled map up by its document name or by kind name.
pub fn fixture_by_name(name: &str) -> Option<MapSpec> {
    GameKind::ALL
        .into_iter()
        .map(fixture_map)
        .find(|m| m.name == name)
        .or_else(|| GameKind::parse(name).map(fixture_map))
}
