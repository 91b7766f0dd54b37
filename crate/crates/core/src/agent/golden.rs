//! Canonical protocol samples shared with agent implementations in other
//! languages. The committed files under `fixtures/protocol` are generated
//! from these and must stay byte-identical.

use serde::Serialize;

use crate::physics::Side;
use crate::scenarios::{EpisodeLimits, GameResult, Reason};

use super::protocol::{encode_message, Message, PROTOCOL_VERSION};

pub const MESSAGES_FILE: &str = "messages.jsonl";
pub const REJECTIONS_FILE: &str = "rejections.jsonl";

/// One sample of every message type, with awkward values where they matter.
pub fn golden_messages() -> Vec<Message> {
    let grid: Vec<u8> = (0..9u8).map(|i| i % 7).collect();
    vec![
        Message::Hello {
            protocol_version: PROTOCOL_VERSION,
            grid_size: 3,
            limits: EpisodeLimits { max_steps: 500 },
        },
        Message::Reset {
            episode_index: 0,
            side: Side::A,
        },
        Message::Reset {
            episode_index: 7,
            side: Side::B,
        },
        Message::Observe {
            step: 0,
            grid,
            energy_fraction: 1.0,
            controllable: true,
        },
        Message::Observe {
            step: 42,
            grid: vec![0; 9],
            energy_fraction: 0.123456789012345,
            controllable: false,
        },
        Message::Result {
            outcome: GameResult::AWins,
            reason: Reason::GoalCrossed,
        },
        Message::Result {
            outcome: GameResult::Draw,
            reason: Reason::Forfeit,
        },
        Message::Ready {
            name: "bot \"quoted\" \u{e9}".into(),
        },
        Message::Act {
            force: 100.0,
            steer: -0.5235987755982988,
        },
        Message::Act {
            force: -1e-7,
            steer: 0.1 + 0.2,
        },
    ]
}

/// Lines every implementation must reject, with the expected error code.
pub fn golden_rejections() -> Vec<(&'static str, &'static str)> {
    vec![
        ("{\"type\":\"act\",\"force\":1.0", "syntax"),
        ("not json", "syntax"),
        ("[1,2]", "syntax"),
        ("{\"type\":\"shout\",\"volume\":11}", "unknown_type"),
        (
            "{\"type\":\"act\",\"force\":NaN,\"steer\":0.0}",
            "non_finite",
        ),
        (
            "{\"type\":\"act\",\"force\":Infinity,\"steer\":0.0}",
            "non_finite",
        ),
        (
            "{\"type\":\"act\",\"force\":1e999,\"steer\":0.0}",
            "non_finite",
        ),
        ("{\"type\":\"act\",\"force\":1.0}", "schema"),
        (
            "{\"type\":\"act\",\"force\":\"fast\",\"steer\":0.0}",
            "schema",
        ),
        ("{\"force\":1.0,\"steer\":0.0}", "schema"),
        ("{\"type\":3}", "schema"),
    ]
}

#[derive(Serialize)]
struct Rejection<'a> {
    line: &'a str,
    code: &'a str,
}

/// File name and content of every golden file.
pub fn golden_files() -> Vec<(&'static str, String)> {
    let messages: String = golden_messages().iter().map(encode_message).collect();
    let rejections: String = golden_rejections()
        .into_iter()
        .map(|(line, code)| {
            serde_json::to_string(&Rejection { line, code }).expect("serializable") + "\n"
        })
        .collect();
    vec![(MESSAGES_FILE, messages), (REJECTIONS_FILE, rejections)]
}

/// Writes the golden files into `dir`.
pub fn write_golden_files(dir: &std::path::Path) -> std::io::Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir)?;
    golden_files()
        .into_iter()
        .map(|(name, text)| {
            let path = dir.join(name);
            std::fs::write(&path, text)?;
            Ok(path)
        })
        .collect()
}
