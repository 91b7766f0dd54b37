//! Newline-delimited JSON messages exchanged with agents over standard
//! input and output.

use serde::{Deserialize, Serialize};

use crate::physics::Side;
use crate::scenarios::{EpisodeLimits, GameResult, Reason};

pub const PROTOCOL_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Message {
    /// Engine to agent, once per session.
    Hello {
        protocol_version: u32,
        grid_size: usize,
        limits: EpisodeLimits,
    },
    /// Engine to agent, before every episode.
    Reset { episode_index: u32, side: Side },
    /// Engine to agent, once per step; answered by exactly one `Act`.
    Observe {
        step: u32,
        /// Row-major color codes, `grid_size * grid_size` entries.
        grid: Vec<u8>,
        energy_fraction: f64,
        controllable: bool,
    },
    /// Engine to agent, when the episode ends.
    Result { outcome: GameResult, reason: Reason },
    /// Agent to engine, answering `Hello`.
    Ready { name: String },
    /// Agent to engine, answering `Observe`.
    Act { force: f64, steer: f64 },
}

pub const MESSAGE_TYPES: [&str; 6] = ["hello", "reset", "observe", "result", "ready", "act"];

impl Message {
    pub fn type_name(&self) -> &'static str {
        match self {
            Message::Hello { .. } => "hello",
            Message::Reset { .. } => "reset",
            Message::Observe { .. } => "observe",
            Message::Result { .. } => "result",
            Message::Ready { .. } => "ready",
            Message::Act { .. } => "act",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProtocolError {
    #[error("malformed message: {0}")]
    Syntax(String),
    #[error("unknown message type '{0}'")]
    UnknownType(String),
    #[error("non-finite number in message")]
    NonFinite,
    #[error("invalid message fields: {0}")]
    Schema(String),
}

impl ProtocolError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            ProtocolError::Syntax(_) => "syntax",
            ProtocolError::UnknownType(_) => "unknown_type",
            ProtocolError::NonFinite => "non_finite",
            ProtocolError::Schema(_) => "schema",
        }
    }
}

/// One message as a newline-terminated line.
pub fn encode_message(msg: &Message) -> String {
    let mut line = serde_json::to_string(msg).expect("protocol messages serialize");
    line.push('\n');
    line
}

/// Parses one line. Unknown fields are ignored.
pub fn decode_message(line: &str) -> Result<Message, ProtocolError> {
    let line = line.trim_end_matches(['\n', '\r']);
    let value: serde_json::Value = match serde_json::from_str(line) {
        Ok(v) => v,
        Err(e) => {
            if has_non_finite_literal(line) || e.to_string().contains("out of range") {
                return Err(ProtocolError::NonFinite);
            }
            return Err(ProtocolError::Syntax(e.to_string()));
        }
    };
    let ty = match value.get("type") {
        Some(serde_json::Value::String(s)) => s.clone(),
        Some(_) => return Err(ProtocolError::Schema("'type' must be a string".into())),
        None if value.is_object() => return Err(ProtocolError::Schema("missing 'type'".into())),
        None => return Err(ProtocolError::Syntax("expected a JSON object".into())),
    };
    if !MESSAGE_TYPES.contains(&ty.as_str()) {
        return Err(ProtocolError::UnknownType(ty));
    }
    serde_json::from_value(value).map_err(|e| ProtocolError::Schema(e.to_string()))
}

/// Looks for bare `NaN` / `Infinity` tokens outside string literals.
fn has_non_finite_literal(line: &str) -> bool {
    let bytes = line.as_bytes();
    let mut in_string = false;
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if in_string {
            match c {
                b'\\' => i += 1,
                b'"' => in_string = false,
                _ => {}
            }
        } else if c == b'"' {
            in_string = true;
        } else if line[i..].starts_with("NaN") || line[i..].starts_with("Infinity") {
            return true;
        }
        i += 1;
    }
    false
}
