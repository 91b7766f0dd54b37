//! Hash-sealed episode records and their line-oriented file format.
//!
//! A replay file holds one header line, one line per step, one outcome line
//! and a closing seal line whose `replay_hash` is the SHA-256 hex digest of
//! every byte before it.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::physics::{Action, DiscBody};
use crate::scenarios::{
    init_game, step_game, EpisodeLimits, GameEvent, GameKind, MapSpec, Outcome, Reason,
};

pub const REPLAY_FORMAT: &str = "arena-replay";
pub const REPLAY_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReplayHeader {
    pub format: String,
    pub version: u32,
    pub engine_version: String,
    pub map_name: String,
    pub map_checksum: String,
    pub kind: GameKind,
    pub seed: u64,
    pub episode_index: u32,
    pub max_steps: u32,
    /// Agent names for sides A and B.
    pub agents: [String; 2],
    /// Bodies before the first step.
    pub bodies: Vec<DiscBody>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepEntry {
    /// Step number after this entry was applied (1-based).
    pub step: u32,
    /// Actions consumed for sides A and B, after substitution.
    pub actions: [Action; 2],
    /// Fault code per side when its reply was replaced by the zero action.
    pub violations: [Option<String>; 2],
    pub bodies: Vec<DiscBody>,
    pub events: Vec<GameEvent>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeEntry {
    pub outcome: Outcome,
    pub steps: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum ReplayLine {
    Header(ReplayHeader),
    Step(StepEntry),
    Outcome(OutcomeEntry),
    Seal { replay_hash: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeRecord {
    pub header: ReplayHeader,
    pub steps: Vec<StepEntry>,
    pub outcome: Outcome,
    pub replay_hash: String,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReplayError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("replay has no seal line")]
    MissingSeal,
    #[error("replay hash mismatch: sealed {sealed}, content hashes to {actual}")]
    HashMismatch { sealed: String, actual: String },
    #[error("map checksum mismatch: replay expects {expected}, map has {actual}")]
    ChecksumMismatch { expected: String, actual: String },
    #[error("unsupported replay format '{0}'")]
    Format(String),
    #[error("re-simulation diverged at step {step}")]
    Diverged { step: u32 },
    #[error("re-simulation failed: {0}")]
    Simulation(String),
}

fn line_of(entry: &ReplayLine) -> String {
    let mut s = serde_json::to_string(entry).expect("replay lines serialize");
    s.push('\n');
    s
}

impl EpisodeRecord {
    pub fn new(header: ReplayHeader, steps: Vec<StepEntry>, outcome: Outcome) -> Self {
        let mut record = Self {
            header,
            steps,
            outcome,
            replay_hash: String::new(),
        };
        record.replay_hash = hex::encode(Sha256::digest(record.body_text().as_bytes()));
        record
    }

    /// Header, step and outcome lines.
    fn body_text(&self) -> String {
        let mut out = line_of(&ReplayLine::Header(self.header.clone()));
        for s in &self.steps {
            out.push_str(&line_of(&ReplayLine::Step(s.clone())));
        }
        out.push_str(&line_of(&ReplayLine::Outcome(OutcomeEntry {
            outcome: self.outcome,
            steps: self.steps.len() as u32,
        })));
        out
    }

    /// The complete replay file contents.
    pub fn to_text(&self) -> String {
        let mut out = self.body_text();
        out.push_str(&line_of(&ReplayLine::Seal {
            replay_hash: self.replay_hash.clone(),
        }));
        out
    }

    pub fn step_count(&self) -> u32 {
        self.steps.len() as u32
    }

    /// Bodies after `step` steps (0 is the initial placement).
    pub fn bodies_at(&self, step: u32) -> Option<&[DiscBody]> {
        if step == 0 {
            Some(&self.header.bodies)
        } else {
            self.steps
                .get(step as usize - 1)
                .map(|s| s.bodies.as_slice())
        }
    }

    /// Total violations per side.
    pub fn violation_counts(&self) -> [u32; 2] {
        let mut c = [0, 0];
        for s in &self.steps {
            for (i, v) in s.violations.iter().enumerate() {
                if v.is_some() {
                    c[i] += 1;
                }
            }
        }
        c
    }
}

/// Parses a replay file and checks its seal.
pub fn parse_replay(text: &str) -> Result<EpisodeRecord, ReplayError> {
    let trimmed = text.trim_end_matches('\n');
    let seal_start = trimmed.rfind('\n').map_or(0, |i| i + 1);
    let seal_line = &trimmed[seal_start..];
    let sealed = match serde_json::from_str::<ReplayLine>(seal_line) {
        Ok(ReplayLine::Seal { replay_hash }) => replay_hash,
        _ => return Err(ReplayError::MissingSeal),
    };
    let body = &text[..seal_start];
    let actual = hex::encode(Sha256::digest(body.as_bytes()));
    if actual != sealed {
        return Err(ReplayError::HashMismatch { sealed, actual });
    }

    let mut header = None;
    let mut steps = Vec::new();
    let mut outcome = None;
    for (i, line) in body.lines().enumerate() {
        let malformed = |message: String| ReplayError::Malformed {
            line: i + 1,
            message,
        };
        let entry: ReplayLine = serde_json::from_str(line).map_err(|e| malformed(e.to_string()))?;
        match entry {
            ReplayLine::Header(h) if i == 0 => {
                if h.format != REPLAY_FORMAT || h.version != REPLAY_VERSION {
                    return Err(ReplayError::Format(format!("{} v{}", h.format, h.version)));
                }
                header = Some(h);
            }
            ReplayLine::Step(s) if header.is_some() && outcome.is_none() => {
                if s.step as usize != steps.len() + 1 {
                    return Err(malformed(format!(
                        "expected step {}, found {}",
                        steps.len() + 1,
                        s.step
                    )));
                }
                steps.push(s);
            }
            ReplayLine::Outcome(o) if header.is_some() && outcome.is_none() => {
                if o.steps as usize != steps.len() {
                    return Err(malformed(
                        "outcome step count disagrees with step lines".into(),
                    ));
                }
                outcome = Some(o.outcome);
            }
            _ => return Err(malformed("unexpected line".into())),
        }
    }
    let header = header.ok_or(ReplayError::Malformed {
        line: 1,
        message: "missing header".into(),
    })?;
    let outcome = outcome.ok_or(ReplayError::Malformed {
        line: steps.len() + 2,
        message: "missing outcome".into(),
    })?;
    Ok(EpisodeRecord {
        header,
        steps,
        outcome,
        replay_hash: sealed,
    })
}

/// Re-simulates the recorded actions on `map` and checks every stored state
/// and the outcome bit for bit.
pub fn verify_replay(record: &EpisodeRecord, map: &MapSpec) -> Result<(), ReplayError> {
    if record.header.map_checksum != map.checksum {
        return Err(ReplayError::ChecksumMismatch {
            expected: record.header.map_checksum.clone(),
            actual: map.checksum.clone(),
        });
    }
    let mut map = map.clone();
    map.limits = EpisodeLimits {
        max_steps: record.header.max_steps,
    };
    let mut state = init_game(record.header.kind, &map, record.header.seed)
        .map_err(|e| ReplayError::Simulation(e.to_string()))?;
    if state.world.bodies != record.header.bodies {
        return Err(ReplayError::Diverged { step: 0 });
    }
    for entry in &record.steps {
        let (next, events) = step_game(&state, entry.actions[0], entry.actions[1])
            .map_err(|e| ReplayError::Simulation(e.to_string()))?;
        if next.world.bodies != entry.bodies || events != entry.events {
            return Err(ReplayError::Diverged { step: entry.step });
        }
        state = next;
    }
    let consistent = match state.outcome {
        Some(o) => o == record.outcome,
        None => record.outcome.reason == Reason::Forfeit,
    };
    if consistent {
        Ok(())
    } else {
        Err(ReplayError::Diverged {
            step: record.step_count(),
        })
    }
}
