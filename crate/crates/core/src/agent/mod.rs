//! Agent contract: wire protocol, in-process baselines, external processes,
//! the episode runner and sealed replays.

mod golden;
mod policy;
mod protocol;
mod record;
mod runner;
mod seat;
mod spec;

pub use golden::{
    golden_files, golden_messages, golden_rejections, write_golden_files, MESSAGES_FILE,
    REJECTIONS_FILE,
};
pub use policy::{Noop, Policy, RandomPolicy, Scripted, ScriptedForward};
pub use protocol::{
    decode_message, encode_message, Message, ProtocolError, MESSAGE_TYPES, PROTOCOL_VERSION,
};
pub use record::{
    parse_replay, verify_replay, EpisodeRecord, OutcomeEntry, ReplayError, ReplayHeader, StepEntry,
    REPLAY_FORMAT, REPLAY_VERSION,
};
pub use runner::{run_episode, run_series, EpisodeOptions};
pub use seat::{Agent, AgentFault, ExternalAgent, PolicyAgent, Seat, SeatStatus};
pub use spec::AgentSpec;
