use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use super::policy::{Noop, RandomPolicy, ScriptedForward};
use super::seat::{ExternalAgent, PolicyAgent, Seat};

/// How to launch an agent: a bundled baseline or an external command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AgentSpec {
    Noop,
    Random(u64),
    ScriptedForward,
    /// Shell command speaking the wire protocol on stdin/stdout.
    Command(String),
}

impl FromStr for AgentSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Some(cmd) = s.strip_prefix("cmd:") {
            if cmd.trim().is_empty() {
                return Err("empty agent command".into());
            }
            return Ok(AgentSpec::Command(cmd.to_string()));
        }
        match s {
            "noop" => Ok(AgentSpec::Noop),
            "random" => Ok(AgentSpec::Random(0)),
            "forward" | "scripted_forward" => Ok(AgentSpec::ScriptedForward),
            _ => match s.strip_prefix("random:") {
                Some(seed) => seed
                    .parse()
                    .map(AgentSpec::Random)
                    .map_err(|_| format!("invalid random seed '{seed}'")),
                None => Err(format!(
                    "unknown agent '{s}' (expected noop, random[:SEED], scripted_forward or cmd:COMMAND)"
                )),
            },
        }
    }
}

impl fmt::Display for AgentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AgentSpec::Noop => f.write_str("noop"),
            AgentSpec::Random(seed) => write!(f, "random:{seed}"),
            AgentSpec::ScriptedForward => f.write_str("scripted_forward"),
            AgentSpec::Command(cmd) => write!(f, "cmd:{cmd}"),
        }
    }
}

impl AgentSpec {
    /// Builds a seat. A command that cannot be spawned yields a seat that
    /// is already crashed, so its episodes are forfeited.
    pub fn seat(&self, deadline: Option<Duration>) -> Seat {
        let seat = match self {
            AgentSpec::Noop => Seat::policy(Noop),
            AgentSpec::Random(seed) => Seat::policy(RandomPolicy::new(*seed)),
            AgentSpec::ScriptedForward => Seat::policy(ScriptedForward::default()),
            AgentSpec::Command(cmd) => match ExternalAgent::spawn(cmd) {
                Ok(agent) => Seat::new(Box::new(agent)),
                Err(e) => {
                    let mut seat = Seat::new(Box::new(PolicyAgent::new(Box::new(Noop))));
                    seat.crash(e.to_string());
                    seat
                }
            },
        };
        seat.with_deadline(deadline)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn descriptors_round_trip() {
        for s in [
            "noop",
            "random:7",
            "scripted_forward",
            "cmd:python3 bot.py --fast",
        ] {
            let spec: AgentSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert_eq!(
            "forward".parse::<AgentSpec>(),
            Ok(AgentSpec::ScriptedForward)
        );
        assert_eq!("random".parse::<AgentSpec>(), Ok(AgentSpec::Random(0)));
        assert!("random:x".parse::<AgentSpec>().is_err());
        assert!("wizard".parse::<AgentSpec>().is_err());
        assert!("cmd:".parse::<AgentSpec>().is_err());
    }
}
