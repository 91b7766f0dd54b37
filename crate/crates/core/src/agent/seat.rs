//! Agents as seen by the runner: anything that exchanges protocol messages.

use std::collections::VecDeque;
use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::Duration;

use crate::observation::AgentObservation;
use crate::physics::{Action, Side};

use super::policy::Policy;
use super::protocol::{decode_message, encode_message, Message, ProtocolError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AgentFault {
    #[error("no reply before the deadline")]
    Timeout,
    #[error(transparent)]
    Malformed(#[from] ProtocolError),
    #[error("unexpected '{0}' message")]
    Unexpected(&'static str),
    #[error("agent stream closed")]
    Closed,
    #[error("agent could not be started: {0}")]
    Spawn(String),
}

/// A participant speaking the wire protocol.
pub trait Agent: Send {
    fn label(&self) -> String;

    fn send(&mut self, msg: &Message) -> Result<(), AgentFault>;

    /// Next message from the agent. `None` waits indefinitely.
    fn recv(&mut self, deadline: Option<Duration>) -> Result<Message, AgentFault>;

    /// Whether the runner should enforce wall-clock deadlines.
    fn is_external(&self) -> bool {
        false
    }
}

/// Adapts an in-process [`Policy`] to the message contract.
pub struct PolicyAgent {
    policy: Box<dyn Policy>,
    grid_size: usize,
    outbox: VecDeque<Message>,
}

impl PolicyAgent {
    pub fn new(policy: Box<dyn Policy>) -> Self {
        Self {
            policy,
            grid_size: 0,
            outbox: VecDeque::new(),
        }
    }
}

impl Agent for PolicyAgent {
    fn label(&self) -> String {
        self.policy.name()
    }

    fn send(&mut self, msg: &Message) -> Result<(), AgentFault> {
        match msg {
            Message::Hello { grid_size, .. } => {
                self.grid_size = *grid_size;
                self.outbox.push_back(Message::Ready {
                    name: self.policy.name(),
                });
            }
            Message::Reset {
                episode_index,
                side,
            } => self.policy.reset(*episode_index, *side),
            Message::Observe {
                step,
                grid,
                energy_fraction,
                controllable,
            } => {
                let obs = AgentObservation {
                    grid_size: self.grid_size,
                    grid: grid.clone(),
                    energy_fraction: *energy_fraction,
                    controllable: *controllable,
                };
                let Action { force, steer } = self.policy.act(*step, &obs);
                self.outbox.push_back(Message::Act { force, steer });
            }
            Message::Result { .. } => {}
            Message::Ready { .. } | Message::Act { .. } => {
                return Err(AgentFault::Unexpected(msg.type_name()))
            }
        }
        Ok(())
    }

    fn recv(&mut self, _deadline: Option<Duration>) -> Result<Message, AgentFault> {
        self.outbox.pop_front().ok_or(AgentFault::Timeout)
    }
}

/// An agent running as a child process (`sh -c <command>`), talking over
/// its standard input and output.
pub struct ExternalAgent {
    command: String,
    child: Child,
    stdin: Option<ChildStdin>,
    lines: Receiver<Option<String>>,
    closed: bool,
}

impl ExternalAgent {
    pub fn spawn(command: &str) -> Result<Self, AgentFault> {
        let mut child = Command::new("sh")
            .arg("-c")
            .arg(command)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| AgentFault::Spawn(e.to_string()))?;
        let stdout = child.stdout.take().expect("piped stdout");
        let stdin = child.stdin.take();
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            let reader = BufReader::new(stdout);
            for line in reader.lines() {
                match line {
                    Ok(l) => {
                        if tx.send(Some(l)).is_err() {
                            return;
                        }
                    }
                    Err(_) => break,
                }
            }
            let _ = tx.send(None);
        });
        Ok(Self {
            command: command.to_string(),
            child,
            stdin,
            lines: rx,
            closed: false,
        })
    }

    /// Discards replies that arrived after their deadline.
    fn drain_stale(&mut self) {
        while let Ok(line) = self.lines.try_recv() {
            if line.is_none() {
                self.closed = true;
            }
        }
    }
}

impl Agent for ExternalAgent {
    fn label(&self) -> String {
        format!("cmd:{}", self.command)
    }

    fn send(&mut self, msg: &Message) -> Result<(), AgentFault> {
        if matches!(msg, Message::Observe { .. }) {
            self.drain_stale();
        }
        if self.closed {
            return Err(AgentFault::Closed);
        }
        let stdin = self.stdin.as_mut().ok_or(AgentFault::Closed)?;
        let line = encode_message(msg);
        if stdin
            .write_all(line.as_bytes())
            .and_then(|_| stdin.flush())
            .is_err()
        {
            self.stdin = None;
            self.closed = true;
            return Err(AgentFault::Closed);
        }
        Ok(())
    }

    fn recv(&mut self, deadline: Option<Duration>) -> Result<Message, AgentFault> {
        if self.closed {
            return Err(AgentFault::Closed);
        }
        let line = match deadline {
            Some(d) => self.lines.recv_timeout(d).map_err(|e| match e {
                RecvTimeoutError::Timeout => AgentFault::Timeout,
                RecvTimeoutError::Disconnected => AgentFault::Closed,
            })?,
            None => self.lines.recv().map_err(|_| AgentFault::Closed)?,
        };
        match line {
            Some(l) => Ok(decode_message(&l)?),
            None => {
                self.closed = true;
                Err(AgentFault::Closed)
            }
        }
    }

    fn is_external(&self) -> bool {
        true
    }
}

impl Drop for ExternalAgent {
    fn drop(&mut self) {
        self.stdin = None;
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

/// Where a seat stands in its session.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeatStatus {
    Fresh,
    Ready {
        name: String,
    },
    /// Failed to start, or the stream closed; forfeits everything after.
    Crashed {
        reason: String,
    },
}

/// An agent plus the session state the runner keeps for it.
pub struct Seat {
    pub agent: Box<dyn Agent>,
    pub status: SeatStatus,
    /// Per-step reply deadline for external agents.
    pub deadline: Option<Duration>,
    /// Deadline for the initial `Ready`.
    pub startup_deadline: Duration,
}

impl Seat {
    pub fn new(agent: Box<dyn Agent>) -> Self {
        Self {
            agent,
            status: SeatStatus::Fresh,
            deadline: Some(Duration::from_millis(100)),
            startup_deadline: Duration::from_secs(10),
        }
    }

    pub fn policy(policy: impl Policy + 'static) -> Self {
        Self::new(Box::new(PolicyAgent::new(Box::new(policy))))
    }

    pub fn with_deadline(mut self, deadline: Option<Duration>) -> Self {
        self.deadline = deadline;
        self
    }

    /// Display name: the name sent in `Ready`, else the launch label.
    pub fn name(&self) -> String {
        match &self.status {
            SeatStatus::Ready { name } => name.clone(),
            _ => self.agent.label(),
        }
    }

    pub fn is_crashed(&self) -> bool {
        matches!(self.status, SeatStatus::Crashed { .. })
    }

    pub fn crash(&mut self, reason: impl Into<String>) {
        self.status = SeatStatus::Crashed {
            reason: reason.into(),
        };
    }

    /// Performs the Hello/Ready handshake once per session.
    pub fn ensure_started(&mut self, hello: &Message) -> bool {
        match self.status {
            SeatStatus::Ready { .. } => return true,
            SeatStatus::Crashed { .. } => return false,
            SeatStatus::Fresh => {}
        }
        let wait = self.agent.is_external().then_some(self.startup_deadline);
        let result = self.agent.send(hello).and_then(|_| self.agent.recv(wait));
        match result {
            Ok(Message::Ready { name }) => {
                self.status = SeatStatus::Ready { name };
                true
            }
            Ok(other) => {
                self.crash(format!("expected 'ready', got '{}'", other.type_name()));
                false
            }
            Err(e) => {
                self.crash(e.to_string());
                false
            }
        }
    }

    /// Per-step deadline actually enforced for this seat.
    pub fn step_deadline(&self) -> Option<Duration> {
        if self.agent.is_external() {
            self.deadline
        } else {
            None
        }
    }
}

/// Seat side helper for iteration.
pub(crate) fn seat_side(i: usize) -> Side {
    if i == 0 {
        Side::A
    } else {
        Side::B
    }
}
