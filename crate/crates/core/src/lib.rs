//! Deterministic two-dimensional disc-sports simulator.
//!
//! Energy-limited disc agents with egocentric partial vision compete in six
//! zero-sum scenarios (Running, Wrestling, Curling, Table-Hockey, Football,
//! Billiard) and in shuffled multi-scenario series. The crate also carries the
//! newline-delimited agent protocol, the episode runner and a Swiss-system
//! tournament harness.

pub mod agent;
pub mod fixtures;
pub mod geom;
pub mod observation;
pub mod physics;
pub mod scenarios;
pub mod tournament;

pub use geom::Vec2;
pub use physics::{Action, DiscBody, PhysicsParams, Side, World};
