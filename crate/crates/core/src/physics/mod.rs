//! Rigid-disc dynamics with continuous collision detection.

mod body;
mod control;
mod params;
mod resolve;
mod shape;
pub mod toi;
mod world;

pub use body::{BodyId, BodyKind, DiscBody, Side};
pub use control::{apply_control, Action};
pub use params::{PhysicsParams, AGENT_MASS, AGENT_RADIUS};
pub use resolve::{resolve_disc_disc, resolve_disc_static};
pub use shape::{Geometry, Material, ShapeId, ShapeTag, StaticShape};
pub use toi::{toi_disc_arc, toi_disc_disc, toi_disc_segment};
pub use world::{step_world, Contact, ImpactEvent, ImpactKind, World};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PhysicsError {
    #[error("action has non-finite components")]
    MalformedAction,
    #[error("sensor shapes cannot be collided with")]
    SensorContact,
    #[error("invalid shape: {0}")]
    InvalidShape(&'static str),
    #[error("physics parameters out of range")]
    InvalidParams,
}
