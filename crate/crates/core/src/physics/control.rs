use serde::{Deserialize, Serialize};

use crate::geom::{heading_vector, normalize_angle, Vec2};

use super::{DiscBody, PhysicsError, PhysicsParams};

/// Driving force along the heading and a heading change in radians.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Action {
    pub force: f64,
    pub steer: f64,
}

impl Action {
    pub const ZERO: Action = Action {
        force: 0.0,
        steer: 0.0,
    };

    pub fn new(force: f64, steer: f64) -> Self {
        Self { force, steer }
    }

    pub fn is_finite(&self) -> bool {
        self.force.is_finite() && self.steer.is_finite()
    }
}

/// Applies one step of control to a body, returning the updated body and the
/// acceleration it should receive during the next physics step.
///
/// A fatigued body (energy already zero) ignores the action entirely.
pub fn apply_control(
    body: &DiscBody,
    action: Action,
    params: &PhysicsParams,
) -> Result<(DiscBody, Vec2), PhysicsError> {
    if !action.is_finite() {
        return Err(PhysicsError::MalformedAction);
    }
    let mut out = body.clone();
    if body.energy <= 0.0 {
        out.energy = 0.0;
        return Ok((out, Vec2::ZERO));
    }
    let force = action.force.clamp(params.f_min, params.f_max);
    let steer = action.steer.clamp(-params.steer_max, params.steer_max);
    out.heading = normalize_angle(body.heading + steer);
    let accel = heading_vector(out.heading) * (force / body.mass);
    out.energy = (body.energy - params.c_energy * force.abs() * params.tau).max(0.0);
    Ok((out, accel))
}
