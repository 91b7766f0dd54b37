use serde::{Deserialize, Serialize};

use super::PhysicsError;

/// Dynamics constants shared by every scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicsParams {
    /// Seconds per control step.
    pub tau: f64,
    /// Per-step velocity retention for agents.
    pub gamma_agent: f64,
    /// Per-step velocity retention for balls, pucks and billiard balls.
    pub gamma_ball: f64,
    /// Per-step velocity retention for curling rocks.
    pub gamma_ice: f64,
    /// Speed multiplier applied after hitting a sticky wall.
    pub mu_sticky: f64,
    pub f_min: f64,
    pub f_max: f64,
    /// Largest heading change per step, radians.
    pub steer_max: f64,
    /// Energy spent per unit force per second.
    pub c_energy: f64,
    pub e_max: f64,
    /// Impacts a single body may take within one step before it is frozen.
    pub max_impacts_per_step: u32,
}

impl Default for PhysicsParams {
    fn default() -> Self {
        Self {
            tau: 0.1,
            gamma_agent: 0.98,
            gamma_ball: 0.99,
            gamma_ice: 0.96,
            mu_sticky: 0.1,
            f_min: -100.0,
            f_max: 100.0,
            steer_max: 30f64.to_radians(),
            c_energy: 0.1,
            e_max: 1000.0,
            max_impacts_per_step: 8,
        }
    }
}

impl PhysicsParams {
    pub fn validate(&self) -> Result<(), PhysicsError> {
        let gamma_ok = |g: f64| g > 0.0 && g <= 1.0;
        let ok = self.tau > 0.0
            && gamma_ok(self.gamma_agent)
            && gamma_ok(self.gamma_ball)
            && gamma_ok(self.gamma_ice)
            && (0.0..1.0).contains(&self.mu_sticky)
            && self.f_min < 0.0
            && self.f_max > 0.0
            && self.steer_max > 0.0
            && self.c_energy >= 0.0
            && self.e_max > 0.0
            && self.max_impacts_per_step > 0;
        if ok {
            Ok(())
        } else {
            Err(PhysicsError::InvalidParams)
        }
    }
}

/// Agent disc radius in world units.
pub const AGENT_RADIUS: f64 = 15.0;
/// Agent disc mass.
pub const AGENT_MASS: f64 = 1.0;
