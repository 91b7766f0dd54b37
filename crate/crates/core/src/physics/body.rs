use serde::{Deserialize, Serialize};

use crate::geom::Vec2;

/// One of the two competitors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Side::A => 0,
            Side::B => 1,
        }
    }

    pub const BOTH: [Side; 2] = [Side::A, Side::B];
}

impl std::fmt::Display for Side {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Side::A => "a",
            Side::B => "b",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BodyKind {
    Agent,
    Ball,
    Puck,
    Rock,
    Billiard,
}

impl BodyKind {
    pub fn is_agent(self) -> bool {
        matches!(self, BodyKind::Agent)
    }
}

pub type BodyId = u32;

/// A moving disc: agent, ball, puck, curling rock or billiard ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscBody {
    pub id: BodyId,
    pub kind: BodyKind,
    pub position: Vec2,
    pub velocity: Vec2,
    /// Compass heading in `(-PI, PI]`; 0 faces +y, positive is clockwise.
    pub heading: f64,
    pub radius: f64,
    pub mass: f64,
    pub energy: f64,
    pub controllable: bool,
    /// Side that owns the body, if any.
    pub owner: Option<Side>,
    /// Absolute color code used by top-down renderers.
    pub color_code: u8,
}

impl DiscBody {
    pub fn agent(id: BodyId, side: Side, position: Vec2, heading: f64, e_max: f64) -> Self {
        Self {
            id,
            kind: BodyKind::Agent,
            position,
            velocity: Vec2::ZERO,
            heading,
            radius: super::AGENT_RADIUS,
            mass: super::AGENT_MASS,
            energy: e_max,
            controllable: true,
            owner: Some(side),
            color_code: match side {
                Side::A => crate::observation::color::SELF,
                Side::B => crate::observation::color::OPPONENT,
            },
        }
    }

    /// A passive dynamic object.
    pub fn object(
        id: BodyId,
        kind: BodyKind,
        position: Vec2,
        radius: f64,
        mass: f64,
        owner: Option<Side>,
    ) -> Self {
        let color_code = match owner {
            Some(Side::A) => crate::observation::color::OWN_OBJECT,
            Some(Side::B) => crate::observation::color::OPPONENT_OBJECT,
            None => crate::observation::color::NEUTRAL_OBJECT,
        };
        Self {
            id,
            kind,
            position,
            velocity: Vec2::ZERO,
            heading: 0.0,
            radius,
            mass,
            energy: 0.0,
            controllable: false,
            owner,
            color_code,
        }
    }

    pub fn speed(&self) -> f64 {
        self.velocity.length()
    }

    pub fn kinetic_energy(&self) -> f64 {
        0.5 * self.mass * self.velocity.length_sq()
    }
}
