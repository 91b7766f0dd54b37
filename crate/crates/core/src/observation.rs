//! Egocentric, partially observable grid views.
//!
//! Each agent sees a square window ahead of itself, sampled at cell centers
//! and painted with the color code of the highest-priority object covering
//! each sample. The grid is laid out in the agent's frame: row 0 is farthest
//! ahead and column 0 is leftmost.

use serde::{Deserialize, Serialize};

use crate::geom::Vec2;
use crate::physics::{BodyId, DiscBody, Geometry, Material, Side, StaticShape, World};

/// Global color codes.
pub mod color {
    pub const BACKGROUND: u8 = 0;
    pub const STICKY_WALL: u8 = 1;
    pub const ELASTIC_WALL: u8 = 2;
    pub const SENSOR: u8 = 3;
    pub const SELF: u8 = 4;
    pub const OPPONENT: u8 = 5;
    pub const OWN_OBJECT: u8 = 6;
    pub const OPPONENT_OBJECT: u8 = 7;
    pub const NEUTRAL_OBJECT: u8 = 8;

    pub fn is_registered(code: u8) -> bool {
        code <= NEUTRAL_OBJECT
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VisionParams {
    pub window_side: f64,
    /// Distance from the agent center to the window center along the heading.
    pub forward_offset: f64,
    pub grid_size: usize,
    /// Half thickness used when sampling line shapes.
    pub line_half_width: f64,
}

impl Default for VisionParams {
    fn default() -> Self {
        Self {
            window_side: 200.0,
            forward_offset: 80.0,
            grid_size: 40,
            line_half_width: 2.5,
        }
    }
}

impl VisionParams {
    pub fn cell_side(&self) -> f64 {
        self.window_side / self.grid_size as f64
    }

    /// Agent-frame sample point of cell `(row, col)`.
    pub fn cell_center(&self, row: usize, col: usize) -> Vec2 {
        let half = self.window_side / 2.0;
        let cell = self.cell_side();
        Vec2::new(
            -half + (col as f64 + 0.5) * cell,
            self.forward_offset + half - (row as f64 + 0.5) * cell,
        )
    }
}

/// Codes painted for each object class, from the viewer's perspective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColorTable {
    pub background: u8,
    pub sticky_wall: u8,
    pub elastic_wall: u8,
    pub sensor: u8,
    pub self_body: u8,
    pub opponent: u8,
    pub own_object: u8,
    pub opponent_object: u8,
    pub neutral_object: u8,
}

impl Default for ColorTable {
    fn default() -> Self {
        Self {
            background: color::BACKGROUND,
            sticky_wall: color::STICKY_WALL,
            elastic_wall: color::ELASTIC_WALL,
            sensor: color::SENSOR,
            self_body: color::SELF,
            opponent: color::OPPONENT,
            own_object: color::OWN_OBJECT,
            opponent_object: color::OPPONENT_OBJECT,
            neutral_object: color::NEUTRAL_OBJECT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentObservation {
    pub grid_size: usize,
    /// Row-major `grid_size * grid_size` color codes.
    pub grid: Vec<u8>,
    pub energy_fraction: f64,
    pub controllable: bool,
}

impl AgentObservation {
    pub fn cell(&self, row: usize, col: usize) -> u8 {
        self.grid[row * self.grid_size + col]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ObservationError {
    #[error("no body with id {0}")]
    UnknownAgent(BodyId),
}

/// Pose from which a view is rendered.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewer {
    pub position: Vec2,
    pub heading: f64,
    /// Body painted as "self", if the viewer is embodied.
    pub self_id: Option<BodyId>,
    pub side: Side,
    pub energy_fraction: f64,
    pub controllable: bool,
}

/// Translates by `-agent_position`, then rotates so the agent's forward
/// direction becomes +y.
pub fn world_to_agent_frame(point: Vec2, agent_position: Vec2, agent_heading: f64) -> Vec2 {
    (point - agent_position).rotated(agent_heading)
}

/// Priority ranks; higher paints over lower.
pub(crate) mod rank {
    pub const ELASTIC: u8 = 1;
    pub const STICKY: u8 = 2;
    pub const SENSOR: u8 = 3;
    pub const DYNAMIC: u8 = 4;
    pub const OPPONENT: u8 = 5;
    pub const SELF: u8 = 6;
}

pub(crate) fn shape_rank(shape: &StaticShape) -> u8 {
    match shape.material {
        Material::Elastic => rank::ELASTIC,
        Material::Sticky => rank::STICKY,
        Material::Sensor => rank::SENSOR,
    }
}

/// Rank and color of a body as seen by `viewer`.
pub(crate) fn body_paint(body: &DiscBody, viewer: &Viewer, colors: &ColorTable) -> (u8, u8) {
    if Some(body.id) == viewer.self_id {
        return (rank::SELF, colors.self_body);
    }
    if body.kind.is_agent() && body.owner != Some(viewer.side) {
        return (rank::OPPONENT, colors.opponent);
    }
    let code = match body.owner {
        Some(s) if s == viewer.side => colors.own_object,
        Some(_) => colors.opponent_object,
        None => colors.neutral_object,
    };
    (rank::DYNAMIC, code)
}

/// Observation for the agent body `agent_id`.
pub fn render_observation(
    world: &World,
    agent_id: BodyId,
    vision: &VisionParams,
    colors: &ColorTable,
    e_max: f64,
) -> Result<AgentObservation, ObservationError> {
    let body = world
        .body(agent_id)
        .ok_or(ObservationError::UnknownAgent(agent_id))?;
    let viewer = Viewer {
        position: body.position,
        heading: body.heading,
        self_id: Some(body.id),
        side: body.owner.unwrap_or(Side::A),
        energy_fraction: (body.energy / e_max).clamp(0.0, 1.0),
        controllable: body.controllable,
    };
    Ok(render_view(world, &viewer, vision, colors))
}

/// Renders the grid seen from an arbitrary viewer pose.
pub fn render_view(
    world: &World,
    viewer: &Viewer,
    vision: &VisionParams,
    colors: &ColorTable,
) -> AgentObservation {
    let g = vision.grid_size;
    let mut canvas = Canvas {
        vision,
        ranks: vec![0u8; g * g],
        grid: vec![colors.background; g * g],
    };
    let to_local = |p: Vec2| world_to_agent_frame(p, viewer.position, viewer.heading);
    let w = vision.line_half_width;

    for shape in &world.shapes {
        let color = match shape.material {
            Material::Elastic => colors.elastic_wall,
            Material::Sticky => colors.sticky_wall,
            Material::Sensor => colors.sensor,
        };
        let local = match shape.geometry {
            Geometry::Segment { a, b } => Geometry::Segment {
                a: to_local(a),
                b: to_local(b),
            },
            Geometry::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => Geometry::Arc {
                center: to_local(center),
                radius,
                start_angle: start_angle + viewer.heading,
                end_angle: end_angle + viewer.heading,
            },
        };
        let (lo, hi) = local.bounds();
        let pad = Vec2::new(w, w);
        canvas.paint(lo - pad, hi + pad, shape_rank(shape), color, |p| {
            local.distance(p) <= w
        });
    }
    for body in &world.bodies {
        let (r, color) = body_paint(body, viewer, colors);
        let c = to_local(body.position);
        let rad = body.radius;
        let pad = Vec2::new(rad, rad);
        canvas.paint(c - pad, c + pad, r, color, |p| p.distance(c) <= rad);
    }

    AgentObservation {
        grid_size: g,
        grid: canvas.grid,
        energy_fraction: viewer.energy_fraction,
        controllable: viewer.controllable,
    }
}

struct Canvas<'a> {
    vision: &'a VisionParams,
    ranks: Vec<u8>,
    grid: Vec<u8>,
}

impl Canvas<'_> {
    /// Paints every cell whose sample point lies in the agent-frame box
    /// `[lo, hi]` and satisfies `covers`, unless a higher or equal rank got
    /// there first.
    fn paint(&mut self, lo: Vec2, hi: Vec2, rank: u8, color: u8, covers: impl Fn(Vec2) -> bool) {
        let g = self.vision.grid_size;
        let half = self.vision.window_side / 2.0;
        let cell = self.vision.cell_side();
        let top = self.vision.forward_offset + half;
        let eps = 1e-9;
        let col_lo = ((lo.x + half) / cell - 0.5 - eps).ceil().max(0.0);
        let col_hi = ((hi.x + half) / cell - 0.5 + eps)
            .floor()
            .min(g as f64 - 1.0);
        let row_lo = ((top - hi.y) / cell - 0.5 - eps).ceil().max(0.0);
        let row_hi = ((top - lo.y) / cell - 0.5 + eps)
            .floor()
            .min(g as f64 - 1.0);
        if col_lo > col_hi || row_lo > row_hi {
            return;
        }
        for row in row_lo as usize..=row_hi as usize {
            for col in col_lo as usize..=col_hi as usize {
                let idx = row * g + col;
                if self.ranks[idx] >= rank {
                    continue;
                }
                if covers(self.vision.cell_center(row, col)) {
                    self.ranks[idx] = rank;
                    self.grid[idx] = color;
                }
            }
        }
    }
}
