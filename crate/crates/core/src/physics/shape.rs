use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::geom::{closest_point_on_segment, Vec2};

use super::PhysicsError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Material {
    /// Perfect reflection.
    Elastic,
    /// Reflection followed by a speed cut of `mu_sticky`.
    Sticky,
    /// Never touches velocities; only reports center crossings.
    Sensor,
}

/// Scenario role of a static shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeTag {
    Finish,
    Border,
    /// Goal defended by side A.
    GoalA,
    /// Goal defended by side B.
    GoalB,
    Release,
    Pocket,
    Midline,
}

/// Segment or circular arc. Arc angles are measured counter-clockwise from +x
/// and the arc runs counter-clockwise from `start_angle` to `end_angle`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Geometry {
    Segment {
        a: Vec2,
        b: Vec2,
    },
    Arc {
        center: Vec2,
        radius: f64,
        start_angle: f64,
        end_angle: f64,
    },
}

impl Geometry {
    pub fn validate(&self) -> Result<(), PhysicsError> {
        match *self {
            Geometry::Segment { a, b } => {
                if !a.is_finite() || !b.is_finite() || a == b {
                    return Err(PhysicsError::InvalidShape(
                        "segment endpoints must be finite and distinct",
                    ));
                }
            }
            Geometry::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => {
                if !center.is_finite() || !radius.is_finite() || radius <= 0.0 {
                    return Err(PhysicsError::InvalidShape("arc radius must be positive"));
                }
                let span = end_angle - start_angle;
                if !(span > 0.0 && span <= 2.0 * PI) {
                    return Err(PhysicsError::InvalidShape("arc span must lie in (0, 2pi]"));
                }
            }
        }
        Ok(())
    }

    /// Closest point of the geometry to `p`.
    pub fn closest_point(&self, p: Vec2) -> Vec2 {
        match *self {
            Geometry::Segment { a, b } => closest_point_on_segment(p, a, b),
            Geometry::Arc { center, radius, .. } => {
                let d = p - center;
                match d.normalized() {
                    Some(dir) if self.arc_contains_direction(dir) => center + dir * radius,
                    _ => {
                        let (e0, e1) = self.arc_endpoints().expect("arc");
                        if p.distance(e0) <= p.distance(e1) {
                            e0
                        } else {
                            e1
                        }
                    }
                }
            }
        }
    }

    pub fn distance(&self, p: Vec2) -> f64 {
        p.distance(self.closest_point(p))
    }

    /// Endpoints of an arc, `None` for segments. Full circles still report
    /// their (coincident) seam points.
    pub fn arc_endpoints(&self) -> Option<(Vec2, Vec2)> {
        match *self {
            Geometry::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => Some((
                center + Vec2::new(start_angle.cos(), start_angle.sin()) * radius,
                center + Vec2::new(end_angle.cos(), end_angle.sin()) * radius,
            )),
            Geometry::Segment { .. } => None,
        }
    }

    pub fn is_full_circle(&self) -> bool {
        match *self {
            Geometry::Arc {
                start_angle,
                end_angle,
                ..
            } => end_angle - start_angle >= 2.0 * PI,
            Geometry::Segment { .. } => false,
        }
    }

    /// Whether a direction from the arc center falls inside the angular span.
    pub fn arc_contains_direction(&self, dir: Vec2) -> bool {
        match *self {
            Geometry::Arc {
                start_angle,
                end_angle,
                ..
            } => {
                let span = end_angle - start_angle;
                if span >= 2.0 * PI {
                    return true;
                }
                let rel = (dir.y.atan2(dir.x) - start_angle).rem_euclid(2.0 * PI);
                rel <= span
            }
            Geometry::Segment { .. } => false,
        }
    }

    /// Reflection across the world y-axis.
    pub fn mirrored(&self) -> Geometry {
        match *self {
            Geometry::Segment { a, b } => Geometry::Segment {
                a: a.mirror_x(),
                b: b.mirror_x(),
            },
            Geometry::Arc {
                center,
                radius,
                start_angle,
                end_angle,
            } => Geometry::Arc {
                center: center.mirror_x(),
                radius,
                start_angle: PI - end_angle,
                end_angle: PI - start_angle,
            },
        }
    }

    /// Axis-aligned bounds `(min, max)`.
    pub fn bounds(&self) -> (Vec2, Vec2) {
        match *self {
            Geometry::Segment { a, b } => (
                Vec2::new(a.x.min(b.x), a.y.min(b.y)),
                Vec2::new(a.x.max(b.x), a.y.max(b.y)),
            ),
            Geometry::Arc { center, radius, .. } => (
                Vec2::new(center.x - radius, center.y - radius),
                Vec2::new(center.x + radius, center.y + radius),
            ),
        }
    }
}

pub type ShapeId = u32;

/// Static map geometry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StaticShape {
    pub geometry: Geometry,
    pub material: Material,
    pub collides_agents: bool,
    pub collides_objects: bool,
    pub color_code: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<ShapeTag>,
}

impl StaticShape {
    pub fn wall(geometry: Geometry, material: Material) -> Self {
        let color_code = match material {
            Material::Elastic => crate::observation::color::ELASTIC_WALL,
            Material::Sticky => crate::observation::color::STICKY_WALL,
            Material::Sensor => crate::observation::color::SENSOR,
        };
        Self {
            geometry,
            material,
            collides_agents: true,
            collides_objects: true,
            color_code,
            tag: None,
        }
    }

    pub fn sensor(geometry: Geometry, tag: Option<ShapeTag>) -> Self {
        Self {
            tag,
            ..Self::wall(geometry, Material::Sensor)
        }
    }

    /// Whether this shape interacts with the given body class (collision for
    /// walls, detection for sensors).
    pub fn affects(&self, is_agent: bool) -> bool {
        if is_agent {
            self.collides_agents
        } else {
            self.collides_objects
        }
    }

    pub fn is_solid_for(&self, is_agent: bool) -> bool {
        self.material != Material::Sensor && self.affects(is_agent)
    }
}
