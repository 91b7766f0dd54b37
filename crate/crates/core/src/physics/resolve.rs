use crate::geom::Vec2;

use super::{DiscBody, Material, PhysicsError, PhysicsParams, StaticShape};

/// Elastic impulse between two touching discs along their contact normal.
///
/// Separating (or tangentially sliding) pairs are returned unchanged.
pub fn resolve_disc_disc(a: &DiscBody, b: &DiscBody) -> (Vec2, Vec2) {
    let Some(n) = (b.position - a.position).normalized() else {
        return (a.velocity, b.velocity);
    };
    let closing = (b.velocity - a.velocity).dot(n);
    if closing >= 0.0 {
        return (a.velocity, b.velocity);
    }
    // j = 2 * reduced mass * closing speed
    let j = -2.0 * closing * (a.mass * b.mass) / (a.mass + b.mass);
    (a.velocity - n * (j / a.mass), b.velocity + n * (j / b.mass))
}

/// Reflection of a disc that touches an immovable obstacle with outward
/// normal `n` (pointing from the obstacle to the disc center).
pub(crate) fn reflect(velocity: Vec2, n: Vec2) -> Vec2 {
    let vn = velocity.dot(n);
    if vn >= 0.0 {
        return velocity;
    }
    velocity - n * (2.0 * vn)
}

/// Bounce off a static wall. Elastic walls mirror the velocity about the
/// contact normal; sticky walls mirror and then scale by `mu_sticky`.
pub fn resolve_disc_static(
    body: &DiscBody,
    shape: &StaticShape,
    params: &PhysicsParams,
) -> Result<Vec2, PhysicsError> {
    if shape.material == Material::Sensor {
        return Err(PhysicsError::SensorContact);
    }
    let contact = shape.geometry.closest_point(body.position);
    let Some(n) = (body.position - contact).normalized() else {
        return Ok(body.velocity);
    };
    if body.velocity.dot(n) >= 0.0 {
        return Ok(body.velocity);
    }
    let out = reflect(body.velocity, n);
    Ok(match shape.material {
        Material::Sticky => out * params.mu_sticky,
        _ => out,
    })
}
