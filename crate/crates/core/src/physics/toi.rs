//! Continuous time-of-impact queries.
//!
//! Every query returns the earliest `t` in `[0, horizon]` at which the moving
//! disc first touches the target while approaching it, or `Some(0.0)` when the
//! disc already overlaps the target at `t = 0`.

use crate::geom::Vec2;

use super::{DiscBody, Geometry};

/// Both roots of `|d + t*v| = rho` in ascending order.
fn circle_roots(d: Vec2, v: Vec2, rho: f64) -> Option<(f64, f64)> {
    let a = v.length_sq();
    if a == 0.0 {
        return None;
    }
    let b = d.dot(v);
    let c = d.length_sq() - rho * rho;
    let disc = b * b - a * c;
    if disc < 0.0 {
        return None;
    }
    let sq = disc.sqrt();
    // Citardauq form on the side that would cancel.
    let (t0, t1) = if b <= 0.0 {
        let q = -b + sq;
        if q == 0.0 {
            return Some((0.0, 0.0));
        }
        (c / q, q / a)
    } else {
        let q = -b - sq;
        (q / a, c / q)
    };
    Some((t0.min(t1), t0.max(t1)))
}

/// Earliest approach of a moving point (relative offset `d`, relative velocity
/// `v`) to distance `rho` from the origin.
pub fn toi_point_circle(d: Vec2, v: Vec2, rho: f64, horizon: f64) -> Option<f64> {
    let c = d.length_sq() - rho * rho;
    if c < 0.0 {
        return Some(0.0);
    }
    if d.dot(v) >= 0.0 {
        return None;
    }
    let (t0, _) = circle_roots(d, v, rho)?;
    let t = t0.max(0.0);
    (t <= horizon).then_some(t)
}

/// Earliest contact between two moving discs.
pub fn toi_disc_disc(a: &DiscBody, b: &DiscBody, horizon: f64) -> Option<f64> {
    toi_point_circle(
        b.position - a.position,
        b.velocity - a.velocity,
        a.radius + b.radius,
        horizon,
    )
}

/// Earliest contact between a moving disc and a static segment, endpoints
/// included.
pub fn toi_disc_segment(
    position: Vec2,
    velocity: Vec2,
    radius: f64,
    a: Vec2,
    b: Vec2,
    horizon: f64,
) -> Option<f64> {
    if crate::geom::point_segment_distance(position, a, b) < radius {
        return Some(0.0);
    }
    let ab = b - a;
    let len_sq = ab.length_sq();
    let mut best: Option<f64> = None;
    let mut consider = |t: f64| {
        if t >= 0.0 && t <= horizon && best.is_none_or(|bt| t < bt) {
            best = Some(t);
        }
    };

    if len_sq > 0.0 {
        let len = len_sq.sqrt();
        let n = Vec2::new(-ab.y / len, ab.x / len);
        let s0 = (position - a).dot(n);
        let vn = velocity.dot(n);
        let target = if s0 >= 0.0 { radius } else { -radius };
        if (s0 >= 0.0 && vn < 0.0) || (s0 < 0.0 && vn > 0.0) {
            let t = ((target - s0) / vn).max(0.0);
            let contact = position + velocity * t;
            let u = (contact - a).dot(ab) / len_sq;
            if (0.0..=1.0).contains(&u) {
                consider(t);
            }
        }
    }
    for e in [a, b] {
        if let Some(t) = toi_point_circle(position - e, velocity, radius, horizon) {
            consider(t);
        }
    }
    best
}

/// Earliest contact between a moving disc and a static arc. The arc's band is
/// tested from both sides; its endpoints act as point colliders.
pub fn toi_disc_arc(
    position: Vec2,
    velocity: Vec2,
    radius: f64,
    arc: &Geometry,
    horizon: f64,
) -> Option<f64> {
    let Geometry::Arc {
        center,
        radius: arc_radius,
        ..
    } = *arc
    else {
        return None;
    };
    if arc.distance(position) < radius {
        return Some(0.0);
    }
    let mut best: Option<f64> = None;
    let mut consider = |t: f64| {
        if t >= 0.0 && t <= horizon && best.is_none_or(|bt| t < bt) {
            best = Some(t);
        }
    };
    let d = position - center;
    let in_span = |t: f64| {
        (d + velocity * t)
            .normalized()
            .is_some_and(|dir| arc.arc_contains_direction(dir))
    };
    // Outer face, approached from outside.
    if d.length_sq() > (arc_radius + radius).powi(2) {
        if let Some((t0, _)) = circle_roots(d, velocity, arc_radius + radius) {
            if t0 >= 0.0 && in_span(t0) {
                consider(t0);
            }
        }
    }
    // Inner face, approached from inside.
    if arc_radius > radius {
        if let Some((_, t1)) = circle_roots(d, velocity, arc_radius - radius) {
            if t1 >= 0.0 && in_span(t1) {
                consider(t1);
            }
        }
    }
    if !arc.is_full_circle() {
        let (e0, e1) = arc.arc_endpoints().expect("arc");
        for e in [e0, e1] {
            if let Some(t) = toi_point_circle(position - e, velocity, radius, horizon) {
                consider(t);
            }
        }
    }
    best
}

/// Dispatches on geometry.
pub fn toi_disc_geometry(
    position: Vec2,
    velocity: Vec2,
    radius: f64,
    geometry: &Geometry,
    horizon: f64,
) -> Option<f64> {
    match *geometry {
        Geometry::Segment { a, b } => toi_disc_segment(position, velocity, radius, a, b, horizon),
        Geometry::Arc { .. } => toi_disc_arc(position, velocity, radius, geometry, horizon),
    }
}

/// Path parameters `s` in `(0, 1]` at which the straight path `p0 -> p1`
/// crosses the geometry.
pub fn path_crossings(p0: Vec2, p1: Vec2, geometry: &Geometry) -> Vec<f64> {
    let dp = p1 - p0;
    let mut out = Vec::new();
    match *geometry {
        Geometry::Segment { a, b } => {
            let e = b - a;
            let denom = dp.cross(e);
            if denom != 0.0 {
                let w = a - p0;
                let s = w.cross(e) / denom;
                let u = w.cross(dp) / denom;
                if s > 0.0 && s <= 1.0 && (0.0..=1.0).contains(&u) {
                    out.push(s);
                }
            }
        }
        Geometry::Arc { center, radius, .. } => {
            let d = p0 - center;
            if let Some((s0, s1)) = circle_roots(d, dp, radius) {
                for s in [s0, s1] {
                    if s > 0.0 && s <= 1.0 {
                        let dir = (d + dp * s).normalized();
                        if dir.is_some_and(|dir| geometry.arc_contains_direction(dir))
                            && !out.contains(&s)
                        {
                            out.push(s);
                        }
                    }
                }
            }
        }
    }
    out
}
