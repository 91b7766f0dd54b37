use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

use crate::geom::Vec2;

use super::resolve::reflect;
use super::toi::{path_crossings, toi_disc_disc, toi_disc_geometry};
use super::{
    resolve_disc_disc, resolve_disc_static, BodyId, BodyKind, DiscBody, Material, PhysicsParams,
    ShapeId, StaticShape,
};

/// Impacts closer together than this are treated as simultaneous.
const TIE_EPS: f64 = 1e-12;

/// Bodies and static geometry of one episode.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct World {
    /// Kept sorted by id.
    pub bodies: Vec<DiscBody>,
    pub shapes: Vec<StaticShape>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "type", content = "id", rename_all = "lowercase")]
pub enum Contact {
    Body(BodyId),
    Shape(ShapeId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ImpactKind {
    DiscDisc,
    DiscStatic,
    SensorCrossing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImpactEvent {
    /// Seconds since the start of the step.
    pub time: f64,
    pub body: BodyId,
    pub other: Contact,
    pub point: Vec2,
    pub kind: ImpactKind,
}

impl World {
    pub fn new(mut bodies: Vec<DiscBody>, shapes: Vec<StaticShape>) -> Self {
        bodies.sort_by_key(|b| b.id);
        Self { bodies, shapes }
    }

    pub fn body(&self, id: BodyId) -> Option<&DiscBody> {
        self.bodies
            .binary_search_by_key(&id, |b| b.id)
            .ok()
            .map(|i| &self.bodies[i])
    }

    pub fn body_mut(&mut self, id: BodyId) -> Option<&mut DiscBody> {
        self.bodies
            .binary_search_by_key(&id, |b| b.id)
            .ok()
            .map(move |i| &mut self.bodies[i])
    }

    pub fn insert_body(&mut self, body: DiscBody) {
        match self.bodies.binary_search_by_key(&body.id, |b| b.id) {
            Ok(i) => self.bodies[i] = body,
            Err(i) => self.bodies.insert(i, body),
        }
    }

    pub fn remove_body(&mut self, id: BodyId) -> Option<DiscBody> {
        self.bodies
            .binary_search_by_key(&id, |b| b.id)
            .ok()
            .map(|i| self.bodies.remove(i))
    }

    /// Canonical byte serialization of the full state.
    pub fn state_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("world serializes")
    }

    /// Reflection of every body and shape across the world y-axis.
    pub fn mirrored(&self) -> World {
        let bodies = self
            .bodies
            .iter()
            .map(|b| DiscBody {
                position: b.position.mirror_x(),
                velocity: b.velocity.mirror_x(),
                heading: crate::geom::normalize_angle(-b.heading),
                ..b.clone()
            })
            .collect();
        let shapes = self
            .shapes
            .iter()
            .map(|s| StaticShape {
                geometry: s.geometry.mirrored(),
                ..s.clone()
            })
            .collect();
        World { bodies, shapes }
    }

    /// Largest overlap between any two discs, or between a disc and a shape
    /// that collides with it, divided by the disc radius.
    pub fn max_penetration_ratio(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.bodies.iter().enumerate() {
            for b in &self.bodies[i + 1..] {
                let depth = a.radius + b.radius - a.position.distance(b.position);
                if depth > 0.0 {
                    worst = worst.max(depth / a.radius.min(b.radius));
                }
            }
            for s in &self.shapes {
                if s.is_solid_for(a.kind.is_agent()) {
                    let depth = a.radius - s.geometry.distance(a.position);
                    if depth > 0.0 {
                        worst = worst.max(depth / a.radius);
                    }
                }
            }
        }
        worst
    }
}

fn gamma_for(kind: BodyKind, params: &PhysicsParams) -> f64 {
    match kind {
        BodyKind::Agent => params.gamma_agent,
        BodyKind::Rock => params.gamma_ice,
        BodyKind::Ball | BodyKind::Puck | BodyKind::Billiard => params.gamma_ball,
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    time: f64,
    body: usize,
    other: Target,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Target {
    Body(usize),
    Shape(usize),
}

impl Candidate {
    fn key(&self, bodies: &[DiscBody]) -> (BodyId, u8, u32) {
        match self.other {
            Target::Body(j) => (bodies[self.body].id, 0, bodies[j].id),
            Target::Shape(k) => (bodies[self.body].id, 1, k as u32),
        }
    }

    fn beats(&self, other: &Candidate, bodies: &[DiscBody]) -> bool {
        if self.time < other.time - TIE_EPS {
            return true;
        }
        if self.time > other.time + TIE_EPS {
            return false;
        }
        self.key(bodies).cmp(&other.key(bodies)) == Ordering::Less
    }
}

/// Advances the world by one control step.
///
/// Each body first receives `v <- gamma * (v + a * tau)`; the world is then
/// swept forward with continuous collision handling, resolving the earliest
/// impact each time. A body taking more than `max_impacts_per_step` impacts is
/// frozen (zero velocity, immovable) for the remainder of the step. Sensor
/// crossings of body centers are reported as events but never alter motion.
pub fn step_world(
    world: &World,
    accelerations: &[(BodyId, Vec2)],
    params: &PhysicsParams,
) -> (World, Vec<ImpactEvent>) {
    let mut next = world.clone();
    for body in &mut next.bodies {
        let accel = accelerations
            .iter()
            .find(|(id, _)| *id == body.id)
            .map(|(_, a)| *a)
            .unwrap_or(Vec2::ZERO);
        let g = gamma_for(body.kind, params);
        body.velocity = (body.velocity + accel * params.tau) * g;
    }

    let n = next.bodies.len();
    let mut impacts = vec![0u32; n];
    let mut frozen = vec![false; n];
    let mut events = Vec::new();
    let mut elapsed = 0.0;
    let guard = (n as u32 + 1) * params.max_impacts_per_step * 4 + 16;
    let mut iterations = 0;

    loop {
        let horizon = params.tau - elapsed;
        if horizon <= 0.0 {
            break;
        }
        iterations += 1;
        if iterations > guard {
            for (i, b) in next.bodies.iter_mut().enumerate() {
                b.velocity = Vec2::ZERO;
                frozen[i] = true;
            }
        }

        let hit = earliest_impact(&next, &frozen, horizon);
        let dt = hit.map_or(horizon, |c| c.time);

        advance(&mut next, dt, elapsed, &mut events);
        elapsed += dt;

        let Some(hit) = hit else {
            break;
        };
        let i = hit.body;
        impacts[i] += 1;
        if impacts[i] > params.max_impacts_per_step {
            next.bodies[i].velocity = Vec2::ZERO;
            frozen[i] = true;
        }
        if let Target::Body(j) = hit.other {
            impacts[j] += 1;
            if impacts[j] > params.max_impacts_per_step {
                next.bodies[j].velocity = Vec2::ZERO;
                frozen[j] = true;
            }
        }

        let (body_id, other, point, kind) = match hit.other {
            Target::Body(j) => {
                let (a, b) = (&next.bodies[i], &next.bodies[j]);
                let n_ab = (b.position - a.position).normalized().unwrap_or(Vec2::ZERO);
                let point = a.position + n_ab * a.radius;
                match (frozen[i], frozen[j]) {
                    (false, false) => {
                        let (va, vb) = resolve_disc_disc(a, b);
                        next.bodies[i].velocity = va;
                        next.bodies[j].velocity = vb;
                    }
                    (true, false) => {
                        let v = reflect(next.bodies[j].velocity, n_ab);
                        next.bodies[j].velocity = v;
                    }
                    (false, true) => {
                        let v = reflect(next.bodies[i].velocity, -n_ab);
                        next.bodies[i].velocity = v;
                    }
                    (true, true) => {}
                }
                let (a_id, b_id) = (next.bodies[i].id, next.bodies[j].id);
                (a_id, Contact::Body(b_id), point, ImpactKind::DiscDisc)
            }
            Target::Shape(k) => {
                let shape = &next.shapes[k];
                let point = shape.geometry.closest_point(next.bodies[i].position);
                if !frozen[i] {
                    let v = resolve_disc_static(&next.bodies[i], shape, params)
                        .expect("sensors never collide");
                    next.bodies[i].velocity = v;
                }
                (
                    next.bodies[i].id,
                    Contact::Shape(k as ShapeId),
                    point,
                    ImpactKind::DiscStatic,
                )
            }
        };
        events.push(ImpactEvent {
            time: elapsed,
            body: body_id,
            other,
            point,
            kind,
        });
    }
    (next, events)
}

fn earliest_impact(world: &World, frozen: &[bool], horizon: f64) -> Option<Candidate> {
    let bodies = &world.bodies;
    let mut best: Option<Candidate> = None;
    let mut offer = |c: Candidate| {
        if best.as_ref().is_none_or(|b| c.beats(b, bodies)) {
            best = Some(c);
        }
    };
    for i in 0..bodies.len() {
        let a = &bodies[i];
        for j in i + 1..bodies.len() {
            let b = &bodies[j];
            if frozen[i] && frozen[j] {
                continue;
            }
            if a.velocity == b.velocity {
                continue;
            }
            if let Some(t) = toi_disc_disc(a, b, horizon) {
                if t == 0.0 && (b.velocity - a.velocity).dot(b.position - a.position) >= 0.0 {
                    continue;
                }
                offer(Candidate {
                    time: t,
                    body: i,
                    other: Target::Body(j),
                });
            }
        }
        if frozen[i] || a.velocity == Vec2::ZERO {
            continue;
        }
        for (k, shape) in world.shapes.iter().enumerate() {
            if !shape.is_solid_for(a.kind.is_agent()) {
                continue;
            }
            if let Some(t) =
                toi_disc_geometry(a.position, a.velocity, a.radius, &shape.geometry, horizon)
            {
                if t == 0.0 {
                    let n = a.position - shape.geometry.closest_point(a.position);
                    if a.velocity.dot(n) >= 0.0 {
                        continue;
                    }
                }
                offer(Candidate {
                    time: t,
                    body: i,
                    other: Target::Shape(k),
                });
            }
        }
    }
    best
}

/// Moves every body by `dt`, reporting sensor crossings in time order.
fn advance(world: &mut World, dt: f64, elapsed: f64, events: &mut Vec<ImpactEvent>) {
    if dt <= 0.0 {
        return;
    }
    let mut crossings = Vec::new();
    for body in &mut world.bodies {
        if body.velocity == Vec2::ZERO {
            continue;
        }
        let start = body.position;
        let end = start + body.velocity * dt;
        for (k, shape) in world.shapes.iter().enumerate() {
            if shape.material != Material::Sensor || !shape.affects(body.kind.is_agent()) {
                continue;
            }
            for s in path_crossings(start, end, &shape.geometry) {
                crossings.push(ImpactEvent {
                    time: elapsed + s * dt,
                    body: body.id,
                    other: Contact::Shape(k as ShapeId),
                    point: start + (end - start) * s,
                    kind: ImpactKind::SensorCrossing,
                });
            }
        }
        body.position = end;
    }
    crossings.sort_by(|a, b| {
        a.time
            .total_cmp(&b.time)
            .then(a.body.cmp(&b.body))
            .then(a.other.cmp(&b.other))
    });
    events.extend(crossings);
}
