use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

use crate::geom::{normalize_angle, Vec2};
use crate::observation::{render_view, AgentObservation, ColorTable, Viewer, VisionParams};
use crate::physics::{
    apply_control, step_world, Action, BodyId, BodyKind, Contact, DiscBody, Geometry, ImpactEvent,
    ImpactKind, PhysicsError, PhysicsParams, ShapeTag, Side, World,
};

use super::map::{MapObject, MapSpec, Pose};
use super::outcome::{Outcome, Reason};
use super::GameKind;

/// Bodies below this speed count as resting.
pub const REST_SPEED: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GameError {
    #[error("map is a {map} map, not {requested}")]
    KindMismatch { requested: GameKind, map: GameKind },
    #[error("episode already finished")]
    Terminal,
    #[error("non-finite action for side {0}")]
    NonFiniteAction(Side),
    #[error(transparent)]
    Physics(#[from] PhysicsError),
}

/// Turn bookkeeping for Curling and Billiard.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TurnPhase {
    pub turn_side: Side,
    /// Throws (Curling) or strokes (Billiard) left per side, indexed by side.
    pub throws_remaining: [u32; 2],
    /// Steps already played in the current turn.
    pub turn_step: u32,
    /// The controlled rock has crossed the release line.
    pub release_done: bool,
    /// Curling rock currently being thrown.
    pub active_rock: Option<BodyId>,
    /// Curling energy carried between rocks of the same side.
    pub energy_pool: [f64; 2],
    /// Every throw or stroke has been used.
    pub finished: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Phase {
    Simultaneous,
    Turns(TurnPhase),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GameEvent {
    Impact(ImpactEvent),
    TurnStarted { side: Side, body: BodyId },
    Released { side: Side, body: BodyId },
    Removed { body: BodyId },
    Potted { body: BodyId, owner: Side },
    Finished { outcome: Outcome },
}

#[derive(Debug, Clone)]
pub struct GameState {
    pub kind: GameKind,
    pub map: Arc<MapSpec>,
    pub physics: PhysicsParams,
    pub world: World,
    pub step: u32,
    pub phase: Phase,
    /// Billiard balls potted per side.
    pub potted: [u32; 2],
    pub rng: ChaCha8Rng,
    pub outcome: Option<Outcome>,
    next_id: BodyId,
}

/// Agent body id for `side` in kinds with embodied agents.
pub fn agent_id(side: Side) -> BodyId {
    side.index() as BodyId
}

const FIRST_OBJECT_ID: BodyId = 2;

fn jittered(pose: Pose, amplitude: f64, rng: &mut ChaCha8Rng) -> f64 {
    let u: f64 = rng.gen_range(-1.0..=1.0);
    normalize_angle(pose.heading + amplitude * u)
}

/// Places bodies for a fresh episode.
pub fn init_game(kind: GameKind, map: &MapSpec, seed: u64) -> Result<GameState, GameError> {
    if map.kind != kind {
        return Err(GameError::KindMismatch {
            requested: kind,
            map: map.kind,
        });
    }
    let physics = map.physics();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bodies = Vec::new();
    if kind != GameKind::Curling {
        for side in Side::BOTH {
            let pose = map.spawns[side.index()];
            let heading = jittered(pose, map.params.heading_jitter, &mut rng);
            let mut body =
                DiscBody::agent(agent_id(side), side, pose.position, heading, physics.e_max);
            if kind == GameKind::Billiard {
                body.controllable = side == Side::A;
            }
            bodies.push(body);
        }
    }
    let mut next_id = FIRST_OBJECT_ID;
    for o in &map.objects {
        let body = match *o {
            MapObject::Puck {
                position,
                radius,
                mass,
            } => DiscBody::object(next_id, BodyKind::Puck, position, radius, mass, None),
            MapObject::Ball {
                position,
                radius,
                mass,
            } => DiscBody::object(next_id, BodyKind::Ball, position, radius, mass, None),
            MapObject::Billiard {
                position,
                side,
                radius,
                mass,
            } => DiscBody::object(
                next_id,
                BodyKind::Billiard,
                position,
                radius,
                mass,
                Some(side),
            ),
            MapObject::Center { .. } | MapObject::Midline { .. } => continue,
        };
        bodies.push(body);
        next_id += 1;
    }
    let phase = if kind.is_turn_based() {
        let budget = match kind {
            GameKind::Curling => map.params.rocks_per_side,
            _ => map.params.strokes_per_side,
        };
        Phase::Turns(TurnPhase {
            turn_side: Side::A,
            throws_remaining: [budget, budget],
            turn_step: 0,
            release_done: false,
            active_rock: None,
            energy_pool: [physics.e_max; 2],
            finished: false,
        })
    } else {
        Phase::Simultaneous
    };
    let mut state = GameState {
        kind,
        map: Arc::new(map.clone()),
        physics,
        world: World::new(bodies, map.static_shapes()),
        step: 0,
        phase,
        potted: [0, 0],
        rng,
        outcome: None,
        next_id,
    };
    if kind == GameKind::Curling {
        state.spawn_rock(Side::A);
    }
    Ok(state)
}

/// The decided outcome, if any.
pub fn check_outcome(state: &GameState) -> Option<Outcome> {
    state.outcome
}

/// Advances one control step. In turn-based kinds the idle side's action is
/// discarded.
pub fn step_game(
    state: &GameState,
    action_a: Action,
    action_b: Action,
) -> Result<(GameState, Vec<GameEvent>), GameError> {
    let mut next = state.clone();
    let events = next.advance(action_a, action_b)?;
    Ok((next, events))
}

impl GameState {
    pub fn is_terminal(&self) -> bool {
        self.outcome.is_some()
    }

    pub fn turn(&self) -> Option<&TurnPhase> {
        match &self.phase {
            Phase::Turns(t) => Some(t),
            Phase::Simultaneous => None,
        }
    }

    /// Body steered by `side` this step, if any.
    pub fn controlled_body(&self, side: Side) -> Option<BodyId> {
        match (&self.phase, self.kind) {
            (Phase::Simultaneous, _) => Some(agent_id(side)),
            (Phase::Turns(t), GameKind::Curling) => t
                .active_rock
                .filter(|_| t.turn_side == side && !t.release_done),
            (Phase::Turns(t), _) => (t.turn_side == side && !t.finished).then(|| agent_id(side)),
        }
        .filter(|id| self.world.body(*id).is_some_and(|b| b.controllable))
    }

    pub fn is_controllable(&self, side: Side) -> bool {
        self.controlled_body(side).is_some()
    }

    /// Energy of `side` as a fraction of the maximum.
    pub fn energy_fraction(&self, side: Side) -> f64 {
        let e = match (&self.phase, self.kind) {
            (Phase::Turns(t), GameKind::Curling) => t
                .active_rock
                .filter(|_| t.turn_side == side)
                .and_then(|id| self.world.body(id))
                .map_or(t.energy_pool[side.index()], |b| b.energy),
            _ => self.world.body(agent_id(side)).map_or(0.0, |b| b.energy),
        };
        (e / self.physics.e_max).clamp(0.0, 1.0)
    }

    /// Egocentric view for `side`. In Curling the idle side, and the active
    /// side between rocks, look from their launch pose.
    pub fn observe(
        &self,
        side: Side,
        vision: &VisionParams,
        colors: &ColorTable,
    ) -> AgentObservation {
        let viewer_body = match (&self.phase, self.kind) {
            (Phase::Turns(t), GameKind::Curling) => t
                .active_rock
                .filter(|_| t.turn_side == side)
                .and_then(|id| self.world.body(id)),
            _ => self.world.body(agent_id(side)),
        };
        let viewer = match viewer_body {
            Some(b) => Viewer {
                position: b.position,
                heading: b.heading,
                self_id: Some(b.id),
                side,
                energy_fraction: self.energy_fraction(side),
                controllable: self.is_controllable(side),
            },
            None => {
                let pose = self.map.spawns[side.index()];
                Viewer {
                    position: pose.position,
                    heading: pose.heading,
                    self_id: None,
                    side,
                    energy_fraction: self.energy_fraction(side),
                    controllable: false,
                }
            }
        };
        render_view(&self.world, &viewer, vision, colors)
    }

    fn spawn_rock(&mut self, side: Side) -> Option<BodyId> {
        let pose = self.map.spawns[side.index()];
        let heading = jittered(pose, self.map.params.heading_jitter, &mut self.rng);
        let Phase::Turns(t) = &mut self.phase else {
            return None;
        };
        let id = self.next_id;
        self.next_id += 1;
        let p = self.map.params;
        let mut rock = DiscBody::object(
            id,
            BodyKind::Rock,
            pose.position,
            p.rock_radius,
            p.rock_mass,
            Some(side),
        );
        rock.heading = heading;
        rock.energy = t.energy_pool[side.index()];
        rock.controllable = true;
        t.active_rock = Some(id);
        t.release_done = false;
        t.turn_step = 0;
        t.turn_side = side;
        self.world.insert_body(rock);
        Some(id)
    }

    fn advance(&mut self, action_a: Action, action_b: Action) -> Result<Vec<GameEvent>, GameError> {
        if self.is_terminal() {
            return Err(GameError::Terminal);
        }
        for (side, a) in [(Side::A, action_a), (Side::B, action_b)] {
            if !a.is_finite() {
                return Err(GameError::NonFiniteAction(side));
            }
        }
        let mut accels = Vec::with_capacity(2);
        for (side, action) in [(Side::A, action_a), (Side::B, action_b)] {
            if let Some(id) = self.controlled_body(side) {
                let body = self.world.body(id).expect("controlled body exists");
                let (updated, accel) = apply_control(body, action, &self.physics)?;
                *self.world.body_mut(id).expect("controlled body exists") = updated;
                accels.push((id, accel));
            }
        }
        let (world, impacts) = step_world(&self.world, &accels, &self.physics);
        self.world = world;
        self.step += 1;

        let mut events: Vec<GameEvent> = Vec::new();
        let outcome = match self.kind {
            GameKind::Running => self.first_crossing(&impacts, ShapeTag::Finish, true),
            GameKind::Wrestling => self
                .first_crossing(&impacts, ShapeTag::Border, true)
                .map(|o| o.swapped()),
            GameKind::TableHockey | GameKind::Football => self.goal(&impacts),
            GameKind::Curling => self.curling_rules(&impacts, &mut events),
            GameKind::Billiard => self.billiard_rules(&impacts, &mut events),
        };
        let outcome = outcome.or_else(|| {
            (self.step >= self.map.limits.max_steps).then(|| match self.kind {
                GameKind::Curling => self.nearest_rock(),
                GameKind::Billiard => self.most_potted(),
                _ => Outcome::draw(Reason::Timeout),
            })
        });
        let mut all: Vec<GameEvent> = impacts.into_iter().map(GameEvent::Impact).collect();
        all.append(&mut events);
        if let Some(o) = outcome {
            self.outcome = Some(o);
            all.push(GameEvent::Finished { outcome: o });
        }
        Ok(all)
    }

    fn shape_tag(&self, contact: Contact) -> Option<ShapeTag> {
        match contact {
            Contact::Shape(i) => self.world.shapes.get(i as usize).and_then(|s| s.tag),
            Contact::Body(_) => None,
        }
    }

    fn crossings<'a>(
        &'a self,
        impacts: &'a [ImpactEvent],
        tag: ShapeTag,
    ) -> impl Iterator<Item = &'a ImpactEvent> + 'a {
        impacts.iter().filter(move |e| {
            e.kind == ImpactKind::SensorCrossing && self.shape_tag(e.other) == Some(tag)
        })
    }

    /// Win for the side whose agent first crosses a `tag` sensor this step;
    /// simultaneous first crossings draw.
    fn first_crossing(
        &self,
        impacts: &[ImpactEvent],
        tag: ShapeTag,
        agents: bool,
    ) -> Option<Outcome> {
        let mut first: [Option<f64>; 2] = [None, None];
        for e in self.crossings(impacts, tag) {
            let Some(body) = self.world.body(e.body) else {
                continue;
            };
            if body.kind.is_agent() != agents {
                continue;
            }
            let Some(side) = body.owner else { continue };
            let slot = &mut first[side.index()];
            if slot.is_none_or(|t| e.time < t) {
                *slot = Some(e.time);
            }
        }
        let reason = match tag {
            ShapeTag::Border => Reason::BorderTouched,
            _ => Reason::GoalCrossed,
        };
        match first {
            [None, None] => None,
            [Some(_), None] => Some(Outcome::win(Side::A, reason)),
            [None, Some(_)] => Some(Outcome::win(Side::B, reason)),
            [Some(ta), Some(tb)] if ta < tb => Some(Outcome::win(Side::A, reason)),
            [Some(ta), Some(tb)] if tb < ta => Some(Outcome::win(Side::B, reason)),
            _ => Some(Outcome::draw(reason)),
        }
    }

    /// A puck or ball crossing the goal that a side defends scores for the
    /// other side.
    fn goal(&self, impacts: &[ImpactEvent]) -> Option<Outcome> {
        let earliest = |tag| {
            self.crossings(impacts, tag)
                .filter(|e| self.world.body(e.body).is_some_and(|b| !b.kind.is_agent()))
                .map(|e| e.time)
                .fold(None, |acc: Option<f64>, t| {
                    Some(acc.map_or(t, |a| a.min(t)))
                })
        };
        match (earliest(ShapeTag::GoalA), earliest(ShapeTag::GoalB)) {
            (None, None) => None,
            (Some(_), None) => Some(Outcome::win(Side::B, Reason::GoalCrossed)),
            (None, Some(_)) => Some(Outcome::win(Side::A, Reason::GoalCrossed)),
            (Some(ta), Some(tb)) if ta < tb => Some(Outcome::win(Side::B, Reason::GoalCrossed)),
            (Some(ta), Some(tb)) if tb < ta => Some(Outcome::win(Side::A, Reason::GoalCrossed)),
            _ => Some(Outcome::draw(Reason::GoalCrossed)),
        }
    }

    fn release_line(&self) -> Option<(Vec2, Vec2)> {
        self.world
            .shapes
            .iter()
            .find_map(|s| match (s.tag, s.geometry) {
                (Some(ShapeTag::Release), Geometry::Segment { a, b }) => Some((a, b)),
                _ => None,
            })
    }

    fn all_resting(&self) -> bool {
        self.world.bodies.iter().all(|b| b.speed() < REST_SPEED)
    }

    fn curling_rules(
        &mut self,
        impacts: &[ImpactEvent],
        events: &mut Vec<GameEvent>,
    ) -> Option<Outcome> {
        let released_now = {
            let Phase::Turns(t) = &self.phase else {
                return None;
            };
            match t.active_rock {
                Some(rock) if !t.release_done => self
                    .crossings(impacts, ShapeTag::Release)
                    .any(|e| e.body == rock)
                    .then_some((t.turn_side, rock)),
                _ => None,
            }
        };
        if let Some((side, rock)) = released_now {
            let energy = self.world.body(rock).map_or(0.0, |b| b.energy);
            if let Some(b) = self.world.body_mut(rock) {
                b.controllable = false;
            }
            if let Phase::Turns(t) = &mut self.phase {
                t.release_done = true;
                t.energy_pool[side.index()] = energy;
            }
            events.push(GameEvent::Released { side, body: rock });
        }

        let turn_steps = self.map.params.turn_steps;
        let Phase::Turns(t) = &mut self.phase else {
            return None;
        };
        if t.finished {
            return self.all_resting().then(|| self.nearest_rock());
        }
        t.turn_step += 1;
        if t.turn_step < turn_steps {
            return None;
        }

        // End of turn: dead throws and rocks left behind the line go away.
        let side = t.turn_side;
        if let Some(rock) = t.active_rock.take() {
            if !t.release_done {
                if let Some(b) = self.world.body(rock) {
                    t.energy_pool[side.index()] = b.energy;
                }
                self.world.remove_body(rock);
                events.push(GameEvent::Removed { body: rock });
            }
        }
        t.throws_remaining[side.index()] = t.throws_remaining[side.index()].saturating_sub(1);
        let remaining = t.throws_remaining;
        if let Some((a, b)) = self.release_line() {
            let behind =
                |p: Vec2, spawn: Vec2| (b - a).cross(p - a) * (b - a).cross(spawn - a) > 0.0;
            let spawn = self.map.spawns[0].position;
            let stale: Vec<BodyId> = self
                .world
                .bodies
                .iter()
                .filter(|r| r.kind == BodyKind::Rock && behind(r.position, spawn))
                .map(|r| r.id)
                .collect();
            for id in stale {
                self.world.remove_body(id);
                events.push(GameEvent::Removed { body: id });
            }
        }
        let next_side = if remaining[side.other().index()] > 0 {
            Some(side.other())
        } else if remaining[side.index()] > 0 {
            Some(side)
        } else {
            None
        };
        match next_side {
            Some(s) => {
                if let Some(id) = self.spawn_rock(s) {
                    events.push(GameEvent::TurnStarted { side: s, body: id });
                }
                None
            }
            None => {
                if let Phase::Turns(t) = &mut self.phase {
                    t.finished = true;
                }
                self.all_resting().then(|| self.nearest_rock())
            }
        }
    }

    /// Side owning the single rock nearest the center point.
    fn nearest_rock(&self) -> Outcome {
        let Some(center) = self.map.center_point() else {
            return Outcome::draw(Reason::NearestRock);
        };
        let mut best: [f64; 2] = [f64::INFINITY; 2];
        for r in self
            .world
            .bodies
            .iter()
            .filter(|b| b.kind == BodyKind::Rock)
        {
            if let Some(side) = r.owner {
                let d = r.position.distance(center);
                best[side.index()] = best[side.index()].min(d);
            }
        }
        if best[0] < best[1] {
            Outcome::win(Side::A, Reason::NearestRock)
        } else if best[1] < best[0] {
            Outcome::win(Side::B, Reason::NearestRock)
        } else {
            Outcome::draw(Reason::NearestRock)
        }
    }

    fn most_potted(&self) -> Outcome {
        match self.potted[0].cmp(&self.potted[1]) {
            std::cmp::Ordering::Greater => Outcome::win(Side::A, Reason::MostPotted),
            std::cmp::Ordering::Less => Outcome::win(Side::B, Reason::MostPotted),
            std::cmp::Ordering::Equal => Outcome::draw(Reason::MostPotted),
        }
    }

    fn billiard_rules(
        &mut self,
        impacts: &[ImpactEvent],
        events: &mut Vec<GameEvent>,
    ) -> Option<Outcome> {
        let mut potted: Vec<BodyId> = self
            .crossings(impacts, ShapeTag::Pocket)
            .filter(|e| {
                self.world
                    .body(e.body)
                    .is_some_and(|b| b.kind == BodyKind::Billiard)
            })
            .map(|e| e.body)
            .collect();
        potted.dedup();
        for id in potted {
            if let Some(b) = self.world.remove_body(id) {
                let owner = b.owner.unwrap_or(Side::A);
                self.potted[owner.index()] += 1;
                events.push(GameEvent::Potted { body: id, owner });
            }
        }
        if !self
            .world
            .bodies
            .iter()
            .any(|b| b.kind == BodyKind::Billiard)
        {
            return Some(self.most_potted());
        }

        let turn_steps = self.map.params.turn_steps;
        let Phase::Turns(t) = &mut self.phase else {
            return None;
        };
        if t.finished {
            return Some(self.most_potted());
        }
        t.turn_step += 1;
        if t.turn_step < turn_steps {
            return None;
        }
        let side = t.turn_side;
        t.throws_remaining[side.index()] = t.throws_remaining[side.index()].saturating_sub(1);
        t.turn_step = 0;
        let next_side = if t.throws_remaining[side.other().index()] > 0 {
            Some(side.other())
        } else if t.throws_remaining[side.index()] > 0 {
            Some(side)
        } else {
            None
        };
        match next_side {
            Some(s) => {
                t.turn_side = s;
                for p in Side::BOTH {
                    if let Some(b) = self.world.body_mut(agent_id(p)) {
                        b.controllable = p == s;
                    }
                }
                events.push(GameEvent::TurnStarted {
                    side: s,
                    body: agent_id(s),
                });
                None
            }
            None => {
                t.finished = true;
                Some(self.most_potted())
            }
        }
    }
}
