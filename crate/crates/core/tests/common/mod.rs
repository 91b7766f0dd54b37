#![allow(dead_code)]

use std::sync::atomic::{AtomicUsize, Ordering};

use arena_core::geom::Vec2;
use arena_core::observation::{AgentObservation, ColorTable, Viewer, VisionParams};
use arena_core::physics::{DiscBody, Material, Side, World};
use arena_core::scenarios::{GameResult, Outcome};
use arena_core::tournament::{PairHistory, StandingsRow};

static OUTCOMES_SEEN: AtomicUsize = AtomicUsize::new(0);
static ZERO_SUM_VIOLATIONS: AtomicUsize = AtomicUsize::new(0);

/// Checks the zero-sum property of an outcome and tallies it.
pub fn zero_sum(o: &Outcome) -> Outcome {
    OUTCOMES_SEEN.fetch_add(1, Ordering::SeqCst);
    let (a, b) = o.score;
    let consistent = a + b == 0
        && match o.result {
            GameResult::AWins => (a, b) == (1, -1),
            GameResult::BWins => (a, b) == (-1, 1),
            GameResult::Draw => (a, b) == (0, 0),
        };
    if !consistent {
        ZERO_SUM_VIOLATIONS.fetch_add(1, Ordering::SeqCst);
    }
    assert!(consistent, "outcome is not zero-sum: {o:?}");
    *o
}

pub fn zero_sum_tally() -> (usize, usize) {
    (
        OUTCOMES_SEEN.load(Ordering::SeqCst),
        ZERO_SUM_VIOLATIONS.load(Ordering::SeqCst),
    )
}

/// Straightforward rasterizer: every cell's sample point is mapped back into
/// the world and tested against every shape and body directly.
pub fn oracle_render(
    world: &World,
    viewer: &Viewer,
    vision: &VisionParams,
    colors: &ColorTable,
) -> AgentObservation {
    let g = vision.grid_size;
    let cell = vision.window_side / g as f64;
    let half = vision.window_side / 2.0;
    let (s, c) = viewer.heading.sin_cos();
    let mut grid = vec![colors.background; g * g];
    for row in 0..g {
        for col in 0..g {
            // Agent frame: x to the right, y forward.
            let lx = -half + (col as f64 + 0.5) * cell;
            let ly = vision.forward_offset + half - (row as f64 + 0.5) * cell;
            // Right = (cos h, -sin h), forward = (sin h, cos h) in the world.
            let p = Vec2::new(
                viewer.position.x + lx * c + ly * s,
                viewer.position.y - lx * s + ly * c,
            );
            let mut best: (u8, u8) = (0, colors.background);
            for shape in &world.shapes {
                let (rank, code) = match shape.material {
                    Material::Elastic => (1, colors.elastic_wall),
                    Material::Sticky => (2, colors.sticky_wall),
                    Material::Sensor => (3, colors.sensor),
                };
                if rank > best.0 && shape.geometry.distance(p) <= vision.line_half_width {
                    best = (rank, code);
                }
            }
            for body in &world.bodies {
                let (rank, code) = oracle_body_paint(body, viewer, colors);
                if rank > best.0 && (p - body.position).length() <= body.radius {
                    best = (rank, code);
                }
            }
            grid[row * g + col] = best.1;
        }
    }
    AgentObservation {
        grid_size: g,
        grid,
        energy_fraction: viewer.energy_fraction,
        controllable: viewer.controllable,
    }
}

fn oracle_body_paint(body: &DiscBody, viewer: &Viewer, colors: &ColorTable) -> (u8, u8) {
    if Some(body.id) == viewer.self_id {
        (6, colors.self_body)
    } else if body.kind.is_agent() && body.owner != Some(viewer.side) {
        (5, colors.opponent)
    } else {
        let code = match body.owner {
            Some(s) if s == viewer.side => colors.own_object,
            Some(_) => colors.opponent_object,
            None => colors.neutral_object,
        };
        (4, code)
    }
}

pub fn viewer_for(world: &World, id: u32) -> Viewer {
    let b = world.body(id).expect("viewer body");
    Viewer {
        position: b.position,
        heading: b.heading,
        self_id: Some(b.id),
        side: b.owner.unwrap_or(Side::A),
        energy_fraction: 1.0,
        controllable: true,
    }
}

/// Reference pairing: rank by the documented order, give the bye, then
/// enumerate every perfect matching and keep the first with the fewest
/// rematches in partner-vector order.
pub fn pairing_oracle(
    rows: &[StandingsRow],
    history: &PairHistory,
) -> (Vec<(String, String)>, Option<String>) {
    let mut ranked: Vec<&StandingsRow> = rows.iter().collect();
    ranked.sort_by(|a, b| {
        b.points
            .partial_cmp(&a.points)
            .unwrap()
            .then(b.buchholz.partial_cmp(&a.buchholz).unwrap())
            .then(a.seed_rank.cmp(&b.seed_rank))
            .then(a.player_id.cmp(&b.player_id))
    });
    let mut bye = None;
    if ranked.len() % 2 == 1 {
        let mut idx = ranked.len() - 1;
        for i in (0..ranked.len()).rev() {
            if !ranked[i].had_bye {
                idx = i;
                break;
            }
        }
        bye = Some(ranked.remove(idx).player_id.clone());
    }
    fn all_matchings(left: Vec<usize>) -> Vec<Vec<(usize, usize)>> {
        if left.is_empty() {
            return vec![Vec::new()];
        }
        let first = left[0];
        let mut out = Vec::new();
        for k in 1..left.len() {
            let rest: Vec<usize> = left
                .iter()
                .copied()
                .enumerate()
                .filter(|&(j, _)| j != 0 && j != k)
                .map(|(_, v)| v)
                .collect();
            for mut m in all_matchings(rest) {
                m.push((first, left[k]));
                out.push(m);
            }
        }
        out
    }
    let n = ranked.len();
    let mut best: Option<(usize, Vec<usize>)> = None;
    for m in all_matchings((0..n).collect()) {
        let cost = m
            .iter()
            .filter(|(i, j)| history.has_played(&ranked[*i].player_id, &ranked[*j].player_id))
            .count();
        let mut partner = vec![0; n];
        for (i, j) in &m {
            partner[*i] = *j;
            partner[*j] = *i;
        }
        let better = match &best {
            None => true,
            Some((c, p)) => cost < *c || (cost == *c && partner < *p),
        };
        if better {
            best = Some((cost, partner));
        }
    }
    let partner = best.map(|b| b.1).unwrap_or_default();
    let pairs = (0..n)
        .filter(|&i| partner[i] > i)
        .map(|i| {
            (
                ranked[i].player_id.clone(),
                ranked[partner[i]].player_id.clone(),
            )
        })
        .collect();
    (pairs, bye)
}

/// Spearman rank correlation for permutations without ties.
pub fn spearman(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum();
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}

pub mod scenes {
    use super::*;
    use arena_core::physics::{BodyKind, Geometry, StaticShape};
    use rand::Rng;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn material(rng: &mut impl Rng) -> Material {
        match rng.gen_range(0..3) {
            0 => Material::Elastic,
            1 => Material::Sticky,
            _ => Material::Sensor,
        }
    }

    fn body(rng: &mut impl Rng, id: u32, center: Vec2, spread: f64) -> DiscBody {
        let pos = center
            + Vec2::new(
                rng.gen_range(-spread..spread),
                rng.gen_range(-spread..spread),
            );
        let heading = rng.gen_range(-PI..PI);
        match rng.gen_range(0..4) {
            0 => DiscBody::agent(
                id,
                if rng.gen() { Side::A } else { Side::B },
                pos,
                heading,
                1000.0,
            ),
            1 => DiscBody::object(id, BodyKind::Puck, pos, rng.gen_range(4.0..20.0), 0.3, None),
            2 => DiscBody::object(
                id,
                BodyKind::Rock,
                pos,
                rng.gen_range(4.0..20.0),
                1.0,
                Some(Side::A),
            ),
            _ => DiscBody::object(
                id,
                BodyKind::Billiard,
                pos,
                rng.gen_range(4.0..20.0),
                0.5,
                Some(Side::B),
            ),
        }
    }

    /// A scene of arbitrary shapes and bodies around the viewer body 0.
    pub fn random_scene(rng: &mut impl Rng) -> World {
        let viewer_pos = Vec2::new(rng.gen_range(-300.0..300.0), rng.gen_range(-300.0..300.0));
        let viewer_heading = rng.gen_range(-PI..PI);
        let side = if rng.gen() { Side::A } else { Side::B };
        let mut bodies = vec![DiscBody::agent(0, side, viewer_pos, viewer_heading, 1000.0)];
        let look = viewer_pos + arena_core::geom::heading_vector(viewer_heading) * 80.0;
        for id in 1..rng.gen_range(1..8) {
            bodies.push(body(rng, id, look, 130.0));
        }
        let mut shapes = Vec::new();
        for _ in 0..rng.gen_range(0..8) {
            let geometry = if rng.gen_bool(0.6) {
                let a =
                    look + Vec2::new(rng.gen_range(-160.0..160.0), rng.gen_range(-160.0..160.0));
                let b = a + Vec2::new(rng.gen_range(-200.0..200.0), rng.gen_range(-200.0..200.0));
                Geometry::Segment { a, b }
            } else {
                let center =
                    look + Vec2::new(rng.gen_range(-160.0..160.0), rng.gen_range(-160.0..160.0));
                let start = rng.gen_range(-PI..PI);
                let span = if rng.gen_bool(0.2) {
                    TAU
                } else {
                    rng.gen_range(0.1..TAU)
                };
                Geometry::Arc {
                    center,
                    radius: rng.gen_range(5.0..150.0),
                    start_angle: start,
                    end_angle: start + span,
                }
            };
            let mut s = StaticShape::wall(geometry, Material::Elastic);
            s.material = material(rng);
            shapes.push(s);
        }
        World::new(bodies, shapes)
    }

    /// Scene whose features sit on the viewer's sample lattice, so every
    /// sample is far from any paint boundary. The viewer (body 0) faces a
    /// multiple of 90 degrees; coordinates are small dyadic numbers.
    pub fn lattice_scene(rng: &mut impl Rng) -> World {
        let viewer_pos = Vec2::new(
            rng.gen_range(-40..40) as f64 * 4.0,
            rng.gen_range(-40..40) as f64 * 4.0,
        );
        let heading = rng.gen_range(-1..3) as f64 * FRAC_PI_2;
        let side = if rng.gen() { Side::A } else { Side::B };
        let mut bodies = vec![DiscBody::agent(0, side, viewer_pos, heading, 1000.0)];
        // Lattice points: viewer + 2.5 + 5k on both axes.
        let lattice = |rng: &mut dyn rand::RngCore| {
            let kx = rng.gen_range(-30..30) as f64;
            let ky = rng.gen_range(-30..40) as f64;
            viewer_pos + Vec2::new(2.5 + 5.0 * kx, 2.5 + 5.0 * ky)
        };
        for id in 1..rng.gen_range(1..6) {
            let c = lattice(rng);
            let r = [7.0, 12.0, 16.0][rng.gen_range(0..3)];
            let b = match rng.gen_range(0..3) {
                // Agent radius 15 lands on a lattice distance; shift off it.
                0 => DiscBody::agent(id, Side::B, c + Vec2::new(2.5, 0.0), 0.0, 1000.0),
                1 => DiscBody::object(id, BodyKind::Ball, c, r, 0.5, None),
                _ => DiscBody::object(id, BodyKind::Rock, c, r, 1.0, Some(side)),
            };
            bodies.push(b);
        }
        let mut shapes = Vec::new();
        for _ in 0..rng.gen_range(0..6) {
            let a = lattice(rng);
            let geometry = match rng.gen_range(0..4) {
                0 => Geometry::Segment {
                    a,
                    b: a + Vec2::new(5.0 * rng.gen_range(1..30) as f64, 0.0),
                },
                1 => Geometry::Segment {
                    a,
                    b: a + Vec2::new(0.0, 5.0 * rng.gen_range(1..30) as f64),
                },
                2 => {
                    let k = 5.0 * rng.gen_range(1..20) as f64;
                    Geometry::Segment {
                        a,
                        b: a + Vec2::new(k, if rng.gen() { k } else { -k }),
                    }
                }
                _ => {
                    let start = FRAC_PI_2 * rng.gen_range(0..4) as f64 + 0.3;
                    Geometry::Arc {
                        center: a,
                        radius: [12.0, 27.0][rng.gen_range(0..2)],
                        start_angle: start,
                        end_angle: start + FRAC_PI_2 * rng.gen_range(1..4) as f64,
                    }
                }
            };
            let mut s = StaticShape::wall(geometry, Material::Elastic);
            s.material = material(rng);
            shapes.push(s);
        }
        World::new(bodies, shapes)
    }

    /// Moves every body and shape by `t`.
    pub fn translated(world: &World, t: Vec2) -> World {
        let mut w = world.clone();
        for b in &mut w.bodies {
            b.position += t;
        }
        for s in &mut w.shapes {
            s.geometry = match s.geometry {
                Geometry::Segment { a, b } => Geometry::Segment { a: a + t, b: b + t },
                Geometry::Arc {
                    center,
                    radius,
                    start_angle,
                    end_angle,
                } => Geometry::Arc {
                    center: center + t,
                    radius,
                    start_angle,
                    end_angle,
                },
            };
        }
        w
    }

    /// Rotates the scene 90 degrees counter-clockwise about `pivot`; compass
    /// headings turn by -90 degrees.
    pub fn rotated_quarter(world: &World, pivot: Vec2) -> World {
        let rot = |p: Vec2| {
            let d = p - pivot;
            pivot + Vec2::new(-d.y, d.x)
        };
        let mut w = world.clone();
        for b in &mut w.bodies {
            b.position = rot(b.position);
            b.heading = arena_core::geom::normalize_angle(b.heading - FRAC_PI_2);
        }
        for s in &mut w.shapes {
            s.geometry = match s.geometry {
                Geometry::Segment { a, b } => Geometry::Segment {
                    a: rot(a),
                    b: rot(b),
                },
                Geometry::Arc {
                    center,
                    radius,
                    start_angle,
                    end_angle,
                } => Geometry::Arc {
                    center: rot(center),
                    radius,
                    start_angle: start_angle + FRAC_PI_2,
                    end_angle: end_angle + FRAC_PI_2,
                },
            };
        }
        w
    }
}
