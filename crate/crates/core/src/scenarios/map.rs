//! Versioned JSON map documents.
//!
//! Coordinates are centered: a map with bounds `w x h` spans
//! `[-w/2, w/2] x [-h/2, h/2]`. Angles are radians; spawn headings use the
//! compass convention of the physics module (0 faces +y, clockwise positive)
//! while arc angles run counter-clockwise from +x.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::f64::consts::PI;
use std::fmt;

use crate::geom::{point_segment_distance, Vec2};
use crate::observation::color;
use crate::physics::{
    Geometry, Material, PhysicsParams, ShapeTag, Side, StaticShape, AGENT_RADIUS,
};

use super::GameKind;

pub const MAP_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub position: Vec2,
    pub heading: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub w: f64,
    pub h: f64,
}

impl Bounds {
    pub fn contains(&self, p: Vec2) -> bool {
        p.x.abs() <= self.w / 2.0 && p.y.abs() <= self.h / 2.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpisodeLimits {
    pub max_steps: u32,
}

/// Scenario objects placed by a map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MapObject {
    Puck {
        position: Vec2,
        radius: f64,
        mass: f64,
    },
    Ball {
        position: Vec2,
        radius: f64,
        mass: f64,
    },
    Billiard {
        position: Vec2,
        side: Side,
        radius: f64,
        mass: f64,
    },
    /// Curling target point.
    Center { position: Vec2 },
    /// Table-Hockey halfway line; blocks agents only.
    Midline { a: Vec2, b: Vec2 },
}

/// Rule parameters that maps may override.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioParams {
    /// Steps per turn for the turn-based kinds.
    pub turn_steps: u32,
    pub rocks_per_side: u32,
    pub strokes_per_side: u32,
    pub rock_radius: f64,
    pub rock_mass: f64,
    /// Signed amplitude of the seeded spawn-heading perturbation.
    pub heading_jitter: f64,
}

impl ScenarioParams {
    pub fn defaults_for(kind: GameKind) -> Self {
        Self {
            turn_steps: match kind {
                GameKind::Curling => 150,
                GameKind::Billiard => 80,
                _ => 0,
            },
            rocks_per_side: 3,
            strokes_per_side: 6,
            rock_radius: 15.0,
            rock_mass: 1.0,
            heading_jitter: 0.0,
        }
    }
}

/// A validated map.
#[derive(Debug, Clone, PartialEq)]
pub struct MapSpec {
    pub name: String,
    pub kind: GameKind,
    pub bounds: Bounds,
    pub shapes: Vec<StaticShape>,
    /// Agent spawns for sides A and B (rock launch poses in Curling).
    pub spawns: [Pose; 2],
    pub objects: Vec<MapObject>,
    pub limits: EpisodeLimits,
    pub params: ScenarioParams,
    /// SHA-256 hex of the canonical document.
    pub checksum: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapErrorKind {
    Syntax,
    Schema,
    UnknownMaterial,
    UnknownColor,
    SpawnOverlap,
    MissingElement,
    InvalidValue,
}

impl MapErrorKind {
    pub fn label(self) -> &'static str {
        match self {
            Self::Syntax => "syntax error",
            Self::Schema => "schema error",
            Self::UnknownMaterial => "unknown material",
            Self::UnknownColor => "unknown color",
            Self::SpawnOverlap => "spawn overlap",
            Self::MissingElement => "missing element",
            Self::InvalidValue => "invalid value",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct MapError {
    pub kind: MapErrorKind,
    pub path: String,
    pub message: String,
}

impl MapError {
    fn new(kind: MapErrorKind, path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            kind,
            path: path.into(),
            message: message.into(),
        }
    }
}

/// Wrapper so a list of errors prints one per line.
pub struct MapErrors<'a>(pub &'a [MapError]);

impl fmt::Display for MapErrors<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in self.0 {
            writeln!(f, "{e}")?;
        }
        Ok(())
    }
}

// On-disk document layout.

#[derive(Debug, Clone, Serialize, Deserialize)]
struct MapDoc {
    version: u32,
    name: String,
    kind: String,
    bounds: Bounds,
    shapes: Vec<ShapeDoc>,
    spawns: Vec<SpawnDoc>,
    #[serde(default)]
    objects: Vec<ObjectDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    limits: Option<LimitsDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    params: Option<ParamsDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ShapeDoc {
    #[serde(rename = "type")]
    ty: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    center: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    start_angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    end_angle: Option<f64>,
    material: String,
    color: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tag: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    agents: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    objects: Option<bool>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct SpawnDoc {
    side: String,
    x: f64,
    y: f64,
    #[serde(default)]
    heading: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct ObjectDoc {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    y: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    b: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    side: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mass: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct LimitsDoc {
    max_steps: u32,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
struct ParamsDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    turn_steps: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rocks_per_side: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    strokes_per_side: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rock_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rock_mass: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    heading_jitter: Option<f64>,
}

/// SHA-256 hex of the sorted-key, minimal-whitespace form of a JSON value.
pub fn canonical_checksum(value: &serde_json::Value) -> String {
    let canonical = serde_json::to_string(value).expect("json value serializes");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

/// Parses and validates a map document. All semantic problems are reported
/// together.
pub fn parse_map(text: &str) -> Result<MapSpec, Vec<MapError>> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| {
        vec![MapError::new(
            MapErrorKind::Syntax,
            format!("line {} column {}", e.line(), e.column()),
            e.to_string(),
        )]
    })?;
    parse_map_value(value)
}

fn parse_map_value(value: serde_json::Value) -> Result<MapSpec, Vec<MapError>> {
    let checksum = canonical_checksum(&value);
    let doc: MapDoc = serde_path_to_error::deserialize(value).map_err(|e| {
        let path = e.path().to_string();
        vec![MapError::new(
            MapErrorKind::Schema,
            path,
            e.into_inner().to_string(),
        )]
    })?;
    Validator::default().run(doc, checksum)
}

#[derive(Default)]
struct Validator {
    errors: Vec<MapError>,
}

fn vec2(p: [f64; 2]) -> Vec2 {
    Vec2::new(p[0], p[1])
}

fn parse_side(s: &str) -> Option<Side> {
    match s {
        "a" | "A" => Some(Side::A),
        "b" | "B" => Some(Side::B),
        _ => None,
    }
}

fn parse_tag(s: &str) -> Option<ShapeTag> {
    Some(match s {
        "finish" => ShapeTag::Finish,
        "border" => ShapeTag::Border,
        "goal_a" => ShapeTag::GoalA,
        "goal_b" => ShapeTag::GoalB,
        "release" => ShapeTag::Release,
        "pocket" => ShapeTag::Pocket,
        "midline" => ShapeTag::Midline,
        _ => return None,
    })
}

fn tag_name(tag: ShapeTag) -> &'static str {
    match tag {
        ShapeTag::Finish => "finish",
        ShapeTag::Border => "border",
        ShapeTag::GoalA => "goal_a",
        ShapeTag::GoalB => "goal_b",
        ShapeTag::Release => "release",
        ShapeTag::Pocket => "pocket",
        ShapeTag::Midline => "midline",
    }
}

fn material_name(m: Material) -> &'static str {
    match m {
        Material::Elastic => "elastic",
        Material::Sticky => "sticky",
        Material::Sensor => "sensor",
    }
}

fn material_color(m: Material) -> u8 {
    match m {
        Material::Elastic => color::ELASTIC_WALL,
        Material::Sticky => color::STICKY_WALL,
        Material::Sensor => color::SENSOR,
    }
}

impl Validator {
    fn err(&mut self, kind: MapErrorKind, path: impl Into<String>, msg: impl Into<String>) {
        self.errors.push(MapError::new(kind, path, msg));
    }

    fn finite(&mut self, path: &str, values: &[f64]) -> bool {
        if values.iter().all(|v| v.is_finite()) {
            true
        } else {
            self.err(MapErrorKind::InvalidValue, path, "numbers must be finite");
            false
        }
    }

    fn run(mut self, doc: MapDoc, checksum: String) -> Result<MapSpec, Vec<MapError>> {
        if doc.version != MAP_FORMAT_VERSION {
            self.err(
                MapErrorKind::Schema,
                "version",
                format!(
                    "unsupported version {} (expected {MAP_FORMAT_VERSION})",
                    doc.version
                ),
            );
        }
        if doc.name.trim().is_empty() {
            self.err(MapErrorKind::InvalidValue, "name", "name must not be empty");
        }
        let kind = GameKind::parse(&doc.kind);
        if kind.is_none() {
            self.err(
                MapErrorKind::Schema,
                "kind",
                format!("unknown game kind '{}'", doc.kind),
            );
        }
        let bounds = doc.bounds;
        if !(bounds.w > 0.0 && bounds.h > 0.0 && bounds.w.is_finite() && bounds.h.is_finite()) {
            self.err(
                MapErrorKind::InvalidValue,
                "bounds",
                "bounds must be positive and finite",
            );
        }

        let shapes: Vec<StaticShape> = doc
            .shapes
            .iter()
            .enumerate()
            .filter_map(|(i, s)| self.shape(i, s))
            .collect();

        let mut spawns: [Option<Pose>; 2] = [None, None];
        if doc.spawns.len() != 2 {
            self.err(
                MapErrorKind::Schema,
                "spawns",
                format!("expected exactly 2 spawns, found {}", doc.spawns.len()),
            );
        }
        for (i, s) in doc.spawns.iter().enumerate() {
            let path = format!("spawns[{i}]");
            let Some(side) = parse_side(&s.side) else {
                self.err(
                    MapErrorKind::Schema,
                    format!("{path}.side"),
                    format!("unknown side '{}'", s.side),
                );
                continue;
            };
            if !self.finite(&path, &[s.x, s.y, s.heading]) {
                continue;
            }
            let pose = Pose {
                position: Vec2::new(s.x, s.y),
                heading: crate::geom::normalize_angle(s.heading),
            };
            if !bounds.contains(pose.position) {
                self.err(
                    MapErrorKind::InvalidValue,
                    &path,
                    "spawn lies outside the map bounds",
                );
            }
            if spawns[side.index()].replace(pose).is_some() {
                self.err(
                    MapErrorKind::Schema,
                    format!("{path}.side"),
                    format!("duplicate spawn for side {side}"),
                );
            }
        }

        let objects: Vec<(usize, MapObject)> = doc
            .objects
            .iter()
            .enumerate()
            .filter_map(|(i, o)| self.object(i, o).map(|obj| (i, obj)))
            .collect();

        let mut params = ScenarioParams::defaults_for(kind.unwrap_or(GameKind::Running));
        if let Some(p) = &doc.params {
            if let Some(v) = p.turn_steps {
                params.turn_steps = v;
            }
            if let Some(v) = p.rocks_per_side {
                params.rocks_per_side = v;
            }
            if let Some(v) = p.strokes_per_side {
                params.strokes_per_side = v;
            }
            if let Some(v) = p.rock_radius {
                params.rock_radius = v;
            }
            if let Some(v) = p.rock_mass {
                params.rock_mass = v;
            }
            if let Some(v) = p.heading_jitter {
                params.heading_jitter = v;
            }
        }
        if !(params.rock_radius > 0.0 && params.rock_mass > 0.0) {
            self.err(
                MapErrorKind::InvalidValue,
                "params",
                "rock radius and mass must be positive",
            );
        }
        if !params.heading_jitter.is_finite() || params.heading_jitter.abs() > PI {
            self.err(
                MapErrorKind::InvalidValue,
                "params.heading_jitter",
                "jitter amplitude must lie in [-pi, pi]",
            );
        }

        let limits = EpisodeLimits {
            max_steps: doc
                .limits
                .as_ref()
                .map(|l| l.max_steps)
                .unwrap_or_else(|| kind.map_or(500, |k| k.default_max_steps())),
        };
        if limits.max_steps == 0 {
            self.err(
                MapErrorKind::InvalidValue,
                "limits.max_steps",
                "max_steps must be positive",
            );
        }

        let (Some(kind), [Some(a), Some(b)]) = (kind, spawns) else {
            if spawns.iter().any(Option::is_none) && doc.spawns.len() == 2 {
                self.err(
                    MapErrorKind::MissingElement,
                    "spawns",
                    "spawns for both sides a and b are required",
                );
            }
            return Err(self.errors);
        };
        let spawns = [a, b];
        if kind.is_turn_based() && params.turn_steps == 0 {
            self.err(
                MapErrorKind::InvalidValue,
                "params.turn_steps",
                "turn-based kinds need turn_steps > 0",
            );
        }

        self.required_elements(kind, &shapes, &objects, &params, &spawns);
        self.overlaps(kind, &shapes, &objects, &params, &spawns);

        if !self.errors.is_empty() {
            return Err(self.errors);
        }
        Ok(MapSpec {
            name: doc.name,
            kind,
            bounds,
            shapes,
            spawns,
            objects: objects.into_iter().map(|(_, o)| o).collect(),
            limits,
            params,
            checksum,
        })
    }

    fn shape(&mut self, i: usize, s: &ShapeDoc) -> Option<StaticShape> {
        let path = format!("shapes[{i}]");
        let geometry = match s.ty.as_str() {
            "segment" => match (s.a, s.b) {
                (Some(a), Some(b)) => Some(Geometry::Segment {
                    a: vec2(a),
                    b: vec2(b),
                }),
                _ => {
                    self.err(MapErrorKind::Schema, &path, "segment requires 'a' and 'b'");
                    None
                }
            },
            "arc" => match (s.center, s.radius, s.start_angle, s.end_angle) {
                (Some(c), Some(r), Some(a0), Some(a1)) => Some(Geometry::Arc {
                    center: vec2(c),
                    radius: r,
                    start_angle: a0,
                    end_angle: a1,
                }),
                _ => {
                    self.err(
                        MapErrorKind::Schema,
                        &path,
                        "arc requires 'center', 'radius', 'start_angle' and 'end_angle'",
                    );
                    None
                }
            },
            other => {
                self.err(
                    MapErrorKind::Schema,
                    format!("{path}.type"),
                    format!("unknown shape type '{other}'"),
                );
                None
            }
        };
        if let Some(g) = &geometry {
            if let Err(e) = g.validate() {
                self.err(MapErrorKind::InvalidValue, &path, e.to_string());
            }
        }
        let material = match s.material.as_str() {
            "elastic" => Some(Material::Elastic),
            "sticky" => Some(Material::Sticky),
            "sensor" => Some(Material::Sensor),
            other => {
                self.err(
                    MapErrorKind::UnknownMaterial,
                    format!("{path}.material"),
                    format!("unknown material '{other}'"),
                );
                None
            }
        };
        let color_ok = u8::try_from(s.color)
            .ok()
            .filter(|c| color::is_registered(*c));
        if color_ok.is_none() {
            self.err(
                MapErrorKind::UnknownColor,
                format!("{path}.color"),
                format!("unregistered color code {}", s.color),
            );
        }
        if let (Some(m), Some(c)) = (material, color_ok) {
            if material_color(m) != c {
                self.err(
                    MapErrorKind::UnknownColor,
                    format!("{path}.color"),
                    format!(
                        "{} shapes use color {}, found {c}",
                        material_name(m),
                        material_color(m)
                    ),
                );
            }
        }
        let tag = match &s.tag {
            None => None,
            Some(t) => match parse_tag(t) {
                Some(tag) => Some(tag),
                None => {
                    self.err(
                        MapErrorKind::Schema,
                        format!("{path}.tag"),
                        format!("unknown tag '{t}'"),
                    );
                    None
                }
            },
        };
        let (geometry, material, color_code) = (geometry?, material?, color_ok?);
        Some(StaticShape {
            geometry,
            material,
            collides_agents: s.agents.unwrap_or(true),
            collides_objects: s.objects.unwrap_or(true),
            color_code,
            tag,
        })
    }

    fn object(&mut self, i: usize, o: &ObjectDoc) -> Option<MapObject> {
        let path = format!("objects[{i}]");
        let pos = match (o.x, o.y) {
            (Some(x), Some(y)) if x.is_finite() && y.is_finite() => Some(Vec2::new(x, y)),
            (Some(_), Some(_)) => {
                self.err(MapErrorKind::InvalidValue, &path, "numbers must be finite");
                None
            }
            _ => None,
        };
        let need_pos = |v: &mut Self| {
            if pos.is_none() {
                v.err(
                    MapErrorKind::Schema,
                    &path,
                    format!("{} requires 'x' and 'y'", o.kind),
                );
            }
            pos
        };
        let disc = |v: &mut Self, radius: f64, mass: f64| -> Option<(f64, f64)> {
            let r = o.radius.unwrap_or(radius);
            let m = o.mass.unwrap_or(mass);
            if r > 0.0 && m > 0.0 && r.is_finite() && m.is_finite() {
                Some((r, m))
            } else {
                v.err(
                    MapErrorKind::InvalidValue,
                    &path,
                    "radius and mass must be positive",
                );
                None
            }
        };
        match o.kind.as_str() {
            "puck" => {
                let position = need_pos(self);
                let (radius, mass) = disc(self, 8.0, 0.3)?;
                Some(MapObject::Puck {
                    position: position?,
                    radius,
                    mass,
                })
            }
            "ball" => {
                let position = need_pos(self);
                let (radius, mass) = disc(self, 10.0, 0.5)?;
                Some(MapObject::Ball {
                    position: position?,
                    radius,
                    mass,
                })
            }
            "billiard" => {
                let position = need_pos(self);
                let side = o.side.as_deref().and_then(parse_side);
                if side.is_none() {
                    self.err(
                        MapErrorKind::Schema,
                        format!("{path}.side"),
                        "billiard balls need side 'a' or 'b'",
                    );
                }
                let (radius, mass) = disc(self, 12.0, 0.5)?;
                Some(MapObject::Billiard {
                    position: position?,
                    side: side?,
                    radius,
                    mass,
                })
            }
            "center" => Some(MapObject::Center {
                position: need_pos(self)?,
            }),
            "midline" => match (o.a, o.b) {
                (Some(a), Some(b)) if a != b && self.finite(&path, &[a[0], a[1], b[0], b[1]]) => {
                    Some(MapObject::Midline {
                        a: vec2(a),
                        b: vec2(b),
                    })
                }
                _ => {
                    self.err(
                        MapErrorKind::Schema,
                        &path,
                        "midline requires distinct 'a' and 'b'",
                    );
                    None
                }
            },
            other => {
                self.err(
                    MapErrorKind::Schema,
                    format!("{path}.kind"),
                    format!("unknown object kind '{other}'"),
                );
                None
            }
        }
    }

    fn required_elements(
        &mut self,
        kind: GameKind,
        shapes: &[StaticShape],
        objects: &[(usize, MapObject)],
        params: &ScenarioParams,
        spawns: &[Pose; 2],
    ) {
        let has_sensor = |tag: ShapeTag| {
            shapes
                .iter()
                .any(|s| s.material == Material::Sensor && s.tag == Some(tag))
        };
        let count = |f: &dyn Fn(&MapObject) -> bool| objects.iter().filter(|(_, o)| f(o)).count();
        let mut missing = |what: &str| {
            self.errors.push(MapError::new(
                MapErrorKind::MissingElement,
                "shapes",
                format!("missing {what}"),
            ))
        };
        match kind {
            GameKind::Running => {
                if !has_sensor(ShapeTag::Finish) {
                    missing("goal line");
                }
            }
            GameKind::Wrestling => {
                if !has_sensor(ShapeTag::Border) {
                    missing("border line");
                }
            }
            GameKind::TableHockey | GameKind::Football => {
                if !has_sensor(ShapeTag::GoalA) || !has_sensor(ShapeTag::GoalB) {
                    missing("goal line for each side");
                }
                if kind == GameKind::TableHockey {
                    if count(&|o| matches!(o, MapObject::Midline { .. })) != 1 {
                        missing("midline");
                    }
                    if count(&|o| matches!(o, MapObject::Puck { .. })) != 1 {
                        missing("puck");
                    }
                } else if count(&|o| matches!(o, MapObject::Ball { .. })) != 1 {
                    missing("ball");
                }
            }
            GameKind::Curling => {
                let releases: Vec<&StaticShape> = shapes
                    .iter()
                    .filter(|s| s.material == Material::Sensor && s.tag == Some(ShapeTag::Release))
                    .collect();
                if releases.len() != 1 || !matches!(releases[0].geometry, Geometry::Segment { .. })
                {
                    missing("single straight release line");
                } else if let Geometry::Segment { a, b } = releases[0].geometry {
                    let side_of = |p: Vec2| (b - a).cross(p - a);
                    let (s0, s1) = (side_of(spawns[0].position), side_of(spawns[1].position));
                    if s0 * s1 <= 0.0 {
                        self.err(
                            MapErrorKind::InvalidValue,
                            "spawns",
                            "both launch spawns must lie behind the release line",
                        );
                    }
                    for (i, s) in spawns.iter().enumerate() {
                        if point_segment_distance(s.position, a, b) < 2.0 * params.rock_radius {
                            self.err(
                                MapErrorKind::InvalidValue,
                                format!("spawns[{i}]"),
                                "launch spawn must sit at least two rock radii behind the release line",
                            );
                        }
                    }
                }
                if count(&|o| matches!(o, MapObject::Center { .. })) != 1 {
                    self.err(
                        MapErrorKind::MissingElement,
                        "objects",
                        "missing center point",
                    );
                }
                if params.rocks_per_side == 0 {
                    self.err(
                        MapErrorKind::InvalidValue,
                        "params.rocks_per_side",
                        "need at least one rock per side",
                    );
                }
            }
            GameKind::Billiard => {
                if !has_sensor(ShapeTag::Pocket) {
                    missing("pocket");
                }
                for side in Side::BOTH {
                    if count(&|o| matches!(o, MapObject::Billiard { side: s, .. } if *s == side))
                        == 0
                    {
                        self.err(
                            MapErrorKind::MissingElement,
                            "objects",
                            format!("missing billiard balls for side {side}"),
                        );
                    }
                }
                if params.strokes_per_side == 0 {
                    self.err(
                        MapErrorKind::InvalidValue,
                        "params.strokes_per_side",
                        "need at least one stroke per side",
                    );
                }
            }
        }
        if kind == GameKind::TableHockey {
            if let Some((_, MapObject::Midline { a, b })) = objects
                .iter()
                .find(|(_, o)| matches!(o, MapObject::Midline { .. }))
            {
                let side_of = |p: Vec2| (*b - *a).cross(p - *a);
                if side_of(spawns[0].position) * side_of(spawns[1].position) >= 0.0 {
                    self.err(
                        MapErrorKind::InvalidValue,
                        "spawns",
                        "agents must start on opposite sides of the midline",
                    );
                }
            }
        }
    }

    fn overlaps(
        &mut self,
        kind: GameKind,
        shapes: &[StaticShape],
        objects: &[(usize, MapObject)],
        params: &ScenarioParams,
        spawns: &[Pose; 2],
    ) {
        // (path, center, radius, is_agent)
        let mut discs: Vec<(String, Vec2, f64, bool)> = Vec::new();
        for (i, s) in spawns.iter().enumerate() {
            let (r, agent) = if kind == GameKind::Curling {
                (params.rock_radius, false)
            } else {
                (AGENT_RADIUS, true)
            };
            discs.push((format!("spawns[{i}]"), s.position, r, agent));
        }
        for (i, o) in objects {
            match *o {
                MapObject::Puck {
                    position, radius, ..
                }
                | MapObject::Ball {
                    position, radius, ..
                }
                | MapObject::Billiard {
                    position, radius, ..
                } => {
                    discs.push((format!("objects[{i}]"), position, radius, false));
                }
                _ => {}
            }
        }
        let mut solids: Vec<StaticShape> = shapes.to_vec();
        solids.extend(objects.iter().filter_map(|(_, o)| match *o {
            MapObject::Midline { a, b } => Some(midline_shape(a, b)),
            _ => None,
        }));
        for (path, c, r, agent) in &discs {
            for (k, s) in solids.iter().enumerate() {
                if s.is_solid_for(*agent) && s.geometry.distance(*c) < *r {
                    self.err(
                        MapErrorKind::SpawnOverlap,
                        path.clone(),
                        format!("disc overlaps shape {k}"),
                    );
                }
            }
        }
        for i in 0..discs.len() {
            for j in i + 1..discs.len() {
                // Curling launch spawns are used one rock at a time.
                if kind == GameKind::Curling && i < 2 && j < 2 {
                    continue;
                }
                let (pi, ci, ri, _) = &discs[i];
                let (pj, cj, rj, _) = &discs[j];
                if ci.distance(*cj) < ri + rj {
                    self.err(
                        MapErrorKind::SpawnOverlap,
                        pi.clone(),
                        format!("disc overlaps {pj}"),
                    );
                }
            }
        }
    }
}

/// The agent-only elastic wall that realizes a Table-Hockey midline.
pub fn midline_shape(a: Vec2, b: Vec2) -> StaticShape {
    StaticShape {
        geometry: Geometry::Segment { a, b },
        material: Material::Elastic,
        collides_agents: true,
        collides_objects: false,
        color_code: color::ELASTIC_WALL,
        tag: Some(ShapeTag::Midline),
    }
}

impl MapSpec {
    /// Map shapes plus rule-derived shapes, in the order bodies see them.
    pub fn static_shapes(&self) -> Vec<StaticShape> {
        let mut shapes = self.shapes.clone();
        for o in &self.objects {
            if let MapObject::Midline { a, b } = *o {
                shapes.push(midline_shape(a, b));
            }
        }
        shapes
    }

    pub fn center_point(&self) -> Option<Vec2> {
        self.objects.iter().find_map(|o| match *o {
            MapObject::Center { position } => Some(position),
            _ => None,
        })
    }

    /// Serializes back to a map document.
    pub fn to_json(&self) -> serde_json::Value {
        let p2 = |v: Vec2| [v.x, v.y];
        let shapes = self
            .shapes
            .iter()
            .map(|s| {
                let mut doc = ShapeDoc {
                    ty: String::new(),
                    a: None,
                    b: None,
                    center: None,
                    radius: None,
                    start_angle: None,
                    end_angle: None,
                    material: material_name(s.material).to_string(),
                    color: s.color_code as i64,
                    tag: s.tag.map(|t| tag_name(t).to_string()),
                    agents: (!s.collides_agents).then_some(false),
                    objects: (!s.collides_objects).then_some(false),
                };
                match s.geometry {
                    Geometry::Segment { a, b } => {
                        doc.ty = "segment".into();
                        doc.a = Some(p2(a));
                        doc.b = Some(p2(b));
                    }
                    Geometry::Arc {
                        center,
                        radius,
                        start_angle,
                        end_angle,
                    } => {
                        doc.ty = "arc".into();
                        doc.center = Some(p2(center));
                        doc.radius = Some(radius);
                        doc.start_angle = Some(start_angle);
                        doc.end_angle = Some(end_angle);
                    }
                }
                doc
            })
            .collect();
        let spawns = Side::BOTH
            .iter()
            .map(|side| {
                let s = self.spawns[side.index()];
                SpawnDoc {
                    side: side.to_string(),
                    x: s.position.x,
                    y: s.position.y,
                    heading: s.heading,
                }
            })
            .collect();
        let blank = ObjectDoc {
            kind: String::new(),
            x: None,
            y: None,
            a: None,
            b: None,
            side: None,
            radius: None,
            mass: None,
        };
        let objects = self
            .objects
            .iter()
            .map(|o| match *o {
                MapObject::Puck {
                    position,
                    radius,
                    mass,
                } => ObjectDoc {
                    kind: "puck".into(),
                    x: Some(position.x),
                    y: Some(position.y),
                    radius: Some(radius),
                    mass: Some(mass),
                    ..blank.clone()
                },
                MapObject::Ball {
                    position,
                    radius,
                    mass,
                } => ObjectDoc {
                    kind: "ball".into(),
                    x: Some(position.x),
                    y: Some(position.y),
                    radius: Some(radius),
                    mass: Some(mass),
                    ..blank.clone()
                },
                MapObject::Billiard {
                    position,
                    side,
                    radius,
                    mass,
                } => ObjectDoc {
                    kind: "billiard".into(),
                    x: Some(position.x),
                    y: Some(position.y),
                    side: Some(side.to_string()),
                    radius: Some(radius),
                    mass: Some(mass),
                    ..blank.clone()
                },
                MapObject::Center { position } => ObjectDoc {
                    kind: "center".into(),
                    x: Some(position.x),
                    y: Some(position.y),
                    ..blank.clone()
                },
                MapObject::Midline { a, b } => ObjectDoc {
                    kind: "midline".into(),
                    a: Some(p2(a)),
                    b: Some(p2(b)),
                    ..blank.clone()
                },
            })
            .collect();
        let p = self.params;
        let doc = MapDoc {
            version: MAP_FORMAT_VERSION,
            name: self.name.clone(),
            kind: self.kind.as_str().to_string(),
            bounds: self.bounds,
            shapes,
            spawns,
            objects,
            limits: Some(LimitsDoc {
                max_steps: self.limits.max_steps,
            }),
            params: Some(ParamsDoc {
                turn_steps: Some(p.turn_steps),
                rocks_per_side: Some(p.rocks_per_side),
                strokes_per_side: Some(p.strokes_per_side),
                rock_radius: Some(p.rock_radius),
                rock_mass: Some(p.rock_mass),
                heading_jitter: Some(p.heading_jitter),
            }),
        };
        serde_json::to_value(doc).expect("map document serializes")
    }

    /// The map reflected across the world y-axis. Spawn headings and the
    /// jitter amplitude flip sign so seeded episodes mirror exactly.
    pub fn mirrored(&self) -> MapSpec {
        let mut m = self.clone();
        m.name = format!("{}-mirrored", self.name);
        for s in &mut m.shapes {
            s.geometry = s.geometry.mirrored();
        }
        for s in &mut m.spawns {
            s.position = s.position.mirror_x();
            s.heading = crate::geom::normalize_angle(-s.heading);
        }
        for o in &mut m.objects {
            match o {
                MapObject::Puck { position, .. }
                | MapObject::Ball { position, .. }
                | MapObject::Billiard { position, .. }
                | MapObject::Center { position } => *position = position.mirror_x(),
                MapObject::Midline { a, b } => {
                    *a = a.mirror_x();
                    *b = b.mirror_x();
                }
            }
        }
        m.params.heading_jitter = -self.params.heading_jitter;
        m.checksum = canonical_checksum(&m.to_json());
        m
    }

    /// Physics constants used by every scenario.
    pub fn physics(&self) -> PhysicsParams {
        PhysicsParams::default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const CORRIDOR: &str = r#"{
        "version": 1, "name": "corridor", "kind": "running",
        "bounds": {"w": 200, "h": 700},
        "shapes": [
            {"type": "segment", "a": [-60, -340], "b": [-60, 340], "material": "elastic", "color": 2},
            {"type": "segment", "a": [60, -340], "b": [60, 340], "material": "elastic", "color": 2},
            {"type": "segment", "a": [-60, 250], "b": [60, 250], "material": "sensor", "color": 3, "tag": "finish"}
        ],
        "spawns": [
            {"side": "a", "x": -30, "y": -300, "heading": 0},
            {"side": "b", "x": 30, "y": -300, "heading": 0}
        ]
    }"#;

    #[test]
    fn minimal_corridor_parses() {
        let m = parse_map(CORRIDOR).unwrap();
        assert_eq!(m.kind, GameKind::Running);
        assert_eq!(m.shapes.len(), 3);
        assert_eq!(m.limits.max_steps, 500);
        assert_eq!(m.checksum.len(), 64);
    }

    #[test]
    fn checksum_ignores_whitespace_and_key_order() {
        let a = parse_map(CORRIDOR).unwrap();
        let v: serde_json::Value = serde_json::from_str(CORRIDOR).unwrap();
        let compact = serde_json::to_string(&v).unwrap();
        let b = parse_map(&compact).unwrap();
        assert_eq!(a.checksum, b.checksum);
        let reordered = CORRIDOR.replacen(
            r#""version": 1, "name": "corridor""#,
            r#""name": "corridor", "version": 1"#,
            1,
        );
        assert_eq!(parse_map(&reordered).unwrap().checksum, a.checksum);
    }

    #[test]
    fn missing_goal_line_is_reported() {
        let text = CORRIDOR.replace(r#""tag": "finish""#, r#""tag": "border""#);
        let errs = parse_map(&text).unwrap_err();
        assert!(errs
            .iter()
            .any(|e| e.kind == MapErrorKind::MissingElement
                && e.message.contains("missing goal line")));
    }

    #[test]
    fn identical_spawns_overlap() {
        let text = CORRIDOR.replace(r#""x": 30, "y": -300"#, r#""x": -30, "y": -300"#);
        let errs = parse_map(&text).unwrap_err();
        assert!(errs.iter().any(|e| e.kind == MapErrorKind::SpawnOverlap));
    }

    #[test]
    fn errors_are_aggregated_with_paths() {
        let text = CORRIDOR
            .replace(
                r#""material": "elastic", "color": 2}"#,
                r#""material": "rubber", "color": 2}"#,
            )
            .replace(r#""tag": "finish""#, r#""tag": "nope""#);
        let errs = parse_map(&text).unwrap_err();
        let paths: Vec<&str> = errs.iter().map(|e| e.path.as_str()).collect();
        assert!(paths.contains(&"shapes[0].material"), "{paths:?}");
        assert!(paths.contains(&"shapes[1].material"), "{paths:?}");
        assert!(paths.contains(&"shapes[2].tag"), "{paths:?}");
        assert!(errs.iter().any(|e| e.kind == MapErrorKind::UnknownMaterial));
    }

    #[test]
    fn unregistered_color_is_rejected() {
        let text = CORRIDOR.replacen(r#""color": 2"#, r#""color": 42"#, 1);
        let errs = parse_map(&text).unwrap_err();
        assert!(errs
            .iter()
            .any(|e| e.kind == MapErrorKind::UnknownColor && e.path == "shapes[0].color"));
    }

    #[test]
    fn syntax_and_schema_errors() {
        let errs = parse_map("{ not json").unwrap_err();
        assert_eq!(errs[0].kind, MapErrorKind::Syntax);
        let errs = parse_map(r#"{"version": 1, "name": "x", "kind": "running", "bounds": {"w": "wide", "h": 1}, "shapes": [], "spawns": []}"#).unwrap_err();
        assert_eq!(errs[0].kind, MapErrorKind::Schema);
        assert!(errs[0].path.contains("bounds"), "{}", errs[0].path);
    }

    #[test]
    fn json_round_trip_preserves_spec() {
        let m = parse_map(CORRIDOR).unwrap();
        let again = parse_map(&m.to_json().to_string()).unwrap();
        assert_eq!(again.shapes, m.shapes);
        assert_eq!(again.spawns, m.spawns);
        assert_eq!(again.limits, m.limits);
    }

    #[test]
    fn mirrored_twice_is_identity() {
        let m = parse_map(CORRIDOR).unwrap();
        let mm = m.mirrored().mirrored();
        assert_eq!(mm.spawns, m.spawns);
        assert_eq!(mm.shapes, m.shapes);
    }
}
