//! In-process policies, including the scripted baselines.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::observation::{color, AgentObservation, VisionParams};
use crate::physics::{Action, PhysicsParams, Side};

/// Decision rule driven by the same information an external agent receives.
pub trait Policy: Send {
    fn name(&self) -> String;

    fn reset(&mut self, _episode_index: u32, _side: Side) {}

    fn act(&mut self, step: u32, obs: &AgentObservation) -> Action;
}

/// Always returns the zero action.
#[derive(Debug, Clone, Default)]
pub struct Noop;

impl Policy for Noop {
    fn name(&self) -> String {
        "noop".into()
    }

    fn act(&mut self, _step: u32, _obs: &AgentObservation) -> Action {
        Action::ZERO
    }
}

/// Uniform actions within the physical bounds. The generator is reseeded
/// from `(seed, episode_index)` at every reset.
#[derive(Debug, Clone)]
pub struct RandomPolicy {
    seed: u64,
    rng: ChaCha8Rng,
    params: PhysicsParams,
}

impl RandomPolicy {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            params: PhysicsParams::default(),
        }
    }
}

impl Policy for RandomPolicy {
    fn name(&self) -> String {
        format!("random:{}", self.seed)
    }

    fn reset(&mut self, episode_index: u32, _side: Side) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(episode_index as u64);
        self.rng = rng;
    }

    fn act(&mut self, _step: u32, _obs: &AgentObservation) -> Action {
        let p = &self.params;
        Action::new(
            self.rng.gen_range(p.f_min..=p.f_max),
            self.rng.gen_range(-p.steer_max..=p.steer_max),
        )
    }
}

/// Full force, steering at the centroid of the nearest visible row of
/// goal-line cells; straight ahead when none are visible.
#[derive(Debug, Clone, Default)]
pub struct ScriptedForward {
    vision: VisionParams,
    params: PhysicsParams,
}

impl ScriptedForward {
    pub fn new(vision: VisionParams) -> Self {
        Self {
            vision,
            params: PhysicsParams::default(),
        }
    }

    /// Steering angle toward the goal cells of `obs`, if any are visible.
    pub fn steer_toward_goal(&self, obs: &AgentObservation) -> Option<f64> {
        let g = obs.grid_size;
        let vision = VisionParams {
            grid_size: g,
            ..self.vision
        };
        // Rows closer to the agent have larger indices.
        (0..g).rev().find_map(|row| {
            let cols: Vec<usize> = (0..g)
                .filter(|&c| obs.cell(row, c) == color::SENSOR)
                .collect();
            if cols.is_empty() {
                return None;
            }
            let mean_col = cols.iter().sum::<usize>() as f64 / cols.len() as f64;
            let half = vision.window_side / 2.0;
            let cell = vision.cell_side();
            let x = -half + (mean_col + 0.5) * cell;
            let y = vision.cell_center(row, 0).y;
            let angle = x.atan2(y);
            Some(angle.clamp(-self.params.steer_max, self.params.steer_max))
        })
    }
}

impl Policy for ScriptedForward {
    fn name(&self) -> String {
        "scripted_forward".into()
    }

    fn act(&mut self, _step: u32, obs: &AgentObservation) -> Action {
        Action::new(
            self.params.f_max,
            self.steer_toward_goal(obs).unwrap_or(0.0),
        )
    }
}

/// Replays a fixed action list, then idles.
#[derive(Debug, Clone)]
pub struct Scripted {
    pub name: String,
    pub actions: Vec<Action>,
    cursor: usize,
}

impl Scripted {
    pub fn new(name: impl Into<String>, actions: Vec<Action>) -> Self {
        Self {
            name: name.into(),
            actions,
            cursor: 0,
        }
    }

    /// The same action every step.
    pub fn constant(name: impl Into<String>, action: Action, steps: usize) -> Self {
        Self::new(name, vec![action; steps])
    }
}

impl Policy for Scripted {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn reset(&mut self, _episode_index: u32, _side: Side) {
        self.cursor = 0;
    }

    fn act(&mut self, _step: u32, _obs: &AgentObservation) -> Action {
        let a = self
            .actions
            .get(self.cursor)
            .copied()
            .unwrap_or(Action::ZERO);
        self.cursor += 1;
        a
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blank(g: usize) -> AgentObservation {
        AgentObservation {
            grid_size: g,
            grid: vec![0; g * g],
            energy_fraction: 1.0,
            controllable: true,
        }
    }

    #[test]
    fn noop_is_zero() {
        assert_eq!(Noop.act(0, &blank(40)), Action::ZERO);
    }

    #[test]
    fn random_is_reproducible_and_bounded() {
        let mut a = RandomPolicy::new(5);
        let mut b = RandomPolicy::new(5);
        a.reset(3, Side::A);
        b.reset(3, Side::B);
        let p = PhysicsParams::default();
        for step in 0..200 {
            let x = a.act(step, &blank(40));
            assert_eq!(x, b.act(step, &blank(40)));
            assert!(x.force >= p.f_min && x.force <= p.f_max);
            assert!(x.steer.abs() <= p.steer_max);
        }
        let mut c = RandomPolicy::new(5);
        c.reset(4, Side::A);
        a.reset(3, Side::A);
        assert_ne!(a.act(0, &blank(40)), c.act(0, &blank(40)));
    }

    #[test]
    fn forward_goes_straight_without_goal() {
        let a = ScriptedForward::default().act(0, &blank(40));
        assert_eq!(a, Action::new(100.0, 0.0));
    }

    #[test]
    fn forward_steers_left_toward_left_cells() {
        let mut obs = blank(40);
        for c in 3..9 {
            obs.grid[10 * 40 + c] = color::SENSOR;
        }
        let s = ScriptedForward::default().steer_toward_goal(&obs).unwrap();
        assert!(s < 0.0);
        // centroid column 5.5 -> x = -100 + 6 * 5 = -70; row 10 -> y = 180 - 52.5
        let expected = (-70.0f64)
            .atan2(127.5)
            .clamp(-30f64.to_radians(), 30f64.to_radians());
        assert!((s - expected).abs() < 1e-12);
    }
}
