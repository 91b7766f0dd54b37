use serde::{Deserialize, Serialize};

use crate::physics::Side;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GameResult {
    AWins,
    BWins,
    Draw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    GoalCrossed,
    BorderTouched,
    NearestRock,
    MostPotted,
    Timeout,
    Forfeit,
    /// Series decided by counting game wins.
    Majority,
}

/// Zero-sum result of one episode or series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Outcome {
    pub result: GameResult,
    /// `(s_A, s_B)` with `s_A + s_B == 0`.
    pub score: (i8, i8),
    pub reason: Reason,
}

impl Outcome {
    pub fn win(side: Side, reason: Reason) -> Self {
        match side {
            Side::A => Self {
                result: GameResult::AWins,
                score: (1, -1),
                reason,
            },
            Side::B => Self {
                result: GameResult::BWins,
                score: (-1, 1),
                reason,
            },
        }
    }

    pub fn draw(reason: Reason) -> Self {
        Self {
            result: GameResult::Draw,
            score: (0, 0),
            reason,
        }
    }

    pub fn winner(&self) -> Option<Side> {
        match self.result {
            GameResult::AWins => Some(Side::A),
            GameResult::BWins => Some(Side::B),
            GameResult::Draw => None,
        }
    }

    pub fn is_zero_sum(&self) -> bool {
        let (a, b) = self.score;
        a + b == 0
            && match self.result {
                GameResult::AWins => a == 1,
                GameResult::BWins => b == 1,
                GameResult::Draw => a == 0,
            }
    }

    /// The same outcome with the sides exchanged.
    pub fn swapped(&self) -> Self {
        match self.winner() {
            Some(s) => Outcome::win(s.other(), self.reason),
            None => *self,
        }
    }

    /// Both sides forfeited in the same step.
    pub fn is_double_forfeit(&self) -> bool {
        self.result == GameResult::Draw && self.reason == Reason::Forfeit
    }
}
