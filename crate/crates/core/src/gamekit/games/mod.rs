//! Rule tables. Each game is a unit struct; all mutable data lives in
//! [`GameState`].

mod collect;
mod corridor;
mod race;
mod shoot;
mod survive;
mod trap;

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use super::state::{Action, GameState, SpriteKind};
use super::GameError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GameId {
    /// Dense rewards: chase wandering butterflies.
    Collect,
    /// Sparse reward: reach the far portal before the NPC racer.
    Race,
    /// Deceptive: nearby gems release hazards, the win is a block push.
    Trap,
    /// Hit points: outlast chasing zombies.
    Survive,
    /// Avatar projectiles against a descending formation.
    Shoot,
    /// One-dimensional toy: the portal is always inside the rollout horizon.
    Corridor,
}

impl GameId {
    /// The benchmark suite (excludes the corridor toy).
    pub fn suite() -> [GameId; 5] {
        [GameId::Collect, GameId::Race, GameId::Trap, GameId::Survive, GameId::Shoot]
    }

    pub fn all() -> [GameId; 6] {
        [GameId::Collect, GameId::Race, GameId::Trap, GameId::Survive, GameId::Shoot, GameId::Corridor]
    }

    pub fn name(self) -> &'static str {
        match self {
            GameId::Collect => "collect",
            GameId::Race => "race",
            GameId::Trap => "trap",
            GameId::Survive => "survive",
            GameId::Shoot => "shoot",
            GameId::Corridor => "corridor",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn rules(self) -> &'static dyn GameRules {
        match self {
            GameId::Collect => &collect::Collect,
            GameId::Race => &race::Race,
            GameId::Trap => &trap::Trap,
            GameId::Survive => &survive::Survive,
            GameId::Shoot => &shoot::Shoot,
            GameId::Corridor => &corridor::Corridor,
        }
    }
}

impl fmt::Display for GameId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GameId {
    type Err = GameError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        GameId::all()
            .into_iter()
            .find(|g| g.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| GameError::UnknownGame(s.to_string()))
    }
}

impl serde::Serialize for GameId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> serde::Deserialize<'de> for GameId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Static description and transition function of one game.
pub trait GameRules: Sync {
    fn actions(&self) -> &'static [Action];

    /// Map characters beyond `#`, `A` and `.`.
    fn legend(&self) -> &'static [(char, SpriteKind)];

    /// Maximum hit points, when the game has them.
    fn max_hp(&self) -> Option<i32> {
        None
    }

    /// Number of avatar resource counters the game uses (at most three).
    fn resource_slots(&self) -> usize {
        0
    }

    fn initial_orientation(&self) -> (i32, i32) {
        (1, 0)
    }

    /// Whether reaching the tick cap is a win rather than a loss.
    fn outlast_wins(&self) -> bool {
        false
    }

    fn init(&self, _state: &mut GameState) {}

    /// Applies one tick. `state.tick` has already been incremented.
    fn step(&self, state: &mut GameState, action: Action);
}

const DIRS: [(i32, i32); 4] = [(0, -1), (0, 1), (-1, 0), (1, 0)];

/// Cell an NPC at `(x, y)` would step to when chasing `(tx, ty)`: the axis
/// with the larger gap first, the other axis if that is blocked.
fn chase_step(
    state: &mut GameState,
    (x, y): (i32, i32),
    (tx, ty): (i32, i32),
    free: impl Fn(&GameState, i32, i32) -> bool,
) -> (i32, i32) {
    let (dx, dy) = ((tx - x).signum(), (ty - y).signum());
    let horizontal_first = match (tx - x).abs().cmp(&(ty - y).abs()) {
        std::cmp::Ordering::Greater => true,
        std::cmp::Ordering::Less => false,
        std::cmp::Ordering::Equal => state.rng.random_bool(0.5),
    };
    let options = if horizontal_first { [(dx, 0), (0, dy)] } else { [(0, dy), (dx, 0)] };
    options
        .into_iter()
        .filter(|&(mx, my)| mx != 0 || my != 0)
        .map(|(mx, my)| (x + mx, y + my))
        .find(|&(nx, ny)| free(state, nx, ny))
        .unwrap_or((x, y))
}

/// A uniformly random neighbouring cell, or the current one if it is blocked.
fn wander_step(state: &mut GameState, (x, y): (i32, i32), free: impl Fn(&GameState, i32, i32) -> bool) -> (i32, i32) {
    let (mx, my) = DIRS[state.rng.random_range(0..4)];
    let (nx, ny) = (x + mx, y + my);
    if free(state, nx, ny) {
        (nx, ny)
    } else {
        (x, y)
    }
}
