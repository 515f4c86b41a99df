//! Grid arcade games behind a forward model: copyable [`GameState`] values
//! advanced one tick per action by stateless per-game rule tables.

mod games;
mod level;
mod state;

pub use games::{GameId, GameRules};
pub use level::{load_level, load_level_from_dir, parse_level, Level, LEVELS_PER_GAME};
pub use state::{
    Action, AvatarState, Category, GameState, Sprite, SpriteKind, SpriteObservation, Status, RESOURCE_CAP,
};

use thiserror::Error;

/// Episodes end at this tick: a loss, except in games where outlasting the
/// cap is the win condition.
pub const TICK_CAP: u32 = 500;

/// Heuristic value of a winning state.
pub const WIN_VALUE: f64 = 1_000_000.0;
/// Heuristic value of a losing state.
pub const LOSS_VALUE: f64 = -1_000_000.0;

#[derive(Debug, Error, PartialEq)]
pub enum GameError {
    #[error("action {action} out of range for {game} ({count} actions)")]
    InvalidAction { game: GameId, action: usize, count: usize },
    #[error("unknown game '{0}'")]
    UnknownGame(String),
    #[error("{game} has no level {index}")]
    UnknownLevel { game: GameId, index: usize },
    #[error("level parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("reading level file: {0}")]
    Io(String),
}

/// Advances `state` by one tick under `action` (an index into the game's
/// action list). Terminal states are absorbing: they are left untouched.
pub fn advance(state: &mut GameState, action: usize) -> Result<(), GameError> {
    let rules = state.game().rules();
    let actions = rules.actions();
    let Some(&act) = actions.get(action) else {
        return Err(GameError::InvalidAction { game: state.game(), action, count: actions.len() });
    };
    if state.status != Status::Ongoing {
        return Ok(());
    }
    state.tick += 1;
    rules.step(state, act);
    state.finish_tick();
    if state.status == Status::Ongoing && state.tick >= TICK_CAP {
        state.status = if rules.outlast_wins() { Status::Win } else { Status::Loss };
    }
    Ok(())
}

/// State value: `WIN_VALUE` on a win, `LOSS_VALUE` on a loss, the score otherwise.
pub fn evaluate_state(state: &GameState) -> f64 {
    match state.status {
        Status::Win => WIN_VALUE,
        Status::Loss => LOSS_VALUE,
        Status::Ongoing => state.score,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heuristic_values() {
        let mut s = load_level(GameId::Collect, 0, 1).unwrap();
        s.score = 5.0;
        assert_eq!(evaluate_state(&s), 5.0);
        s.status = Status::Win;
        assert_eq!(evaluate_state(&s), 1_000_000.0);
        s.status = Status::Loss;
        assert_eq!(evaluate_state(&s), -1_000_000.0);
    }

    #[test]
    fn terminal_states_absorb() {
        let mut s = load_level(GameId::Survive, 1, 3).unwrap();
        s.status = Status::Loss;
        let before = s.clone();
        advance(&mut s, 2).unwrap();
        assert_eq!(s, before);
    }

    #[test]
    fn out_of_range_action() {
        let mut s = load_level(GameId::Corridor, 0, 0).unwrap();
        assert!(matches!(advance(&mut s, 2), Err(GameError::InvalidAction { count: 2, .. })));
    }

    #[test]
    fn tick_cap_ends_episodes() {
        for game in GameId::suite() {
            let mut s = load_level(game, 0, 9).unwrap();
            let nil = 0;
            while s.status == Status::Ongoing {
                advance(&mut s, nil).unwrap();
            }
            assert!(s.tick <= TICK_CAP);
        }
        // Walking into the corridor's back wall never finishes.
        let mut s = load_level(GameId::Corridor, 0, 0).unwrap();
        while s.status == Status::Ongoing {
            advance(&mut s, 0).unwrap();
        }
        assert_eq!((s.tick, s.status), (TICK_CAP, Status::Loss));
    }
}
