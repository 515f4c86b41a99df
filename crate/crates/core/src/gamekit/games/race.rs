//! Race: reach the portal (`G`) before the racer (`r`) reaches the portal's
//! column on its own track. The racer advances one cell every
//! `racer_period` ticks. No score is given before the finish.

use super::GameRules;
use crate::gamekit::state::{Action, GameState, SpriteKind, Status};

pub(super) struct Race;

impl GameRules for Race {
    fn actions(&self) -> &'static [Action] {
        &[Action::Up, Action::Down, Action::Left, Action::Right]
    }

    fn legend(&self) -> &'static [(char, SpriteKind)] {
        &[('r', SpriteKind::Racer), ('G', SpriteKind::Goal)]
    }

    fn step(&self, state: &mut GameState, action: Action) {
        if let Some((dx, dy)) = action.delta() {
            state.move_avatar(dx, dy);
        }
        let (ax, ay) = (state.avatar.x, state.avatar.y);
        if state.sprite_at(ax, ay, |s| s.kind == SpriteKind::Goal).is_some() {
            state.score += 1.0;
            state.status = Status::Win;
            return;
        }
        let period = state.level().setting("racer_period", 2).max(1) as u32;
        let goal_x = state.sprites.iter().filter(|s| s.kind == SpriteKind::Goal).map(|s| s.x).max().unwrap_or(0);
        if state.tick.is_multiple_of(period) {
            for i in 0..state.sprites.len() {
                let s = &state.sprites[i];
                if s.kind == SpriteKind::Racer && !state.is_wall(s.x + 1, s.y) {
                    state.sprites[i].x += 1;
                }
            }
        }
        if state.sprites.iter().any(|s| s.kind == SpriteKind::Racer && s.x >= goal_x) {
            state.status = Status::Loss;
        }
    }
}
