//! Corridor: a one-row toy. Walk right into the portal (`G`) for the win.

use super::GameRules;
use crate::gamekit::state::{Action, GameState, SpriteKind, Status};

pub(super) struct Corridor;

impl GameRules for Corridor {
    fn actions(&self) -> &'static [Action] {
        &[Action::Left, Action::Right]
    }

    fn legend(&self) -> &'static [(char, SpriteKind)] {
        &[('G', SpriteKind::Goal)]
    }

    fn step(&self, state: &mut GameState, action: Action) {
        if let Some((dx, dy)) = action.delta() {
            state.move_avatar(dx, dy);
        }
        let (ax, ay) = (state.avatar.x, state.avatar.y);
        if state.sprite_at(ax, ay, |s| s.kind == SpriteKind::Goal).is_some() {
            state.score += 1.0;
            state.status = Status::Win;
        }
    }
}
