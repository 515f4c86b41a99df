//! Collect: butterflies (`b`) wander; touching one scores +2. Nectar
//! drops (`g`) sit still and score +1. The level is won once nothing is
//! left to collect.

use rand::Rng;

use super::{wander_step, GameRules};
use crate::gamekit::state::{Action, GameState, SpriteKind, Status};

pub(super) struct Collect;

const BUTTERFLY_MOVE_PROB: f64 = 0.3;

fn collect_at(state: &mut GameState) {
    let (ax, ay) = (state.avatar.x, state.avatar.y);
    for s in state.sprites.iter_mut().filter(|s| s.alive && s.x == ax && s.y == ay) {
        s.alive = false;
        state.score += match s.kind {
            SpriteKind::Butterfly => 2.0,
            _ => 1.0,
        };
    }
}

impl GameRules for Collect {
    fn actions(&self) -> &'static [Action] {
        &[Action::Up, Action::Down, Action::Left, Action::Right]
    }

    fn legend(&self) -> &'static [(char, SpriteKind)] {
        &[('b', SpriteKind::Butterfly), ('g', SpriteKind::Gem)]
    }

    fn step(&self, state: &mut GameState, action: Action) {
        if let Some((dx, dy)) = action.delta() {
            state.move_avatar(dx, dy);
        }
        collect_at(state);
        for i in 0..state.sprites.len() {
            let s = &state.sprites[i];
            if !s.alive || s.kind != SpriteKind::Butterfly || !state.rng.random_bool(BUTTERFLY_MOVE_PROB) {
                continue;
            }
            let pos = (s.x, s.y);
            let (nx, ny) = wander_step(state, pos, |st, x, y| !st.solid_at(x, y));
            state.sprites[i].x = nx;
            state.sprites[i].y = ny;
        }
        collect_at(state);
        if state.sprites.iter().all(|s| !s.alive) {
            state.status = Status::Win;
        }
    }
}
