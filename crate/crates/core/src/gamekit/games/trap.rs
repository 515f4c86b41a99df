//! Trap: gems (`g`, +1 each) sit behind fences (`f`). Walking into a fence
//! tears all fences down and wakes the hazards (`h`), which then chase the
//! avatar; contact loses. The level is won by pushing the block (`k`) onto
//! the portal (`G`).

use rand::Rng;

use super::{chase_step, GameRules};
use crate::gamekit::state::{Action, GameState, SpriteKind, Status, RESOURCE_CAP};

pub(super) struct Trap;

const HAZARD_MOVE_PROB: f64 = 0.6;

fn hazard_contact(state: &GameState) -> bool {
    let (ax, ay) = (state.avatar.x, state.avatar.y);
    state.sprite_at(ax, ay, |s| s.kind == SpriteKind::Hazard).is_some()
}

fn move_avatar(state: &mut GameState, dx: i32, dy: i32) {
    state.avatar.orientation = (dx, dy);
    let (tx, ty) = (state.avatar.x + dx, state.avatar.y + dy);
    if state.sprite_at(tx, ty, |s| s.kind == SpriteKind::Fence).is_some() {
        for s in state.sprites.iter_mut().filter(|s| s.kind == SpriteKind::Fence) {
            s.alive = false;
        }
        state.flag = 1;
        return;
    }
    if let Some(block) = state.sprite_at(tx, ty, |s| s.kind == SpriteKind::Block) {
        let (bx, by) = (tx + dx, ty + dy);
        let blocked = state.solid_at(bx, by) || state.sprite_at(bx, by, |s| s.kind != SpriteKind::Goal).is_some();
        if blocked {
            return;
        }
        state.sprites[block].x = bx;
        state.sprites[block].y = by;
    } else if state.solid_at(tx, ty) {
        return;
    }
    state.avatar.x = tx;
    state.avatar.y = ty;
}

impl GameRules for Trap {
    fn actions(&self) -> &'static [Action] {
        &[Action::Up, Action::Down, Action::Left, Action::Right]
    }

    fn legend(&self) -> &'static [(char, SpriteKind)] {
        &[
            ('g', SpriteKind::Gem),
            ('h', SpriteKind::Hazard),
            ('f', SpriteKind::Fence),
            ('k', SpriteKind::Block),
            ('G', SpriteKind::Goal),
        ]
    }

    fn resource_slots(&self) -> usize {
        1
    }

    fn step(&self, state: &mut GameState, action: Action) {
        if let Some((dx, dy)) = action.delta() {
            move_avatar(state, dx, dy);
        }
        let (ax, ay) = (state.avatar.x, state.avatar.y);
        if let Some(gem) = state.sprite_at(ax, ay, |s| s.kind == SpriteKind::Gem) {
            state.sprites[gem].alive = false;
            state.score += 1.0;
            state.avatar.resources[0] = (state.avatar.resources[0] + 1).min(RESOURCE_CAP);
        }
        let on_goal = |st: &GameState, s: &crate::gamekit::Sprite| {
            s.kind == SpriteKind::Block && st.sprite_at(s.x, s.y, |g| g.kind == SpriteKind::Goal).is_some()
        };
        if state.sprites.iter().any(|s| s.alive && on_goal(state, s)) {
            state.score += 1.0;
            state.status = Status::Win;
            return;
        }
        if hazard_contact(state) {
            state.status = Status::Loss;
            return;
        }
        if state.flag == 1 {
            let target = (state.avatar.x, state.avatar.y);
            for i in 0..state.sprites.len() {
                let s = &state.sprites[i];
                if !s.alive || s.kind != SpriteKind::Hazard || !state.rng.random_bool(HAZARD_MOVE_PROB) {
                    continue;
                }
                let pos = (s.x, s.y);
                let (nx, ny) = chase_step(state, pos, target, |st, x, y| {
                    !st.solid_at(x, y) && st.sprite_at(x, y, |o| o.kind == SpriteKind::Hazard).is_none()
                });
                state.sprites[i].x = nx;
                state.sprites[i].y = ny;
            }
            if hazard_contact(state) {
                state.status = Status::Loss;
            }
        }
    }
}
