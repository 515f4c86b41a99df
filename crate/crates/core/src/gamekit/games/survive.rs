//! Survive: zombies (`z`) close in every `zombie_period` ticks and bite for
//! one hit point, then return to their spawn. Honey (`o`) heals one hit point
//! and scores +1, regrowing after a delay. Tombstones (`t`) block movement.
//! Lasting until the tick cap wins.

use rand::Rng;

use super::{chase_step, wander_step, GameRules};
use crate::gamekit::state::{Action, GameState, SpriteKind, Status};

pub(super) struct Survive;

const MAX_HP: i32 = 5;
const CHASE_PROB: f64 = 0.75;
const HONEY_REGROW: i32 = 40;

fn bites(state: &mut GameState) {
    let (ax, ay) = (state.avatar.x, state.avatar.y);
    for s in state.sprites.iter_mut() {
        if s.alive && s.kind == SpriteKind::Zombie && (s.x, s.y) == (ax, ay) {
            state.avatar.hp -= 1;
            (s.x, s.y) = s.home;
        }
    }
    if state.avatar.hp <= 0 {
        state.avatar.hp = 0;
        state.status = Status::Loss;
    }
}

impl GameRules for Survive {
    fn actions(&self) -> &'static [Action] {
        &[Action::Up, Action::Down, Action::Left, Action::Right]
    }

    fn legend(&self) -> &'static [(char, SpriteKind)] {
        &[('z', SpriteKind::Zombie), ('o', SpriteKind::Honey), ('t', SpriteKind::Tombstone)]
    }

    fn max_hp(&self) -> Option<i32> {
        Some(MAX_HP)
    }

    fn outlast_wins(&self) -> bool {
        true
    }

    fn step(&self, state: &mut GameState, action: Action) {
        if let Some((dx, dy)) = action.delta() {
            state.move_avatar(dx, dy);
        }
        let (ax, ay) = (state.avatar.x, state.avatar.y);
        for s in state.sprites.iter_mut().filter(|s| s.kind == SpriteKind::Honey) {
            if s.alive && (s.x, s.y) == (ax, ay) {
                s.alive = false;
                s.timer = HONEY_REGROW;
                state.score += 1.0;
                state.avatar.hp = (state.avatar.hp + 1).min(state.avatar.max_hp);
            } else if !s.alive {
                s.timer -= 1;
                if s.timer <= 0 {
                    s.timer = 0;
                    s.alive = true;
                }
            }
        }
        bites(state);
        if state.is_terminal() {
            return;
        }
        let period = state.level().setting("zombie_period", 2).max(1) as u32;
        if state.tick.is_multiple_of(period) {
            let target = (state.avatar.x, state.avatar.y);
            for i in 0..state.sprites.len() {
                let s = &state.sprites[i];
                if s.kind != SpriteKind::Zombie {
                    continue;
                }
                let pos = (s.x, s.y);
                let free = |st: &GameState, x: i32, y: i32| !st.solid_at(x, y);
                let (nx, ny) = if state.rng.random_bool(CHASE_PROB) {
                    chase_step(state, pos, target, free)
                } else {
                    wander_step(state, pos, free)
                };
                state.sprites[i].x = nx;
                state.sprites[i].y = ny;
            }
            bites(state);
        }
    }
}
