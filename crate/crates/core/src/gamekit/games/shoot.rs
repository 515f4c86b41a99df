//! Shoot: the avatar slides along the bottom and fires missiles (`USE`), one
//! in flight at a time. An alien formation (`a`) appears at tick 10, sweeps
//! sideways every `alien_period` ticks and drops a row at each wall. Each
//! alien shot scores +1; clearing the formation wins, and an alien reaching
//! the avatar's row loses.

use super::GameRules;
use crate::gamekit::state::{Action, GameState, Sprite, SpriteKind, Status};

pub(super) struct Shoot;

/// Tick at which the formation appears.
pub(crate) const SPAWN_TICK: u32 = 10;

fn resolve_hits(state: &mut GameState) {
    let missiles: Vec<usize> = (0..state.sprites.len())
        .filter(|&i| state.sprites[i].alive && state.sprites[i].kind == SpriteKind::Missile)
        .collect();
    for m in missiles {
        let (mx, my) = (state.sprites[m].x, state.sprites[m].y);
        if let Some(a) = state.sprite_at(mx, my, |s| s.kind == SpriteKind::Alien) {
            state.sprites[a].alive = false;
            state.sprites[m].alive = false;
            state.score += 1.0;
        }
    }
}

impl GameRules for Shoot {
    fn actions(&self) -> &'static [Action] {
        &[Action::Use, Action::Left, Action::Right]
    }

    fn legend(&self) -> &'static [(char, SpriteKind)] {
        &[('a', SpriteKind::Alien)]
    }

    fn initial_orientation(&self) -> (i32, i32) {
        (0, -1)
    }

    fn init(&self, state: &mut GameState) {
        for s in state.sprites.iter_mut().filter(|s| s.kind == SpriteKind::Alien) {
            s.alive = false;
            s.timer = 1;
        }
        state.flag = 1;
    }

    fn step(&self, state: &mut GameState, action: Action) {
        match action {
            Action::Use => {
                let (x, y) = (state.avatar.x, state.avatar.y - 1);
                let in_flight = state.sprites.iter().any(|s| s.alive && s.kind == SpriteKind::Missile);
                if !in_flight && !state.is_wall(x, y) {
                    state.sprites.push(Sprite::new(SpriteKind::Missile, x, y + 1));
                }
            }
            other => {
                if let Some((dx, dy)) = other.delta() {
                    state.move_avatar(dx, dy);
                    state.avatar.orientation = (0, -1);
                }
            }
        }
        for s in state.sprites.iter_mut().filter(|s| s.alive && s.kind == SpriteKind::Missile) {
            s.y -= 1;
        }
        for i in 0..state.sprites.len() {
            let s = &state.sprites[i];
            if s.alive && s.kind == SpriteKind::Missile && state.is_wall(s.x, s.y) {
                state.sprites[i].alive = false;
            }
        }
        resolve_hits(state);

        if state.tick == SPAWN_TICK {
            for s in state.sprites.iter_mut().filter(|s| s.kind == SpriteKind::Alien) {
                s.alive = true;
                s.timer = 0;
            }
        }
        let period = state.level().setting("alien_period", 2).max(1) as u32;
        if state.tick > SPAWN_TICK && state.tick.is_multiple_of(period) {
            let dir = state.flag;
            let turn =
                state.sprites.iter().any(|s| s.alive && s.kind == SpriteKind::Alien && state.is_wall(s.x + dir, s.y));
            for s in state.sprites.iter_mut().filter(|s| s.alive && s.kind == SpriteKind::Alien) {
                if turn {
                    s.y += 1;
                } else {
                    s.x += dir;
                }
            }
            if turn {
                state.flag = -dir;
            }
            resolve_hits(state);
        }

        let aliens = state.sprites.iter().filter(|s| s.kind == SpriteKind::Alien);
        if aliens.clone().any(|s| s.alive && s.y >= state.avatar.y) {
            state.status = Status::Loss;
        } else if state.tick >= SPAWN_TICK && aliens.clone().all(|s| !s.alive) {
            state.status = Status::Win;
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use crate::gamekit::{advance, load_level, parse_level, Category, GameId, SpriteKind, Status};

    const USE: usize = 0;

    #[test]
    fn formation_appears_at_spawn_tick() {
        let mut s = load_level(GameId::Shoot, 0, 0).unwrap();
        assert!(!s.category_seen(Category::Npc));
        for _ in 1..super::SPAWN_TICK {
            advance(&mut s, 1).unwrap();
            assert!(!s.category_seen(Category::Npc));
        }
        advance(&mut s, 1).unwrap();
        assert_eq!(s.tick, super::SPAWN_TICK);
        assert!(s.category_seen(Category::Npc));
    }

    #[test]
    fn missile_hits_alien_above() {
        let level = Arc::new(
            parse_level(GameId::Shoot, ";alien_period=1000\n#####\n#.a.#\n#...#\n#...#\n#.A.#\n#####\n").unwrap(),
        );
        let mut s = level.instantiate(0);
        for _ in 0..9 {
            advance(&mut s, 1).unwrap();
            advance(&mut s, 2).unwrap();
        }
        assert_eq!(s.tick, 18);
        advance(&mut s, USE).unwrap();
        assert!(s.sprites().iter().any(|sp| sp.kind == SpriteKind::Missile && sp.alive));
        advance(&mut s, USE).unwrap();
        advance(&mut s, USE).unwrap();
        assert_eq!((s.score, s.status), (1.0, Status::Win));
    }

    #[test]
    fn formation_reaching_avatar_row_loses() {
        let level = Arc::new(parse_level(GameId::Shoot, ";alien_period=1\n#####\n#a..#\n#..A#\n#####\n").unwrap());
        let mut s = level.instantiate(0);
        while !s.is_terminal() {
            advance(&mut s, 1).unwrap();
        }
        assert_eq!(s.status, Status::Loss);
    }
}
