use std::fmt::Write as _;
use std::sync::Arc;

use rand_chacha::ChaCha8Rng;

use super::games::GameId;
use super::level::Level;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Ongoing,
    Win,
    Loss,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Action {
    Nil,
    Up,
    Down,
    Left,
    Right,
    Use,
}

impl Action {
    pub fn delta(self) -> Option<(i32, i32)> {
        match self {
            Action::Up => Some((0, -1)),
            Action::Down => Some((0, 1)),
            Action::Left => Some((-1, 0)),
            Action::Right => Some((1, 0)),
            Action::Nil | Action::Use => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Action::Nil => "NIL",
            Action::Up => "UP",
            Action::Down => "DOWN",
            Action::Left => "LEFT",
            Action::Right => "RIGHT",
            Action::Use => "USE",
        }
    }
}

/// Observation categories, in feature order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Category {
    Npc,
    Immovable,
    Movable,
    Resource,
    Portal,
    FromAvatar,
}

impl Category {
    pub const ALL: [Category; 6] = [
        Category::Npc,
        Category::Immovable,
        Category::Movable,
        Category::Resource,
        Category::Portal,
        Category::FromAvatar,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Category::Npc => "npc",
            Category::Immovable => "immovable",
            Category::Movable => "movable",
            Category::Resource => "resource",
            Category::Portal => "portal",
            Category::FromAvatar => "from_avatar",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpriteKind {
    Butterfly,
    Racer,
    Goal,
    Gem,
    Hazard,
    Fence,
    Block,
    Zombie,
    Honey,
    Tombstone,
    Alien,
    Missile,
}

impl SpriteKind {
    pub fn category(self) -> Category {
        match self {
            SpriteKind::Racer | SpriteKind::Hazard | SpriteKind::Zombie | SpriteKind::Alien => Category::Npc,
            SpriteKind::Fence | SpriteKind::Tombstone => Category::Immovable,
            SpriteKind::Butterfly | SpriteKind::Block => Category::Movable,
            SpriteKind::Gem | SpriteKind::Honey => Category::Resource,
            SpriteKind::Goal => Category::Portal,
            SpriteKind::Missile => Category::FromAvatar,
        }
    }

    /// Solid for walking entities.
    pub fn is_solid(self) -> bool {
        matches!(self, SpriteKind::Fence | SpriteKind::Tombstone | SpriteKind::Block)
    }

    pub fn glyph(self) -> char {
        match self {
            SpriteKind::Butterfly => 'b',
            SpriteKind::Racer => 'r',
            SpriteKind::Goal => 'G',
            SpriteKind::Gem => 'g',
            SpriteKind::Hazard => 'h',
            SpriteKind::Fence => 'f',
            SpriteKind::Block => 'k',
            SpriteKind::Zombie => 'z',
            SpriteKind::Honey => 'o',
            SpriteKind::Tombstone => 't',
            SpriteKind::Alien => 'a',
            SpriteKind::Missile => '|',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sprite {
    pub kind: SpriteKind,
    pub x: i32,
    pub y: i32,
    pub alive: bool,
    /// Spawn cell, for sprites that return or respawn.
    pub home: (i32, i32),
    /// Game-specific countdown (respawn delay, dormancy).
    pub timer: i32,
}

impl Sprite {
    pub fn new(kind: SpriteKind, x: i32, y: i32) -> Self {
        Self { kind, x, y, alive: true, home: (x, y), timer: 0 }
    }
}

/// What an observer sees of a sprite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpriteObservation {
    pub category: Category,
    pub x: i32,
    pub y: i32,
    pub alive: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AvatarState {
    pub x: i32,
    pub y: i32,
    /// Unit facing vector in grid coordinates (y grows downward).
    pub orientation: (i32, i32),
    pub hp: i32,
    pub max_hp: i32,
    /// Up to three resource counters, clamped to `[0, RESOURCE_CAP]`.
    pub resources: [i32; 3],
    pub action_count: usize,
}

pub const RESOURCE_CAP: i32 = 20;

/// Full simulation state. Cloning is cheap (static terrain is shared) and
/// never affects the original.
#[derive(Debug, Clone)]
pub struct GameState {
    game: GameId,
    level: Arc<Level>,
    pub tick: u32,
    pub score: f64,
    pub status: Status,
    pub avatar: AvatarState,
    pub(crate) sprites: Vec<Sprite>,
    pub(crate) rng: ChaCha8Rng,
    /// Bit per category ever observed alive this episode.
    seen: u8,
    /// Game-specific scalar (formation direction, gate state, ...).
    pub(crate) flag: i32,
}

impl PartialEq for GameState {
    fn eq(&self, other: &Self) -> bool {
        self.game == other.game
            && (Arc::ptr_eq(&self.level, &other.level) || self.level == other.level)
            && self.tick == other.tick
            && self.score == other.score
            && self.status == other.status
            && self.avatar == other.avatar
            && self.sprites == other.sprites
            && self.rng == other.rng
            && self.seen == other.seen
            && self.flag == other.flag
    }
}

impl GameState {
    pub(crate) fn new(level: Arc<Level>, avatar: AvatarState, sprites: Vec<Sprite>, rng: ChaCha8Rng) -> Self {
        let mut s = Self {
            game: level.game,
            level,
            tick: 0,
            score: 0.0,
            status: Status::Ongoing,
            avatar,
            sprites,
            rng,
            seen: 0,
            flag: 0,
        };
        s.refresh_seen();
        s
    }

    pub fn game(&self) -> GameId {
        self.game
    }

    pub fn level(&self) -> &Level {
        &self.level
    }

    pub fn width(&self) -> usize {
        self.level.width
    }

    pub fn height(&self) -> usize {
        self.level.height
    }

    pub fn is_terminal(&self) -> bool {
        self.status != Status::Ongoing
    }

    pub fn action_count(&self) -> usize {
        self.avatar.action_count
    }

    pub fn sprites(&self) -> &[Sprite] {
        &self.sprites
    }

    pub fn observations(&self) -> impl Iterator<Item = SpriteObservation> + '_ {
        self.sprites.iter().map(|s| SpriteObservation { category: s.kind.category(), x: s.x, y: s.y, alive: s.alive })
    }

    /// Whether a live sprite of `category` has appeared at any point of the episode.
    pub fn category_seen(&self, category: Category) -> bool {
        self.seen & (1 << category.index()) != 0
    }

    pub fn is_wall(&self, x: i32, y: i32) -> bool {
        self.level.is_wall(x, y)
    }

    pub(crate) fn sprite_at(&self, x: i32, y: i32, pred: impl Fn(&Sprite) -> bool) -> Option<usize> {
        self.sprites.iter().position(|s| s.alive && s.x == x && s.y == y && pred(s))
    }

    pub(crate) fn solid_at(&self, x: i32, y: i32) -> bool {
        self.is_wall(x, y) || self.sprite_at(x, y, |s| s.kind.is_solid()).is_some()
    }

    /// Recomputes the observed-category record from scratch.
    pub(crate) fn reset_seen(&mut self) {
        self.seen = 0;
        self.refresh_seen();
    }

    fn refresh_seen(&mut self) {
        for s in self.sprites.iter().filter(|s| s.alive) {
            self.seen |= 1 << s.kind.category().index();
        }
    }

    /// End-of-tick bookkeeping: drop spent sprites, record observed categories.
    pub(crate) fn finish_tick(&mut self) {
        self.sprites.retain(|s| s.alive || s.timer > 0);
        self.refresh_seen();
    }

    /// Moves the avatar one cell if the target is not solid. Facing always
    /// follows the requested direction.
    pub(crate) fn move_avatar(&mut self, dx: i32, dy: i32) -> bool {
        self.avatar.orientation = (dx, dy);
        let (nx, ny) = (self.avatar.x + dx, self.avatar.y + dy);
        if self.solid_at(nx, ny) {
            return false;
        }
        self.avatar.x = nx;
        self.avatar.y = ny;
        true
    }

    /// Debug dump of the grid, one character per cell.
    pub fn ascii(&self) -> String {
        let (w, h) = (self.width(), self.height());
        let mut grid: Vec<Vec<char>> = (0..h)
            .map(|y| (0..w).map(|x| if self.is_wall(x as i32, y as i32) { '#' } else { '.' }).collect())
            .collect();
        for s in self.sprites.iter().filter(|s| s.alive) {
            grid[s.y as usize][s.x as usize] = s.kind.glyph();
        }
        grid[self.avatar.y as usize][self.avatar.x as usize] = 'A';
        let mut out = String::new();
        for row in grid {
            out.extend(row);
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "tick {} score {} status {:?} hp {}/{}",
            self.tick, self.score, self.status, self.avatar.hp, self.avatar.max_hp
        );
        out
    }
}
