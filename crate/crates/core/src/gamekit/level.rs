use std::path::Path;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::games::GameId;
use super::state::{AvatarState, GameState, Sprite, SpriteKind};
use super::GameError;

pub const LEVELS_PER_GAME: usize = 5;

/// Static terrain and initial placements parsed from an ASCII map.
#[derive(Debug, Clone, PartialEq)]
pub struct Level {
    pub game: GameId,
    pub width: usize,
    pub height: usize,
    walls: Vec<bool>,
    pub avatar: (i32, i32),
    pub sprites: Vec<(SpriteKind, i32, i32)>,
    /// `;key=value` header directives (NPC speeds and similar).
    pub settings: Vec<(String, i64)>,
}

impl Level {
    pub fn setting(&self, key: &str, default: i64) -> i64 {
        self.settings.iter().find(|(k, _)| k == key).map_or(default, |(_, v)| *v)
    }

    pub fn is_wall(&self, x: i32, y: i32) -> bool {
        if x < 0 || y < 0 || x as usize >= self.width || y as usize >= self.height {
            return true;
        }
        self.walls[y as usize * self.width + x as usize]
    }
}

macro_rules! levels {
    ($dir:literal) => {
        [
            include_str!(concat!("../../levels/", $dir, "/level0.txt")),
            include_str!(concat!("../../levels/", $dir, "/level1.txt")),
            include_str!(concat!("../../levels/", $dir, "/level2.txt")),
            include_str!(concat!("../../levels/", $dir, "/level3.txt")),
            include_str!(concat!("../../levels/", $dir, "/level4.txt")),
        ]
    };
}

fn builtin(game: GameId) -> [&'static str; LEVELS_PER_GAME] {
    match game {
        GameId::Collect => levels!("collect"),
        GameId::Race => levels!("race"),
        GameId::Trap => levels!("trap"),
        GameId::Survive => levels!("survive"),
        GameId::Shoot => levels!("shoot"),
        GameId::Corridor => levels!("corridor"),
    }
}

/// Parses a map: `#` wall, `A` avatar, `.` or space empty, anything else
/// through the game's legend. Lines starting with `;` are comments, and
/// `;key=value` comments are integer settings.
pub fn parse_level(game: GameId, text: &str) -> Result<Level, GameError> {
    let mut settings = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let Some(rest) = line.strip_prefix(';') else { continue };
        if let Some((k, v)) = rest.split_once('=') {
            let v = v
                .trim()
                .parse::<i64>()
                .map_err(|e| GameError::Parse { line: lineno + 1, reason: format!("setting '{}': {e}", k.trim()) })?;
            settings.push((k.trim().to_string(), v));
        }
    }
    let rows: Vec<(usize, &str)> =
        text.lines().enumerate().filter(|(_, l)| !l.starts_with(';') && !l.trim().is_empty()).collect();
    let perr = |line: usize, reason: String| GameError::Parse { line: line + 1, reason };
    let height = rows.len();
    let width = rows.iter().map(|(_, r)| r.chars().count()).max().unwrap_or(0);
    if height == 0 || width == 0 || width > 20 || height > 20 {
        return Err(perr(0, format!("grid must be between 1x1 and 20x20, got {width}x{height}")));
    }
    let rules = game.rules();
    let mut walls = vec![false; width * height];
    let mut avatar = None;
    let mut sprites = Vec::new();
    for (y, (lineno, row)) in rows.iter().enumerate() {
        for (x, ch) in row.chars().enumerate() {
            let (xi, yi) = (x as i32, y as i32);
            match ch {
                '#' => walls[y * width + x] = true,
                '.' | ' ' => {}
                'A' => {
                    if avatar.replace((xi, yi)).is_some() {
                        return Err(perr(*lineno, "more than one avatar".into()));
                    }
                }
                other => match rules.legend().iter().find(|(c, _)| *c == other) {
                    Some(&(_, kind)) => sprites.push((kind, xi, yi)),
                    None => return Err(perr(*lineno, format!("'{other}' not in the {game} legend"))),
                },
            }
        }
    }
    let avatar = avatar.ok_or_else(|| perr(0, "no avatar".into()))?;
    Ok(Level { game, width, height, walls, avatar, sprites, settings })
}

impl Level {
    /// Fresh episode state on this level with the NPC random stream seeded by `seed`.
    pub fn instantiate(self: &Arc<Self>, seed: u64) -> GameState {
        let rules = self.game.rules();
        let max_hp = rules.max_hp().unwrap_or(0);
        let avatar = AvatarState {
            x: self.avatar.0,
            y: self.avatar.1,
            orientation: rules.initial_orientation(),
            hp: max_hp,
            max_hp,
            resources: [0; 3],
            action_count: rules.actions().len(),
        };
        let sprites = self.sprites.iter().map(|&(k, x, y)| Sprite::new(k, x, y)).collect();
        let mut state = GameState::new(Arc::clone(self), avatar, sprites, ChaCha8Rng::seed_from_u64(seed));
        rules.init(&mut state);
        state.reset_seen();
        state
    }
}

/// Initial state of built-in level `index` of `game`.
pub fn load_level(game: GameId, index: usize, seed: u64) -> Result<GameState, GameError> {
    let text = builtin(game).get(index).copied().ok_or(GameError::UnknownLevel { game, index })?;
    Ok(Arc::new(parse_level(game, text)?).instantiate(seed))
}

/// Like [`load_level`] but reads `<dir>/<game>/level<index>.txt`.
pub fn load_level_from_dir(dir: &Path, game: GameId, index: usize, seed: u64) -> Result<GameState, GameError> {
    if index >= LEVELS_PER_GAME {
        return Err(GameError::UnknownLevel { game, index });
    }
    let path = dir.join(game.name()).join(format!("level{index}.txt"));
    let text = std::fs::read_to_string(&path).map_err(|e| GameError::Io(format!("{}: {e}", path.display())))?;
    Ok(Arc::new(parse_level(game, &text)?).instantiate(seed))
}
