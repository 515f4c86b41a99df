//! Network inputs: normalized avatar attributes followed by the distance and
//! relative bearing of the closest sprite of each observed category.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gamekit::{Category, GameState, RESOURCE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DistanceMetric {
    /// Straight-line distance over the grid diagonal.
    #[default]
    Euclidean,
    /// Grid distance over `width + height`.
    Manhattan,
}

/// Which optional features a game exposes. Equal schemas mean equal input
/// layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct FeatureSchema {
    pub hp: bool,
    /// Number of resource counters (0 to 3).
    pub resources: u8,
    /// Indexed by [`Category::index`].
    pub categories: [bool; 6],
}

impl FeatureSchema {
    pub fn category_count(&self) -> usize {
        self.categories.iter().filter(|&&c| c).count()
    }

    pub fn input_count(&self) -> usize {
        4 + usize::from(self.hp) + self.resources as usize + 2 * self.category_count()
    }

    /// Human-readable input names in vector order.
    pub fn labels(&self) -> Vec<String> {
        let mut out: Vec<String> = ["x", "y", "orient_x", "orient_y"].map(String::from).to_vec();
        if self.hp {
            out.push("hp".into());
        }
        out.extend((0..self.resources).map(|i| format!("resource{}", i + 1)));
        for c in Category::ALL.into_iter().filter(|c| self.categories[c.index()]) {
            out.push(format!("{}_dist", c.name()));
            out.push(format!("{}_orient", c.name()));
        }
        out
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum FeatureError {
    #[error("feature schema changed: expected {expected} inputs, state now has {found}")]
    SchemaChanged { expected: usize, found: usize },
}

/// Schema of `state`: hit points and resources as declared by the game,
/// categories that have had a live sprite at some point of the episode.
pub fn schema_of(state: &GameState) -> FeatureSchema {
    let rules = state.game().rules();
    let mut categories = [false; 6];
    for c in Category::ALL {
        categories[c.index()] = state.category_seen(c);
    }
    FeatureSchema { hp: rules.max_hp().is_some(), resources: rules.resource_slots().min(3) as u8, categories }
}

/// Bearing of `v` relative to `facing`, in `[-1, 1]`: 0 straight ahead, 0.5
/// to the right, -0.5 to the left, 1 directly behind. Zero vectors give 0.
pub fn orientation(facing: (i32, i32), v: (i32, i32)) -> f64 {
    if v == (0, 0) || facing == (0, 0) {
        return 0.0;
    }
    let (fx, fy) = (f64::from(facing.0), f64::from(facing.1));
    let (vx, vy) = (f64::from(v.0), f64::from(v.1));
    let cross = fx * vy - fy * vx;
    let dot = fx * vx + fy * vy;
    let o = cross.atan2(dot) / std::f64::consts::PI;
    if o <= -1.0 {
        1.0
    } else {
        o
    }
}

fn max_distance(width: usize, height: usize, metric: DistanceMetric) -> f64 {
    let (w, h) = (width as f64, height as f64);
    match metric {
        DistanceMetric::Euclidean => (w * w + h * h).sqrt(),
        DistanceMetric::Manhattan => w + h,
    }
}

fn distance(v: (i32, i32), metric: DistanceMetric) -> f64 {
    let (dx, dy) = (f64::from(v.0), f64::from(v.1));
    match metric {
        DistanceMetric::Euclidean => (dx * dx + dy * dy).sqrt(),
        DistanceMetric::Manhattan => dx.abs() + dy.abs(),
    }
}

fn unit(v: i32, extent: usize) -> f64 {
    if extent <= 1 {
        0.0
    } else {
        f64::from(v) / (extent - 1) as f64
    }
}

/// Writes the feature vector for `schema` into `out` without checking that
/// the schema still matches. Categories with no live sprite get the
/// sentinel distance 1 and bearing 0.
pub fn extract_into(state: &GameState, schema: &FeatureSchema, metric: DistanceMetric, out: &mut Vec<f64>) {
    out.clear();
    let a = &state.avatar;
    let (w, h) = (state.width(), state.height());
    out.push(unit(a.x, w));
    out.push(unit(a.y, h));
    out.push(f64::from(a.orientation.0));
    out.push(f64::from(a.orientation.1));
    if schema.hp {
        out.push(if a.max_hp > 0 { f64::from(a.hp.clamp(0, a.max_hp)) / f64::from(a.max_hp) } else { 0.0 });
    }
    for r in &a.resources[..schema.resources as usize] {
        out.push(f64::from((*r).clamp(0, RESOURCE_CAP)) / f64::from(RESOURCE_CAP));
    }
    let max_d = max_distance(w, h, metric);
    let mut closest: [Option<(f64, (i32, i32))>; 6] = [None; 6];
    for s in state.sprites().iter().filter(|s| s.alive) {
        let slot = &mut closest[s.kind.category().index()];
        let v = (s.x - a.x, s.y - a.y);
        let d = distance(v, metric);
        if slot.is_none_or(|(best, _)| d < best) {
            *slot = Some((d, v));
        }
    }
    for c in Category::ALL.into_iter().filter(|c| schema.categories[c.index()]) {
        match closest[c.index()] {
            Some((d, v)) => {
                out.push((d / max_d).min(1.0));
                out.push(orientation(a.orientation, v));
            }
            None => {
                out.push(1.0);
                out.push(0.0);
            }
        }
    }
}

/// Feature vector of `state`, or [`FeatureError::SchemaChanged`] when the
/// state's current schema differs from `schema`.
pub fn extract(state: &GameState, schema: &FeatureSchema, metric: DistanceMetric) -> Result<Vec<f64>, FeatureError> {
    let current = schema_of(state);
    if current != *schema {
        return Err(FeatureError::SchemaChanged { expected: schema.input_count(), found: current.input_count() });
    }
    let mut out = Vec::with_capacity(schema.input_count());
    extract_into(state, schema, metric, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamekit::{advance, load_level, parse_level, GameId};
    use std::sync::Arc;

    #[test]
    fn bearings() {
        let up = (0, -1);
        assert_eq!(orientation(up, (0, -3)), 0.0);
        assert_eq!(orientation(up, (0, 2)), 1.0);
        assert_eq!(orientation(up, (4, 0)), 0.5);
        assert_eq!(orientation(up, (-4, 0)), -0.5);
        assert!((orientation(up, (1, -1)) - 0.25).abs() < 1e-12);
        assert_eq!(orientation((1, 0), (-2, 0)), 1.0);
        assert_eq!(orientation((1, 0), (0, 1)), 0.5);
        assert_eq!(orientation(up, (0, 0)), 0.0);
    }

    #[test]
    fn full_schema_counts_twenty() {
        let s = FeatureSchema { hp: true, resources: 3, categories: [true; 6] };
        assert_eq!(s.input_count(), 20);
        assert_eq!(s.labels().len(), 20);
    }

    #[test]
    fn race_schema() {
        let s = load_level(GameId::Race, 0, 0).unwrap();
        let schema = schema_of(&s);
        assert!(!schema.hp);
        assert_eq!(schema.resources, 0);
        assert_eq!(schema.categories, [true, false, false, false, true, false]);
        assert_eq!(schema.input_count(), 8);
    }

    #[test]
    fn euclidean_distance_over_diagonal() {
        let mut map = String::new();
        for y in 0..20 {
            for x in 0..20 {
                map.push(match (x, y) {
                    (0, 0) => 'A',
                    (3, 4) => 'z',
                    _ => '.',
                });
            }
            map.push('\n');
        }
        let s = Arc::new(parse_level(GameId::Survive, &map).unwrap()).instantiate(0);
        let schema = schema_of(&s);
        let v = extract(&s, &schema, DistanceMetric::Euclidean).unwrap();
        // x, y, orient x, orient y, hp, npc distance, npc bearing
        assert_eq!(v.len(), 7);
        assert!((v[5] - 5.0 / 800f64.sqrt()).abs() < 1e-12);
        assert!((v[5] - 0.1768).abs() < 1e-4);
        let m = extract(&s, &schema, DistanceMetric::Manhattan).unwrap();
        assert!((m[5] - 7.0 / 40.0).abs() < 1e-12);
    }

    #[test]
    fn schema_change_is_reported() {
        let mut s = load_level(GameId::Shoot, 0, 0).unwrap();
        let before = schema_of(&s);
        for _ in 0..10 {
            advance(&mut s, 1).unwrap();
        }
        let err = extract(&s, &before, DistanceMetric::Euclidean).unwrap_err();
        assert_eq!(err, FeatureError::SchemaChanged { expected: 4, found: 6 });
    }

    #[test]
    fn missing_category_uses_sentinels() {
        let level = Arc::new(parse_level(GameId::Collect, "#####\n#Ab.#\n#####\n").unwrap());
        let mut s = level.instantiate(0);
        let schema = schema_of(&s);
        advance(&mut s, 3).unwrap();
        let mut out = Vec::new();
        extract_into(&s, &schema, DistanceMetric::Euclidean, &mut out);
        assert_eq!(&out[4..], &[1.0, 0.0]);
    }
}
