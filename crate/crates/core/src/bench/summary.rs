use std::fmt::Write as _;

use super::raw::EpisodeResult;
use super::BenchError;

/// Game label of the per-agent row pooling every episode.
pub const ALL_EPISODES: &str = "all:episodes";
/// Game label of the per-agent row averaging per-game results.
pub const ALL_GAMES: &str = "all:games";

const SUMMARY_HEADER: [&str; 7] = ["agent", "game", "n", "win_rate", "win_se", "mean_score", "score_se"];

/// Aggregate of one agent on one game (or across games).
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub agent: String,
    pub game: String,
    /// Episodes, or games for the `all:games` row.
    pub n: usize,
    pub win_rate: f64,
    pub win_se: f64,
    pub mean_score: f64,
    pub score_se: f64,
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

/// Sample standard deviation over `sqrt(n)`; zero below two samples.
fn standard_error(xs: &[f64]) -> f64 {
    let n = xs.len();
    if n < 2 {
        return 0.0;
    }
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1) as f64;
    (var / n as f64).sqrt()
}

/// Binomial standard error of a win rate.
fn binomial_se(p: f64, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        (p * (1.0 - p) / n as f64).sqrt()
    }
}

fn episode_row(agent: &str, game: &str, eps: &[&EpisodeResult]) -> SummaryRow {
    let wins: Vec<f64> = eps.iter().map(|e| f64::from(u8::from(e.win))).collect();
    let scores: Vec<f64> = eps.iter().map(|e| e.score).collect();
    let p = mean(&wins);
    SummaryRow {
        agent: agent.into(),
        game: game.into(),
        n: eps.len(),
        win_rate: p,
        win_se: binomial_se(p, eps.len()),
        mean_score: mean(&scores),
        score_se: standard_error(&scores),
    }
}

/// Per-(agent, game) rows in first-appearance order, then for each agent an
/// `all:episodes` row pooling its episodes (binomial win-rate error) and an
/// `all:games` row over its per-game means (error across games).
pub fn summarize(results: &[EpisodeResult]) -> Vec<SummaryRow> {
    let mut agents: Vec<&str> = Vec::new();
    let mut games: Vec<String> = Vec::new();
    for r in results {
        if !agents.contains(&r.key.agent.as_str()) {
            agents.push(&r.key.agent);
        }
        if !games.iter().any(|g| g == r.key.game.name()) {
            games.push(r.key.game.name().to_string());
        }
    }
    let mut rows = Vec::new();
    for agent in &agents {
        let mine: Vec<&EpisodeResult> = results.iter().filter(|r| r.key.agent == *agent).collect();
        let mut per_game = Vec::new();
        for game in &games {
            let eps: Vec<&EpisodeResult> = mine.iter().copied().filter(|r| r.key.game.name() == game).collect();
            if !eps.is_empty() {
                per_game.push(episode_row(agent, game, &eps));
            }
        }
        let rates: Vec<f64> = per_game.iter().map(|r| r.win_rate).collect();
        let scores: Vec<f64> = per_game.iter().map(|r| r.mean_score).collect();
        let across = SummaryRow {
            agent: agent.to_string(),
            game: ALL_GAMES.into(),
            n: per_game.len(),
            win_rate: mean(&rates),
            win_se: standard_error(&rates),
            mean_score: mean(&scores),
            score_se: standard_error(&scores),
        };
        rows.extend(per_game);
        rows.push(episode_row(agent, ALL_EPISODES, &mine));
        rows.push(across);
    }
    rows
}

/// CSV table with six decimals.
pub fn emit_csv(rows: &[SummaryRow]) -> Result<String, BenchError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SUMMARY_HEADER)?;
    for r in rows {
        w.write_record([
            r.agent.clone(),
            r.game.clone(),
            r.n.to_string(),
            format!("{:.6}", r.win_rate),
            format!("{:.6}", r.win_se),
            format!("{:.6}", r.mean_score),
            format!("{:.6}", r.score_se),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| BenchError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Parses the output of [`emit_csv`].
pub fn parse_summary_csv(text: &str) -> Result<Vec<SummaryRow>, BenchError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    if reader.headers()?.iter().ne(SUMMARY_HEADER) {
        return Err(BenchError::Config("unexpected summary header".into()));
    }
    let bad = |e: String| BenchError::Config(format!("summary: {e}"));
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let f = |i: usize| rec[i].parse::<f64>().map_err(|e| bad(e.to_string()));
        rows.push(SummaryRow {
            agent: rec[0].to_string(),
            game: rec[1].to_string(),
            n: rec[2].parse().map_err(|e: std::num::ParseIntError| bad(e.to_string()))?,
            win_rate: f(3)?,
            win_se: f(4)?,
            mean_score: f(5)?,
            score_se: f(6)?,
        });
    }
    Ok(rows)
}

/// Markdown table with four decimals.
pub fn emit_markdown(rows: &[SummaryRow]) -> String {
    let mut out = format!("| {} |\n", SUMMARY_HEADER.join(" | "));
    out.push_str("|---|---|---:|---:|---:|---:|---:|\n");
    for r in rows {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {:.4} | {:.4} | {:.4} | {:.4} |",
            r.agent, r.game, r.n, r.win_rate, r.win_se, r.mean_score, r.score_se
        );
    }
    out
}
