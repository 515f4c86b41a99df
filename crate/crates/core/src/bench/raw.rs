use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::Path;

use super::BenchError;
use crate::gamekit::GameId;

pub(crate) const RAW_HEADER: [&str; 10] =
    ["agent", "game", "level", "repetition", "seed", "win", "score", "ticks", "fm_calls", "error"];

/// Identity of an episode within an experiment.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EpisodeKey {
    pub agent: String,
    pub game: GameId,
    pub level: usize,
    pub repetition: u32,
}

/// Outcome of one episode; one raw-file record.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeResult {
    pub key: EpisodeKey,
    pub seed: u64,
    pub win: bool,
    pub score: f64,
    pub ticks: u32,
    /// Forward-model calls summed over all decisions.
    pub fm_calls: u64,
    /// Empty unless the episode was aborted.
    pub error: String,
}

impl EpisodeResult {
    fn record(&self) -> [String; 10] {
        [
            self.key.agent.clone(),
            self.key.game.name().to_string(),
            self.key.level.to_string(),
            self.key.repetition.to_string(),
            self.seed.to_string(),
            u8::from(self.win).to_string(),
            self.score.to_string(),
            self.ticks.to_string(),
            self.fm_calls.to_string(),
            self.error.clone(),
        ]
    }

    fn from_record(r: &csv::StringRecord) -> Result<Self, String> {
        if r.len() != RAW_HEADER.len() {
            return Err(format!("expected {} fields, found {}", RAW_HEADER.len(), r.len()));
        }
        let num = |i: usize| -> Result<u64, String> { r[i].parse().map_err(|e| format!("{}: {e}", RAW_HEADER[i])) };
        Ok(Self {
            key: EpisodeKey {
                agent: r[0].to_string(),
                game: r[1].parse().map_err(|e| format!("{e}"))?,
                level: num(2)? as usize,
                repetition: num(3)? as u32,
            },
            seed: num(4)?,
            win: match &r[5] {
                "1" => true,
                "0" => false,
                other => return Err(format!("win: '{other}'")),
            },
            score: r[6].parse().map_err(|e| format!("score: {e}"))?,
            ticks: num(7)? as u32,
            fm_calls: num(8)?,
            error: r[9].to_string(),
        })
    }
}

/// Reads a raw results file.
pub fn read_raw(path: &Path) -> Result<Vec<EpisodeResult>, BenchError> {
    let mut reader = csv::Reader::from_path(path)?;
    let header = reader.headers()?.clone();
    if header.iter().ne(RAW_HEADER) {
        return Err(BenchError::Config(format!("{}: unexpected header", path.display())));
    }
    let mut out = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec?;
        out.push(
            EpisodeResult::from_record(&rec)
                .map_err(|e| BenchError::Config(format!("{} record {}: {e}", path.display(), i + 1)))?,
        );
    }
    Ok(out)
}

/// Append-only writer for a raw results file.
pub struct RawWriter {
    writer: csv::Writer<BufWriter<File>>,
    completed: HashSet<EpisodeKey>,
}

impl RawWriter {
    /// Opens `path` for appending, writing the header to a new file and
    /// remembering which episodes an existing file already holds.
    pub fn open(path: &Path) -> Result<Self, BenchError> {
        let existing = path.exists() && std::fs::metadata(path)?.len() > 0;
        let completed = if existing { read_raw(path)?.into_iter().map(|r| r.key).collect() } else { HashSet::new() };
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(BufWriter::new(file));
        if !existing {
            writer.write_record(RAW_HEADER)?;
        }
        Ok(Self { writer, completed })
    }

    pub fn is_done(&self, key: &EpisodeKey) -> bool {
        self.completed.contains(key)
    }

    pub fn completed(&self) -> usize {
        self.completed.len()
    }

    /// Appends results and flushes them to disk.
    pub fn append(&mut self, results: &[EpisodeResult]) -> Result<(), BenchError> {
        for r in results {
            self.writer.write_record(r.record())?;
            self.completed.insert(r.key.clone());
        }
        self.writer.flush()?;
        self.writer.get_ref().get_ref().sync_data()?;
        Ok(())
    }

    pub fn flush(&mut self) -> Result<(), BenchError> {
        self.writer.flush()?;
        Ok(())
    }
}

impl Drop for RawWriter {
    fn drop(&mut self) {
        let _ = self.writer.flush();
    }
}

/// Appends a line of `key,wall_ms` timings (kept apart from the raw file,
/// which must be reproducible byte for byte).
pub(crate) fn append_timings(path: &Path, rows: &[(EpisodeKey, f64)]) -> Result<(), BenchError> {
    let new = !path.exists();
    let mut f = BufWriter::new(OpenOptions::new().create(true).append(true).open(path)?);
    if new {
        writeln!(f, "agent,game,level,repetition,wall_ms")?;
    }
    for (k, ms) in rows {
        writeln!(f, "{},{},{},{},{ms:.3}", k.agent, k.game, k.level, k.repetition)?;
    }
    f.flush()?;
    Ok(())
}
