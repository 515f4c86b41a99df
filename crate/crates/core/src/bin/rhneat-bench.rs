use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use rhneat_core::agents::AgentConfig;
use rhneat_core::bench::{
    ablation_grid, emit_csv, emit_markdown, episode_seed, preset, read_raw, run_episode_with, run_experiment,
    summarize, AblationGroup, EpisodeSpec, ExperimentConfig, OUT_DIR_ENV, PRESET_NAMES,
};
use rhneat_core::gamekit::{GameId, GameState};

#[derive(Parser)]
#[command(name = "rhneat-bench", version, about = "Run rhNEAT, RHEA and MCTS on the arcade benchmark suite")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a TOML config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Worker threads (defaults to the number of CPUs).
        #[arg(long)]
        jobs: Option<usize>,
        /// Output directory (overrides the config's out_dir).
        #[arg(long, env = OUT_DIR_ENV)]
        out: Option<PathBuf>,
    },
    /// Run an ablation group over the full five-game protocol.
    Ablate {
        #[arg(long, default_value = "abl", value_parser = ["abl", "reward", "fitness", "baselines", "all"])]
        group: String,
        #[arg(long)]
        jobs: Option<usize>,
        /// Parent output directory; results go to `<out>/ablate-<group>`.
        #[arg(long, env = OUT_DIR_ENV, default_value = "results")]
        out: PathBuf,
        #[arg(long)]
        repetitions: Option<u32>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the generated config instead of running it.
        #[arg(long)]
        dump_config: bool,
    },
    /// Recompute summary tables from a raw results file.
    Summarize {
        #[arg(long)]
        raw: PathBuf,
        /// Also write summary.csv and summary.md into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "markdown", value_parser = ["markdown", "csv"])]
        format: String,
    },
    /// Play one episode verbosely.
    Play {
        #[arg(long)]
        game: GameId,
        #[arg(long, default_value_t = 0)]
        level: usize,
        /// A built-in agent name, or an agent id from --config.
        #[arg(long, default_value = "sp-cp")]
        agent: String,
        /// Base seed; the episode seed derives from it as in experiments.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Experiment config to take the agent, budget and levels from.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value_t = 1000)]
        budget: u64,
        /// Print the grid after every tick.
        #[arg(long)]
        ascii: bool,
    },
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match Cli::parse().command {
        Command::Run { config, jobs, out } => {
            let text = std::fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let cfg = ExperimentConfig::from_toml(&text)?;
            let out = out.or_else(|| cfg.out_dir.clone()).unwrap_or_else(|| PathBuf::from("results").join(&cfg.name));
            run(&cfg, &out, jobs)
        }
        Command::Ablate { group, jobs, out, repetitions, seed, dump_config } => {
            let group: AblationGroup = group.parse()?;
            let mut cfg = ablation_grid(group);
            cfg.base_seed = seed;
            if let Some(r) = repetitions {
                cfg.repetitions = r;
            }
            if dump_config {
                print!("{}", cfg.to_toml());
                return Ok(());
            }
            let out = out.join(&cfg.name);
            run(&cfg, &out, jobs)
        }
        Command::Summarize { raw, out, format } => {
            let rows = summarize(&read_raw(&raw)?);
            if rows.is_empty() {
                bail!("{} holds no episodes", raw.display());
            }
            let csv = emit_csv(&rows)?;
            let md = emit_markdown(&rows);
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)?;
                std::fs::write(dir.join("summary.csv"), &csv)?;
                std::fs::write(dir.join("summary.md"), &md)?;
            }
            print!("{}", if format == "csv" { csv } else { md });
            Ok(())
        }
        Command::Play { game, level, agent, seed, config, budget, ascii } => {
            play(game, level, &agent, seed, config.as_deref(), budget, ascii)
        }
    }
}

fn run(cfg: &ExperimentConfig, out: &Path, jobs: Option<usize>) -> Result<()> {
    let jobs = jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    log::info!("{}: {} episodes, {jobs} workers, output in {}", cfg.name, cfg.episode_count(), out.display());
    let outcome = run_experiment(cfg, out, jobs)?;
    log::info!("played {} episodes, {} already recorded", outcome.executed, outcome.skipped);
    print!("{}", emit_markdown(&outcome.summary));
    Ok(())
}

fn play(
    game: GameId,
    level: usize,
    agent: &str,
    seed: u64,
    config: Option<&Path>,
    budget: u64,
    ascii: bool,
) -> Result<()> {
    let (agent_cfg, budget, levels_dir): (AgentConfig, u64, Option<PathBuf>) = match config {
        Some(path) => {
            let cfg = ExperimentConfig::from_toml(&std::fs::read_to_string(path)?)?;
            let entry = cfg
                .agents
                .iter()
                .find(|a| a.id == agent)
                .with_context(|| format!("no agent '{agent}' in {}", path.display()))?;
            (entry.agent.clone(), cfg.budget, cfg.levels_dir.clone())
        }
        None => match preset(agent) {
            Some(a) => (a, budget, None),
            None => bail!("unknown agent '{agent}'; built-in agents: {}", PRESET_NAMES.join(", ")),
        },
    };
    let spec = EpisodeSpec {
        agent_id: agent,
        agent: &agent_cfg,
        game,
        level,
        repetition: 0,
        seed: episode_seed(seed, game, level, 0),
        budget,
        levels_dir: levels_dir.as_deref(),
    };
    let actions = game.rules().actions();
    let mut observe = |s: &GameState, d: &rhneat_core::agents::Decision| {
        if ascii {
            print!("{}", s.ascii());
        }
        println!(
            "tick {:3} score {:6} action {:5} iterations {:3} best {:?} species {}{}{}",
            s.tick,
            s.score,
            actions[d.action].name(),
            d.iterations,
            d.best_value,
            d.species,
            if d.reinitialized { " reinit" } else { "" },
            if d.random_fallback { " random" } else { "" },
        );
    };
    let r = run_episode_with(&spec, &mut observe);
    println!(
        "result: {} score {} ticks {} fm_calls {}{}",
        if r.win { "WIN" } else { "LOSS" },
        r.score,
        r.ticks,
        r.fm_calls,
        if r.error.is_empty() { String::new() } else { format!(" error: {}", r.error) }
    );
    Ok(())
}
