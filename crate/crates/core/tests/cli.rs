use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_rhneat-bench");

const CONFIG: &str = r#"
name = "cli"
games = ["corridor", "race"]
levels = [0, 3]
repetitions = 2
budget = 300

[[agents]]
id = "rnd"
kind = "random"

[[agents]]
id = "search"
kind = "mcts"
rollout_depth = 10
"#;

fn bench(args: &[&str], env_out: Option<&Path>) -> Output {
    let mut cmd = Command::new(BIN);
    cmd.args(args).env_remove("RHNEAT_OUT").env("RUST_LOG", "warn");
    if let Some(dir) = env_out {
        cmd.env("RHNEAT_OUT", dir);
    }
    let out = cmd.output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

#[test]
fn run_then_summarize() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("cli.toml");
    std::fs::write(&config, CONFIG).unwrap();
    let out = dir.path().join("out");
    let stdout =
        bench(&["run", "--config", config.to_str().unwrap(), "--jobs", "2", "--out", out.to_str().unwrap()], None);
    let table = String::from_utf8(stdout.stdout).unwrap();
    assert!(table.contains("| search | all:games |"));

    let raw = std::fs::read_to_string(out.join("raw.csv")).unwrap();
    assert_eq!(raw.lines().next().unwrap(), "agent,game,level,repetition,seed,win,score,ticks,fm_calls,error");
    assert_eq!(raw.lines().count(), 1 + 2 * 2 * 2 * 2);
    assert!(out.join("timings.csv").exists());

    let again = bench(&["summarize", "--raw", out.join("raw.csv").to_str().unwrap(), "--format", "csv"], None);
    assert_eq!(String::from_utf8(again.stdout).unwrap(), std::fs::read_to_string(out.join("summary.csv")).unwrap());
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("cli.toml");
    std::fs::write(&config, CONFIG.replace("repetitions = 2", "repetitions = 1")).unwrap();
    let env_dir = dir.path().join("env");
    bench(&["run", "--config", config.to_str().unwrap(), "--jobs", "1"], Some(&env_dir));
    assert!(env_dir.join("raw.csv").exists());
    assert!(env_dir.join("summary.md").exists());
}

#[test]
fn play_prints_every_decision() {
    let out = bench(&["play", "--game", "corridor", "--level", "3", "--agent", "mcts", "--seed", "1", "--ascii"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("tick")));
    assert!(text.contains('A'));
    assert!(text.lines().last().unwrap().starts_with("result: WIN"));
}

#[test]
fn ablation_config_dump_parses() {
    let out = bench(&["ablate", "--group", "abl", "--repetitions", "3", "--dump-config"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("name = \"ablate-abl\""));
    assert!(text.contains("repetitions = 3"));
    let cfg = rhneat_core::bench::ExperimentConfig::from_toml(&text).unwrap();
    assert_eq!(cfg.agents.len(), 4);
}

#[test]
fn bad_input_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("bad.toml");
    std::fs::write(&config, "name = \"x\"\nbogus = 1\n").unwrap();
    let out = Command::new(BIN)
        .args(["run", "--config", config.to_str().unwrap()])
        .env_remove("RHNEAT_OUT")
        .output()
        .unwrap();
    assert!(!out.status.success());
    let out = Command::new(BIN).args(["play", "--game", "pong"]).output().unwrap();
    assert!(!out.status.success());
    let out = Command::new(BIN).args(["play", "--game", "race", "--agent", "nobody"]).output().unwrap();
    assert!(!out.status.success());
}
