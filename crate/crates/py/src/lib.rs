//! Python bindings: genomes, networks, games, agents and experiments.

use std::path::PathBuf;

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use rhneat_core::agents::{Agent, BudgetMeter};
use rhneat_core::bench::{self, preset, ExperimentConfig, PRESET_NAMES};
use rhneat_core::features::{extract, schema_of, DistanceMetric};
use rhneat_core::gamekit::{self, load_level, GameId, GameState, Status};
use rhneat_core::neat::{self as neat, NeatParams};
use rhneat_core::phenotype;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Genome", from_py_object)]
#[derive(Clone)]
struct Genome(neat::Genome);

#[pymethods]
impl Genome {
    #[new]
    fn new(inputs: usize, outputs: usize) -> PyResult<Self> {
        neat::Genome::new(inputs, outputs).map(Self).map_err(value_err)
    }

    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        neat::Genome::from_text(text).map(Self).map_err(value_err)
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    #[getter]
    fn input_count(&self) -> usize {
        self.0.input_count()
    }

    #[getter]
    fn output_count(&self) -> usize {
        self.0.output_count()
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.0.nodes().len()
    }

    #[getter]
    fn connection_count(&self) -> usize {
        self.0.connections().len()
    }

    /// Compatibility distance with the given coefficients.
    #[pyo3(signature = (other, c1 = 1.0, c2 = 1.0, c3 = 1.0))]
    fn distance(&self, other: &Genome, c1: f64, c2: f64, c3: f64) -> f64 {
        let p = NeatParams { c1, c2, c3, ..NeatParams::default() };
        neat::compatibility_distance(&self.0, &other.0, &p)
    }

    fn __repr__(&self) -> String {
        format!("Genome(nodes={}, connections={})", self.0.nodes().len(), self.0.connections().len())
    }
}

#[pyclass(name = "Network")]
struct Network(phenotype::Network);

#[pymethods]
impl Network {
    #[new]
    fn new(genome: &Genome) -> PyResult<Self> {
        phenotype::Network::build(&genome.0).map(Self).map_err(value_err)
    }

    fn activate(&self, inputs: Vec<f64>) -> PyResult<Vec<f64>> {
        self.0.activate(&inputs).map_err(value_err)
    }

    /// Index of the largest output for `inputs`.
    fn select_action(&self, inputs: Vec<f64>) -> PyResult<usize> {
        let out = self.0.activate(&inputs).map_err(value_err)?;
        phenotype::select_action(&out).map_err(value_err)
    }
}

#[pyclass(name = "Game", from_py_object)]
#[derive(Clone)]
struct Game(GameState);

#[pymethods]
impl Game {
    #[new]
    #[pyo3(signature = (game, level = 0, seed = 0))]
    fn new(game: &str, level: usize, seed: u64) -> PyResult<Self> {
        let id: GameId = game.parse().map_err(value_err)?;
        load_level(id, level, seed).map(Self).map_err(value_err)
    }

    fn advance(&mut self, action: usize) -> PyResult<()> {
        gamekit::advance(&mut self.0, action).map_err(value_err)
    }

    fn copy(&self) -> Self {
        self.clone()
    }

    #[getter]
    fn name(&self) -> &'static str {
        self.0.game().name()
    }

    #[getter]
    fn tick(&self) -> u32 {
        self.0.tick
    }

    #[getter]
    fn score(&self) -> f64 {
        self.0.score
    }

    /// `"ongoing"`, `"win"` or `"loss"`.
    #[getter]
    fn status(&self) -> &'static str {
        match self.0.status {
            Status::Ongoing => "ongoing",
            Status::Win => "win",
            Status::Loss => "loss",
        }
    }

    #[getter]
    fn is_terminal(&self) -> bool {
        self.0.is_terminal()
    }

    #[getter]
    fn action_count(&self) -> usize {
        self.0.action_count()
    }

    /// State value: 1e6 on a win, -1e6 on a loss, the score otherwise.
    fn value(&self) -> f64 {
        gamekit::evaluate_state(&self.0)
    }

    fn feature_labels(&self) -> Vec<String> {
        schema_of(&self.0).labels()
    }

    fn features(&self) -> Vec<f64> {
        let schema = schema_of(&self.0);
        extract(&self.0, &schema, DistanceMetric::Euclidean).expect("schema taken from the same state")
    }

    fn ascii(&self) -> String {
        self.0.ascii()
    }
}

#[pyclass(name = "Agent", unsendable)]
struct PyAgent {
    inner: Box<dyn Agent>,
    name: String,
}

#[pymethods]
impl PyAgent {
    /// A built-in agent such as `"sp-cp"`, `"rhea"` or `"mcts"`.
    #[new]
    #[pyo3(signature = (name, seed = 0))]
    fn new(name: &str, seed: u64) -> PyResult<Self> {
        let cfg = preset(name).ok_or_else(|| {
            PyValueError::new_err(format!("unknown agent '{name}'; choose from {}", PRESET_NAMES.join(", ")))
        })?;
        Ok(Self { inner: cfg.build(seed), name: name.to_string() })
    }

    /// Chooses an action for `game` spending at most `budget` forward-model calls.
    #[pyo3(signature = (game, budget = 1000))]
    fn act(&mut self, game: &Game, budget: u64) -> usize {
        let mut meter = BudgetMeter::new(budget);
        self.inner.act(&game.0, &mut meter).action
    }

    fn __repr__(&self) -> String {
        format!("Agent('{}')", self.name)
    }
}

/// Runs the experiment described by TOML `config` into `out_dir` and
/// returns the summary rows as dictionaries.
#[pyfunction]
#[pyo3(signature = (config, out_dir, jobs = 1))]
fn run_experiment(py: Python<'_>, config: &str, out_dir: PathBuf, jobs: usize) -> PyResult<Vec<Py<PyAny>>> {
    let cfg = ExperimentConfig::from_toml(config).map_err(value_err)?;
    let outcome = py
        .detach(|| bench::run_experiment(&cfg, &out_dir, jobs))
        .map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    outcome
        .summary
        .iter()
        .map(|r| {
            let d = pyo3::types::PyDict::new(py);
            d.set_item("agent", &r.agent)?;
            d.set_item("game", &r.game)?;
            d.set_item("n", r.n)?;
            d.set_item("win_rate", r.win_rate)?;
            d.set_item("win_se", r.win_se)?;
            d.set_item("mean_score", r.mean_score)?;
            d.set_item("score_se", r.score_se)?;
            Ok(d.into_any().unbind())
        })
        .collect()
}

#[pyfunction]
fn games() -> Vec<&'static str> {
    GameId::all().iter().map(|g| g.name()).collect()
}

#[pyfunction]
fn agents() -> Vec<&'static str> {
    PRESET_NAMES.to_vec()
}

#[pymodule]
fn rhneat(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Genome>()?;
    m.add_class::<Network>()?;
    m.add_class::<Game>()?;
    m.add_class::<PyAgent>()?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(games, m)?)?;
    m.add_function(wrap_pyfunction!(agents, m)?)?;
    Ok(())
}
