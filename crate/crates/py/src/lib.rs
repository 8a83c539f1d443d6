//! Python bindings: graphs, settings, heuristic runs, the exact solver,
//! two-player games and the experiment drivers.

use opep_core::arena::{play_seeded, tournament as run_tournament};
use opep_core::bench::{emit_csv, run_grid as grid};
use opep_core::exact::{brute_force_ideal, export_lp as lp, ideal_solution};
use opep_core::heuristics::run_combined;
use opep_core::opep::{format_move_log, parse_move_log};
use opep_core::rng::{instance_rng, purpose};
use opep_core::{ExperimentConfig, FeasibleSetting, Graph, HeuristicId, Mode, OpepState, Path};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn heuristic(name: &str) -> PyResult<HeuristicId> {
    name.parse().map_err(err)
}

/// Undirected simple graph on nodes `1..=n`.
#[pyclass(name = "Graph", frozen)]
struct PyGraph(Graph);

#[pymethods]
impl PyGraph {
    #[new]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Graph::from_edges(n, &edges).map(PyGraph).map_err(err)
    }

    /// `"board"` or `"extended"`.
    #[staticmethod]
    fn builtin(name: &str) -> PyResult<Self> {
        Graph::builtin(name).map(PyGraph).map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (text, n=None))]
    fn parse(text: &str, n: Option<usize>) -> PyResult<Self> {
        Graph::parse_edge_list(text, n).map(PyGraph).map_err(err)
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.0.node_count()
    }

    #[getter]
    fn edges(&self) -> Vec<(usize, usize)> {
        self.0.edges().to_vec()
    }

    fn degree(&self, v: usize) -> PyResult<usize> {
        self.0.degree(v).map_err(err)
    }

    fn neighbors(&self, v: usize) -> PyResult<Vec<usize>> {
        self.0.check_node(v).map_err(err)?;
        Ok(self.0.neighbors(v).to_vec())
    }

    /// Nodes off the path adjacent to one of its ends.
    fn tentacles(&self, path: Vec<usize>) -> PyResult<Vec<usize>> {
        let p = Path::checked(&self.0, path).map_err(err)?;
        Ok(self.0.tentacles(&p).map_err(err)?.iter().collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(n={}, m={})",
            self.0.node_count(),
            self.0.edge_count()
        )
    }
}

/// Initial tuple plus extension tuple, every node exactly `nd` times.
#[pyclass(name = "Setting", frozen)]
struct PySetting(FeasibleSetting);

#[pymethods]
impl PySetting {
    #[new]
    fn new(
        graph: &PyGraph,
        initial: Vec<usize>,
        extension: Vec<usize>,
        nd: usize,
    ) -> PyResult<Self> {
        FeasibleSetting::new(&graph.0, initial, extension, nd)
            .map(PySetting)
            .map_err(err)
    }

    /// Setting number `index` of the stream seeded by `seed`.
    #[staticmethod]
    #[pyo3(signature = (graph, c, nd, seed, index=0))]
    fn random(graph: &PyGraph, c: usize, nd: usize, seed: u64, index: u64) -> PyResult<Self> {
        let mut rng = instance_rng(seed, index, purpose::SETTING);
        FeasibleSetting::random(&graph.0, c, nd, &mut rng)
            .map(PySetting)
            .map_err(err)
    }

    /// Parses `nd=..; initial=..; extension=..`.
    #[staticmethod]
    fn parse(graph: &PyGraph, record: &str) -> PyResult<Self> {
        FeasibleSetting::parse_record(record, &graph.0)
            .map(PySetting)
            .map_err(err)
    }

    #[getter]
    fn initial(&self) -> Vec<usize> {
        self.0.initial().to_vec()
    }

    #[getter]
    fn extension(&self) -> Vec<usize> {
        self.0.extension().to_vec()
    }

    #[getter]
    fn nd(&self) -> usize {
        self.0.nd()
    }

    #[getter]
    fn c(&self) -> usize {
        self.0.c()
    }

    #[getter]
    fn d(&self) -> usize {
        self.0.d()
    }

    /// Nodes a path of node length `length` may be extended by.
    fn revealed_after(&self, length: usize) -> Vec<usize> {
        self.0.revealed_after(length).iter().collect()
    }

    fn record(&self) -> String {
        self.0.to_record()
    }

    fn __repr__(&self) -> String {
        format!("Setting({})", self.0)
    }
}

/// Final path of a heuristic, e.g. `"pp"` or `"connected/tentacles"`.
#[pyfunction]
#[pyo3(signature = (graph, setting, heuristic_id, seed=0))]
fn run_heuristic(
    graph: &PyGraph,
    setting: &PySetting,
    heuristic_id: &str,
    seed: u64,
) -> PyResult<Vec<usize>> {
    let id = heuristic(heuristic_id)?;
    let mut rng = instance_rng(seed, 0, purpose::PLAY);
    Ok(run_combined(&graph.0, &setting.0, id, &mut rng).into_nodes())
}

/// Longest path reachable with full knowledge of the deck, and its move log.
#[pyfunction]
fn ideal(py: Python<'_>, graph: &PyGraph, setting: &PySetting) -> (Vec<usize>, String) {
    let sol = py.detach(|| ideal_solution(&graph.0, &setting.0));
    (sol.path.nodes().to_vec(), format_move_log(&sol.moves))
}

/// Ideal length by exhaustive search; small decks only.
#[pyfunction]
fn brute_force(graph: &PyGraph, setting: &PySetting) -> PyResult<usize> {
    brute_force_ideal(&graph.0, &setting.0).map_err(err)
}

/// Integer program in CPLEX LP format.
#[pyfunction]
fn export_lp(graph: &PyGraph, setting: &PySetting) -> String {
    lp(&graph.0, &setting.0)
}

/// Replays a move log and returns the resulting path.
#[pyfunction]
#[pyo3(signature = (graph, setting, moves, display=false))]
fn replay(
    graph: &PyGraph,
    setting: &PySetting,
    moves: &str,
    display: bool,
) -> PyResult<Vec<usize>> {
    let log = parse_move_log(moves).map_err(err)?;
    let mode = if display {
        Mode::Display
    } else {
        Mode::Cumulative
    };
    let st = OpepState::replay(&graph.0, &setting.0, mode, &log).map_err(err)?;
    Ok(st.path().nodes().to_vec())
}

/// One game; returns `(len_first, len_second, outcome)`.
#[pyfunction]
#[pyo3(signature = (graph, setting, first, second, seed=0))]
fn play_match(
    graph: &PyGraph,
    setting: &PySetting,
    first: &str,
    second: &str,
    seed: u64,
) -> PyResult<(usize, usize, String)> {
    let r = play_seeded(
        &graph.0,
        &setting.0,
        heuristic(first)?,
        heuristic(second)?,
        seed,
    );
    Ok((r.len_first, r.len_second, r.outcome.to_string()))
}

type TournamentCounts = Vec<(String, String, usize, usize, usize)>;

/// Win/loss/tie counts per `(first, second)` pairing on shared settings.
#[pyfunction]
#[pyo3(signature = (graph, pairings, num_settings, c, nd, seed=0))]
fn tournament(
    py: Python<'_>,
    graph: &PyGraph,
    pairings: Vec<(String, String)>,
    num_settings: usize,
    c: usize,
    nd: usize,
    seed: u64,
) -> PyResult<TournamentCounts> {
    let pairs = pairings
        .iter()
        .map(|(a, b)| Ok((heuristic(a)?, heuristic(b)?)))
        .collect::<PyResult<Vec<_>>>()?;
    let rows = py
        .detach(|| run_tournament(&graph.0, &pairs, num_settings, c, nd, seed))
        .map_err(err)?;
    Ok(rows
        .into_iter()
        .map(|r| {
            (
                r.first.to_string(),
                r.second.to_string(),
                r.first_wins,
                r.second_wins,
                r.ties,
            )
        })
        .collect())
}

/// Grid of mean lengths as CSV text.
#[pyfunction]
#[allow(clippy::too_many_arguments)]
#[pyo3(signature = (graph, c_values, nd_values, heuristics, num_settings, num_ideal_settings=0, seed=0))]
fn run_grid(
    py: Python<'_>,
    graph: &PyGraph,
    c_values: Vec<usize>,
    nd_values: Vec<usize>,
    heuristics: Vec<String>,
    num_settings: usize,
    num_ideal_settings: usize,
    seed: u64,
) -> PyResult<String> {
    let cfg = ExperimentConfig {
        graph: "custom".into(),
        c_values,
        nd_values,
        heuristics: heuristics
            .iter()
            .map(|h| heuristic(h))
            .collect::<PyResult<_>>()?,
        num_settings,
        num_ideal_settings,
        master_seed: seed,
        timing: false,
    };
    let rows = py.detach(|| grid(&graph.0, &cfg)).map_err(err)?;
    let mut buf = Vec::new();
    emit_csv(&rows, &mut buf).map_err(err)?;
    String::from_utf8(buf).map_err(err)
}

#[pymodule]
pub fn opep_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PySetting>()?;
    m.add_function(wrap_pyfunction!(run_heuristic, m)?)?;
    m.add_function(wrap_pyfunction!(ideal, m)?)?;
    m.add_function(wrap_pyfunction!(brute_force, m)?)?;
    m.add_function(wrap_pyfunction!(export_lp, m)?)?;
    m.add_function(wrap_pyfunction!(replay, m)?)?;
    m.add_function(wrap_pyfunction!(play_match, m)?)?;
    m.add_function(wrap_pyfunction!(tournament, m)?)?;
    m.add_function(wrap_pyfunction!(run_grid, m)?)?;
    m.add("HEURISTICS", ["rs", "md", "mt", "lcc", "pp"])?;
    Ok(())
}
