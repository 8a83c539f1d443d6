//! Experiment grids over random settings: mean lengths, histograms and
//! optional timings, written as CSV.

use std::fmt;
use std::io::{self, BufRead};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::deck::{DeckError, FeasibleSetting};
use crate::exact::ideal_length;
use crate::graph::Graph;
use crate::heuristics::{run_combined, HeuristicId};
use crate::rng::{instance_rng, purpose};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Solver {
    Heuristic(HeuristicId),
    Ideal,
}

impl fmt::Display for Solver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Solver::Heuristic(id) => id.fmt(f),
            Solver::Ideal => f.write_str("ideal"),
        }
    }
}

impl FromStr for Solver {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ideal" => Ok(Solver::Ideal),
            _ => s.parse().map(Solver::Heuristic),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub graph: String,
    pub c_values: Vec<usize>,
    pub nd_values: Vec<usize>,
    pub heuristics: Vec<HeuristicId>,
    pub num_settings: usize,
    /// The ideal solver runs on this many settings from the front of the
    /// same stream; 0 disables it.
    pub num_ideal_settings: usize,
    pub master_seed: u64,
    pub timing: bool,
}

impl ExperimentConfig {
    /// Default grid for a graph: `c` in 5..=8 on the board graph and 7..=11
    /// on the extended one (`c` around `n / 4` otherwise), `nd` in 1..=3.
    pub fn defaults_for(graph: &str, n: usize) -> Self {
        let c_values = match graph {
            "board" => (5..=8).collect(),
            "extended" => (7..=11).collect(),
            _ => {
                let mid = (n / 4).max(2);
                (mid - 1..=mid + 2).collect()
            }
        };
        ExperimentConfig {
            graph: graph.to_string(),
            c_values,
            nd_values: vec![1, 2, 3],
            heuristics: HeuristicId::NAMED.to_vec(),
            num_settings: 10_000,
            num_ideal_settings: 200,
            master_seed: 0,
            timing: false,
        }
    }
}

/// Aggregate for one solver on one `(c, nd)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct StatRow {
    pub graph: String,
    pub c: usize,
    pub nd: usize,
    pub solver: Solver,
    pub mean_len: f64,
    pub mean_ms: Option<f64>,
    pub median_ms: Option<f64>,
    /// `hist[l - 1]` counts runs that ended with node length `l`.
    pub hist: Vec<usize>,
}

impl StatRow {
    pub fn runs(&self) -> usize {
        self.hist.iter().sum()
    }
}

/// Setting `i` of a `(c, nd)` cell. Cells with the same `nd` shuffle the
/// same deck order, so raising `c` moves the first extension cards into the
/// initial tuple.
pub fn grid_setting(
    g: &Graph,
    c: usize,
    nd: usize,
    master_seed: u64,
    i: usize,
) -> Result<FeasibleSetting, DeckError> {
    FeasibleSetting::random(
        g,
        c,
        nd,
        &mut instance_rng(master_seed, i as u64, purpose::SETTING),
    )
}

fn run_solver(g: &Graph, s: &FeasibleSetting, solver: Solver, seed: u64, i: usize) -> usize {
    match solver {
        Solver::Heuristic(id) => {
            run_combined(g, s, id, &mut instance_rng(seed, i as u64, purpose::PLAY)).len()
        }
        Solver::Ideal => ideal_length(g, s),
    }
}

fn median(xs: &mut [f64]) -> Option<f64> {
    if xs.is_empty() {
        return None;
    }
    xs.sort_by(|a, b| a.total_cmp(b));
    let m = xs.len() / 2;
    Some(if xs.len() % 2 == 1 {
        xs[m]
    } else {
        (xs[m - 1] + xs[m]) / 2.0
    })
}

fn aggregate(
    cfg: &ExperimentConfig,
    n: usize,
    c: usize,
    nd: usize,
    solver: Solver,
    results: &[(usize, f64)],
) -> StatRow {
    let mut hist = vec![0; n];
    for &(len, _) in results {
        hist[len - 1] += 1;
    }
    let total: usize = results.iter().map(|r| r.0).sum();
    let (mean_ms, median_ms) = if cfg.timing && !results.is_empty() {
        let mut ms: Vec<f64> = results.iter().map(|r| r.1).collect();
        (
            Some(ms.iter().sum::<f64>() / ms.len() as f64),
            median(&mut ms),
        )
    } else {
        (None, None)
    };
    StatRow {
        graph: cfg.graph.clone(),
        c,
        nd,
        solver,
        mean_len: if results.is_empty() {
            0.0
        } else {
            total as f64 / results.len() as f64
        },
        mean_ms,
        median_ms,
        hist,
    }
}

/// Runs every heuristic of `cfg` on `num_settings` shared settings per
/// cell, plus the ideal solver on the first `num_ideal_settings`. Rows are
/// ordered by `nd`, then `c`, then solver, and do not depend on the size of
/// the thread pool the call runs in.
pub fn run_grid(g: &Graph, cfg: &ExperimentConfig) -> Result<Vec<StatRow>, DeckError> {
    let mut rows = Vec::new();
    if cfg.num_settings == 0 {
        return Ok(rows);
    }
    let n = g.node_count();
    let mut solvers: Vec<Solver> = cfg
        .heuristics
        .iter()
        .map(|&h| Solver::Heuristic(h))
        .collect();
    if cfg.num_ideal_settings > 0 {
        solvers.push(Solver::Ideal);
    }
    for &nd in &cfg.nd_values {
        for &c in &cfg.c_values {
            grid_setting(g, c, nd, cfg.master_seed, 0)?;
            let per_setting: Vec<Vec<Option<(usize, f64)>>> = (0..cfg.num_settings)
                .into_par_iter()
                .map(|i| {
                    let s = grid_setting(g, c, nd, cfg.master_seed, i).expect("cell validated");
                    solvers
                        .iter()
                        .map(|&solver| {
                            if solver == Solver::Ideal && i >= cfg.num_ideal_settings {
                                return None;
                            }
                            let t = Instant::now();
                            let len = run_solver(g, &s, solver, cfg.master_seed, i);
                            Some((len, t.elapsed().as_secs_f64() * 1e3))
                        })
                        .collect()
                })
                .collect();
            for (k, &solver) in solvers.iter().enumerate() {
                let results: Vec<(usize, f64)> = per_setting.iter().filter_map(|r| r[k]).collect();
                rows.push(aggregate(cfg, n, c, nd, solver, &results));
            }
        }
    }
    Ok(rows)
}

/// CSV with header `graph,c,nd,solver,mean_len,mean_ms,hist_1,...,hist_n`.
/// `mean_ms` is blank when timing was not recorded.
pub fn emit_csv<W: io::Write>(rows: &[StatRow], out: W) -> csv::Result<()> {
    let width = rows.iter().map(|r| r.hist.len()).max().unwrap_or(0);
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = ["graph", "c", "nd", "solver", "mean_len", "mean_ms"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    header.extend((1..=width).map(|l| format!("hist_{l}")));
    w.write_record(&header)?;
    for r in rows {
        let mut rec = vec![
            r.graph.clone(),
            r.c.to_string(),
            r.nd.to_string(),
            r.solver.to_string(),
            format!("{:.4}", r.mean_len),
            r.mean_ms.map(|m| format!("{m:.4}")).unwrap_or_default(),
        ];
        rec.extend((0..width).map(|l| r.hist.get(l).copied().unwrap_or(0).to_string()));
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Settings file: one record per line; blank lines and `#` comments are
/// skipped.
pub fn read_settings<R: BufRead>(
    g: &Graph,
    input: R,
) -> Result<Vec<FeasibleSetting>, SettingsError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(SettingsError::Io)?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let s = FeasibleSetting::parse_record(t, g).map_err(|e| SettingsError::Record {
            line: i + 1,
            source: e,
        })?;
        out.push(s);
    }
    Ok(out)
}

pub fn write_settings<W: io::Write>(settings: &[FeasibleSetting], mut out: W) -> io::Result<()> {
    for s in settings {
        writeln!(out, "{}", s.to_record())?;
    }
    Ok(())
}

#[derive(Debug, thiserror::Error)]
pub enum SettingsError {
    #[error(transparent)]
    Io(io::Error),
    #[error("line {line}: {source}")]
    Record { line: usize, source: DeckError },
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg() -> ExperimentConfig {
        ExperimentConfig {
            c_values: vec![5, 6],
            nd_values: vec![1, 2],
            num_settings: 60,
            num_ideal_settings: 20,
            master_seed: 4,
            ..ExperimentConfig::defaults_for("board", 22)
        }
    }

    #[test]
    fn grid_rows_are_consistent() {
        let g = Graph::builtin("board").unwrap();
        let cfg = small_cfg();
        let rows = run_grid(&g, &cfg).unwrap();
        assert_eq!(rows.len(), 2 * 2 * 6);
        for r in &rows {
            let expect = if r.solver == Solver::Ideal { 20 } else { 60 };
            assert_eq!(r.runs(), expect);
            let total: usize = r.hist.iter().enumerate().map(|(l, k)| (l + 1) * k).sum();
            assert!((r.mean_len - total as f64 / expect as f64).abs() < 1e-12);
            assert_eq!(r.mean_ms, None);
        }
    }

    #[test]
    fn ideal_mean_dominates_on_shared_prefix() {
        let g = Graph::builtin("board").unwrap();
        let cfg = ExperimentConfig {
            num_ideal_settings: 60,
            ..small_cfg()
        };
        let rows = run_grid(&g, &cfg).unwrap();
        for cell in rows.chunks(6) {
            let ideal = cell.last().unwrap();
            assert_eq!(ideal.solver, Solver::Ideal);
            for r in &cell[..5] {
                assert!(r.mean_len <= ideal.mean_len);
            }
        }
    }

    #[test]
    fn csv_is_independent_of_thread_count() {
        let g = Graph::builtin("board").unwrap();
        let cfg = ExperimentConfig {
            timing: false,
            ..small_cfg()
        };
        let render = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            let rows = pool.install(|| run_grid(&g, &cfg)).unwrap();
            let mut out = Vec::new();
            emit_csv(&rows, &mut out).unwrap();
            out
        };
        assert_eq!(render(1), render(3));
    }

    #[test]
    fn csv_layout() {
        let mut out = Vec::new();
        emit_csv(&[], &mut out).unwrap();
        assert_eq!(
            String::from_utf8(out).unwrap(),
            "graph,c,nd,solver,mean_len,mean_ms\n"
        );

        let row = StatRow {
            graph: "board".into(),
            c: 6,
            nd: 2,
            solver: Solver::Heuristic(HeuristicId::PP),
            mean_len: 1.5,
            mean_ms: Some(0.25),
            median_ms: Some(0.2),
            hist: vec![1, 1, 0],
        };
        let mut out = Vec::new();
        emit_csv(&[row], &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        let header = rd.headers().unwrap().clone();
        assert_eq!(
            header.iter().collect::<Vec<_>>(),
            ["graph", "c", "nd", "solver", "mean_len", "mean_ms", "hist_1", "hist_2", "hist_3"]
        );
        let rec = rd.records().next().unwrap().unwrap();
        assert_eq!(
            rec.iter().collect::<Vec<_>>(),
            ["board", "6", "2", "pp", "1.5000", "0.2500", "1", "1", "0"]
        );
    }

    #[test]
    fn zero_settings_give_no_rows() {
        let g = Graph::builtin("board").unwrap();
        let cfg = ExperimentConfig {
            num_settings: 0,
            ..small_cfg()
        };
        assert!(run_grid(&g, &cfg).unwrap().is_empty());
    }

    #[test]
    fn settings_file_round_trip() {
        let g = Graph::builtin("board").unwrap();
        let settings: Vec<_> = (0..5)
            .map(|i| grid_setting(&g, 6, 2, 1, i).unwrap())
            .collect();
        let mut buf = b"# header\n\n".to_vec();
        write_settings(&settings, &mut buf).unwrap();
        assert_eq!(read_settings(&g, buf.as_slice()).unwrap(), settings);

        let err = read_settings(&g, "nd=1; initial=1; extension=2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, SettingsError::Record { line: 1, .. }));
    }

    #[test]
    fn solver_names() {
        assert_eq!("ideal".parse::<Solver>(), Ok(Solver::Ideal));
        assert_eq!(
            "md".parse::<Solver>(),
            Ok(Solver::Heuristic(HeuristicId::MD))
        );
        assert_eq!(Solver::Ideal.to_string(), "ideal");
    }
}
