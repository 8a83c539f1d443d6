//! `opep`: generate settings, run heuristic grids, solve settings exactly,
//! play tournaments, export LP models and replay move logs.

use std::error::Error;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use opep_core::arena::write_tournament_csv;
use opep_core::bench::{emit_csv, grid_setting, read_settings, run_grid, write_settings};
use opep_core::exact::ideal_solution;
use opep_core::opep::{format_move_log, parse_move_log};
use opep_core::{
    export_lp, tournament, ExperimentConfig, FeasibleSetting, Graph, HeuristicId, Mode, OpepState,
};

#[derive(Parser)]
#[command(
    name = "opep",
    version,
    about = "Open-ended path extension experiments"
)]
struct Cli {
    /// `board`, `extended`, or the path of an edge-list file
    #[arg(long, global = true, default_value = "board")]
    graph: String,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (defaults to all cores)
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Record per-instance wall-clock times in grid output
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit random settings, one record per line
    Gen {
        #[arg(long, default_value_t = 6)]
        c: usize,
        #[arg(long, default_value_t = 2)]
        nd: usize,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Heuristic grid over (c, nd) cells as CSV
    Run(GridArgs),
    /// Ideal length of each setting
    Exact {
        #[command(flatten)]
        input: SettingInput,
        /// Also print the optimal move log after each length
        #[arg(long)]
        moves: bool,
    },
    /// Mean lengths of all 20 start/extension combinations
    Allpairs {
        #[arg(long, default_value_t = 6)]
        c: usize,
        #[arg(long, default_value_t = 2)]
        nd: usize,
        #[arg(long, default_value_t = 10_000)]
        settings: usize,
    },
    /// Two-player matches on shared settings
    Tournament {
        #[arg(long, default_value_t = 6)]
        c: usize,
        #[arg(long, default_value_t = 2)]
        nd: usize,
        #[arg(long, default_value_t = 10_000)]
        settings: usize,
        /// Comma-separated `first:second` pairs; all ordered pairs of the
        /// five named heuristics by default
        #[arg(long, value_delimiter = ',', value_parser = parse_pairing)]
        pairs: Vec<(HeuristicId, HeuristicId)>,
    },
    /// Integer program of one setting in CPLEX LP format
    ExportLp {
        #[command(flatten)]
        input: SettingInput,
    },
    /// Check a move log against a setting and print the resulting path
    Replay {
        #[arg(long)]
        setting: String,
        /// Move log file (`S <v>`, then `E <v> <front|back>` lines)
        #[arg(long)]
        moves: PathBuf,
        #[arg(long)]
        display: bool,
    },
}

#[derive(Args)]
struct GridArgs {
    /// List (`5,6,7`) or range (`5..8`); graph defaults when omitted
    #[arg(long, value_parser = parse_list)]
    c: Option<List>,
    #[arg(long, value_parser = parse_list)]
    nd: Option<List>,
    #[arg(long, value_delimiter = ',')]
    heuristics: Vec<HeuristicId>,
    #[arg(long, default_value_t = 10_000)]
    settings: usize,
    /// Settings (from the front of the stream) also solved exactly
    #[arg(long, default_value_t = 200)]
    ideal: usize,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SettingInput {
    /// One setting record, `nd=..; initial=..; extension=..`
    #[arg(long)]
    setting: Option<String>,
    /// File with one record per line
    #[arg(long)]
    settings: Option<PathBuf>,
}

#[derive(Clone)]
struct List(Vec<usize>);

fn parse_list(s: &str) -> Result<List, String> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| format!("bad number {t:?}"))
    };
    // ranges are inclusive either way
    if let Some((a, b)) = s.split_once("..") {
        let b = b.strip_prefix('=').unwrap_or(b);
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(format!("empty range {s:?}"));
        }
        return Ok(List((a..=b).collect()));
    }
    s.split(',').map(num).collect::<Result<_, _>>().map(List)
}

fn parse_pairing(s: &str) -> Result<(HeuristicId, HeuristicId), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected first:second, got {s:?}"))?;
    Ok((a.parse()?, b.parse()?))
}

type Res<T> = Result<T, Box<dyn Error>>;

fn load_graph(spec: &str) -> Res<(Graph, String)> {
    match spec {
        "board" | "extended" => Ok((Graph::builtin(spec)?, spec.to_string())),
        path => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?;
            let g = Graph::parse_edge_list(&text, None).map_err(|e| format!("{path}: {e}"))?;
            Ok((g, path.to_string()))
        }
    }
}

fn load_settings(g: &Graph, input: &SettingInput) -> Res<Vec<FeasibleSetting>> {
    if let Some(rec) = &input.setting {
        return Ok(vec![FeasibleSetting::parse_record(rec, g)?]);
    }
    let path = input.settings.as_ref().expect("clap enforces one input");
    let file = File::open(path).map_err(|e| format!("{}: {e}", path.display()))?;
    read_settings(g, BufReader::new(file)).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn output(out: &Option<PathBuf>) -> Res<Box<dyn Write>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| format!("{}: {e}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Res<()> {
    let (g, graph_name) = load_graph(&cli.graph)?;
    let mut out = output(&cli.out)?;
    match cli.cmd {
        Command::Gen { c, nd, count } => {
            let settings = (0..count)
                .map(|i| grid_setting(&g, c, nd, cli.seed, i))
                .collect::<Result<Vec<_>, _>>()?;
            write_settings(&settings, &mut out)?;
        }
        Command::Run(args) => {
            let mut cfg = ExperimentConfig::defaults_for(&graph_name, g.node_count());
            if let Some(c) = args.c {
                cfg.c_values = c.0;
            }
            if let Some(nd) = args.nd {
                cfg.nd_values = nd.0;
            }
            if !args.heuristics.is_empty() {
                cfg.heuristics = args.heuristics;
            }
            cfg.num_settings = args.settings;
            cfg.num_ideal_settings = args.ideal.min(args.settings);
            cfg.master_seed = cli.seed;
            cfg.timing = cli.timing;
            emit_csv(&run_grid(&g, &cfg)?, &mut out)?;
        }
        Command::Exact { input, moves } => {
            for s in load_settings(&g, &input)? {
                let sol = ideal_solution(&g, &s);
                writeln!(out, "{}", sol.len())?;
                if moves {
                    write!(out, "{}", format_move_log(&sol.moves))?;
                }
            }
        }
        Command::Allpairs { c, nd, settings } => {
            let cfg = ExperimentConfig {
                c_values: vec![c],
                nd_values: vec![nd],
                heuristics: HeuristicId::all_pairs(),
                num_settings: settings,
                num_ideal_settings: 0,
                master_seed: cli.seed,
                timing: cli.timing,
                ..ExperimentConfig::defaults_for(&graph_name, g.node_count())
            };
            emit_csv(&run_grid(&g, &cfg)?, &mut out)?;
        }
        Command::Tournament {
            c,
            nd,
            settings,
            pairs,
        } => {
            let pairs = if pairs.is_empty() {
                let named = HeuristicId::NAMED;
                named
                    .iter()
                    .flat_map(|&a| named.iter().map(move |&b| (a, b)))
                    .collect()
            } else {
                pairs
            };
            let rows = tournament(&g, &pairs, settings, c, nd, cli.seed)?;
            write_tournament_csv(&rows, &mut out)?;
        }
        Command::ExportLp { input } => {
            for s in load_settings(&g, &input)? {
                write!(out, "{}", export_lp(&g, &s))?;
            }
        }
        Command::Replay {
            setting,
            moves,
            display,
        } => {
            let s = FeasibleSetting::parse_record(&setting, &g)?;
            let text =
                std::fs::read_to_string(&moves).map_err(|e| format!("{}: {e}", moves.display()))?;
            let log = parse_move_log(&text)?;
            let mode = if display {
                Mode::Display
            } else {
                Mode::Cumulative
            };
            let st = OpepState::replay(&g, &s, mode, &log)?;
            writeln!(out, "length {}", st.path().len())?;
            writeln!(out, "path {}", st.path())?;
            writeln!(out, "terminal {}", st.is_terminal())?;
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("opep: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("opep: {e}");
            ExitCode::from(2)
        }
    }
}
