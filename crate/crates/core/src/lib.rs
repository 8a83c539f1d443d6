//! Open-ended path extension on graphs: the game engine, heuristic
//! players, an exact solver and experiment drivers.

pub mod arena;
pub mod bench;
pub mod deck;
pub mod exact;
pub mod fixtures;
pub mod graph;
pub mod heuristics;
pub mod nodeset;
pub mod opep;
pub mod rng;

pub use arena::{play_match, tournament, GameRecord, Outcome, TournamentRow};
pub use bench::{run_grid, ExperimentConfig, Solver, StatRow};
pub use deck::{AvailabilityMatrix, DeckError, FeasibleSetting};
pub use exact::{brute_force_ideal, export_lp, ideal_path, IdealSolution};
pub use graph::{Graph, GraphError, Path, Side};
pub use heuristics::{Choice, ExtRule, HeuristicId, StartRule};
pub use nodeset::NodeSet;
pub use opep::{Extension, Mode, Move, OpepError, OpepState, Position};
