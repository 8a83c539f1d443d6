//! Small hand-built instances used in tests, examples and the CLI.

use crate::deck::FeasibleSetting;
use crate::graph::Graph;

/// Initial tuple of the worst-case board instance: six pairwise
/// non-adjacent cities.
pub const WORST_CASE_INITIAL: [usize; 6] = [2, 5, 6, 13, 18, 22];

/// Extension tuple of the worst-case board instance. Node 5 is the only
/// start from which the whole board can be walked.
pub const WORST_CASE_EXTENSION: [usize; 16] =
    [4, 10, 17, 21, 20, 19, 11, 1, 3, 9, 16, 15, 14, 12, 7, 8];

/// The worst-case (6,1)-setting on the board graph: every deterministic
/// start rule produces a path of node length 1 while the ideal path visits
/// all 22 nodes.
pub fn worst_case_setting(board: &Graph) -> FeasibleSetting {
    FeasibleSetting::new(
        board,
        WORST_CASE_INITIAL.to_vec(),
        WORST_CASE_EXTENSION.to_vec(),
        1,
    )
    .expect("worst-case setting is feasible on the board graph")
}

/// 18-node graph on which the path 6-2-3-8 has six tentacles, and where
/// extending 2-3-8 into {6,7,10,11} from both ends yields more tentacles
/// than a one-sided extension of the same length.
pub fn tentacle_demo_graph() -> Graph {
    Graph::from_edges(
        18,
        &[
            (1, 2),
            (1, 6),
            (2, 3),
            (2, 6),
            (2, 16),
            (3, 4),
            (3, 8),
            (3, 17),
            (3, 18),
            (5, 6),
            (6, 7),
            (6, 13),
            (7, 8),
            (7, 10),
            (7, 11),
            (8, 9),
            (8, 11),
            (9, 11),
            (10, 11),
            (10, 13),
            (10, 14),
            (11, 12),
            (11, 14),
            (11, 15),
        ],
    )
    .expect("static edge list")
}

/// 15-node graph used to illustrate the start and extension rules.
///
/// With visible cards {6,7,8,10,11,15}: node 8 has the largest degree (6),
/// {6,7,10,11,15} is the largest visible component, 7 is its minimum-degree
/// member and 6-10-11-15 its longest, most-tentacled path. With current
/// path 5-8-13 and available {6,7,9,10,12,14}: 9 has maximum degree and
/// attaching 6 in front maximizes tentacles.
pub fn heuristic_demo_graph() -> Graph {
    Graph::from_edges(
        15,
        &[
            (1, 2),
            (1, 12),
            (2, 3),
            (2, 8),
            (3, 4),
            (3, 8),
            (5, 6),
            (5, 8),
            (5, 9),
            (6, 10),
            (7, 10),
            (8, 9),
            (8, 12),
            (8, 13),
            (9, 10),
            (9, 13),
            (10, 11),
            (10, 14),
            (11, 15),
            (12, 13),
            (13, 14),
            (14, 15),
        ],
    )
    .expect("static edge list")
}

/// Visible start cards for [`heuristic_demo_graph`].
pub const HEURISTIC_DEMO_START_CARDS: [usize; 6] = [6, 7, 8, 10, 11, 15];
/// Current path for the extension illustrations on [`heuristic_demo_graph`].
pub const HEURISTIC_DEMO_PATH: [usize; 3] = [5, 8, 13];
/// Available (revealed, off-path) nodes for the extension illustrations.
pub const HEURISTIC_DEMO_AVAILABLE: [usize; 6] = [6, 7, 9, 10, 12, 14];
