//! The online path extension procedure as a replayable state machine.
//!
//! Two availability rules share one engine. In [`Mode::Cumulative`] a path
//! of node length `l` may be extended by any node of
//! `V_init ∪ {j_1..j_l}`. In [`Mode::Display`] a fixed-size row of cards is
//! on display: taking a card removes that copy and the next extension card
//! is drawn immediately.

use std::fmt;
use std::str::FromStr;

use crate::deck::FeasibleSetting;
use crate::graph::{Graph, Path, Side};
use crate::nodeset::NodeSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OpepError {
    #[error("no start node chosen yet")]
    NotStarted,
    #[error("path already started")]
    AlreadyStarted,
    #[error("node {0} is not a node of the graph")]
    UnknownNode(usize),
    #[error("node {0} is not available")]
    NotAvailable(usize),
    #[error("node {0} is already on the path")]
    AlreadyOnPath(usize),
    #[error("node {node} is not adjacent to the {side} end of the path")]
    NotAdjacent { node: usize, side: Side },
    #[error("move log line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    /// Single player: every revealed card stays available.
    #[default]
    Cumulative,
    /// Cards are taken from a shared display of size `c`.
    Display,
}

/// Attach `node` at `side` of the current path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Extension {
    pub node: usize,
    pub side: Side,
}

impl Extension {
    pub fn new(node: usize, side: Side) -> Self {
        Extension { node, side }
    }

    pub fn front(node: usize) -> Self {
        Extension::new(node, Side::Front)
    }

    pub fn back(node: usize) -> Self {
        Extension::new(node, Side::Back)
    }

    /// On a single-node path both ends coincide; such extensions are
    /// reported at the back.
    pub fn canonical(self, path_len: usize) -> Self {
        if path_len == 1 {
            Extension::back(self.node)
        } else {
            self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Move {
    Start(usize),
    Extend(Extension),
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Start(v) => write!(f, "S {v}"),
            Move::Extend(e) => write!(f, "E {} {}", e.node, e.side),
        }
    }
}

impl FromStr for Move {
    type Err = String;

    fn from_str(s: &str) -> Result<Move, String> {
        let toks: Vec<&str> = s.split_whitespace().collect();
        let node = |t: &str| t.parse::<usize>().map_err(|_| format!("bad node id {t:?}"));
        match toks.as_slice() {
            ["S", v] => Ok(Move::Start(node(v)?)),
            ["E", v, side] => Ok(Move::Extend(Extension::new(node(v)?, side.parse()?))),
            _ => Err(format!(
                "expected `S <v>` or `E <v> <front|back>`, got {s:?}"
            )),
        }
    }
}

/// Parses a move log: `S <v>` followed by `E <v> <front|back>` lines.
/// Blank lines and `#` comments are skipped.
pub fn parse_move_log(text: &str) -> Result<Vec<Move>, OpepError> {
    let mut moves = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mv = line
            .parse()
            .map_err(|msg| OpepError::Parse { line: i + 1, msg })?;
        moves.push(mv);
    }
    Ok(moves)
}

pub fn format_move_log(moves: &[Move]) -> String {
    moves.iter().map(|m| format!("{m}\n")).collect()
}

/// Row of face-up cards fed from the extension tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CardDisplay {
    cards: Vec<usize>,
    cursor: usize,
}

impl CardDisplay {
    pub fn new(setting: &FeasibleSetting) -> Self {
        CardDisplay {
            cards: setting.initial().to_vec(),
            cursor: 0,
        }
    }

    pub fn cards(&self) -> &[usize] {
        &self.cards
    }

    /// Distinct nodes currently on display.
    pub fn support(&self) -> NodeSet {
        self.cards.iter().collect()
    }

    /// Number of extension cards drawn so far.
    pub fn drawn(&self) -> usize {
        self.cursor
    }

    /// Removes one copy of `v` and refills from the extension tuple.
    pub fn take(&mut self, v: usize, setting: &FeasibleSetting) -> Result<(), OpepError> {
        let idx = self
            .cards
            .iter()
            .position(|&c| c == v)
            .ok_or(OpepError::NotAvailable(v))?;
        self.cards.swap_remove(idx);
        if let Some(&next) = setting.extension().get(self.cursor) {
            self.cards.push(next);
            self.cursor += 1;
        }
        Ok(())
    }
}

/// What a heuristic sees when choosing its next move.
#[derive(Debug, Clone, Copy)]
pub struct Position<'a> {
    pub graph: &'a Graph,
    pub path: &'a Path,
    /// Nodes that may be selected now (path members may be included).
    pub available: NodeSet,
    /// Visible cards with multiplicity; only used to pick a start node.
    pub cards: &'a [usize],
}

impl<'a> Position<'a> {
    /// Available nodes not on the path; at the start these are the legal
    /// start nodes.
    pub fn candidates(&self) -> NodeSet {
        self.available.difference(self.path.members())
    }

    /// Tentacles of the current path that are available now.
    pub fn available_tentacles(&self) -> NodeSet {
        self.graph
            .tentacles_unchecked(self.path)
            .intersection(self.available)
    }

    /// Every legal `(node, side)`; single-node paths yield one entry per node.
    pub fn feasible_extensions(&self) -> Vec<Extension> {
        let Some((a, b)) = self.path.ends() else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for v in self.available_tentacles() {
            if a == b {
                out.push(Extension::back(v));
                continue;
            }
            if self.graph.adjacent(a, v) {
                out.push(Extension::front(v));
            }
            if self.graph.adjacent(b, v) {
                out.push(Extension::back(v));
            }
        }
        out
    }

    /// Checks a proposed extension against the current path and availability.
    pub fn check_extension(&self, e: Extension) -> Result<(), OpepError> {
        let (a, b) = self.path.ends().ok_or(OpepError::NotStarted)?;
        self.graph
            .check_node(e.node)
            .map_err(|_| OpepError::UnknownNode(e.node))?;
        if self.path.contains(e.node) {
            return Err(OpepError::AlreadyOnPath(e.node));
        }
        if !self.available.contains(e.node) {
            return Err(OpepError::NotAvailable(e.node));
        }
        let end = match e.side {
            Side::Front => a,
            Side::Back => b,
        };
        if !self.graph.adjacent(end, e.node) {
            return Err(OpepError::NotAdjacent {
                node: e.node,
                side: e.side,
            });
        }
        Ok(())
    }
}

/// One in-progress run of the procedure for a single player.
#[derive(Debug, Clone)]
pub struct OpepState<'a> {
    graph: &'a Graph,
    setting: &'a FeasibleSetting,
    mode: Mode,
    path: Path,
    display: CardDisplay,
    moves: Vec<Move>,
}

impl<'a> OpepState<'a> {
    pub fn new(graph: &'a Graph, setting: &'a FeasibleSetting, mode: Mode) -> Self {
        OpepState {
            graph,
            setting,
            mode,
            path: Path::default(),
            display: CardDisplay::new(setting),
            moves: Vec::new(),
        }
    }

    /// Re-applies a recorded move sequence from scratch.
    pub fn replay(
        graph: &'a Graph,
        setting: &'a FeasibleSetting,
        mode: Mode,
        moves: &[Move],
    ) -> Result<Self, OpepError> {
        let mut st = OpepState::new(graph, setting, mode);
        for &m in moves {
            st.apply(m)?;
        }
        Ok(st)
    }

    pub fn graph(&self) -> &'a Graph {
        self.graph
    }

    pub fn setting(&self) -> &'a FeasibleSetting {
        self.setting
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn into_path(self) -> Path {
        self.path
    }

    pub fn display(&self) -> &CardDisplay {
        &self.display
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    /// Nodes that may be selected in the next move.
    pub fn available(&self) -> NodeSet {
        match self.mode {
            Mode::Cumulative => self.setting.revealed_after(self.path.len()),
            Mode::Display => self.display.support(),
        }
    }

    /// Cards (with multiplicity) a start node is drawn from.
    pub fn start_cards(&self) -> &[usize] {
        match self.mode {
            Mode::Cumulative => self.setting.initial(),
            Mode::Display => self.display.cards(),
        }
    }

    pub fn legal_starts(&self) -> NodeSet {
        if self.path.is_empty() {
            self.available()
        } else {
            NodeSet::EMPTY
        }
    }

    pub fn position(&self) -> Position<'_> {
        Position {
            graph: self.graph,
            path: &self.path,
            available: self.available(),
            cards: self.start_cards(),
        }
    }

    pub fn available_tentacles(&self) -> Result<NodeSet, OpepError> {
        if self.path.is_empty() {
            return Err(OpepError::NotStarted);
        }
        Ok(self.position().available_tentacles())
    }

    pub fn feasible_extensions(&self) -> Vec<Extension> {
        self.position().feasible_extensions()
    }

    pub fn is_terminal(&self) -> bool {
        !self.path.is_empty() && self.position().available_tentacles().is_empty()
    }

    pub fn apply_start(&mut self, v: usize) -> Result<(), OpepError> {
        if !self.path.is_empty() {
            return Err(OpepError::AlreadyStarted);
        }
        self.graph
            .check_node(v)
            .map_err(|_| OpepError::UnknownNode(v))?;
        if !self.available().contains(v) {
            return Err(OpepError::NotAvailable(v));
        }
        if self.mode == Mode::Display {
            self.display.take(v, self.setting)?;
        }
        self.path.attach(v, Side::Back);
        self.moves.push(Move::Start(v));
        Ok(())
    }

    pub fn apply_extension(&mut self, e: Extension) -> Result<(), OpepError> {
        self.position().check_extension(e)?;
        if self.mode == Mode::Display {
            self.display.take(e.node, self.setting)?;
        }
        self.path.attach(e.node, e.side);
        self.moves.push(Move::Extend(e));
        Ok(())
    }

    pub fn apply(&mut self, m: Move) -> Result<(), OpepError> {
        match m {
            Move::Start(v) => self.apply_start(v),
            Move::Extend(e) => self.apply_extension(e),
        }
    }

    pub fn move_log(&self) -> String {
        format_move_log(&self.moves)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::worst_case_setting;

    fn board() -> Graph {
        Graph::builtin("board").unwrap()
    }

    fn set(v: &[usize]) -> NodeSet {
        v.iter().collect()
    }

    #[test]
    fn legal_starts_are_the_initial_set() {
        let g = board();
        let s = worst_case_setting(&g);
        let st = OpepState::new(&g, &s, Mode::Cumulative);
        assert_eq!(st.legal_starts(), set(&[2, 5, 6, 13, 18, 22]));
        assert!(!st.is_terminal());
        assert_eq!(st.available_tentacles(), Err(OpepError::NotStarted));
    }

    #[test]
    fn display_holds_duplicate_cards() {
        let g = board();
        let initial = vec![7, 7, 3, 1, 2, 4];
        let mut rest: Vec<usize> = (1..=22).flat_map(|v| [v, v]).collect();
        for v in &initial {
            let i = rest.iter().position(|x| x == v).unwrap();
            rest.remove(i);
        }
        let s = FeasibleSetting::new(&g, initial, rest, 2).unwrap();
        let mut st = OpepState::new(&g, &s, Mode::Display);
        assert_eq!(st.display().cards().iter().filter(|&&c| c == 7).count(), 2);
        assert_eq!(st.legal_starts().len(), 5);
        st.apply_start(7).unwrap();
        // one copy of 7 remains on display, and it is drawable by nobody on this path
        assert!(st.display().cards().contains(&7));
        assert_eq!(st.display().cards().len(), 6);
        assert_eq!(st.display().drawn(), 1);
    }

    #[test]
    fn edgeless_graph_terminates_after_start() {
        let g = Graph::empty(3).unwrap();
        let s = FeasibleSetting::new(&g, vec![1], vec![2, 3], 1).unwrap();
        let mut st = OpepState::new(&g, &s, Mode::Cumulative);
        st.apply_start(1).unwrap();
        assert!(st.is_terminal());
    }

    #[test]
    fn worst_case_available_tentacles() {
        let g = board();
        let s = worst_case_setting(&g);
        let mut st = OpepState::new(&g, &s, Mode::Cumulative);
        st.apply_start(5).unwrap();
        assert_eq!(st.available_tentacles(), Ok(set(&[4])));

        let mut st = OpepState::new(&g, &s, Mode::Cumulative);
        st.apply_start(2).unwrap();
        assert_eq!(g.tentacles(st.path()).unwrap(), set(&[1, 3, 7]));
        assert_eq!(st.available_tentacles(), Ok(NodeSet::EMPTY));
        assert!(st.is_terminal());
    }

    #[test]
    fn full_path_is_terminal() {
        let g = Graph::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        let s = FeasibleSetting::new(&g, vec![1, 2, 3], vec![], 1).unwrap();
        let st = OpepState::replay(
            &g,
            &s,
            Mode::Cumulative,
            &[
                Move::Start(2),
                Move::Extend(Extension::back(3)),
                Move::Extend(Extension::front(1)),
            ],
        )
        .unwrap();
        assert_eq!(st.path().nodes(), &[1, 2, 3]);
        assert_eq!(st.available_tentacles(), Ok(NodeSet::EMPTY));
        assert!(st.is_terminal());
    }

    #[test]
    fn feasible_extensions_both_ends() {
        let g = board();
        let all: Vec<usize> = (1..=22).collect();
        let s = FeasibleSetting::new(&g, all, vec![], 1).unwrap();
        let st = OpepState::replay(
            &g,
            &s,
            Mode::Cumulative,
            &[Move::Start(1), Move::Extend(Extension::back(2))],
        )
        .unwrap();
        let mut ext = st.feasible_extensions();
        ext.sort();
        let mut expected = vec![
            Extension::front(6),
            Extension::front(7),
            Extension::back(7),
            Extension::back(3),
        ];
        expected.sort();
        assert_eq!(ext, expected);

        // single node: one canonical entry per neighbor
        let st = OpepState::replay(&g, &s, Mode::Cumulative, &[Move::Start(1)]).unwrap();
        assert_eq!(
            st.feasible_extensions(),
            vec![Extension::back(2), Extension::back(6), Extension::back(7)]
        );
    }

    #[test]
    fn apply_extension_concatenates_and_rejects() {
        let g = board();
        let all: Vec<usize> = (1..=22).collect();
        let s = FeasibleSetting::new(&g, all, vec![], 1).unwrap();
        let mut st = OpepState::new(&g, &s, Mode::Cumulative);
        assert_eq!(
            st.apply_extension(Extension::back(2)),
            Err(OpepError::NotStarted)
        );
        st.apply_start(1).unwrap();
        assert_eq!(st.apply_start(2), Err(OpepError::AlreadyStarted));
        st.apply_extension(Extension::back(2)).unwrap();
        let mut back = st.clone();
        back.apply_extension(Extension::back(3)).unwrap();
        assert_eq!(back.path().nodes(), &[1, 2, 3]);
        st.apply_extension(Extension::front(7)).unwrap();
        assert_eq!(st.path().nodes(), &[7, 1, 2]);
        assert_eq!(
            st.apply_extension(Extension::back(1)),
            Err(OpepError::AlreadyOnPath(1))
        );
        assert_eq!(
            st.apply_extension(Extension::back(5)),
            Err(OpepError::NotAdjacent {
                node: 5,
                side: Side::Back
            })
        );
        assert_eq!(
            st.apply_extension(Extension::back(50)),
            Err(OpepError::UnknownNode(50))
        );
    }

    #[test]
    fn unrevealed_nodes_rejected() {
        let g = board();
        let s = worst_case_setting(&g);
        let mut st = OpepState::new(&g, &s, Mode::Cumulative);
        assert_eq!(st.apply_start(4), Err(OpepError::NotAvailable(4)));
        st.apply_start(5).unwrap();
        st.apply_extension(Extension::back(4)).unwrap();
        // j_2 = 10 is now visible, j_3 = 17 is not
        assert_eq!(
            st.apply_extension(Extension::back(9)),
            Err(OpepError::NotAvailable(9))
        );
        st.apply_extension(Extension::back(10)).unwrap();
        st.apply_extension(Extension::back(17)).unwrap();
    }

    #[test]
    fn display_mode_consumes_copies() {
        let g = Graph::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        let s = FeasibleSetting::new(&g, vec![2, 2], vec![1, 3, 1, 3], 2).unwrap();
        let mut st = OpepState::new(&g, &s, Mode::Display);
        st.apply_start(2).unwrap();
        // display now {2, 1}: the second copy of 2 remains selectable as a card
        assert_eq!(st.display().cards().len(), 2);
        assert!(st.display().support().contains(2));
        assert_eq!(st.available_tentacles(), Ok(set(&[1])));
        st.apply_extension(Extension::front(1)).unwrap();
        assert_eq!(st.display().drawn(), 2);
        assert!(st.available().contains(3));
        st.apply_extension(Extension::back(3)).unwrap();
        assert!(st.is_terminal());
    }

    #[test]
    fn move_log_round_trip() {
        let g = board();
        let s = worst_case_setting(&g);
        let mut st = OpepState::new(&g, &s, Mode::Cumulative);
        st.apply_start(5).unwrap();
        st.apply_extension(Extension::back(4)).unwrap();
        st.apply_extension(Extension::front(10)).unwrap_err();
        st.apply_extension(Extension::back(10)).unwrap();
        let log = st.move_log();
        assert_eq!(log, "S 5\nE 4 back\nE 10 back\n");
        let moves = parse_move_log(&format!("# comment\n{log}")).unwrap();
        let again = OpepState::replay(&g, &s, Mode::Cumulative, &moves).unwrap();
        assert_eq!(again.path(), st.path());
        assert!(matches!(
            parse_move_log("S 5\nE 4 sideways\n"),
            Err(OpepError::Parse { line: 2, .. })
        ));
    }
}
