//! Longest path under complete knowledge of the deck order: a native
//! branch-and-bound solver, an exhaustive oracle for small instances and an
//! LP-format export of the integer program.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::deck::FeasibleSetting;
use crate::graph::{Graph, Path, Side};
use crate::nodeset::NodeSet;
use crate::opep::{Extension, Mode, Move, OpepState};

/// Largest deck (`n * nd` cards) accepted by [`brute_force_ideal`].
pub const BRUTE_FORCE_LIMIT: usize = 24;

/// Graphs up to this size are solved with a transposition table.
pub const MEMO_MAX_NODES: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("instance too large for exhaustive search: {cards} cards (limit {limit})")]
    TooLarge { cards: usize, limit: usize },
}

/// An optimal path together with a move sequence that produces it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealSolution {
    pub path: Path,
    pub moves: Vec<Move>,
}

impl IdealSolution {
    pub fn len(&self) -> usize {
        self.path.len()
    }

    pub fn is_empty(&self) -> bool {
        self.path.is_empty()
    }
}

/// A longest path the procedure can build when the whole deck order is known.
pub fn ideal_path(g: &Graph, s: &FeasibleSetting) -> Path {
    ideal_solution(g, s).path
}

pub fn ideal_length(g: &Graph, s: &FeasibleSetting) -> usize {
    ideal_solution(g, s).len()
}

pub fn ideal_solution(g: &Graph, s: &FeasibleSetting) -> IdealSolution {
    let mut search = Search::new(g, s);
    let moves = if g.node_count() <= MEMO_MAX_NODES {
        search.solve_memo()
    } else {
        search.solve_global()
    };
    let mut path = Path::default();
    for m in &moves {
        match *m {
            Move::Start(v) => path = Path::single(v),
            Move::Extend(e) => path.attach(e.node, e.side),
        }
    }
    IdealSolution { path, moves }
}

#[derive(Clone, Copy)]
struct State {
    front: usize,
    back: usize,
    used: NodeSet,
}

impl State {
    fn start(v: usize) -> State {
        State {
            front: v,
            back: v,
            used: NodeSet::singleton(v),
        }
    }

    fn len(&self) -> usize {
        self.used.len()
    }

    fn step(&self, e: Extension) -> State {
        let mut used = self.used;
        used.insert(e.node);
        match e.side {
            Side::Front => State {
                front: e.node,
                back: self.back,
                used,
            },
            Side::Back => State {
                front: self.front,
                back: e.node,
                used,
            },
        }
    }

    fn key(&self) -> u64 {
        let (a, b) = if self.front <= self.back {
            (self.front, self.back)
        } else {
            (self.back, self.front)
        };
        ((self.used.bits() >> 1) as u64) | ((a as u64) << 40) | ((b as u64) << 48)
    }
}

struct Search<'a> {
    g: &'a Graph,
    s: &'a FeasibleSetting,
    all: NodeSet,
    memo: HashMap<u64, u8>,
    best: Vec<Move>,
    current: Vec<Move>,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, s: &'a FeasibleSetting) -> Self {
        Search {
            g,
            s,
            all: g.nodes(),
            memo: HashMap::new(),
            best: Vec::new(),
            current: Vec::new(),
        }
    }

    /// Upper bound on the final length from `st`. The i-th further node
    /// must be an unused node reachable from an end through unused nodes,
    /// and it must be revealed by the time it is picked.
    fn bound(&self, st: &State) -> usize {
        let g = self.g;
        let free = self.all.difference(st.used);
        let seeds = g.neighbor_set(st.front).union(g.neighbor_set(st.back));
        let reach = g.reach_within(seeds, free);
        let len = st.len();
        let mut extra = 0;
        while extra < reach.len()
            && self.s.revealed_after(len + extra).intersection(reach).len() > extra
        {
            extra += 1;
        }
        len + extra
    }

    /// Feasible one-node extensions of `st`, each with its bound, best
    /// bound first.
    fn children(&self, st: &State) -> Vec<(Extension, State, usize)> {
        let avail = self.s.revealed_after(st.len()).difference(st.used);
        let mut out = Vec::new();
        let mut push = |e: Extension| {
            let next = st.step(e);
            out.push((e, next, self.bound(&next)));
        };
        if st.front == st.back {
            for v in self.g.neighbor_set(st.back).intersection(avail) {
                push(Extension::back(v));
            }
        } else {
            for v in self.g.neighbor_set(st.front).intersection(avail) {
                push(Extension::front(v));
            }
            for v in self.g.neighbor_set(st.back).intersection(avail) {
                push(Extension::back(v));
            }
        }
        out.sort_by_key(|x| std::cmp::Reverse(x.2));
        out
    }

    fn starts(&self) -> Vec<(usize, State, usize)> {
        let mut out: Vec<_> = self
            .s
            .initial_set()
            .iter()
            .map(|v| {
                let st = State::start(v);
                (v, st, self.bound(&st))
            })
            .collect();
        out.sort_by_key(|x| std::cmp::Reverse(x.2));
        out
    }

    /// Exact optimum from `st`. Children whose bound cannot beat the best
    /// sibling are skipped, so the stored values stay exact.
    fn value(&mut self, st: &State, own_bound: usize) -> usize {
        let key = st.key();
        if let Some(&v) = self.memo.get(&key) {
            return v as usize;
        }
        let mut best = st.len();
        if best < own_bound {
            for (_, next, b) in self.children(st) {
                if b <= best {
                    break;
                }
                best = best.max(self.value(&next, b));
                if best == own_bound {
                    break;
                }
            }
        }
        self.memo.insert(key, best as u8);
        best
    }

    fn solve_memo(&mut self) -> Vec<Move> {
        let mut best = (0, None);
        for (v, st, b) in self.starts() {
            if b <= best.0 {
                break;
            }
            let val = self.value(&st, b);
            if val > best.0 {
                best = (val, Some((v, st)));
            }
        }
        let (target, Some((v, mut st))) = best else {
            return Vec::new();
        };
        let mut moves = vec![Move::Start(v)];
        while st.len() < target {
            let (e, next) = self
                .children(&st)
                .into_iter()
                .filter(|c| c.2 >= target)
                .find_map(|(e, next, b)| (self.value(&next, b) == target).then_some((e, next)))
                .expect("an optimal child exists");
            moves.push(Move::Extend(e));
            st = next;
        }
        moves
    }

    fn solve_global(&mut self) -> Vec<Move> {
        let root_bound = self.starts().first().map_or(0, |s| s.2);
        for (v, st, b) in self.starts() {
            if b <= self.best.len() {
                break;
            }
            self.current.push(Move::Start(v));
            self.dfs(&st, root_bound);
            self.current.pop();
            if self.best.len() == root_bound {
                break;
            }
        }
        std::mem::take(&mut self.best)
    }

    fn dfs(&mut self, st: &State, root_bound: usize) {
        if st.len() > self.best.len() {
            self.best = self.current.clone();
        }
        for (e, next, b) in self.children(st) {
            if b <= self.best.len() || self.best.len() == root_bound {
                break;
            }
            self.current.push(Move::Extend(e));
            self.dfs(&next, root_bound);
            self.current.pop();
        }
    }
}

/// Longest final path by exhaustive, unpruned enumeration of every legal
/// move sequence through the game engine.
pub fn brute_force_ideal(g: &Graph, s: &FeasibleSetting) -> Result<usize, ExactError> {
    let cards = s.node_count() * s.nd();
    if cards > BRUTE_FORCE_LIMIT {
        return Err(ExactError::TooLarge {
            cards,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    fn go(st: &OpepState<'_>) -> usize {
        let mut best = st.path().len();
        for e in st.feasible_extensions() {
            let mut next = st.clone();
            next.apply_extension(e)
                .expect("engine lists only legal moves");
            best = best.max(go(&next));
        }
        best
    }
    let root = OpepState::new(g, s, Mode::Cumulative);
    Ok(root
        .legal_starts()
        .iter()
        .map(|v| {
            let mut st = root.clone();
            st.apply_start(v).expect("legal start");
            go(&st)
        })
        .max()
        .unwrap_or(0))
}

/// The integer program as CPLEX LP text over the horizon
/// `K = max(d + 1, n)`. Variables are `x_k_p` (node p picked at step k) and
/// `Es_k_p` / `Et_k_p` (p is the start / end node after step k).
pub fn export_lp(g: &Graph, s: &FeasibleSetting) -> String {
    let n = g.node_count();
    let k_max = s.horizon();
    let d = s.availability_matrix();
    let mut lp = Lp::default();

    let _ = writeln!(
        lp.out,
        "\\ longest path under complete deck knowledge: n={n} nd={} c={} d={} K={k_max}",
        s.nd(),
        s.c(),
        s.d()
    );
    lp.out.push_str("Maximize\n");
    let obj: Vec<_> = (1..=k_max)
        .flat_map(|k| (1..=n).map(move |p| (1, x(k, p))))
        .collect();
    lp.row("obj", &obj, None);
    lp.out.push_str("Subject To\n");

    let ends = [("s", "Es"), ("t", "Et")];
    // (2) availability
    for k in 1..=k_max {
        for p in 1..=n {
            let avail = d.cumulative(k, p) as i64;
            lp.row(
                &format!("avail_{k}_{p}"),
                &[(1, x(k, p))],
                Some(("<=", avail)),
            );
        }
    }
    // (3) each node at most once
    for p in 1..=n {
        let terms: Vec<_> = (1..=k_max).map(|k| (1, x(k, p))).collect();
        lp.row(&format!("once_{p}"), &terms, Some(("<=", 1)));
    }
    // (4) one start node
    let terms: Vec<_> = (1..=n).map(|p| (1, x(1, p))).collect();
    lp.row("start", &terms, Some(("<=", 1)));
    // (5) no gaps
    for k in 2..=k_max {
        let mut terms: Vec<_> = (1..=n).map(|p| (1, x(k, p))).collect();
        terms.extend((1..=n).map(|p| (-1, x(k - 1, p))));
        lp.row(&format!("chain_{k}"), &terms, Some(("<=", 0)));
    }
    // (6) both ends equal the start node at step 1
    for (l, var) in ends {
        for p in 1..=n {
            lp.row(
                &format!("init{l}_{p}"),
                &[(1, e(var, 1, p)), (-1, x(1, p))],
                Some(("=", 0)),
            );
        }
    }
    // (8) exactly one start and one end node per step
    for (l, var) in ends {
        for k in 1..=k_max {
            let terms: Vec<_> = (1..=n).map(|p| (1, e(var, k, p))).collect();
            lp.row(&format!("one{l}_{k}"), &terms, Some(("=", 1)));
        }
    }
    // (9) distinct ends unless the path is a single node
    for k in 2..=k_max {
        for p in 1..=n {
            lp.row(
                &format!("distinct_{k}_{p}"),
                &[(1, e("Et", k, p)), (1, e("Es", k, p)), (-1, x(1, p))],
                Some(("<=", 1)),
            );
        }
    }
    // (10) a new end node must be the node picked at this step
    for (l, var) in ends {
        for k in 2..=k_max {
            for p in 1..=n {
                lp.row(
                    &format!("keep{l}_{k}_{p}"),
                    &[(1, e(var, k, p)), (-1, e(var, k - 1, p)), (-1, x(k, p))],
                    Some(("<=", 0)),
                );
            }
        }
    }
    // (11) the picked node becomes an end
    for k in 2..=k_max {
        for p in 1..=n {
            lp.row(
                &format!("pick_{k}_{p}"),
                &[(1, x(k, p)), (-1, e("Et", k, p)), (-1, e("Es", k, p))],
                Some(("<=", 0)),
            );
        }
    }
    // (12) an end moves only to a neighbor of the previous end
    for (l, var) in ends {
        for k in 2..=k_max {
            for p in 1..=n {
                let mut terms = vec![(1, e(var, k, p)), (-1, e(var, k - 1, p))];
                terms.extend(g.neighbors(p).iter().map(|&q| (-1, e(var, k - 1, q))));
                lp.row(&format!("adj{l}_{k}_{p}"), &terms, Some(("<=", 0)));
            }
        }
    }

    lp.out.push_str("Binaries\n");
    let mut names = Vec::new();
    for k in 1..=k_max {
        for p in 1..=n {
            names.push(x(k, p));
            names.push(e("Es", k, p));
            names.push(e("Et", k, p));
        }
    }
    for chunk in names.chunks(10) {
        let _ = writeln!(lp.out, " {}", chunk.join(" "));
    }
    lp.out.push_str("End\n");
    lp.out
}

fn x(k: usize, p: usize) -> String {
    format!("x_{k}_{p}")
}

fn e(var: &str, k: usize, p: usize) -> String {
    format!("{var}_{k}_{p}")
}

#[derive(Default)]
struct Lp {
    out: String,
}

impl Lp {
    /// One labelled linear row, wrapped so no line gets too long.
    fn row(&mut self, name: &str, terms: &[(i64, String)], rhs: Option<(&str, i64)>) {
        let _ = write!(self.out, " {name}:");
        for (i, (coef, var)) in terms.iter().enumerate() {
            if i > 0 && i % 8 == 0 {
                self.out.push_str("\n   ");
            }
            let sign = if *coef < 0 { '-' } else { '+' };
            let mag = coef.abs();
            if i == 0 && *coef > 0 {
                self.out.push(' ');
            } else {
                let _ = write!(self.out, " {sign} ");
            }
            if mag != 1 {
                let _ = write!(self.out, "{mag} ");
            }
            self.out.push_str(var);
        }
        if let Some((sense, value)) = rhs {
            let _ = write!(self.out, " {sense} {value}");
        }
        self.out.push('\n');
    }
}
