//! Start and extension rules, and the combined heuristic that pairs them.
//!
//! Every rule sees only a [`Position`]: the graph, the current path and the
//! set of nodes it may pick from right now. Randomized tie-breaks draw from
//! the caller's generator; deterministic scans run in ascending node id,
//! front before back.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::deck::FeasibleSetting;
use crate::graph::{Graph, Path, Side};
use crate::nodeset::NodeSet;
use crate::opep::{Extension, Mode, OpepState, Position};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StartRule {
    Random,
    Degree,
    Connected,
    LongestPath,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtRule {
    Random,
    Degree,
    Tentacles,
    Connected,
    LongestPath,
}

impl StartRule {
    pub const ALL: [StartRule; 4] = [
        StartRule::Random,
        StartRule::Degree,
        StartRule::Connected,
        StartRule::LongestPath,
    ];

    pub fn name(self) -> &'static str {
        match self {
            StartRule::Random => "random",
            StartRule::Degree => "degree",
            StartRule::Connected => "connected",
            StartRule::LongestPath => "longest_path",
        }
    }
}

impl ExtRule {
    pub const ALL: [ExtRule; 5] = [
        ExtRule::Random,
        ExtRule::Degree,
        ExtRule::Tentacles,
        ExtRule::Connected,
        ExtRule::LongestPath,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExtRule::Random => "random",
            ExtRule::Degree => "degree",
            ExtRule::Tentacles => "tentacles",
            ExtRule::Connected => "connected",
            ExtRule::LongestPath => "longest_path",
        }
    }
}

impl FromStr for StartRule {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        StartRule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown start rule {s:?}"))
    }
}

impl FromStr for ExtRule {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = if s == "tentacle" { "tentacles" } else { s };
        ExtRule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| format!("unknown extension rule {s:?}"))
    }
}

/// A start rule paired with an extension rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HeuristicId {
    pub start: StartRule,
    pub ext: ExtRule,
}

impl HeuristicId {
    /// Random search.
    pub const RS: HeuristicId = HeuristicId::new(StartRule::Random, ExtRule::Random);
    /// Max degree.
    pub const MD: HeuristicId = HeuristicId::new(StartRule::Degree, ExtRule::Degree);
    /// Max tentacles.
    pub const MT: HeuristicId = HeuristicId::new(StartRule::Degree, ExtRule::Tentacles);
    /// Largest connected component.
    pub const LCC: HeuristicId = HeuristicId::new(StartRule::Connected, ExtRule::Connected);
    /// Potential path.
    pub const PP: HeuristicId = HeuristicId::new(StartRule::LongestPath, ExtRule::LongestPath);

    pub const NAMED: [HeuristicId; 5] = [
        HeuristicId::RS,
        HeuristicId::MD,
        HeuristicId::MT,
        HeuristicId::LCC,
        HeuristicId::PP,
    ];

    pub const fn new(start: StartRule, ext: ExtRule) -> Self {
        HeuristicId { start, ext }
    }

    /// All 20 start x extension combinations, start-major.
    pub fn all_pairs() -> Vec<HeuristicId> {
        StartRule::ALL
            .into_iter()
            .flat_map(|s| {
                ExtRule::ALL
                    .into_iter()
                    .map(move |e| HeuristicId::new(s, e))
            })
            .collect()
    }

    pub fn acronym(self) -> Option<&'static str> {
        match self {
            HeuristicId::RS => Some("rs"),
            HeuristicId::MD => Some("md"),
            HeuristicId::MT => Some("mt"),
            HeuristicId::LCC => Some("lcc"),
            HeuristicId::PP => Some("pp"),
            _ => None,
        }
    }

    pub fn choose_start<R: Rng + ?Sized>(self, pos: &Position<'_>, rng: &mut R) -> usize {
        match self.start {
            StartRule::Random => start_random(pos, rng),
            StartRule::Degree => start_degree(pos, rng),
            StartRule::Connected => start_connected(pos, rng),
            StartRule::LongestPath => start_longest_path(pos, rng),
        }
    }

    /// `None` means STOP: no available tentacle.
    pub fn choose_extension<R: Rng + ?Sized>(
        self,
        pos: &Position<'_>,
        rng: &mut R,
    ) -> Option<Extension> {
        match self.ext {
            ExtRule::Random => ext_random(pos, rng),
            ExtRule::Degree => ext_degree(pos, rng),
            ExtRule::Tentacles => ext_tentacles(pos),
            ExtRule::Connected => ext_connected(pos, rng),
            ExtRule::LongestPath => ext_longest_path(pos, rng),
        }
    }

    /// Next move for `pos`: a start on an empty path, otherwise an
    /// extension or [`Choice::Stop`].
    pub fn choose<R: Rng + ?Sized>(self, pos: &Position<'_>, rng: &mut R) -> Choice {
        if pos.path.is_empty() {
            Choice::Start(self.choose_start(pos, rng))
        } else {
            match self.choose_extension(pos, rng) {
                Some(e) => Choice::Extend(e),
                None => Choice::Stop,
            }
        }
    }
}

impl fmt::Display for HeuristicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.acronym() {
            Some(a) => f.write_str(a),
            None => write!(f, "{}/{}", self.start.name(), self.ext.name()),
        }
    }
}

impl FromStr for HeuristicId {
    type Err = String;

    /// Accepts `rs|md|mt|lcc|pp` or `<start>/<ext>`.
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        if let Some(id) = HeuristicId::NAMED
            .into_iter()
            .find(|id| id.acronym() == Some(s))
        {
            return Ok(id);
        }
        let (start, ext) = s
            .split_once('/')
            .ok_or_else(|| format!("unknown heuristic {s:?} (rs|md|mt|lcc|pp or start/ext)"))?;
        Ok(HeuristicId::new(start.parse()?, ext.parse()?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Choice {
    Start(usize),
    Extend(Extension),
    Stop,
}

fn pick<R: Rng + ?Sized>(set: NodeSet, rng: &mut R) -> usize {
    debug_assert!(!set.is_empty());
    match set.len() {
        1 => set.first().unwrap(),
        n => set.nth(rng.random_range(0..n)).unwrap(),
    }
}

fn argmax_degree(g: &Graph, set: NodeSet) -> NodeSet {
    let best = set.iter().map(|v| g.deg(v)).max().unwrap_or(0);
    set.iter().filter(|&v| g.deg(v) == best).collect()
}

fn argmin_degree(g: &Graph, set: NodeSet) -> NodeSet {
    let best = set.iter().map(|v| g.deg(v)).min().unwrap_or(0);
    set.iter().filter(|&v| g.deg(v) == best).collect()
}

/// Side for attaching `v`: random when both ends are adjacent, otherwise the
/// adjacent end. Single-node paths always use the back.
fn choose_side<R: Rng + ?Sized>(pos: &Position<'_>, v: usize, rng: &mut R) -> Side {
    let (a, b) = pos.path.ends().expect("path is non-empty");
    if a == b {
        return Side::Back;
    }
    match (pos.graph.adjacent(a, v), pos.graph.adjacent(b, v)) {
        (true, true) => {
            if rng.random_bool(0.5) {
                Side::Front
            } else {
                Side::Back
            }
        }
        (true, false) => Side::Front,
        _ => Side::Back,
    }
}

/// Tentacle count of `path` with `v` attached at `side`.
fn extended_tentacles(g: &Graph, path: &Path, v: usize, side: Side) -> usize {
    let (a, b) = path.ends().expect("path is non-empty");
    let mut members = path.members();
    members.insert(v);
    match side {
        Side::Front => g.tentacle_count_of(v, b, members),
        Side::Back => g.tentacle_count_of(a, v, members),
    }
}

/// A uniformly random visible card (duplicates weigh by multiplicity).
pub fn start_random<R: Rng + ?Sized>(pos: &Position<'_>, rng: &mut R) -> usize {
    let cards = pos.cards;
    assert!(!cards.is_empty(), "no cards to start from");
    cards[rng.random_range(0..cards.len())]
}

/// A uniformly random visible node of maximum degree.
pub fn start_degree<R: Rng + ?Sized>(pos: &Position<'_>, rng: &mut R) -> usize {
    pick(argmax_degree(pos.graph, pos.candidates()), rng)
}

/// Minimum-degree node of a largest visible component; falls back to
/// [`start_degree`] when all visible nodes are isolated from each other.
pub fn start_connected<R: Rng + ?Sized>(pos: &Position<'_>, rng: &mut R) -> usize {
    let comps = pos.graph.connected_components(pos.candidates());
    let z = comps.iter().map(|c| c.len()).max().unwrap_or(0);
    if z <= 1 {
        return start_degree(pos, rng);
    }
    let z_max = comps
        .iter()
        .filter(|c| c.len() == z)
        .fold(NodeSet::EMPTY, |acc, c| acc.union(*c));
    pick(argmin_degree(pos.graph, z_max), rng)
}

/// Best planned path among the candidates: longest, then most tentacles.
/// Each candidate set contributes one uniformly drawn member of its
/// most-tentacled longest paths.
fn best_plan<R, I>(g: &Graph, groups: I, rng: &mut R) -> Option<Path>
where
    R: Rng + ?Sized,
    I: IntoIterator<Item = Vec<Path>>,
{
    let mut best: Option<(Path, usize, usize)> = None;
    for paths in groups {
        if paths.is_empty() {
            continue;
        }
        let tentacles: Vec<usize> = paths
            .iter()
            .map(|p| g.tentacles_unchecked(p).len())
            .collect();
        let top = *tentacles.iter().max().unwrap();
        let tied: Vec<usize> = (0..paths.len()).filter(|&i| tentacles[i] == top).collect();
        let i = if tied.len() == 1 {
            tied[0]
        } else {
            tied[rng.random_range(0..tied.len())]
        };
        let len = paths[i].len();
        let better = match &best {
            None => true,
            Some((_, bl, bd)) => len > *bl || (len == *bl && top > *bd),
        };
        if better {
            best = Some((paths[i].clone(), len, top));
        }
    }
    best.map(|(p, _, _)| p)
}

/// Plans the longest path inside the largest visible components and starts
/// at its lower-degree end node.
pub fn start_longest_path<R: Rng + ?Sized>(pos: &Position<'_>, rng: &mut R) -> usize {
    let g = pos.graph;
    let comps = g.connected_components(pos.candidates());
    let z = comps.iter().map(|c| c.len()).max().unwrap_or(0);
    if z <= 1 {
        return start_degree(pos, rng);
    }
    let kappa = z.min(3);
    let groups = comps
        .iter()
        .filter(|c| c.len() >= kappa)
        .map(|&c| g.longest_paths_in(c).expect("components are connected"));
    let plan = best_plan(g, groups, rng).expect("some component has size >= kappa");
    let (a, b) = plan.ends().unwrap();
    match g.deg(a).cmp(&g.deg(b)) {
        std::cmp::Ordering::Less => a,
        std::cmp::Ordering::Greater => b,
        std::cmp::Ordering::Equal => {
            if rng.random_bool(0.5) {
                a
            } else {
                b
            }
        }
    }
}

/// A uniformly random available tentacle.
pub fn ext_random<R: Rng + ?Sized>(pos: &Position<'_>, rng: &mut R) -> Option<Extension> {
    let t = pos.available_tentacles();
    if t.is_empty() {
        return None;
    }
    let v = pick(t, rng);
    Some(Extension::new(v, choose_side(pos, v, rng)))
}

/// A uniformly random available tentacle of maximum degree.
pub fn ext_degree<R: Rng + ?Sized>(pos: &Position<'_>, rng: &mut R) -> Option<Extension> {
    let t = pos.available_tentacles();
    if t.is_empty() {
        return None;
    }
    let v = pick(argmax_degree(pos.graph, t), rng);
    Some(Extension::new(v, choose_side(pos, v, rng)))
}

/// The extension whose resulting path has the most tentacles. Ties go to
/// the smallest node id, and to the front before the back.
pub fn ext_tentacles(pos: &Position<'_>) -> Option<Extension> {
    let g = pos.graph;
    let (a, b) = pos.path.ends()?;
    let mut best: Option<(Extension, usize)> = None;
    let mut consider = |e: Extension| {
        let d = extended_tentacles(g, pos.path, e.node, e.side);
        if best.is_none_or(|(_, bd)| d > bd) {
            best = Some((e, d));
        }
    };
    for v in pos.available_tentacles() {
        if a == b {
            consider(Extension::back(v));
            continue;
        }
        if g.adjacent(a, v) {
            consider(Extension::front(v));
        }
        if g.adjacent(b, v) {
            consider(Extension::back(v));
        }
    }
    best.map(|(e, _)| e)
}

/// Adjacent components of the available nodes, and their largest size.
fn adjacent_components(pos: &Position<'_>) -> (Vec<NodeSet>, usize) {
    let comps = pos.graph.adjacent_components(pos.available, pos.path);
    let z = comps.iter().map(|c| c.len()).max().unwrap_or(0);
    (comps, z)
}

/// Minimum-degree available tentacle inside a largest adjacent component;
/// falls back to [`ext_tentacles`] when those components are singletons.
pub fn ext_connected<R: Rng + ?Sized>(pos: &Position<'_>, rng: &mut R) -> Option<Extension> {
    let t = pos.available_tentacles();
    if t.is_empty() {
        return None;
    }
    let (comps, z) = adjacent_components(pos);
    if z <= 1 {
        return ext_tentacles(pos);
    }
    let z_max = comps
        .iter()
        .filter(|c| c.len() == z)
        .fold(NodeSet::EMPTY, |acc, c| acc.union(*c));
    let v = pick(argmin_degree(pos.graph, z_max.intersection(t)), rng);
    Some(Extension::new(v, choose_side(pos, v, rng)))
}

/// Plans the longest (two-sided) extension of the current path through an
/// adjacent component and returns its first step. When the plan grows on
/// both ends, the step whose one-node extension has more tentacles is taken.
pub fn ext_longest_path<R: Rng + ?Sized>(pos: &Position<'_>, rng: &mut R) -> Option<Extension> {
    let t = pos.available_tentacles();
    if t.is_empty() {
        return None;
    }
    let (comps, z) = adjacent_components(pos);
    if z <= 1 {
        return ext_tentacles(pos);
    }
    let g = pos.graph;
    let plan = longest_extension_plan(pos, &comps, z, rng)?;
    let offset = plan
        .find_subpath(pos.path)
        .expect("plan contains the current path");
    let nodes = plan.nodes();
    let front = (offset > 0).then(|| nodes[offset - 1]);
    let back = nodes.get(offset + pos.path.len()).copied();
    let single = pos.path.len() == 1;
    let step = match (front, back) {
        (Some(f), Some(b)) => {
            let (fs, bs) = if single {
                (Side::Back, Side::Back)
            } else {
                (Side::Front, Side::Back)
            };
            let df = extended_tentacles(g, pos.path, f, fs);
            let db = extended_tentacles(g, pos.path, b, bs);
            if df > db || (df == db && rng.random_bool(0.5)) {
                Extension::new(f, fs)
            } else {
                Extension::new(b, bs)
            }
        }
        (Some(f), None) => Extension::front(f),
        (None, Some(b)) => Extension::back(b),
        (None, None) => unreachable!("adjacent component admits an extension"),
    };
    Some(step.canonical(pos.path.len()))
}

/// The planned path used by [`ext_longest_path`], exposed for inspection.
pub fn longest_extension_plan<R: Rng + ?Sized>(
    pos: &Position<'_>,
    comps: &[NodeSet],
    z: usize,
    rng: &mut R,
) -> Option<Path> {
    let g = pos.graph;
    let kappa = z.min(3);
    let groups = comps.iter().filter(|c| c.len() >= kappa).map(|&c| {
        g.longest_extensions_containing(c, pos.path)
            .expect("component is disjoint from the path")
    });
    best_plan(g, groups, rng)
}

/// Runs one full single-player procedure (cumulative availability) with the
/// given combined heuristic and returns the final path.
pub fn run_combined<R: Rng + ?Sized>(
    g: &Graph,
    s: &FeasibleSetting,
    id: HeuristicId,
    rng: &mut R,
) -> Path {
    run_combined_state(g, s, id, rng).into_path()
}

/// Like [`run_combined`] but returns the finished state with its move log.
pub fn run_combined_state<'a, R: Rng + ?Sized>(
    g: &'a Graph,
    s: &'a FeasibleSetting,
    id: HeuristicId,
    rng: &mut R,
) -> OpepState<'a> {
    let mut st = OpepState::new(g, s, Mode::Cumulative);
    let v = id.choose_start(&st.position(), rng);
    st.apply_start(v)
        .expect("start rule returns a visible node");
    while let Some(e) = id.choose_extension(&st.position(), rng) {
        st.apply_extension(e)
            .expect("extension rule returns a feasible extension");
    }
    st
}
