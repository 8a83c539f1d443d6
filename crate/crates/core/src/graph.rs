//! Undirected simple graphs, simple paths and their tentacles.
//!
//! Node ids are 1-indexed. Adjacency is kept twice: as sorted neighbor lists
//! and as one [`NodeSet`] per node, so tentacle and component queries reduce
//! to a handful of word operations.

use std::fmt;
use std::str::FromStr;

use crate::nodeset::{NodeSet, MAX_NODES};

const BOARD_EDGES: &str = include_str!("../data/board.edges");
const EXTENDED_EDGES: &str = include_str!("../data/extended.edges");

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("graph must have at least one node")]
    NoNodes,
    #[error("graph has {0} nodes, at most {MAX_NODES} are supported")]
    TooManyNodes(usize),
    #[error("self-loop ({0}, {0})")]
    SelfLoop(usize),
    #[error("edge ({u}, {v}) references a node outside 1..={n}")]
    OutOfRange { u: usize, v: usize, n: usize },
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("node {v} outside 1..={n}")]
    NodeOutOfRange { v: usize, n: usize },
    #[error("invalid path: {0}")]
    InvalidPath(String),
    #[error("unknown builtin graph {0:?} (expected \"board\" or \"extended\")")]
    UnknownGraph(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("node set is empty")]
    EmptyComponent,
    #[error("node set is not connected")]
    Disconnected,
}

/// An undirected simple graph on nodes `1..=n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    nbr: Vec<NodeSet>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting self-loops, out-of-range
    /// ids and repeated edges (in either orientation).
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        if n == 0 {
            return Err(GraphError::NoNodes);
        }
        if n > MAX_NODES {
            return Err(GraphError::TooManyNodes(n));
        }
        let mut nbr = vec![NodeSet::EMPTY; n + 1];
        let mut normalized = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == 0 || v == 0 || u > n || v > n {
                return Err(GraphError::OutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if nbr[u].contains(v) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            nbr[u].insert(v);
            nbr[v].insert(u);
            normalized.push((u.min(v), u.max(v)));
        }
        normalized.sort_unstable();
        let adj = nbr.iter().map(|s| s.to_vec()).collect();
        Ok(Graph {
            n,
            edges: normalized,
            adj,
            nbr,
        })
    }

    /// Parses the edge-list text format: one `u v` pair per line, `#` starts
    /// a comment, blank lines are ignored. Without an explicit node count the
    /// largest id seen is used.
    pub fn parse_edge_list(text: &str, n: Option<usize>) -> Result<Graph, GraphError> {
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut fields = line.split_whitespace();
            let mut next_id = || -> Result<usize, GraphError> {
                let tok = fields.next().ok_or_else(|| GraphError::Parse {
                    line: i + 1,
                    msg: "expected two node ids".into(),
                })?;
                tok.parse().map_err(|_| GraphError::Parse {
                    line: i + 1,
                    msg: format!("bad node id {tok:?}"),
                })
            };
            let u = next_id()?;
            let v = next_id()?;
            if fields.next().is_some() {
                return Err(GraphError::Parse {
                    line: i + 1,
                    msg: "trailing tokens after edge".into(),
                });
            }
            edges.push((u, v));
        }
        let n = n.unwrap_or_else(|| edges.iter().map(|&(u, v)| u.max(v)).max().unwrap_or(0));
        Graph::from_edges(n, &edges)
    }

    /// One of the bundled graphs: `"board"` (22 nodes, 45 edges) or
    /// `"extended"` (32 nodes, 66 edges).
    pub fn builtin(name: &str) -> Result<Graph, GraphError> {
        match name {
            "board" => Graph::parse_edge_list(BOARD_EDGES, Some(22)),
            "extended" => Graph::parse_edge_list(EXTENDED_EDGES, Some(32)),
            other => Err(GraphError::UnknownGraph(other.to_string())),
        }
    }

    /// Edgeless graph on `n` nodes.
    pub fn empty(n: usize) -> Result<Graph, GraphError> {
        Graph::from_edges(n, &[])
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn nodes(&self) -> NodeSet {
        NodeSet::full(self.n)
    }

    pub fn check_node(&self, v: usize) -> Result<(), GraphError> {
        if v == 0 || v > self.n {
            Err(GraphError::NodeOutOfRange { v, n: self.n })
        } else {
            Ok(())
        }
    }

    pub fn degree(&self, v: usize) -> Result<usize, GraphError> {
        self.check_node(v)?;
        Ok(self.adj[v].len())
    }

    /// Degree without range checking; panics on an invalid id.
    #[inline]
    pub fn deg(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Sorted neighbor list of `v`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn neighbor_set(&self, v: usize) -> NodeSet {
        self.nbr[v]
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.nbr[u].contains(v)
    }

    /// Tentacles of `path`: nodes off the path adjacent to either end.
    pub fn tentacles(&self, path: &Path) -> Result<NodeSet, GraphError> {
        path.validate(self)?;
        Ok(self.tentacles_unchecked(path))
    }

    /// [`Graph::tentacles`] for a path already known to be valid.
    #[inline]
    pub fn tentacles_unchecked(&self, path: &Path) -> NodeSet {
        match path.ends() {
            Some((a, b)) => self.nbr[a].union(self.nbr[b]).difference(path.members()),
            None => NodeSet::EMPTY,
        }
    }

    /// Tentacle count of a path described only by its end nodes and members.
    #[inline]
    pub fn tentacle_count_of(&self, first: usize, last: usize, members: NodeSet) -> usize {
        self.nbr[first]
            .union(self.nbr[last])
            .difference(members)
            .len()
    }

    /// Lower and upper bounds on the tentacle count implied by the end-node
    /// degrees and the path length.
    pub fn tentacle_bounds(&self, path: &Path) -> Result<(usize, usize), GraphError> {
        path.validate(self)?;
        let (a, b) = path
            .ends()
            .ok_or_else(|| GraphError::InvalidPath("path is empty".into()))?;
        let len = path.len();
        if len == 1 {
            let d = self.deg(a);
            return Ok((d, d));
        }
        let (da, db) = (self.deg(a), self.deg(b));
        let lower = da.max(db).saturating_sub(len);
        let upper = (self.n - len).min(da + db - 2);
        Ok((lower, upper))
    }

    /// Maximal connected components of the subgraph induced by `s`, each
    /// listed once, ordered by smallest member.
    pub fn connected_components(&self, s: NodeSet) -> Vec<NodeSet> {
        let mut rest = s;
        let mut out = Vec::new();
        while let Some(seed) = rest.first() {
            let comp = self.reach_within(NodeSet::singleton(seed), rest);
            rest = rest.difference(comp);
            out.push(comp);
        }
        out
    }

    /// Components of `s \ path` containing at least one node adjacent to an
    /// end of `path`.
    pub fn adjacent_components(&self, s: NodeSet, path: &Path) -> Vec<NodeSet> {
        let Some((a, b)) = path.ends() else {
            return Vec::new();
        };
        let touch = self.nbr[a].union(self.nbr[b]);
        self.connected_components(s.difference(path.members()))
            .into_iter()
            .filter(|z| z.intersects(touch))
            .collect()
    }

    /// All nodes of `within` reachable from `from` using only nodes of
    /// `within` (the seeds themselves are included when inside `within`).
    #[inline]
    pub fn reach_within(&self, from: NodeSet, within: NodeSet) -> NodeSet {
        let mut seen = from.intersection(within);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = NodeSet::EMPTY;
            for v in frontier {
                next = next.union(self.nbr[v]);
            }
            frontier = next.intersection(within).difference(seen);
            seen = seen.union(frontier);
        }
        seen
    }

    pub fn is_connected_set(&self, s: NodeSet) -> bool {
        match s.first() {
            None => true,
            Some(v) => self.reach_within(NodeSet::singleton(v), s) == s,
        }
    }

    /// All node-longest simple paths inside the connected set `z`.
    ///
    /// Each path is reported in one orientation only: the one whose node
    /// sequence is lexicographically smaller than its reverse.
    pub fn longest_paths_in(&self, z: NodeSet) -> Result<Vec<Path>, GraphError> {
        if z.is_empty() {
            return Err(GraphError::EmptyComponent);
        }
        if !z.is_subset(self.nodes()) {
            return Err(GraphError::InvalidPath("node set outside the graph".into()));
        }
        if !self.is_connected_set(z) {
            return Err(GraphError::Disconnected);
        }
        let mut best = Vec::new();
        let mut best_len = 0;
        let mut stack = Vec::with_capacity(z.len());
        for start in z {
            stack.push(start);
            self.collect_longest(
                &mut stack,
                NodeSet::singleton(start),
                z,
                &mut best,
                &mut best_len,
            );
            stack.pop();
        }
        let mut out: Vec<Path> = best
            .into_iter()
            .filter(|nodes: &Vec<usize>| nodes.len() == 1 || nodes[0] < nodes[nodes.len() - 1])
            .map(Path::new_unchecked)
            .collect();
        out.sort_by(|a, b| a.nodes().cmp(b.nodes()));
        Ok(out)
    }

    fn collect_longest(
        &self,
        stack: &mut Vec<usize>,
        used: NodeSet,
        z: NodeSet,
        best: &mut Vec<Vec<usize>>,
        best_len: &mut usize,
    ) {
        let tail = *stack.last().unwrap();
        let next = self.nbr[tail].intersection(z).difference(used);
        if next.is_empty() {
            if stack.len() > *best_len {
                *best_len = stack.len();
                best.clear();
            }
            if stack.len() == *best_len {
                best.push(stack.clone());
            }
            return;
        }
        for v in next {
            stack.push(v);
            let mut u = used;
            u.insert(v);
            self.collect_longest(stack, u, z, best, best_len);
            stack.pop();
        }
    }

    /// All node-longest simple paths inside `path ∪ z` that contain `path`
    /// as a contiguous, in-order subpath. Extensions may grow on both ends.
    ///
    /// If no node of `z` can be attached, the result is `[path]`. For a
    /// single-node `path` only one orientation of each result is kept.
    pub fn longest_extensions_containing(
        &self,
        z: NodeSet,
        path: &Path,
    ) -> Result<Vec<Path>, GraphError> {
        path.validate(self)?;
        let (a, b) = path
            .ends()
            .ok_or_else(|| GraphError::InvalidPath("path is empty".into()))?;
        if z.intersects(path.members()) {
            return Err(GraphError::InvalidPath(
                "extension set overlaps the path".into(),
            ));
        }
        if !z.is_subset(self.nodes()) {
            return Err(GraphError::InvalidPath("node set outside the graph".into()));
        }

        let mut fronts = Vec::new();
        let mut stack = Vec::new();
        self.all_arms(a, z, NodeSet::EMPTY, &mut stack, &mut fronts);

        let mut best_len = 0;
        let mut best: Vec<Vec<usize>> = Vec::new();
        let mut backs = Vec::new();
        for front in &fronts {
            let used: NodeSet = front.iter().collect();
            backs.clear();
            self.all_arms(
                b,
                z.difference(used),
                NodeSet::EMPTY,
                &mut stack,
                &mut backs,
            );
            let max_back = backs.iter().map(Vec::len).max().unwrap_or(0);
            let len = front.len() + path.len() + max_back;
            if len < best_len {
                continue;
            }
            if len > best_len {
                best_len = len;
                best.clear();
            }
            for back in backs.iter().filter(|bk| bk.len() == max_back) {
                let mut nodes = Vec::with_capacity(len);
                nodes.extend(front.iter().rev());
                nodes.extend_from_slice(path.nodes());
                nodes.extend_from_slice(back);
                best.push(nodes);
            }
        }

        if path.len() == 1 {
            for nodes in best.iter_mut() {
                let rev: Vec<usize> = nodes.iter().rev().copied().collect();
                if rev < *nodes {
                    *nodes = rev;
                }
            }
            best.sort();
            best.dedup();
        }
        Ok(best.into_iter().map(Path::new_unchecked).collect())
    }

    /// Every simple walk-out ("arm") leaving `anchor` through nodes of `z`,
    /// including the empty arm. Arms are listed as node sequences starting
    /// next to `anchor`.
    fn all_arms(
        &self,
        anchor: usize,
        z: NodeSet,
        used: NodeSet,
        stack: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        out.push(stack.clone());
        let tail = stack.last().copied().unwrap_or(anchor);
        for v in self.nbr[tail].intersection(z).difference(used) {
            stack.push(v);
            let mut u = used;
            u.insert(v);
            self.all_arms(anchor, z, u, stack, out);
            stack.pop();
        }
    }

    /// Writes the graph in edge-list format.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("# {} nodes, {} edges\n", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("m", &self.edges.len())
            .finish()
    }
}

/// Which end of a path a node is attached to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Front,
    Back,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Front => "front",
            Side::Back => "back",
        })
    }
}

impl FromStr for Side {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "front" => Ok(Side::Front),
            "back" => Ok(Side::Back),
            _ => Err(format!("expected front|back, got {s:?}")),
        }
    }
}

/// An ordered sequence of distinct nodes. The node length is the number of
/// nodes, not edges.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Path {
    nodes: Vec<usize>,
    members: NodeSet,
}

impl Path {
    /// Builds a path without consulting a graph. Use [`Path::validate`] (or
    /// [`Path::checked`]) before trusting it.
    pub fn new_unchecked(nodes: Vec<usize>) -> Path {
        let members = nodes.iter().collect();
        Path { nodes, members }
    }

    pub fn checked(g: &Graph, nodes: Vec<usize>) -> Result<Path, GraphError> {
        for &v in &nodes {
            g.check_node(v)?;
        }
        let p = Path::new_unchecked(nodes);
        p.validate(g)?;
        Ok(p)
    }

    pub fn single(v: usize) -> Path {
        Path::new_unchecked(vec![v])
    }

    /// Checks that ids are in range, distinct, and consecutive nodes adjacent.
    pub fn validate(&self, g: &Graph) -> Result<(), GraphError> {
        for &v in &self.nodes {
            if v == 0 || v > g.node_count() {
                return Err(GraphError::InvalidPath(format!(
                    "node {v} outside 1..={}",
                    g.node_count()
                )));
            }
        }
        if self.members.len() != self.nodes.len() {
            return Err(GraphError::InvalidPath("node repeated".into()));
        }
        for w in self.nodes.windows(2) {
            if !g.adjacent(w[0], w[1]) {
                return Err(GraphError::InvalidPath(format!(
                    "{} and {} are not adjacent",
                    w[0], w[1]
                )));
            }
        }
        Ok(())
    }

    #[inline]
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    #[inline]
    pub fn members(&self) -> NodeSet {
        self.members
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.members.contains(v)
    }

    #[inline]
    pub fn first(&self) -> Option<usize> {
        self.nodes.first().copied()
    }

    #[inline]
    pub fn last(&self) -> Option<usize> {
        self.nodes.last().copied()
    }

    /// `(first, last)`; equal for a single-node path.
    #[inline]
    pub fn ends(&self) -> Option<(usize, usize)> {
        Some((self.first()?, self.last()?))
    }

    /// Appends `v` at `side` without adjacency checks.
    pub fn attach(&mut self, v: usize, side: Side) {
        match side {
            Side::Front => self.nodes.insert(0, v),
            Side::Back => self.nodes.push(v),
        }
        self.members.insert(v);
    }

    /// Copy of the path with `v` attached at `side`.
    pub fn extended(&self, v: usize, side: Side) -> Path {
        let mut p = self.clone();
        p.attach(v, side);
        p
    }

    pub fn reversed(&self) -> Path {
        let mut nodes = self.nodes.clone();
        nodes.reverse();
        Path {
            nodes,
            members: self.members,
        }
    }

    /// Position of `sub` as a contiguous, same-direction subsequence.
    pub fn find_subpath(&self, sub: &Path) -> Option<usize> {
        if sub.is_empty() || sub.len() > self.len() {
            return None;
        }
        self.nodes.windows(sub.len()).position(|w| w == sub.nodes())
    }

    pub fn into_nodes(self) -> Vec<usize> {
        self.nodes
    }
}

impl fmt::Debug for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Path{:?}", self.nodes)
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.nodes.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join("-"))
    }
}
