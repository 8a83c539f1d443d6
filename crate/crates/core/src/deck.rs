//! Card decks: feasible settings, cumulative reveal sets, the availability
//! matrix and seeded instance generation.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::Graph;
use crate::nodeset::NodeSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DeckError {
    #[error("number of copies per node must be at least 1")]
    ZeroCopies,
    #[error("initial tuple must hold at least one card")]
    EmptyInitial,
    #[error("initial size {c} outside 1..={max}")]
    InitialSizeOutOfRange { c: usize, max: usize },
    #[error("card {v} is not a node of the graph (1..={n})")]
    UnknownNode { v: usize, n: usize },
    #[error("extension tuple has {got} cards, expected n*nd - c = {expected}")]
    WrongExtensionLength { expected: usize, got: usize },
    #[error("node {v} appears {count} times in the deck, expected {nd}")]
    WrongMultiplicity { v: usize, count: usize, nd: usize },
    #[error("bad setting record: {0}")]
    Parse(String),
}

/// One instance: `initial` is visible from the start, `extension` is revealed
/// one card at a time. Together they hold every node exactly `nd` times.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FeasibleSetting {
    n: usize,
    nd: usize,
    initial: Vec<usize>,
    extension: Vec<usize>,
    // revealed[t] = V_init ∪ {j_1..j_t}, t = 0..=d
    revealed: Vec<NodeSet>,
}

impl FeasibleSetting {
    /// Validates and builds a setting for `g`.
    pub fn new(
        g: &Graph,
        initial: Vec<usize>,
        extension: Vec<usize>,
        nd: usize,
    ) -> Result<FeasibleSetting, DeckError> {
        let n = g.node_count();
        if nd == 0 {
            return Err(DeckError::ZeroCopies);
        }
        if initial.is_empty() {
            return Err(DeckError::EmptyInitial);
        }
        let mut counts = vec![0usize; n + 1];
        for &v in initial.iter().chain(&extension) {
            if v == 0 || v > n {
                return Err(DeckError::UnknownNode { v, n });
            }
            counts[v] += 1;
        }
        let total = n * nd;
        if initial.len() > total {
            return Err(DeckError::InitialSizeOutOfRange {
                c: initial.len(),
                max: total,
            });
        }
        let expected = total - initial.len();
        if extension.len() != expected {
            return Err(DeckError::WrongExtensionLength {
                expected,
                got: extension.len(),
            });
        }
        if let Some(v) = (1..=n).find(|&v| counts[v] != nd) {
            return Err(DeckError::WrongMultiplicity {
                v,
                count: counts[v],
                nd,
            });
        }
        Ok(Self::assemble(n, nd, initial, extension))
    }

    fn assemble(n: usize, nd: usize, initial: Vec<usize>, extension: Vec<usize>) -> Self {
        let mut revealed = Vec::with_capacity(extension.len() + 1);
        let mut acc: NodeSet = initial.iter().collect();
        revealed.push(acc);
        for &j in &extension {
            acc.insert(j);
            revealed.push(acc);
        }
        FeasibleSetting {
            n,
            nd,
            initial,
            extension,
            revealed,
        }
    }

    /// Uniformly shuffled deck of `n * nd` cards split after `c` cards.
    pub fn random<R: Rng + ?Sized>(
        g: &Graph,
        c: usize,
        nd: usize,
        rng: &mut R,
    ) -> Result<FeasibleSetting, DeckError> {
        let n = g.node_count();
        if nd == 0 {
            return Err(DeckError::ZeroCopies);
        }
        if c == 0 || c > n * nd {
            return Err(DeckError::InitialSizeOutOfRange { c, max: n * nd });
        }
        let mut deck: Vec<usize> = (1..=n).flat_map(|v| std::iter::repeat_n(v, nd)).collect();
        deck.shuffle(rng);
        let extension = deck.split_off(c);
        Ok(Self::assemble(n, nd, deck, extension))
    }

    /// Parses `nd=<v>; initial=<csv>; extension=<csv>` and validates it
    /// against `g`.
    pub fn parse_record(line: &str, g: &Graph) -> Result<FeasibleSetting, DeckError> {
        let mut nd = None;
        let mut initial = None;
        let mut extension = None;
        for field in line.trim().split(';') {
            let field = field.trim();
            if field.is_empty() {
                continue;
            }
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| DeckError::Parse(format!("expected key=value, got {field:?}")))?;
            let value = value.trim();
            match key.trim() {
                "nd" => {
                    nd = Some(
                        value
                            .parse::<usize>()
                            .map_err(|_| DeckError::Parse(format!("bad nd value {value:?}")))?,
                    )
                }
                "initial" => initial = Some(parse_csv(value)?),
                "extension" => extension = Some(parse_csv(value)?),
                other => return Err(DeckError::Parse(format!("unknown key {other:?}"))),
            }
        }
        let nd = nd.ok_or_else(|| DeckError::Parse("missing nd".into()))?;
        let initial = initial.ok_or_else(|| DeckError::Parse("missing initial".into()))?;
        let extension = extension.ok_or_else(|| DeckError::Parse("missing extension".into()))?;
        FeasibleSetting::new(g, initial, extension, nd)
    }

    /// Serializes as a one-line record (inverse of [`Self::parse_record`]).
    pub fn to_record(&self) -> String {
        self.to_string()
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Copies of each node in the deck.
    pub fn nd(&self) -> usize {
        self.nd
    }

    pub fn c(&self) -> usize {
        self.initial.len()
    }

    pub fn d(&self) -> usize {
        self.extension.len()
    }

    pub fn initial(&self) -> &[usize] {
        &self.initial
    }

    pub fn extension(&self) -> &[usize] {
        &self.extension
    }

    /// Deduplicated initial tuple.
    pub fn initial_set(&self) -> NodeSet {
        self.revealed[0]
    }

    /// Nodes legal for the `k`-th selection (k = 1 is the start):
    /// the initial set plus the first `k - 1` extension cards.
    pub fn revealed_set(&self, k: usize) -> NodeSet {
        self.revealed_after(k.saturating_sub(1))
    }

    /// Initial set plus the first `t` extension cards (saturating at `d`).
    #[inline]
    pub fn revealed_after(&self, t: usize) -> NodeSet {
        self.revealed[t.min(self.extension.len())]
    }

    /// Selection horizon `K = max(d + 1, n)` shared by the exact solver and
    /// the LP export.
    pub fn horizon(&self) -> usize {
        (self.d() + 1).max(self.n)
    }

    /// The same deck with `j_1` moved into the initial tuple.
    pub fn promote_first_extension(&self) -> Option<FeasibleSetting> {
        let (&first, rest) = self.extension.split_first()?;
        let mut initial = self.initial.clone();
        initial.push(first);
        Some(Self::assemble(self.n, self.nd, initial, rest.to_vec()))
    }

    pub fn availability_matrix(&self) -> AvailabilityMatrix {
        AvailabilityMatrix::new(self)
    }
}

fn parse_csv(value: &str) -> Result<Vec<usize>, DeckError> {
    if value.is_empty() {
        return Ok(Vec::new());
    }
    value
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| DeckError::Parse(format!("bad node id {t:?}")))
        })
        .collect()
}

fn join(v: &[usize]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for FeasibleSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "nd={}; initial={}; extension={}",
            self.nd,
            join(&self.initial),
            join(&self.extension)
        )
    }
}

impl fmt::Debug for FeasibleSetting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FeasibleSetting({self})")
    }
}

/// Binary `K x n` matrix: row 1 flags the initial set, row `k` (2..=d+1)
/// flags `j_{k-1}`, and any remaining rows are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvailabilityMatrix {
    n: usize,
    rows: Vec<NodeSet>,
}

impl AvailabilityMatrix {
    pub fn new(s: &FeasibleSetting) -> Self {
        let k = s.horizon();
        let mut rows = vec![NodeSet::EMPTY; k];
        rows[0] = s.initial_set();
        for (i, &j) in s.extension().iter().enumerate() {
            rows[i + 1] = NodeSet::singleton(j);
        }
        AvailabilityMatrix {
            n: s.node_count(),
            rows,
        }
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Entry `D[k][p]` with 1-based `k` and `p`.
    pub fn get(&self, k: usize, p: usize) -> u8 {
        self.rows[k - 1].contains(p) as u8
    }

    /// Nonzero columns of row `k` (1-based).
    pub fn row(&self, k: usize) -> NodeSet {
        self.rows[k - 1]
    }

    pub fn row_sum(&self, k: usize) -> usize {
        self.rows[k - 1].len()
    }

    pub fn column_sum(&self, p: usize) -> usize {
        self.rows.iter().filter(|r| r.contains(p)).count()
    }

    /// `sum_{kappa <= k} D[kappa][p]`.
    pub fn cumulative(&self, k: usize, p: usize) -> usize {
        self.rows[..k].iter().filter(|r| r.contains(p)).count()
    }
}
