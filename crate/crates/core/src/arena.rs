//! Two combined heuristics racing on one shared, consuming card display.

use std::fmt;
use std::io;

use rand::Rng;
use rayon::prelude::*;

use crate::deck::FeasibleSetting;
use crate::graph::{Graph, Path};
use crate::heuristics::HeuristicId;
use crate::opep::{CardDisplay, Extension, OpepError, Position};
use crate::rng::{instance_rng, purpose};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    FirstWins,
    SecondWins,
    Tie,
}

impl Outcome {
    /// Longer path wins; equal lengths tie.
    pub fn from_lengths(len_first: usize, len_second: usize) -> Outcome {
        match len_first.cmp(&len_second) {
            std::cmp::Ordering::Greater => Outcome::FirstWins,
            std::cmp::Ordering::Less => Outcome::SecondWins,
            std::cmp::Ordering::Equal => Outcome::Tie,
        }
    }

    pub fn swapped(self) -> Outcome {
        match self {
            Outcome::FirstWins => Outcome::SecondWins,
            Outcome::SecondWins => Outcome::FirstWins,
            Outcome::Tie => Outcome::Tie,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::FirstWins => "first_wins",
            Outcome::SecondWins => "second_wins",
            Outcome::Tie => "tie",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameRecord {
    pub first: HeuristicId,
    pub second: HeuristicId,
    pub len_first: usize,
    pub len_second: usize,
    pub outcome: Outcome,
    /// Seed of the tie-break stream, when the game was played from one.
    pub seed: Option<u64>,
}

/// A game in progress. Seat 0 moves first.
#[derive(Debug, Clone)]
pub struct Match<'a> {
    graph: &'a Graph,
    setting: &'a FeasibleSetting,
    players: [HeuristicId; 2],
    paths: [Path; 2],
    display: CardDisplay,
    turn: usize,
    stalled: Option<usize>,
    finished: bool,
}

impl<'a> Match<'a> {
    pub fn new(
        graph: &'a Graph,
        setting: &'a FeasibleSetting,
        first: HeuristicId,
        second: HeuristicId,
    ) -> Self {
        Match {
            graph,
            setting,
            players: [first, second],
            paths: [Path::default(), Path::default()],
            display: CardDisplay::new(setting),
            turn: 0,
            stalled: None,
            finished: false,
        }
    }

    pub fn path(&self, seat: usize) -> &Path {
        &self.paths[seat]
    }

    pub fn display(&self) -> &CardDisplay {
        &self.display
    }

    /// Seat to move next.
    pub fn to_move(&self) -> usize {
        self.turn % 2
    }

    pub fn is_finished(&self) -> bool {
        self.finished
    }

    /// Extension cards not yet drawn onto the display.
    pub fn undrawn(&self) -> usize {
        self.setting.d() - self.display.drawn()
    }

    fn position(&self, seat: usize) -> Position<'_> {
        Position {
            graph: self.graph,
            path: &self.paths[seat],
            available: self.display.support(),
            cards: self.display.cards(),
        }
    }

    fn take(&mut self, v: usize) -> Result<(), OpepError> {
        self.display.take(v, self.setting)?;
        self.turn += 1;
        Ok(())
    }

    /// Starts a path for the seat to move at `v`.
    pub fn play_start(&mut self, v: usize) -> Result<(), OpepError> {
        let seat = self.to_move();
        if !self.paths[seat].is_empty() {
            return Err(OpepError::AlreadyStarted);
        }
        self.take(v)?;
        self.paths[seat] = Path::single(v);
        Ok(())
    }

    /// Extends the path of the seat to move.
    pub fn play_extension(&mut self, e: Extension) -> Result<(), OpepError> {
        let seat = self.to_move();
        self.position(seat).check_extension(e)?;
        self.take(e.node)?;
        self.paths[seat].attach(e.node, e.side);
        Ok(())
    }

    /// Plays one turn. Returns `false` once the game is over.
    ///
    /// When a player cannot extend, the opponent gets one more turn and the
    /// game ends after it.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> bool {
        if self.finished {
            return false;
        }
        let seat = self.to_move();
        let id = self.players[seat];
        if self.paths[seat].is_empty() {
            let v = id.choose_start(&self.position(seat), rng);
            self.play_start(v)
                .expect("start rule returns a displayed card");
        } else {
            match id.choose_extension(&self.position(seat), rng) {
                Some(e) => {
                    self.play_extension(e)
                        .expect("extension rule returns a feasible extension");
                }
                None => {
                    if self.stalled.is_some() {
                        self.finished = true;
                        return false;
                    }
                    self.stalled = Some(seat);
                    self.turn += 1;
                    return true;
                }
            }
        }
        if self.stalled.is_some() {
            self.finished = true;
        }
        !self.finished
    }

    pub fn outcome(&self) -> Outcome {
        Outcome::from_lengths(self.paths[0].len(), self.paths[1].len())
    }
}

/// Plays one full game.
pub fn play_match<R: Rng + ?Sized>(
    g: &Graph,
    s: &FeasibleSetting,
    first: HeuristicId,
    second: HeuristicId,
    rng: &mut R,
) -> GameRecord {
    let mut m = Match::new(g, s, first, second);
    while m.step(rng) {}
    GameRecord {
        first,
        second,
        len_first: m.paths[0].len(),
        len_second: m.paths[1].len(),
        outcome: m.outcome(),
        seed: None,
    }
}

/// [`play_match`] with tie-breaks drawn from a stream seeded by `seed`.
pub fn play_seeded(
    g: &Graph,
    s: &FeasibleSetting,
    first: HeuristicId,
    second: HeuristicId,
    seed: u64,
) -> GameRecord {
    let mut rng = instance_rng(seed, 0, purpose::PLAY);
    GameRecord {
        seed: Some(seed),
        ..play_match(g, s, first, second, &mut rng)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TournamentRow {
    pub first: HeuristicId,
    pub second: HeuristicId,
    pub first_wins: usize,
    pub second_wins: usize,
    pub ties: usize,
    pub games: usize,
}

impl TournamentRow {
    fn pct(&self, k: usize) -> f64 {
        if self.games == 0 {
            0.0
        } else {
            100.0 * k as f64 / self.games as f64
        }
    }

    pub fn first_pct(&self) -> f64 {
        self.pct(self.first_wins)
    }

    pub fn second_pct(&self) -> f64 {
        self.pct(self.second_wins)
    }

    pub fn tie_pct(&self) -> f64 {
        self.pct(self.ties)
    }
}

/// Plays every pairing on the same `num_settings` random settings. Setting
/// `i` and its tie-break stream depend only on `(master_seed, i)`, so the
/// result does not depend on the thread count.
pub fn tournament(
    g: &Graph,
    pairings: &[(HeuristicId, HeuristicId)],
    num_settings: usize,
    c: usize,
    nd: usize,
    master_seed: u64,
) -> Result<Vec<TournamentRow>, crate::deck::DeckError> {
    // validate once so the parallel part cannot fail
    FeasibleSetting::random(
        g,
        c,
        nd,
        &mut instance_rng(master_seed, 0, purpose::SETTING),
    )?;
    let counts = (0..num_settings)
        .into_par_iter()
        .map(|i| {
            let i = i as u64;
            let s = FeasibleSetting::random(
                g,
                c,
                nd,
                &mut instance_rng(master_seed, i, purpose::SETTING),
            )
            .expect("parameters validated");
            pairings
                .iter()
                .map(|&(a, b)| {
                    let mut rng = instance_rng(master_seed, i, purpose::PLAY);
                    play_match(g, &s, a, b, &mut rng).outcome
                })
                .map(|o| match o {
                    Outcome::FirstWins => [1usize, 0, 0],
                    Outcome::SecondWins => [0, 1, 0],
                    Outcome::Tie => [0, 0, 1],
                })
                .collect::<Vec<_>>()
        })
        .reduce(
            || vec![[0usize; 3]; pairings.len()],
            |mut acc, x| {
                for (a, b) in acc.iter_mut().zip(x) {
                    for k in 0..3 {
                        a[k] += b[k];
                    }
                }
                acc
            },
        );
    Ok(pairings
        .iter()
        .zip(counts)
        .map(|(&(first, second), [w1, w2, t])| TournamentRow {
            first,
            second,
            first_wins: w1,
            second_wins: w2,
            ties: t,
            games: num_settings,
        })
        .collect())
}

/// CSV with header `first,second,win1_pct,win2_pct,tie_pct,n_games`.
pub fn write_tournament_csv<W: io::Write>(rows: &[TournamentRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "first", "second", "win1_pct", "win2_pct", "tie_pct", "n_games",
    ])?;
    for r in rows {
        w.write_record([
            r.first.to_string(),
            r.second.to_string(),
            format!("{:.2}", r.first_pct()),
            format!("{:.2}", r.second_pct()),
            format!("{:.2}", r.tie_pct()),
            r.games.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
