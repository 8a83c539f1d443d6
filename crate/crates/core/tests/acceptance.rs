//! Acceptance suite: one PASS/FAIL line per criterion. Exits non-zero when
//! any criterion fails.

use std::time::{Duration, Instant};

use opep_core::arena::tournament;
use opep_core::bench::{run_grid, ExperimentConfig, Solver};
use opep_core::exact::{brute_force_ideal, ideal_length, ideal_solution};
use opep_core::fixtures::worst_case_setting;
use opep_core::heuristics::{run_combined, run_combined_state, ExtRule, HeuristicId, StartRule};
use opep_core::rng::instance_rng;
use opep_core::{FeasibleSetting, Graph, Mode, NodeSet, OpepState, Path};
use rand::seq::IndexedRandom;
use rand::Rng;
use rayon::prelude::*;

const SEED: u64 = 20_240_601;

struct Verdict {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        ok,
        detail: detail.into(),
    }
}

fn board() -> Graph {
    Graph::builtin("board").unwrap()
}

fn mean_len(g: &Graph, c: usize, nd: usize, id: HeuristicId, n: usize, seed: u64) -> f64 {
    let total: usize = (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let s = FeasibleSetting::random(g, c, nd, &mut instance_rng(seed, i, 0)).unwrap();
            run_combined(g, &s, id, &mut instance_rng(seed, i, 1)).len()
        })
        .sum();
    total as f64 / n as f64
}

fn worst_case() -> Verdict {
    let t = Instant::now();
    let g = board();
    let s = worst_case_setting(&g);
    let ideal = ideal_length(&g, &s);
    let mut non_random_ok = true;
    for start in [
        StartRule::Degree,
        StartRule::Connected,
        StartRule::LongestPath,
    ] {
        for ext in ExtRule::ALL {
            for seed in 0..20 {
                let id = HeuristicId::new(start, ext);
                non_random_ok &= run_combined(&g, &s, id, &mut instance_rng(seed, 0, 1)).len() == 1;
            }
        }
    }
    let trials = 10_000;
    let longer = (0..trials)
        .filter(|&i| run_combined(&g, &s, HeuristicId::RS, &mut instance_rng(SEED, i, 1)).len() > 1)
        .count();
    let pct = 100.0 * longer as f64 / trials as f64;
    let elapsed = t.elapsed();
    check(
        ideal == 22
            && non_random_ok
            && (pct - 100.0 / 6.0).abs() <= 1.5
            && elapsed < Duration::from_secs(5),
        format!(
            "ideal={ideal} (want 22); non-random starts all length 1: {non_random_ok}; \
             random start escapes in {pct:.2}% (want 16.67 +/- 1.5); {elapsed:.2?}"
        ),
    )
}

/// Mean length for all 20 combinations on the board graph, c=6, nd=2.
fn all_pairs_table() -> (Vec<(HeuristicId, f64)>, Duration) {
    let t = Instant::now();
    let g = board();
    let cfg = ExperimentConfig {
        c_values: vec![6],
        nd_values: vec![2],
        heuristics: HeuristicId::all_pairs(),
        num_settings: 10_000,
        num_ideal_settings: 0,
        master_seed: SEED,
        ..ExperimentConfig::defaults_for("board", 22)
    };
    let rows = run_grid(&g, &cfg).unwrap();
    let table = rows
        .iter()
        .map(|r| match r.solver {
            Solver::Heuristic(id) => (id, r.mean_len),
            Solver::Ideal => unreachable!(),
        })
        .collect();
    (table, t.elapsed())
}

fn lookup(table: &[(HeuristicId, f64)], id: HeuristicId) -> f64 {
    table.iter().find(|e| e.0 == id).unwrap().1
}

fn table_means(table: &[(HeuristicId, f64)], elapsed: Duration) -> Verdict {
    let targets = [
        (HeuristicId::RS, 4.3247),
        (HeuristicId::MD, 5.0376),
        (HeuristicId::MT, 5.1267),
        (HeuristicId::LCC, 5.8933),
        (HeuristicId::PP, 6.1761),
    ];
    let mut ok = elapsed < Duration::from_secs(120);
    let mut parts = Vec::new();
    for (id, want) in targets {
        let got = lookup(table, id);
        let hit = (got - want).abs() <= 0.15;
        ok &= hit;
        parts.push(format!(
            "{id} {got:.4}/{want:.4}{}",
            if hit { "" } else { " x" }
        ));
    }
    check(
        ok,
        format!("{} (+/- 0.15); {elapsed:.2?}", parts.join(", ")),
    )
}

fn table_ordering(table: &[(HeuristicId, f64)]) -> Verdict {
    let mut ok = true;
    for ext in ExtRule::ALL {
        let column: Vec<f64> = StartRule::ALL
            .iter()
            .map(|&s| lookup(table, HeuristicId::new(s, ext)))
            .collect();
        ok &= column.windows(2).all(|w| w[0] <= w[1]);
    }
    let gap = lookup(table, HeuristicId::PP) - lookup(table, HeuristicId::RS);
    check(
        ok && gap >= 1.5,
        format!("start-axis columns nondecreasing: {ok}; pp - rs = {gap:.4} (want >= 1.5)"),
    )
}

fn tournament_rates() -> Verdict {
    let t = Instant::now();
    let g = board();
    use HeuristicId as H;
    let targets = [
        ((H::RS, H::RS), (42.0, 39.9)),
        ((H::MD, H::RS), (56.4, 27.6)),
        ((H::PP, H::RS), (61.1, 22.9)),
        ((H::RS, H::PP), (31.1, 56.1)),
    ];
    let mut pairings: Vec<_> = targets.iter().map(|t| t.0).collect();
    pairings.extend(H::NAMED.iter().map(|&h| (h, h)));
    let rows = tournament(&g, &pairings, 100_000, 6, 2, SEED).unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for (row, (_, (w1, w2))) in rows.iter().zip(targets) {
        let hit = (row.first_pct() - w1).abs() <= 1.5 && (row.second_pct() - w2).abs() <= 1.5;
        ok &= hit;
        parts.push(format!(
            "{}/{} {:.1}:{:.1} vs {w1}:{w2}{}",
            row.first,
            row.second,
            row.first_pct(),
            row.second_pct(),
            if hit { "" } else { " x" }
        ));
    }
    let diag_ok = rows[targets.len()..]
        .iter()
        .all(|r| r.first_wins > r.second_wins);
    let elapsed = t.elapsed();
    check(
        ok && diag_ok && elapsed < Duration::from_secs(600),
        format!(
            "{} (+/- 1.5pp); first player ahead on every diagonal pairing: {diag_ok}; {elapsed:.2?}",
            parts.join(", ")
        ),
    )
}

fn random_connected_graph<R: Rng>(n: usize, rng: &mut R) -> Graph {
    // random spanning tree plus extra edges
    let mut edges: Vec<(usize, usize)> = (2..=n).map(|v| (rng.random_range(1..v), v)).collect();
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.random_bool(0.25) && !edges.contains(&(u, v)) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

fn oracle_equivalence() -> Verdict {
    let t = Instant::now();
    let mismatches = (0..200u64)
        .into_par_iter()
        .filter(|&i| {
            let mut rng = instance_rng(SEED, i, 7);
            let n = rng.random_range(4..=10);
            let g = random_connected_graph(n, &mut rng);
            let s = FeasibleSetting::random(&g, 3, 1, &mut rng).unwrap();
            Ok(ideal_length(&g, &s)) != brute_force_ideal(&g, &s)
        })
        .count();
    let elapsed = t.elapsed();
    check(
        mismatches == 0 && elapsed < Duration::from_secs(60),
        format!("{mismatches} mismatches on 200 instances; {elapsed:.2?}"),
    )
}

fn dominance_and_replay() -> Verdict {
    let t = Instant::now();
    let g = board();
    let (bad_replay, over_ideal, non_monotone) = (0..5000u64)
        .into_par_iter()
        .map(|i| {
            let nd = 1 + (i % 3) as usize;
            let s = FeasibleSetting::random(&g, 6, nd, &mut instance_rng(SEED, i, 0)).unwrap();
            let ideal = ideal_solution(&g, &s);
            let mut counts = (0usize, 0usize, 0usize);
            if OpepState::replay(&g, &s, Mode::Cumulative, &ideal.moves)
                .map(|st| st.path() != &ideal.path)
                .unwrap_or(true)
            {
                counts.0 += 1;
            }
            for id in HeuristicId::NAMED {
                let st = run_combined_state(&g, &s, id, &mut instance_rng(SEED, i, 1));
                let replay = OpepState::replay(&g, &s, Mode::Cumulative, st.moves());
                if replay
                    .map(|r| r.path() != st.path() || !r.is_terminal())
                    .unwrap_or(true)
                {
                    counts.0 += 1;
                }
                if st.path().len() > ideal.len() {
                    counts.1 += 1;
                }
            }
            let promoted = s.promote_first_extension().unwrap();
            if ideal_length(&g, &promoted) < ideal.len() {
                counts.2 += 1;
            }
            counts
        })
        .reduce(|| (0, 0, 0), |a, b| (a.0 + b.0, a.1 + b.1, a.2 + b.2));
    check(
        bad_replay + over_ideal + non_monotone == 0,
        format!(
            "replay failures {bad_replay}, heuristic above ideal {over_ideal}, \
             c-monotonicity violations {non_monotone} over 5000 settings; {:.2?}",
            t.elapsed()
        ),
    )
}

/// Tentacles recomputed from the edge list alone.
fn tentacle_count(g: &Graph, p: &Path) -> usize {
    let (a, b) = p.ends().unwrap();
    let mut t = NodeSet::EMPTY;
    for &(u, v) in g.edges() {
        for (x, y) in [(u, v), (v, u)] {
            if (x == a || x == b) && !p.contains(y) {
                t.insert(y);
            }
        }
    }
    t.len()
}

fn random_path<R: Rng>(g: &Graph, rng: &mut R) -> Path {
    let mut nodes = vec![rng.random_range(1..=g.node_count())];
    let target = rng.random_range(1..=g.node_count());
    while nodes.len() < target {
        let last = *nodes.last().unwrap();
        let next: Vec<usize> = g
            .neighbors(last)
            .iter()
            .copied()
            .filter(|v| !nodes.contains(v))
            .collect();
        match next.choose(rng) {
            Some(&v) => nodes.push(v),
            None => break,
        }
    }
    Path::checked(g, nodes).unwrap()
}

fn tentacle_bound_suite() -> Verdict {
    let mut violations = 0;
    for i in 0..10_000u64 {
        let mut rng = instance_rng(SEED, i, 8);
        let n = rng.random_range(2..=20);
        let p_edge = rng.random_range(0.1..0.6);
        let mut edges = Vec::new();
        for u in 1..=n {
            for v in u + 1..=n {
                if rng.random_bool(p_edge) {
                    edges.push((u, v));
                }
            }
        }
        let g = Graph::from_edges(n, &edges).unwrap();
        let p = random_path(&g, &mut rng);
        let (a, b) = p.ends().unwrap();
        let (da, db, len) = (g.deg(a), g.deg(b), p.len());
        let delta = tentacle_count(&g, &p);
        let mut ok = delta <= n - len;
        if len == 1 {
            ok &= delta == da;
        } else {
            ok &= delta <= da + db - 2;
            ok &= delta + len >= da.max(db);
        }
        violations += usize::from(!ok);
    }
    let mut tree_violations = 0;
    for i in 0..1000u64 {
        let mut rng = instance_rng(SEED, i, 9);
        let n = rng.random_range(2..=30);
        let edges: Vec<_> = (2..=n).map(|v| (rng.random_range(1..v), v)).collect();
        let g = Graph::from_edges(n, &edges).unwrap();
        let mut p = random_path(&g, &mut rng);
        while p.len() < 2 {
            p = random_path(&g, &mut rng);
        }
        let (a, b) = p.ends().unwrap();
        tree_violations += usize::from(tentacle_count(&g, &p) != g.deg(a) + g.deg(b) - 2);
    }
    check(
        violations == 0 && tree_violations == 0,
        format!("{violations} bound violations in 10000 pairs, {tree_violations} tree-equality violations in 1000 trees"),
    )
}

fn extended_grid() -> Verdict {
    let t = Instant::now();
    let g = Graph::builtin("extended").unwrap();
    let mut ok = true;
    let mut parts = Vec::new();
    for nd in [1, 3] {
        for c in [8, 10] {
            let rs = mean_len(&g, c, nd, HeuristicId::RS, 2000, SEED);
            let pp = mean_len(&g, c, nd, HeuristicId::PP, 2000, SEED);
            let ratio = pp / rs;
            if nd == 1 {
                ok &= ratio >= 1.8;
            }
            parts.push(format!(
                "c={c} nd={nd} rs {rs:.2} pp {pp:.2} ratio {ratio:.2}"
            ));
        }
    }
    let elapsed = t.elapsed();
    check(
        ok && elapsed < Duration::from_secs(300),
        format!(
            "{} (want ratio >= 1.8 at nd=1); {elapsed:.2?}",
            parts.join("; ")
        ),
    )
}

fn main() {
    let mut results: Vec<(&str, Verdict)> = Vec::new();
    results.push(("1 worst-case instance", worst_case()));
    let (table, elapsed) = all_pairs_table();
    results.push(("2 all-pairs mean lengths", table_means(&table, elapsed)));
    results.push(("3 all-pairs ordering", table_ordering(&table)));
    results.push(("4 tournament win rates", tournament_rates()));
    results.push(("5 exact vs exhaustive search", oracle_equivalence()));
    results.push((
        "6 dominance, replay, c-monotonicity",
        dominance_and_replay(),
    ));
    results.push(("7 tentacle bounds", tentacle_bound_suite()));
    results.push(("8 extended graph grid", extended_grid()));

    let mut failed = 0;
    for (name, v) in &results {
        println!(
            "criterion {name}: {} | {}",
            if v.ok { "PASS" } else { "FAIL" },
            v.detail
        );
        failed += usize::from(!v.ok);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
