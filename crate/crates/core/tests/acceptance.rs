//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every criterion runs even when an earlier one fails; the test fails at
//! the end if any criterion did.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use num_bigint::{BigInt, Sign};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use duelnet::env::{analyze, sample_duel, PreferenceMatrix};
use duelnet::graph::{all_pairs_distances, CommGraph, DistanceTable, Topology};
use duelnet::harness::{run_all, trace_csv, Algorithm, ExperimentConfig, GammaSpec, MatrixSource, RegretTrace};
use duelnet::multiplayer::{elect_leader, ElectionState, FylSystem, GroupSystem, MpRucbSystem};
use duelnet::netsim::{DeliveryRule, MessageBus, Payload};
use duelnet::policies::{BasePolicy, DuelStats, Rmed2fhConfig, Rmed2fhPolicy, RucbPolicy};
use duelnet::rng::{keyed_stream, StreamRole};
use duelnet::theory::lower_bound_coefficient;

// Tolerances and sizes, pinned.
const C1_LIMIT: Duration = Duration::from_secs(1);
const C1_MAX_M: usize = 5;
const C1_MAX_T: u64 = 20;
const C2_LIMIT: Duration = Duration::from_secs(10);
const C2_MAX_M: usize = 5;
const C3_LIMIT: Duration = Duration::from_secs(5);
const C3_CONFIGS: usize = 50;
const C3_TOL: f64 = 1e-12;
const C4_LIMIT: Duration = Duration::from_secs(10);
const C4_MAX_T: u64 = 200;
const C5_LIMIT: Duration = Duration::from_secs(1);
const C5_TARGET: f64 = 3.6984;
const C5_TOL: f64 = 1e-3;
const C5_DIGITS: usize = 50;
const C6_LIMIT: Duration = Duration::from_secs(10);
const C6_SEEDS: u64 = 10;
const C6_HORIZON: u64 = 10_000;
const C7_HORIZON: u64 = 1 << 16;
const C7_RUNS: usize = 20;
const C7_PLAYERS: [usize; 3] = [1, 4, 10];
const C7_FACTOR: f64 = 2.0;
const C8_PLAYERS: usize = 20;
const C8_HORIZON: u64 = 1 << 15;
const C8_RUNS: usize = 20;
const C9_PLAYERS: usize = 10;
const C9_HORIZON: u64 = 1 << 15;
const C9_RUNS: usize = 20;
const C10_LIMIT: Duration = Duration::from_secs(60);
const C10_SEEDS: u64 = 100;
const C10_REQUIRED: usize = 95;
const C10_HORIZON: u64 = 10_000;
const C11_LIMIT: Duration = Duration::from_secs(10);
const C11_PLAYERS: [usize; 3] = [1, 5, 10];
const C11_HORIZON: u64 = 5_000;

/// MP-RUCB guard violations seen anywhere in the suite.
static GUARD_VIOLATIONS: AtomicU64 = AtomicU64::new(0);
static MP_RUNS_CHECKED: AtomicU64 = AtomicU64::new(0);

fn q3() -> PreferenceMatrix {
    PreferenceMatrix::from_upper(3, vec![0.6, 0.7, 0.6]).unwrap()
}

fn bt10() -> PreferenceMatrix {
    PreferenceMatrix::load_csv(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/bt10.csv")).unwrap()
}

fn connected_graphs(m: usize) -> Vec<CommGraph> {
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    (0u32..1 << pairs.len())
        .filter_map(|mask| {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &e)| e)
                .collect();
            let g = CommGraph::from_edges(m, &edges).unwrap();
            all_pairs_distances(&g).is_ok().then_some(g)
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn config(q: PreferenceMatrix, alg: Algorithm, graph: Topology, m: usize, gamma: GammaSpec, horizon: u64, runs: usize) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(MatrixSource::Inline(q), alg);
    cfg.graph = graph;
    cfg.players = m;
    cfg.gamma = gamma;
    cfg.horizon = horizon;
    cfg.runs = runs;
    cfg.validate().unwrap();
    cfg
}

/// Runs a config, tallies MP-RUCB guard violations, returns the aggregate.
fn run_tallied(cfg: &ExperimentConfig) -> RegretTrace {
    let (grid, outs) = run_all(cfg).unwrap();
    if matches!(cfg.algorithm, Algorithm::MpRucb | Algorithm::MpRucbNoRec) {
        MP_RUNS_CHECKED.fetch_add(outs.len() as u64, Ordering::Relaxed);
    }
    for o in &outs {
        GUARD_VIOLATIONS.fetch_add(o.guard_violations, Ordering::Relaxed);
    }
    RegretTrace::from_runs(grid, outs.into_iter().map(|o| o.regret).collect())
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_var(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() as f64 - 1.0)
}

/// Hop-by-hop flooding: at every communication phase each live message
/// advances one hop; `(recipient, round) -> {(origin, created)}`.
fn flooding_oracle(g: &CommGraph, gamma: usize, sends: &[(usize, u64)], horizon: u64) -> BTreeMap<(usize, u64), BTreeSet<(usize, u64)>> {
    let mut out: BTreeMap<(usize, u64), BTreeSet<(usize, u64)>> = BTreeMap::new();
    // (origin, created, seen set, frontier, hops so far)
    let mut live: Vec<(usize, u64, Vec<bool>, Vec<usize>, usize)> = Vec::new();
    for t in 1..=horizon {
        for &(o, c) in sends.iter().filter(|s| s.1 == t) {
            let mut seen = vec![false; g.m()];
            seen[o] = true;
            live.push((o, c, seen, vec![o], 0));
        }
        for (o, c, seen, frontier, hops) in live.iter_mut() {
            if *hops >= gamma {
                frontier.clear();
                continue;
            }
            let mut next = Vec::new();
            for &v in frontier.iter() {
                for &w in g.neighbors(v) {
                    if !seen[w] {
                        seen[w] = true;
                        next.push(w);
                        out.entry((w, t)).or_default().insert((*o, *c));
                    }
                }
            }
            *frontier = next;
            *hops += 1;
        }
        live.retain(|l| !l.3.is_empty());
    }
    out
}

fn criterion_1() -> Result<String, String> {
    let path = CommGraph::canonical(Topology::Path, 4).unwrap();
    let mut bus = MessageBus::new(&all_pairs_distances(&path).unwrap(), 2);
    bus.broadcast(0, Payload::Announce(0), 5);
    let mut got = Vec::new();
    for t in 5..=10 {
        for m in 0..4 {
            if !bus.collect(m, t).unwrap().is_empty() {
                got.push((m, t));
            }
        }
    }
    if got != vec![(1, 5), (2, 6)] {
        return Err(format!("P4 example collected at {got:?}"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut graphs = 0;
    for m in 1..=C1_MAX_M {
        for g in connected_graphs(m) {
            graphs += 1;
            let dist = all_pairs_distances(&g).unwrap();
            for gamma in 0..=dist.diameter() {
                let sends: Vec<(usize, u64)> = (1..=C1_MAX_T)
                    .flat_map(|t| (0..m).map(move |o| (o, t)))
                    .filter(|_| rng.gen_bool(0.5))
                    .collect();
                let oracle = flooding_oracle(&g, gamma, &sends, C1_MAX_T);
                let mut bus = MessageBus::new(&dist, gamma);
                let mut got: BTreeMap<(usize, u64), BTreeSet<(usize, u64)>> = BTreeMap::new();
                for t in 1..=C1_MAX_T {
                    for &(o, c) in sends.iter().filter(|s| s.1 == t) {
                        bus.broadcast(o, Payload::Announce(o), c);
                    }
                    for r in 0..m {
                        let envs = bus.collect(r, t).unwrap();
                        if !envs.is_empty() {
                            got.insert((r, t), envs.iter().map(|e| (e.origin, e.created_round)).collect());
                        }
                    }
                }
                if got != oracle {
                    return Err(format!("mismatch on {:?} with gamma {gamma}", g.edges()));
                }
            }
        }
    }
    Ok(format!("{graphs} connected graphs, all gammas, T = {C1_MAX_T}"))
}

fn criterion_2() -> Result<String, String> {
    let mut cases = 0;
    for m in 1..=C2_MAX_M {
        for g in connected_graphs(m) {
            let diameter = all_pairs_distances(&g).unwrap().diameter() as u64;
            for ids in permutations(m) {
                let mut s = ElectionState::new(&g, &ids).unwrap();
                for _ in 0..=diameter {
                    s.step(&g);
                }
                let holder = s.current_id[0];
                let leaders = (0..m).filter(|&p| s.original_id[p] == holder).count();
                let consensus = s.current_id.iter().all(|&c| c == holder);
                let (leader, t_le) = elect_leader(&g, &ids).unwrap();
                if !consensus || leaders != 1 || ids[leader] != 0 || t_le != diameter + 1 || s.leader() != Some(leader) {
                    return Err(format!("graph {:?} ids {ids:?}", g.edges()));
                }
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (graph, id permutation) cases"))
}

fn random_cw_matrix(rng: &mut ChaCha8Rng, k: usize) -> PreferenceMatrix {
    let cw = rng.gen_range(0..k);
    let mut upper = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let v = if i == cw {
                rng.gen_range(0.55..0.95)
            } else if j == cw {
                rng.gen_range(0.05..0.45)
            } else {
                rng.gen_range(0.05..0.95)
            };
            upper.push(v);
        }
    }
    PreferenceMatrix::from_upper(k, upper).unwrap()
}

fn criterion_3() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for c in 0..C3_CONFIGS {
        let k = rng.gen_range(2..=5);
        let q = random_cw_matrix(&mut rng, k);
        let gaps = analyze(&q).gaps.unwrap();
        let m = rng.gen_range(1..=3);
        let kind = if m == 1 { Topology::Complete } else { Topology::ALL[rng.gen_range(0..4)] };
        let alg = Algorithm::ALL[rng.gen_range(0..Algorithm::ALL.len())];
        let horizon = rng.gen_range(1..=100);
        let diameter = all_pairs_distances(&CommGraph::canonical(kind, m).unwrap()).unwrap().diameter();
        let gamma = GammaSpec::Value(rng.gen_range(0..=diameter));
        let mut cfg = config(q, alg, kind, m, gamma, horizon, 2);
        cfg.record_draws = true;
        cfg.grid_points = 100;
        cfg.seed = c as u64;
        let (grid, outs) = run_all(&cfg).unwrap();
        for o in outs {
            GUARD_VIOLATIONS.fetch_add(o.guard_violations, Ordering::Relaxed);
            let draws = o.draws.unwrap();
            for (g, &t) in grid.iter().enumerate() {
                let brute: f64 = draws[..t as usize]
                    .iter()
                    .flatten()
                    .map(|&(i, j)| 0.5 * (gaps.delta[i] + gaps.delta[j]))
                    .sum();
                if (brute - o.regret[g]).abs() > C3_TOL {
                    return Err(format!("config {c} ({alg}, K={k}, M={m}) at t={t}: {brute} vs {}", o.regret[g]));
                }
            }
        }
    }
    Ok(format!("{C3_CONFIGS} random configs, tolerance {C3_TOL:e}"))
}

fn reconstruct(sys: &MpRucbSystem, dist: &DistanceTable, gamma: usize, p: usize, t: u64, k: usize) -> DuelStats {
    let mut oracle = DuelStats::new(k);
    for r in sys.log().unwrap() {
        let d = dist.get(r.player, p);
        if r.player == p || (d <= gamma && r.round + d as u64 - 1 <= t) {
            oracle.record(r.sample.first, r.sample.second, r.sample.first_won);
        }
    }
    oracle
}

fn criterion_4() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checks = 0u64;
    for kind in Topology::ALL {
        for m in 2..=4 {
            let g = CommGraph::canonical(kind, m).unwrap();
            let dist = all_pairs_distances(&g).unwrap();
            let mut gammas = vec![0, 1, dist.diameter()];
            gammas.dedup();
            for gamma in gammas {
                let q = if m % 2 == 0 { q3() } else { random_cw_matrix(&mut rng, 4) };
                let k = q.k();
                let mut sys = MpRucbSystem::new(k, 3.0, &dist, gamma, DeliveryRule::Standard, true, m as u64).with_log();
                let mut draws = vec![(0, 0); m];
                for t in 1..=C4_MAX_T {
                    sys.play_round(t, &q, &mut draws).unwrap();
                    for p in 0..m {
                        if sys.state(p).shared() != &reconstruct(&sys, &dist, gamma, p, t, k) {
                            return Err(format!("{kind} M={m} gamma={gamma} player {p} round {t}"));
                        }
                        checks += 1;
                    }
                }
                GUARD_VIOLATIONS.fetch_add(sys.guard_violations(), Ordering::Relaxed);
                MP_RUNS_CHECKED.fetch_add(1, Ordering::Relaxed);
            }
        }
    }
    Ok(format!("{checks} (player, round) reconstructions"))
}

/// `ln(a / b)` scaled by `s`, via `2 atanh((a - b) / (a + b))`.
fn ln_fixed(a: i64, b: i64, s: &BigInt) -> BigInt {
    let y = BigInt::from(a - b) * s / BigInt::from(a + b);
    let y2 = &y * &y / s;
    let mut term = y;
    let mut sum = BigInt::from(0);
    let mut n = 1i64;
    while term.sign() != Sign::NoSign {
        sum += &term / BigInt::from(n);
        term = &term * &y2 / s;
        n += 2;
    }
    sum * 2
}

/// `KL(num / den, 1/2)` scaled by `s`.
fn kl_half_fixed(num: i64, den: i64, s: &BigInt) -> BigInt {
    (BigInt::from(num) * ln_fixed(2 * num, den, s) + BigInt::from(den - num) * ln_fixed(2 * (den - num), den, s)) / BigInt::from(den)
}

/// `(gap_num / gap_den) / (2 KL(q_num / q_den, 1/2))` scaled by `s`.
fn term_fixed(gap_num: i64, gap_den: i64, q_num: i64, q_den: i64, s: &BigInt) -> BigInt {
    BigInt::from(gap_num) * s * s / (BigInt::from(2 * gap_den) * kl_half_fixed(q_num, q_den, s))
}

fn criterion_5() -> Result<String, String> {
    let s = BigInt::from(10).pow(C5_DIGITS as u32 + 10);
    // arm 1: only superior is the winner, q_10 = 0.4, gaps 0 + 0.1
    let arm1 = term_fixed(1, 10, 4, 10, &s);
    // arm 2: superiors 0 (q = 0.3, gaps 0.2) and 1 (q = 0.4, gaps 0.3)
    let arm2 = term_fixed(2, 10, 3, 10, &s).min(term_fixed(3, 10, 4, 10, &s));
    let total = arm1 + arm2;
    let digits = total.to_string();
    let int_len = digits.len() - (C5_DIGITS + 10);
    let oracle = format!("{}.{}", &digits[..int_len], &digits[int_len..int_len + C5_DIGITS]);
    let oracle_f: f64 = oracle.parse().unwrap();
    let got = lower_bound_coefficient(&q3()).map_err(|e| e.to_string())?;
    if (oracle_f - C5_TARGET).abs() > C5_TOL {
        return Err(format!("oracle {oracle} is not within {C5_TOL} of {C5_TARGET}"));
    }
    if (got - oracle_f).abs() > C5_TOL || (got - C5_TARGET).abs() > C5_TOL {
        return Err(format!("evaluator {got} vs oracle {oracle}"));
    }
    Ok(format!("evaluator {got:.12}, oracle {oracle}"))
}

fn criterion_6() -> Result<String, String> {
    for seed in 0..C6_SEEDS {
        let mut traces = Vec::new();
        for (alg, gamma) in [(Algorithm::SpRucb, GammaSpec::Diameter), (Algorithm::MpRucb, GammaSpec::Value(0))] {
            let mut cfg = config(q3(), alg, Topology::Complete, 1, gamma, C6_HORIZON, 1);
            cfg.seed = seed;
            cfg.record_draws = true;
            let (grid, outs) = run_all(&cfg).unwrap();
            let draws = outs[0].draws.clone().unwrap();
            GUARD_VIOLATIONS.fetch_add(outs[0].guard_violations, Ordering::Relaxed);
            let trace = RegretTrace::from_runs(grid, vec![outs[0].regret.clone()]);
            traces.push((trace_csv(&trace).into_bytes(), draws));
        }
        MP_RUNS_CHECKED.fetch_add(1, Ordering::Relaxed);
        if traces[0] != traces[1] {
            return Err(format!("seed {seed} differs"));
        }
    }
    Ok(format!("{C6_SEEDS} seeds, T = {C6_HORIZON}, CSV bytes and draw logs equal"))
}

fn criterion_7() -> Result<String, String> {
    let mut increments = Vec::new();
    for m in C7_PLAYERS {
        let mut cfg = config(q3(), Algorithm::MpRucb, Topology::Complete, m, GammaSpec::Diameter, C7_HORIZON, C7_RUNS);
        cfg.grid_points = 17; // powers of two, so T/2 is on the grid
        let trace = run_tallied(&cfg);
        let half = trace.grid.iter().position(|&t| t == C7_HORIZON / 2).unwrap();
        let late: Vec<f64> = trace.runs.iter().map(|r| r[r.len() - 1] - r[half]).collect();
        increments.push(mean(&late));
    }
    let hi = increments.iter().cloned().fold(f64::MIN, f64::max);
    let lo = increments.iter().cloned().fold(f64::MAX, f64::min);
    let detail = format!(
        "late-window increments {:?} for M = {C7_PLAYERS:?}, ratio {:.3}",
        increments.iter().map(|x| (x * 100.0).round() / 100.0).collect::<Vec<_>>(),
        hi / lo
    );
    if lo > 0.0 && hi / lo <= C7_FACTOR {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_8() -> Result<String, String> {
    let mut finals = Vec::new();
    for alg in [Algorithm::MpRucb, Algorithm::MpRucbNoRec] {
        let cfg = config(q3(), alg, Topology::Star, C8_PLAYERS, GammaSpec::Value(1), C8_HORIZON, C8_RUNS);
        finals.push(run_tallied(&cfg).finals());
    }
    let (with, without) = (mean(&finals[0]), mean(&finals[1]));
    let se = (sample_var(&finals[0]) / C8_RUNS as f64 + sample_var(&finals[1]) / C8_RUNS as f64).sqrt();
    let detail = format!("with recommendations {with:.1}, without {without:.1}, pooled SE {se:.1}");
    if without - with > se {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_9() -> Result<String, String> {
    let mut means = Vec::new();
    for alg in [Algorithm::FylRmed2fh, Algorithm::MpRucb, Algorithm::FylRucb] {
        let cfg = config(bt10(), alg, Topology::Complete, C9_PLAYERS, GammaSpec::Diameter, C9_HORIZON, C9_RUNS);
        means.push(run_tallied(&cfg).final_mean());
    }
    let detail = format!("fyl-rmed2fh {:.1}, mp-rucb {:.1}, fyl-rucb {:.1}", means[0], means[1], means[2]);
    if means[0] < means[1] && means[1] < means[2] {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_10() -> Result<String, String> {
    let q = q3();
    let mut optimistic = 0;
    for seed in 0..C10_SEEDS {
        let mut policy = RucbPolicy::new(3, 3.0);
        let mut rng = keyed_stream(seed, 0, StreamRole::Decision);
        let mut ok = true;
        for t in 1..=C10_HORIZON {
            let u = policy.ucb_matrix(t);
            if (1..3).any(|j| u[j] < q.get(0, j)) {
                ok = false;
            }
            let (i, j) = policy.select_pair(t, &mut rng);
            let won = sample_duel(&q, i, j, &mut rng);
            policy.observe(i, j, won);
        }
        optimistic += ok as usize;
    }
    let detail = format!("{optimistic}/{C10_SEEDS} seeds optimistic at every round");
    if optimistic >= C10_REQUIRED {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_11() -> Result<String, String> {
    let q = bt10();
    let mut checked = Vec::new();
    for rmed in [false, true] {
        let mut logs = Vec::new();
        for (m, kind) in C11_PLAYERS.into_iter().zip([Topology::Complete, Topology::Star, Topology::Path]) {
            let g = CommGraph::canonical(kind, m).unwrap();
            let policies: Vec<Box<dyn BasePolicy>> = (0..m)
                .map(|_| -> Box<dyn BasePolicy> {
                    if rmed {
                        Box::new(Rmed2fhPolicy::new(10, Rmed2fhConfig::new(C11_HORIZON)))
                    } else {
                        Box::new(RucbPolicy::new(10, 3.0))
                    }
                })
                .collect();
            let mut sys = FylSystem::new(&g, policies, 2024, DeliveryRule::Standard).unwrap().with_trace();
            let mut draws = vec![(0, 0); m];
            for t in 1..=C11_HORIZON {
                sys.play_round(t, &q, &mut draws).unwrap();
            }
            let bytes: Vec<u8> = sys
                .trace()
                .unwrap()
                .iter()
                .flat_map(|s| format!("{},{},{},{}\n", s.round, s.first, s.second, s.first_won as u8).into_bytes())
                .collect();
            logs.push(bytes);
        }
        if logs.windows(2).any(|w| w[0] != w[1]) {
            return Err(format!("leader logs differ (base {})", if rmed { "rmed2fh" } else { "rucb" }));
        }
        checked.push(logs[0].len());
    }
    Ok(format!("M = {C11_PLAYERS:?}, rucb and rmed2fh leader logs byte-equal ({checked:?} bytes)"))
}

fn criterion_12() -> Result<String, String> {
    let v = GUARD_VIOLATIONS.load(Ordering::Relaxed);
    let runs = MP_RUNS_CHECKED.load(Ordering::Relaxed);
    let detail = format!("{v} violations across {runs} MP-RUCB runs");
    if v == 0 && runs > 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

#[test]
fn acceptance() {
    type Criterion = (u32, &'static str, Option<Duration>, fn() -> Result<String, String>);
    let criteria: [Criterion; 12] = [
        (1, "delivery-rule exactness", Some(C1_LIMIT), criterion_1),
        (2, "leader election", Some(C2_LIMIT), criterion_2),
        (3, "regret oracle equality", Some(C3_LIMIT), criterion_3),
        (4, "shared-statistics reconstruction", Some(C4_LIMIT), criterion_4),
        (5, "lower bound evaluator", Some(C5_LIMIT), criterion_5),
        (6, "degenerate equivalence", Some(C6_LIMIT), criterion_6),
        (7, "M-independence of the asymptotic slope", None, criterion_7),
        (8, "recommendation ablation", None, criterion_8),
        (9, "algorithm ordering on a dataset matrix", None, criterion_9),
        (10, "optimism of the UCB matrix", Some(C10_LIMIT), criterion_10),
        (11, "leader coupling", Some(C11_LIMIT), criterion_11),
        (12, "exploitation-draw guard", None, criterion_12),
    ];
    let mut failed = Vec::new();
    for (id, name, limit, f) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(d), Some(l)) if elapsed >= l => Err(format!("{d}; took {elapsed:.2?}, limit {l:?}")),
            (o, _) => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        let _ = writeln!(std::io::stdout(), "[{tag}] criterion {id:>2}: {name} ({elapsed:.2?}): {detail}");
        if outcome.is_err() {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
