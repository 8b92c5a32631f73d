//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.
//!
//! cargo test -p qlnet --test acceptance

mod common;

use std::time::{Duration, Instant};

use qlnet::annealer::{anneal, AnnealParams};
use qlnet::catalog::{chakraborty_game, sato_game, shapley_game, TopologyKind, TopologySpec};
use qlnet::dynamics::{qld_field_norm, qld_vector_field, Init, Learner, LearnerConfig, UpdateOrder};
use qlnet::equilibria::{
    equilibrium_report, lambert_w, nash_gaps, surprisal_gap, surprisal_gap_max,
};
use qlnet::experiments::{
    max_disagreement, random_batch, run_from_seeds, stability_sweep, AlphaPolicy, BatchSpec,
    GameFamily, RunSettings, SweepSpec, TSearch, UNIQUENESS_TOL,
};
use qlnet::spectral::{stability_report, symmetrized_interaction, verify_block_norm_bound};
use qlnet::{op_norm_two, ExplorationRates, JointStrategy, NetworkGame};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const INITS: u64 = 10;

/// A converged run kept for the identity and fixed-point checks.
struct Found {
    game: NetworkGame,
    rates: ExplorationRates,
    x: JointStrategy,
}

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn settings(horizon: usize, alpha: AlphaPolicy) -> RunSettings {
    RunSettings {
        horizon,
        window: 2500,
        tol: 1e-5,
        alpha,
        order: UpdateOrder::Sequential,
    }
}

fn seeds() -> Vec<u64> {
    (0..INITS).collect()
}

fn criterion_1(found: &mut Vec<Found>) -> qlnet::Result<Verdict> {
    let game = sato_game(0.0, 0.0, TopologySpec::ring(3))?;
    let rates = ExplorationRates::uniform(3, 0.1)?;
    let runs = run_from_seeds(&game, &rates, &settings(20_000, AlphaPolicy::Fixed(0.1)), &seeds())?;
    let uniform = JointStrategy::uniform_for(&game);
    let all = runs.iter().all(|r| r.converged);
    let dist = runs
        .iter()
        .map(|r| r.final_strategy.linf_distance(&uniform))
        .fold(0.0, f64::max);
    for r in &runs {
        found.push(Found {
            game: game.clone(),
            rates: rates.clone(),
            x: r.final_strategy.clone(),
        });
    }
    Ok(verdict(
        all && dist < 1e-4,
        format!("all converged {all}, max ℓ∞ to uniform {dist:.2e}"),
    ))
}

fn criterion_2(found: &mut Vec<Found>) -> qlnet::Result<Verdict> {
    let run = settings(40_000, AlphaPolicy::Stable { max: 0.1 });
    let families = [
        GameFamily::Shapley { beta: 0.2 },
        GameFamily::Sato { eps_x: 0.01, eps_y: -0.05 },
    ];
    let mut failures = Vec::new();
    let mut worst_spread: f64 = 0.0;
    let mut worst_disagreement: f64 = 0.0;
    let mut cells = 0;
    for family in &families {
        for kind in TopologyKind::ALL {
            for n in [3, 6, 9, 12, 15] {
                let game = family.build(TopologySpec::new(kind, n))?;
                let t = 1.05 * stability_report(&game)?.min_uniform_threshold();
                let rates = ExplorationRates::uniform(n, t)?;
                let runs = run_from_seeds(&game, &rates, &run, &seeds())?;
                let dis = max_disagreement(&runs);
                let converged = runs.iter().all(|r| r.converged);
                worst_spread = runs.iter().map(|r| r.spread).fold(worst_spread, f64::max);
                worst_disagreement = worst_disagreement.max(dis);
                cells += 1;
                if !converged || dis >= UNIQUENESS_TOL {
                    failures.push(format!("{} {kind} {n} (T {t:.4})", family.name()));
                }
                found.push(Found {
                            game,
                    rates,
                    x: runs[0].final_strategy.clone(),
                });
            }
        }
    }
    Ok(verdict(
        failures.is_empty(),
        format!(
            "{cells} cells, worst spread {worst_spread:.2e}, worst disagreement {worst_disagreement:.2e}{}",
            if failures.is_empty() { String::new() } else { format!(", failing: {}", failures.join("; ")) }
        ),
    ))
}

fn criterion_3() -> qlnet::Result<Verdict> {
    let sweep = |topology| SweepSpec {
        game: GameFamily::Shapley { beta: 0.2 },
        topology,
        agents: (3..=15).collect(),
        search: TSearch::Bisection { lo: 0.05, hi: 20.0, resolution: 0.01 },
        num_inits: INITS as usize,
        run: settings(20_000, AlphaPolicy::Stable { max: 0.1 }),
        seed: 7,
    };
    let t_stars = |kind| -> qlnet::Result<Vec<Option<f64>>> {
        Ok(stability_sweep(&sweep(kind))?.rows.iter().map(|r| r.t_star).collect())
    };
    let (ring, full) = (t_stars(TopologyKind::Ring)?, t_stars(TopologyKind::Full)?);
    let (Some(ring), Some(full)) = (
        ring.into_iter().collect::<Option<Vec<f64>>>(),
        full.into_iter().collect::<Option<Vec<f64>>>(),
    ) else {
        return Ok(verdict(false, "no boundary found inside the search range for some N"));
    };
    let agents: Vec<usize> = (3..=15).collect();
    let argmin = (0..ring.len()).min_by(|&a, &b| ring[a].total_cmp(&ring[b])).unwrap();
    let argmax = (0..ring.len()).max_by(|&a, &b| ring[a].total_cmp(&ring[b])).unwrap();
    let (lo, hi) = (ring[argmin], ring[argmax]);
    let variation = (hi - lo) / lo;
    let ratio = full[full.len() - 1] / full[0];
    Ok(verdict(
        variation < 0.25 && ratio > 2.0,
        format!(
            "ring T* from {lo:.4} (N={}) to {hi:.4} (N={}), variation {:.1}%; full T*(15)/T*(3) = {ratio:.2}",
            agents[argmin],
            agents[argmax],
            100.0 * variation
        ),
    ))
}

fn criterion_4(found: &mut Vec<Found>) -> qlnet::Result<Verdict> {
    let game = chakraborty_game(7.0, 8.5, 3)?;
    let s = settings(20_000, AlphaPolicy::Fixed(0.1));
    let low = run_from_seeds(&game, &ExplorationRates::uniform(3, 0.7)?, &s, &seeds())?;
    let rates = ExplorationRates::uniform(3, 2.7)?;
    let high = run_from_seeds(&game, &rates, &s, &seeds())?;
    let low_fail = low.iter().filter(|r| !r.converged).count();
    let high_pass = high.iter().filter(|r| r.converged).count();
    for r in &high {
        found.push(Found {
            game: game.clone(),
            rates: rates.clone(),
            x: r.final_strategy.clone(),
        });
    }
    Ok(verdict(
        low_fail == INITS as usize && high_pass == INITS as usize,
        format!("T=0.7 fails {low_fail}/{INITS}, T=2.7 converges {high_pass}/{INITS}"),
    ))
}

fn criterion_5(found: &[Found]) -> qlnet::Result<Verdict> {
    let mut checked = 0;
    let mut worst_phi: f64 = 0.0;
    let mut worst_eps: f64 = 0.0;
    for f in found {
        let rep = equilibrium_report(&f.game, &f.x, &f.rates)?;
        if rep.qre_residual >= 1e-5 {
            continue;
        }
        checked += 1;
        let sum_ta: f64 = (0..f.game.num_agents())
            .map(|k| Ok(f.rates[k] * surprisal_gap(f.x.agent(k))?))
            .sum::<qlnet::Result<f64>>()?;
        let gap = nash_gaps(&f.game, &f.x)?.into_iter().fold(f64::NEG_INFINITY, f64::max);
        worst_phi = worst_phi.max((rep.exploitability - sum_ta).abs());
        worst_eps = worst_eps.max((rep.epsilon - gap).abs());
    }
    Ok(verdict(
        checked > 0 && worst_phi < 1e-5 && worst_eps < 1e-5,
        format!("{checked}/{} QREs checked, |φ − Σ T_k A_k| ≤ {worst_phi:.2e}, |ε − max gap| ≤ {worst_eps:.2e}", found.len()),
    ))
}

fn criterion_6() -> qlnet::Result<Verdict> {
    let mut ok = true;
    let mut worst_search: f64 = 0.0;
    let mut worst_closed: f64 = 0.0;
    for n in 2..=10 {
        let m = surprisal_gap_max(n)?;
        let search = common::grid_gap_max(n, 1e-6);
        let at = surprisal_gap(&m.maximizer(n, 0))?;
        worst_search = worst_search.max((m.value - search).abs());
        worst_closed = worst_closed.max((m.value - at).abs());
        ok &= (m.value - search).abs() < 1e-5 && (m.value - at).abs() < 1e-10 && m.value < (n as f64).ln();
    }
    let mut worst_w: f64 = 0.0;
    let lo = -1.0 / std::f64::consts::E + 1e-6;
    for i in 0..1000 {
        let z = lo + (10.0 - lo) * i as f64 / 999.0;
        let w = lambert_w(z)?;
        worst_w = worst_w.max((w * w.exp() - z).abs());
    }
    ok &= worst_w < 1e-12;
    Ok(verdict(
        ok,
        format!("line search {worst_search:.1e}, closed form {worst_closed:.1e}, |we^w − z| ≤ {worst_w:.1e}"),
    ))
}

fn random_small_game(rng: &mut ChaCha8Rng) -> NetworkGame {
    let n = rng.random_range(2..=10);
    let counts: Vec<usize> = (0..n).map(|_| rng.random_range(1..=4)).collect();
    let mask: Vec<bool> = (0..n * n).map(|_| rng.random_bool(0.3)).collect();
    let draws: Vec<f64> = (0..512).map(|_| rng.random()).collect();
    common::game_from_draws(&counts, &common::graph_edges(n, &mask), &draws, 5.0)
}

fn criterion_7() -> qlnet::Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut holds = 0;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let game = random_small_game(&mut rng);
        if verify_block_norm_bound(&game)?.holds {
            holds += 1;
        }
        for m in [game.adjacency(), symmetrized_interaction(&game)?] {
            worst = worst.max((op_norm_two(&m)? - common::dense_two_norm(&m)).abs());
        }
    }
    Ok(verdict(
        holds == 100 && worst < 1e-8,
        format!("bound holds on {holds}/100, power vs dense ≤ {worst:.1e}"),
    ))
}

fn criterion_8() -> qlnet::Result<Verdict> {
    let game = chakraborty_game(2.5, 1.5, 5)?;
    let history = anneal(&game, &AnnealParams::for_agents(5), &[0.1; 5], 0)?;
    let accepted: Vec<_> = history.accepted().collect();
    let rises: Vec<(usize, f64)> = accepted
        .windows(2)
        .filter(|w| w[1].epsilon > w[0].epsilon)
        .map(|w| (w[1].index, w[1].epsilon - w[0].epsilon))
        .collect();
    let (first, last) = (history.initial(), history.result());
    let phi_down = last.exploitability < first.exploitability;

    let rows = random_batch(&BatchSpec::ring_default(50, 8))?;
    let nonneg = rows
        .iter()
        .filter(|r| r.exploitability_decrease.is_some_and(|d| d >= 0.0))
        .count();

    let mut detail = format!(
        "anneal: {} accepted steps, halted {:?}, φ {:.4} → {:.4}, ε {:.4} → {:.4}, ε rose on {} steps",
        accepted.len(),
        history.status,
        first.exploitability,
        last.exploitability,
        first.epsilon,
        last.epsilon,
        rises.len()
    );
    if let Some((idx, d)) = rises.iter().max_by(|a, b| a.1.total_cmp(&b.1)) {
        detail += &format!(" (largest +{d:.2e} at step {idx})");
    }
    detail += &format!("; batch: decrease ≥ 0 in {nonneg}/50");
    Ok(verdict(rises.is_empty() && phi_down && 2 * nonneg > rows.len(), detail))
}

fn criterion_9(found: &[Found]) -> qlnet::Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    let mut worst_sum: f64 = 0.0;
    for _ in 0..1000 {
        let game = random_small_game(&mut rng);
        let x = JointStrategy::new(
            game.action_counts()
                .iter()
                .map(|&n| {
                    let w: Vec<f64> = (0..n).map(|_| rng.random_range(0.01..1.0)).collect();
                    let s: f64 = w.iter().sum();
                    w.into_iter().map(|v| v / s).collect()
                })
                .collect(),
        )?;
        let rates = ExplorationRates::uniform(game.num_agents(), rng.random_range(0.01..5.0))?;
        for fk in qld_vector_field(&game, &x, &rates)? {
            worst_sum = worst_sum.max(fk.iter().sum::<f64>().abs());
        }
    }

    let mut fixed = 0;
    let mut worst_field: f64 = 0.0;
    for f in found {
        if equilibrium_report(&f.game, &f.x, &f.rates)?.qre_residual < 1e-5 {
            fixed += 1;
            worst_field = worst_field.max(qld_field_norm(&f.game, &f.x, &f.rates)?);
        }
    }

    let game = shapley_game(0.2, TopologySpec::star(6))?;
    let cfg = LearnerConfig::new(6, 0.5, 5000)?.seed(99);
    let trace = |cfg: &LearnerConfig| -> qlnet::Result<Vec<u64>> {
        let mut bits = Vec::new();
        let mut l = Learner::new(&game, cfg, Init::Random)?;
        l.advance(cfg.horizon, |x| bits.extend(x.iter().map(|v| v.to_bits())))?;
        Ok(bits)
    };
    let deterministic = trace(&cfg)? == trace(&cfg)?;

    Ok(verdict(
        worst_sum < 1e-12 && fixed > 0 && worst_field < 1e-6 && deterministic,
        format!(
            "tangency ≤ {worst_sum:.1e} on 1000 points, field ≤ {worst_field:.1e} at {fixed} fixed points, bitwise deterministic {deterministic}"
        ),
    ))
}

fn report(id: u32, limit: Option<Duration>, f: impl FnOnce() -> qlnet::Result<Verdict>) -> bool {
    let start = Instant::now();
    let v = f().unwrap_or_else(|e| verdict(false, format!("error: {e}")));
    let took = start.elapsed();
    let in_time = limit.is_none_or(|l| took < l);
    let pass = v.pass && in_time;
    let limit_note = limit.map(|l| format!(", limit {}s", l.as_secs())).unwrap_or_default();
    println!(
        "criterion {id}: {} [{:.1}s{limit_note}] {}",
        if pass { "PASS" } else { "FAIL" },
        took.as_secs_f64(),
        v.detail
    );
    pass
}

fn main() {
    let mut found = Vec::new();
    let results = [
        report(1, Some(Duration::from_secs(5)), || criterion_1(&mut found)),
        report(2, Some(Duration::from_secs(600)), || criterion_2(&mut found)),
        report(3, None, criterion_3),
        report(4, Some(Duration::from_secs(30)), || criterion_4(&mut found)),
        report(5, None, || criterion_5(&found)),
        report(6, None, criterion_6),
        report(7, None, criterion_7),
        report(8, None, criterion_8),
        report(9, None, || criterion_9(&found)),
    ];
    let passed = results.iter().filter(|p| **p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
