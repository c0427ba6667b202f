//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! gating criterion fails. Criterion 8 is informational.

mod common;

use std::time::Instant;

use simpart::engine::{check_is_simulation_pr, CheckLevel, Engine, EngineConfig, RunOutput};
use simpart::instrument::{
    assert_block_bound, assert_remove_disjointness, assert_smaller_half_bound,
};
use simpart::kripke::{generate_chain, generate_random_ks, generate_tree, KripkeStructure};
use simpart::oracle::{brute_force_simulation, StateRelation};
use simpart::prcore::SimulationResult;

struct Checked {
    output: RunOutput,
    oracle_equal: bool,
    simulation_pr: bool,
}

fn run_checked(ks: &KripkeStructure, level: CheckLevel) -> Result<Checked, String> {
    let mut engine = Engine::new(ks, EngineConfig::checked(level));
    engine.stabilize().map_err(|e| e.to_string())?;
    let simulation_pr = check_is_simulation_pr(ks, &engine.pr);
    let output = engine.finish();
    let got = StateRelation::from_result(&output.result, ks.num_states());
    let oracle_equal = got == brute_force_simulation(ks);
    Ok(Checked {
        output,
        oracle_equal,
        simulation_pr,
    })
}

fn is_partial_order(r: &SimulationResult) -> bool {
    let n = r.num_blocks();
    let leq = &r.leq;
    (0..n).all(|i| leq[i][i])
        && (0..n).all(|i| (0..n).all(|j| i == j || !(leq[i][j] && leq[j][i])))
        && (0..n).all(|i| (0..n).all(|j| !leq[i][j] || (0..n).all(|k| !leq[j][k] || leq[i][k])))
}

#[derive(Default)]
struct Tally {
    instances: usize,
    errors: Vec<String>,
    oracle: usize,
    algebra: usize,
    block: usize,
    half: usize,
    disjoint: usize,
}

impl Tally {
    fn add(&mut self, ks: &KripkeStructure) {
        self.instances += 1;
        let c = match run_checked(ks, CheckLevel::Cheap) {
            Ok(c) => c,
            Err(e) => {
                self.errors.push(e);
                return;
            }
        };
        let o = &c.output;
        self.oracle += !c.oracle_equal as usize;
        self.algebra += !(c.simulation_pr && is_partial_order(&o.result)) as usize;
        self.block +=
            !assert_block_bound(&o.stats, o.initial_blocks, o.result.num_blocks()) as usize;
        self.half += !assert_smaller_half_bound(&o.stats, ks.num_states()) as usize;
        self.disjoint += !assert_remove_disjointness(&o.remove_trace) as usize;
    }
}

fn report(ok: &mut bool, n: u32, name: &str, pass: bool, detail: String) {
    println!(
        "criterion {n} [{name}]: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    *ok &= pass;
}

/// Least-squares slope of `log t` against `log n`.
fn loglog_slope(points: &[(usize, f64)]) -> f64 {
    let xs: Vec<f64> = points.iter().map(|p| (p.0 as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.max(1e-6).ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

fn main() {
    let mut ok = true;

    let start = Instant::now();
    let mut exhaustive = Tally::default();
    for ks in common::exhaustive_corpus() {
        exhaustive.add(&ks);
    }
    let t1 = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let mut random = Tally::default();
    for ks in common::random_corpus(1000, 20_240_601) {
        random.add(&ks);
    }
    let t2 = start.elapsed().as_secs_f64();

    for e in exhaustive.errors.iter().chain(&random.errors).take(5) {
        println!("engine error: {e}");
    }
    let errors = exhaustive.errors.len() + random.errors.len();
    report(
        &mut ok,
        1,
        "exhaustive oracle equivalence",
        exhaustive.errors.is_empty() && exhaustive.oracle == 0,
        format!(
            "{} structures with at most 3 states, {} mismatches, {t1:.1} s",
            exhaustive.instances, exhaustive.oracle
        ),
    );
    report(
        &mut ok,
        2,
        "randomized oracle equivalence",
        random.errors.is_empty() && random.oracle == 0,
        format!(
            "{} structures, {} mismatches, {t2:.1} s",
            random.instances, random.oracle
        ),
    );
    let both = [&exhaustive, &random];
    let total: usize = both.iter().map(|t| t.instances).sum();
    let sum = |f: fn(&Tally) -> usize| both.iter().map(|t| f(t)).sum::<usize>();
    report(
        &mut ok,
        3,
        "output algebra",
        errors == 0 && sum(|t| t.algebra) == 0,
        format!(
            "{total} instances, {} not a partial order or not a simulation pair",
            sum(|t| t.algebra)
        ),
    );
    report(
        &mut ok,
        4,
        "block-generation law",
        errors == 0 && sum(|t| t.block) == 0,
        format!("{total} instances, {} violations", sum(|t| t.block)),
    );
    report(
        &mut ok,
        5,
        "smaller-half law",
        errors == 0 && sum(|t| t.half) == 0,
        format!("{total} instances, {} violations", sum(|t| t.half)),
    );

    let mut failures = Vec::new();
    let mut comparisons = 0usize;
    for i in 0..100u64 {
        let ks = generate_random_ks(
            8,
            1 + i as usize % 3,
            [0.1, 0.2, 0.3, 0.5][i as usize % 4],
            777 + i,
        );
        match run_checked(&ks, CheckLevel::Full) {
            Ok(c) if c.oracle_equal => {
                let s = &c.output.stats;
                comparisons += s.splits_total as usize + c.output.remove_trace.len();
            }
            Ok(_) => failures.push(format!("instance {i}: oracle mismatch")),
            Err(e) => failures.push(format!("instance {i}: {e}")),
        }
    }
    for f in failures.iter().take(5) {
        println!("full-check failure: {f}");
    }
    report(
        &mut ok,
        6,
        "count-exactness oracle",
        failures.is_empty(),
        format!(
            "100 structures with 8 states, {comparisons} table recomputations matched, {} failures",
            failures.len()
        ),
    );
    report(
        &mut ok,
        7,
        "remove-disjointness law",
        random.errors.is_empty() && random.disjoint == 0,
        format!(
            "{} instances, {} violations",
            random.instances, random.disjoint
        ),
    );

    let families: [(&str, Vec<KripkeStructure>); 3] = [
        (
            "chain",
            [625, 1250, 2500, 5000].map(generate_chain).to_vec(),
        ),
        (
            "tree",
            [(8, 2), (9, 2), (10, 2), (11, 2)]
                .map(|(d, b)| generate_tree(d, b))
                .to_vec(),
        ),
        (
            "random",
            [625, 1250, 2500, 5000]
                .map(|n| generate_random_ks(n, 3, 4.0 / n as f64, n as u64))
                .to_vec(),
        ),
    ];
    let mut lines = Vec::new();
    for (name, corpus) in &families {
        let mut points = Vec::new();
        let mut sims = Vec::new();
        for ks in corpus {
            let start = Instant::now();
            let out = Engine::new(ks, EngineConfig::default())
                .run()
                .expect("unchecked run");
            points.push((ks.num_states(), start.elapsed().as_secs_f64()));
            sims.push(out.result.num_blocks());
        }
        let largest = points.last().unwrap();
        lines.push(format!(
            "{name}: |Σ| up to {}, |P_sim| {:?}, {:.3} s at the largest size, log-log slope {:.2}",
            largest.0,
            sims,
            largest.1,
            loglog_slope(&points)
        ));
    }
    println!("criterion 8 [scaling sanity]: INFO ({})", lines.join("; "));

    println!("acceptance: {}", if ok { "PASS" } else { "FAIL" });
    if !ok {
        std::process::exit(1);
    }
}
