//! Collects operation counters on growing chains and trees and checks the
//! block and smaller-half laws.
//!
//! Run with `cargo run --release --example bench_counters`.

use std::time::Instant;

use simpart::engine::{run_esim, CheckLevel, EngineConfig};
use simpart::instrument::{assert_block_bound, assert_smaller_half_bound, ceil_log2};
use simpart::kripke::{generate_chain, generate_tree, KripkeStructure};

fn row(name: &str, ks: &KripkeStructure) {
    let start = Instant::now();
    let out = run_esim(ks, EngineConfig::checked(CheckLevel::Off)).expect("unchecked run");
    let ms = start.elapsed().as_secs_f64() * 1e3;
    let n = ks.num_states();
    let blocks = out.result.num_blocks();
    println!(
        "{name:<12} states {n:>5}  P_sim {blocks:>5}  splits {:>5}  new blocks {:>5} (law {})  max scans {:>2}/{:<2} (law {})  {ms:>8.2} ms",
        out.stats.splits_total,
        out.stats.new_blocks_total,
        assert_block_bound(&out.stats, out.initial_blocks, blocks),
        out.stats.max_smaller_half_scans(),
        ceil_log2(n),
        assert_smaller_half_bound(&out.stats, n),
    );
}

fn main() {
    for n in [100, 400, 1600] {
        row("chain", &generate_chain(n));
    }
    for depth in [6, 8, 10] {
        row("binary tree", &generate_tree(depth, 2));
    }
    let out = run_esim(&generate_tree(3, 3), EngineConfig::checked(CheckLevel::Off)).unwrap();
    print!(
        "\ncounters for a ternary tree of depth 3:\n{}",
        out.stats.to_key_value()
    );
}
