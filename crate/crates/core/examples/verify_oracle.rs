//! Cross-checks the engine against the brute-force fixpoint on random
//! structures.
//!
//! Run with `cargo run --example verify_oracle [count]`.

use simpart::engine::{run_esim, CheckLevel, EngineConfig};
use simpart::kripke::generate_random_ks;
use simpart::oracle::compare_with_oracle;

fn main() {
    let count: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(200);
    let mut mismatches = 0;
    for seed in 0..count {
        let n = 1 + (seed % 12) as usize;
        let ks = generate_random_ks(n, 1 + (seed % 3) as usize, 0.25, seed);
        // full checking recomputes every table after each update
        let out = run_esim(&ks, EngineConfig::checked(CheckLevel::Full)).expect("invariants hold");
        if let Some((s, t)) = compare_with_oracle(&ks, &out.result) {
            mismatches += 1;
            println!("seed {seed}: engine and oracle disagree on ({s}, {t})");
        }
    }
    println!("{count} structures checked, {mismatches} mismatches");
}
