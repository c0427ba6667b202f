#![allow(dead_code)]

use simpart::kripke::{generate_random_ks, KripkeBuilder, KripkeStructure};

/// Every structure on `n` states over the labels `a`/`b`, with state 0
/// always labelled `a` so that renamings are not repeated.
pub fn all_structures(n: usize) -> Vec<KripkeStructure> {
    let mut out = Vec::new();
    let edges = n * n;
    let labelings = 1u32 << (n - 1);
    for lab in 0..labelings {
        for mask in 0..(1u64 << edges) {
            let mut b = KripkeBuilder::new(n);
            for s in 0..n {
                let atom = if s > 0 && lab >> (s - 1) & 1 == 1 {
                    "b"
                } else {
                    "a"
                };
                b.add_atom(s as u32, atom);
            }
            for e in 0..edges {
                if mask >> e & 1 == 1 {
                    b.add_transition((e / n) as u32, (e % n) as u32);
                }
            }
            out.push(b.build());
        }
    }
    out
}

/// All structures with one to three states.
pub fn exhaustive_corpus() -> Vec<KripkeStructure> {
    (1..=3).flat_map(all_structures).collect()
}

/// `count` random structures with 1 to 10 states, edge probability in
/// {0.1, 0.3, 0.6} and 1 to 3 labels.
pub fn random_corpus(count: usize, base_seed: u64) -> Vec<KripkeStructure> {
    const PROBS: [f64; 3] = [0.1, 0.3, 0.6];
    (0..count)
        .map(|i| {
            let seed = base_seed.wrapping_add(i as u64);
            let n = 1 + i % 10;
            let p = PROBS[(i / 10) % 3];
            let labels = 1 + (i / 30) % 3;
            generate_random_ks(n, labels, p, seed)
        })
        .collect()
}
