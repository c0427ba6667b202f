//! Writes a small benchmark corpus to a directory, one structure per file.
//!
//! Run with `cargo run --example generate_corpus <dir>`, then
//! `cargo run --bin simpart -- bench <dir>`.

use std::path::PathBuf;

use simpart::kripke::{generate_chain, generate_clique, generate_random_ks, generate_tree};

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "corpus".into()));
    std::fs::create_dir_all(&dir)?;
    let mut corpus = Vec::new();
    for n in [16, 64, 256] {
        corpus.push((format!("chain_{n:04}"), generate_chain(n)));
        corpus.push((
            format!("random_{n:04}"),
            generate_random_ks(n, 2, 3.0 / n as f64, n as u64),
        ));
    }
    for depth in [3, 5, 7] {
        corpus.push((format!("tree_2_{depth}"), generate_tree(depth, 2)));
    }
    corpus.push(("clique_0032".into(), generate_clique(32)));
    for (name, ks) in &corpus {
        let path = dir.join(format!("{name}.txt"));
        std::fs::write(&path, ks.to_text())?;
        println!(
            "{} ({} states, {} transitions)",
            path.display(),
            ks.num_states(),
            ks.num_transitions()
        );
    }
    Ok(())
}
