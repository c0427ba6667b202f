//! Computes the simulation partition and order of a small structure.
//!
//! Run with `cargo run --example compute_preorder`.

use simpart::engine::simulation_preorder;
use simpart::kripke::parse_ks;
use simpart::StateId;

const TEXT: &str = "\
# a vending machine that commits early (0) next to one that does not (4)
states 8
label 0 idle
label 1 paid
label 2 coffee
label 3 tea
label 4 idle
label 5 paid
label 6 paid
label 7 coffee
trans 0 1
trans 1 2
trans 1 3
trans 4 5
trans 4 6
trans 5 7
trans 6 3
";

fn main() {
    let ks = parse_ks(TEXT).expect("valid structure");
    let result = simulation_preorder(&ks);
    for (i, block) in result.partition.iter().enumerate() {
        let members: Vec<String> = block.iter().map(|s| s.to_string()).collect();
        println!("block {i}: {{{}}}", members.join(", "));
    }
    for (i, j) in result.order_pairs() {
        println!("block {i} is simulated by block {j}");
    }
    println!(
        "0 simulates 4: {}",
        result.simulated_by(StateId(4), StateId(0))
    );
    println!(
        "4 simulates 0: {}",
        result.simulated_by(StateId(0), StateId(4))
    );
}
