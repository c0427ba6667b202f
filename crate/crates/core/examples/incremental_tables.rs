//! Steps through the two stabilization phases by hand and shows that the
//! incrementally maintained `count` table agrees with a recomputation from
//! scratch after every phase.
//!
//! Run with `cargo run --example incremental_tables`.

use simpart::engine::{recompute_bcount, recompute_count, CheckLevel, Engine, EngineConfig};
use simpart::kripke::parse_ks;

fn show(engine: &Engine, phase: &str) {
    let pr = &engine.pr;
    let fresh = recompute_count(pr, &recompute_bcount(engine.structure(), pr));
    let exact = pr.live().all(|b| {
        pr.live()
            .all(|c| fresh.get(b, c) == engine.aux.count.get(b, c))
    });
    println!(
        "after {phase}: {} blocks, count table exact: {exact}",
        pr.num_blocks()
    );
    for b in pr.live() {
        let above: Vec<String> = pr
            .live()
            .filter(|&c| pr.related(b, c) && c != b)
            .map(|c| c.to_string())
            .collect();
        println!(
            "  {b} = {:?}, below {:?}, count row {:?}",
            pr.sorted_members(b),
            above,
            engine.aux.count.row(b)
        );
    }
}

fn main() {
    let ks = parse_ks(
        "states 4\nlabel 0 a\nlabel 1 a\nlabel 2 a\nlabel 3 b\ntrans 0 3\ntrans 1 0\ntrans 2 1\n",
    )
    .unwrap();
    // full checking also validates every intermediate update internally
    let mut engine = Engine::new(&ks, EngineConfig::checked(CheckLevel::Full));
    engine.initialize().unwrap();
    show(&engine, "initialize");
    let mut round = 0;
    loop {
        let split_nothing = engine.pstabilize().unwrap();
        show(&engine, &format!("partition pass {round}"));
        let removed_nothing = engine.rstabilize().unwrap();
        show(&engine, &format!("relation pass {round}"));
        if split_nothing && removed_nothing {
            break;
        }
        round += 1;
    }
    let result = engine.finish().result;
    println!(
        "final partition {:?}, order {:?}",
        result.partition,
        result.order_pairs()
    );
}
