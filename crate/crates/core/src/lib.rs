//! Simulation preorder and simulation equivalence on finite Kripke
//! structures.
//!
//! [`engine::simulation_preorder`] computes the coarsest partition of the
//! states into mutually simulating classes together with the partial order
//! induced on those classes. It refines a partition-relation pair, keeping
//! block-indexed counters up to date incrementally, and runs in
//! `O(|P_sim| · |→| · log |Σ|)` time.
//!
//! ```
//! use simpart::kripke::parse_ks;
//! use simpart::engine::simulation_preorder;
//!
//! let ks = parse_ks("states 2\nlabel 0 a\nlabel 1 a\ntrans 0 0\n").unwrap();
//! let result = simulation_preorder(&ks);
//! assert_eq!(result.num_blocks(), 2);
//! // state 0 simulates state 1
//! assert_eq!(result.order_pairs(), vec![(1, 0)]);
//! ```

pub mod cli;
pub mod engine;
pub mod instrument;
pub mod kripke;
pub mod oracle;
pub mod prcore;

pub use engine::{run_esim, simulation_preorder, CheckLevel, EngineConfig, EngineError, RunOutput};
pub use kripke::{parse_ks, KripkeStructure, StateId};
pub use oracle::brute_force_simulation;
pub use prcore::SimulationResult;
