//! Partition-relation refinement for the simulation preorder.
//!
//! The driver alternates two phases on a partition-relation pair
//! `⟨P, ⊴⟩` that starts as `⟨P_ℓ, id⟩`:
//!
//! * partition stabilization splits blocks with `pre(μ(C))` while some
//!   block `C` cuts another block, inheriting `⊴` from parent blocks;
//! * relation stabilization drops pairs `B ⊴ D` where `B ->∃ C` but `D`
//!   cannot reach `μ(C)`, driven by per-block remove lists.
//!
//! Block-indexed tables (`bcount`, `count`, `pre_e`, remove lists) are kept
//! up to date incrementally. After a split only the smaller half of each
//! split block is rescanned, so every state is rescanned at most
//! `⌈log₂ |Σ|⌉` times over a run.

mod check;
mod refine;
mod relation;
mod update;

use thiserror::Error;

use crate::instrument::{RemoveTrace, RunStats};
use crate::kripke::KripkeStructure;
use crate::prcore::{init_pr, AuxTables, BlockId, PartitionRelationPair, SimulationResult};

pub use check::{check_is_simulation_pr, recompute_bcount, recompute_count};

/// How much runtime checking the engine performs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub enum CheckLevel {
    #[default]
    Off,
    /// Segment layout, reflexivity and counter bounds.
    Cheap,
    /// Everything in `Cheap` plus from-scratch recomputation of the tables
    /// after every update and the order laws after every phase.
    Full,
}

impl std::str::FromStr for CheckLevel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "off" => Ok(CheckLevel::Off),
            "cheap" => Ok(CheckLevel::Cheap),
            "full" => Ok(CheckLevel::Full),
            other => Err(format!(
                "unknown check level `{other}` (expected off, cheap or full)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EngineConfig {
    pub check_level: CheckLevel,
    pub stats_enabled: bool,
}

impl EngineConfig {
    pub fn checked(check_level: CheckLevel) -> Self {
        EngineConfig {
            check_level,
            stats_enabled: true,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("invariant violated after {phase}: {detail}")]
    Invariant { phase: &'static str, detail: String },
}

pub(crate) fn violation(phase: &'static str, detail: impl Into<String>) -> EngineError {
    EngineError::Invariant {
        phase,
        detail: detail.into(),
    }
}

/// Result of one run.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub result: SimulationResult,
    pub stats: RunStats,
    /// Selections made by relation stabilization; empty unless stats are
    /// enabled.
    pub remove_trace: RemoveTrace,
    /// `|P_ℓ|`, the number of initial blocks.
    pub initial_blocks: usize,
}

/// Engine state for one structure: the partition-relation pair, the
/// auxiliary tables and scratch space.
pub struct Engine<'a> {
    ks: &'a KripkeStructure,
    pub pr: PartitionRelationPair,
    pub aux: AuxTables,
    cfg: EngineConfig,
    stats: RunStats,
    trace: RemoveTrace,
    rstabilize_calls: u32,
    block_stamp: Vec<u32>,
    parent_stamp: Vec<u32>,
    rescanned: Vec<bool>,
}

impl<'a> Engine<'a> {
    pub fn new(ks: &'a KripkeStructure, cfg: EngineConfig) -> Self {
        let pr = init_pr(ks);
        let aux = AuxTables::new(pr.num_blocks());
        let stats = if cfg.stats_enabled {
            RunStats::new(ks.num_states())
        } else {
            RunStats::default()
        };
        Engine {
            ks,
            pr,
            aux,
            cfg,
            stats,
            trace: Vec::new(),
            rstabilize_calls: 0,
            block_stamp: Vec::new(),
            parent_stamp: Vec::new(),
            rescanned: Vec::new(),
        }
    }

    pub fn structure(&self) -> &KripkeStructure {
        self.ks
    }

    pub fn stats(&self) -> &RunStats {
        &self.stats
    }

    pub fn remove_trace(&self) -> &RemoveTrace {
        &self.trace
    }

    fn full(&self) -> bool {
        self.cfg.check_level == CheckLevel::Full
    }

    fn cheap(&self) -> bool {
        self.cfg.check_level >= CheckLevel::Cheap
    }

    /// Scratch vectors sized to the current block count.
    fn grow_scratch(&mut self) {
        let n = self.pr.num_blocks();
        self.block_stamp.resize(n, u32::MAX);
        self.parent_stamp.resize(n, u32::MAX);
        self.rescanned.resize(n, false);
    }

    pub(crate) fn has_pending_removes(&self) -> bool {
        self.pr.live().any(|c| !self.pr.block(c).remove.is_empty())
    }

    /// Runs the whole alternation to a partition- and relation-stable pair.
    pub fn run(mut self) -> Result<RunOutput, EngineError> {
        self.stabilize()?;
        Ok(self.finish())
    }

    /// Drives the pair to stability in place; `self.pr` then holds the
    /// simulation partition and its order.
    pub fn stabilize(&mut self) -> Result<(), EngineError> {
        self.initialize()?;
        self.pstabilize()?;
        let mut p_stable = self.rstabilize()?;
        let mut r_stable = true;
        let mut progress = self.progress_marker();
        while !(p_stable && r_stable) {
            if !p_stable {
                // remove entries left by the last relation pass keep the
                // relation unstable even when nothing was split
                r_stable = self.pstabilize()? && !self.has_pending_removes();
                p_stable = true;
            }
            if !r_stable {
                p_stable = self.rstabilize()?;
                r_stable = true;
            }
            if self.full() {
                let next = self.progress_marker();
                let advanced = next.0 > progress.0 || (next.0 == progress.0 && next.1 < progress.1);
                if !advanced && !(p_stable && r_stable) {
                    return Err(violation(
                        "driver iteration",
                        "neither the partition nor the relation shrank",
                    ));
                }
                progress = next;
            }
        }
        if self.cheap() {
            self.check_quiescent("termination")?;
        }
        if self.full() && !check_is_simulation_pr(self.ks, &self.pr) {
            return Err(violation("termination", "final pair is not a simulation"));
        }
        Ok(())
    }

    /// Extracts the result of a stabilized engine.
    pub fn finish(self) -> RunOutput {
        RunOutput {
            initial_blocks: self.ks.initial_label_partition().len(),
            result: self.pr.extract_result(),
            stats: self.stats,
            remove_trace: self.trace,
        }
    }

    /// `(|P|, |⊴|)`.
    fn progress_marker(&self) -> (usize, usize) {
        let pairs = self
            .pr
            .live()
            .map(|b| self.pr.rel.row(b).iter().filter(|&&v| v).count())
            .sum();
        (self.pr.num_blocks(), pairs)
    }
}

/// Computes the simulation preorder of `ks`.
///
/// With `check_level = Off` this cannot fail; checked modes report the
/// first broken invariant.
pub fn run_esim(ks: &KripkeStructure, cfg: EngineConfig) -> Result<RunOutput, EngineError> {
    Engine::new(ks, cfg).run()
}

/// Shorthand for an unchecked run without statistics.
pub fn simulation_preorder(ks: &KripkeStructure) -> SimulationResult {
    run_esim(ks, EngineConfig::default())
        .expect("unchecked runs cannot fail")
        .result
}

/// Pairs `(f, t)` for a split list: `f` keeps `B \ S`, `t` holds `B ∩ S`.
fn split_pairs(pr: &PartitionRelationPair, split: &[BlockId]) -> Vec<(BlockId, BlockId)> {
    split
        .iter()
        .map(|&f| (f, pr.block(f).brother.expect("split block without brother")))
        .collect()
}
