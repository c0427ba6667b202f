//! From-scratch recomputation of the engine tables and the order laws, used
//! by the checked modes.

use super::{violation, Engine, EngineError};
use crate::kripke::KripkeStructure;
use crate::prcore::{BlockId, GrowMatrix, PartitionRelationPair};

/// `bcount(B, E) = 1` iff `B ->∃ E`.
pub fn recompute_bcount(ks: &KripkeStructure, pr: &PartitionRelationPair) -> GrowMatrix<bool> {
    let mut m = GrowMatrix::new(pr.num_blocks());
    for (x, y) in ks.transitions() {
        m.set(pr.block_of(x), pr.block_of(y), true);
    }
    m
}

/// `count(B, C) = |{ E | C ⊴ E, B ->∃ E }|`.
pub fn recompute_count(pr: &PartitionRelationPair, bcount: &GrowMatrix<bool>) -> GrowMatrix<u32> {
    let n = pr.num_blocks();
    let mut m = GrowMatrix::new(n);
    for b in pr.live() {
        for c in pr.live() {
            let v = pr
                .live()
                .filter(|&e| pr.rel.get(c, e) && bcount.get(b, e))
                .count();
            m.set(b, c, v as u32);
        }
    }
    m
}

/// A block that `pre(μ(C))` meets without containing it.
fn cut_by_pre_mu(ks: &KripkeStructure, pr: &PartitionRelationPair, c: BlockId) -> Option<BlockId> {
    pr.live().find(|&b| {
        let mut hit = 0;
        for x in pr.members(b) {
            if ks.succ(x).iter().any(|&y| pr.rel.get(c, pr.block_of(y))) {
                hit += 1;
            }
        }
        hit > 0 && hit < pr.block(b).size()
    })
}

/// Evaluates the three conditions under which `⟨P, ⊴⟩` induces a
/// simulation: blocks related by `⊴` carry equal labels, `B ⊴ D` with
/// `B ->∃ C` implies `D ->∃ μ(C)`, and no `pre(μ(C))` cuts a block.
pub fn check_is_simulation_pr(ks: &KripkeStructure, pr: &PartitionRelationPair) -> bool {
    let first = |b: BlockId| pr.nodes()[pr.block(b).begin].state;
    for b in pr.live() {
        let label = ks.label(first(b));
        if pr.members(b).any(|x| ks.label(x) != label) {
            return false;
        }
    }
    let bcount = recompute_bcount(ks, pr);
    for b in pr.live() {
        for d in pr.live() {
            if !pr.rel.get(b, d) {
                continue;
            }
            if ks.label(first(b)) != ks.label(first(d)) {
                return false;
            }
            for c in pr.live() {
                if bcount.get(b, c) && !pr.live().any(|e| pr.rel.get(c, e) && bcount.get(d, e)) {
                    return false;
                }
            }
        }
    }
    pr.live().all(|c| cut_by_pre_mu(ks, pr, c).is_none())
}

impl Engine<'_> {
    /// `bcount`, `pre_e` and `count` agree with a recomputation and no remove
    /// list covers a block twice.
    pub(super) fn check_tables(&self, phase: &'static str) -> Result<(), EngineError> {
        let pr = &self.pr;
        let bcount = recompute_bcount(self.ks, pr);
        for b in pr.live() {
            for e in pr.live() {
                if bcount.get(b, e) != self.aux.bcount.get(b, e) {
                    return Err(violation(phase, format!("bcount({b}, {e}) is stale")));
                }
            }
        }
        for e in pr.live() {
            let expected: Vec<BlockId> = pr.live().filter(|&b| bcount.get(b, e)).collect();
            let mut actual = pr.block(e).pre_e.clone();
            actual.sort_unstable();
            if actual != expected || actual.len() != pr.block(e).pre_e.len() {
                return Err(violation(
                    phase,
                    format!("pre_e({e}) is {actual:?}, expected {expected:?}"),
                ));
            }
        }
        let count = recompute_count(pr, &bcount);
        for b in pr.live() {
            for c in pr.live() {
                let (want, got) = (count.get(b, c), self.aux.count.get(b, c));
                if want != got {
                    return Err(violation(
                        phase,
                        format!("count({b}, {c}) is {got}, expected {want}"),
                    ));
                }
            }
        }
        for c in pr.live() {
            let mut covered = Vec::new();
            for &e in &pr.block(c).remove {
                self.expand_remove_entry(e, &mut covered);
            }
            covered.sort_unstable();
            if covered.windows(2).any(|w| w[0] == w[1]) {
                return Err(violation(
                    phase,
                    format!("remove({c}) covers a block twice"),
                ));
            }
        }
        Ok(())
    }

    /// Every `count(B, C)` is at most `|P|`.
    pub(super) fn check_count_bound(&self, phase: &'static str) -> Result<(), EngineError> {
        let n = self.pr.num_blocks() as u32;
        for b in self.pr.live() {
            if let Some(v) = self.aux.count.row(b).iter().find(|&&v| v > n) {
                return Err(violation(
                    phase,
                    format!("count({b}, _) = {v} exceeds |P| = {n}"),
                ));
            }
        }
        Ok(())
    }

    /// `⊴` is reflexive and transitive.
    pub(super) fn check_preorder(&self, phase: &'static str) -> Result<(), EngineError> {
        self.check_quiescent(phase)?;
        let pr = &self.pr;
        for a in pr.live() {
            for b in pr.live().filter(|&b| pr.rel.get(a, b)) {
                if let Some(c) = pr.live().find(|&c| pr.rel.get(b, c) && !pr.rel.get(a, c)) {
                    return Err(violation(
                        phase,
                        format!("{a} ⊴ {b} ⊴ {c} but not {a} ⊴ {c}"),
                    ));
                }
            }
        }
        Ok(())
    }

    /// `⊴` is a partial order.
    pub(super) fn check_partial_order(&self, phase: &'static str) -> Result<(), EngineError> {
        self.check_preorder(phase)?;
        let pr = &self.pr;
        for a in pr.live() {
            if let Some(b) = pr
                .live()
                .find(|&b| b != a && pr.rel.get(a, b) && pr.rel.get(b, a))
            {
                return Err(violation(
                    phase,
                    format!("{a} and {b} are related both ways"),
                ));
            }
        }
        Ok(())
    }

    /// No `pre(μ(C))` cuts a block.
    pub(super) fn check_partition_stable(&self, phase: &'static str) -> Result<(), EngineError> {
        for c in self.pr.live() {
            if let Some(b) = cut_by_pre_mu(self.ks, &self.pr, c) {
                return Err(violation(phase, format!("pre(μ({c})) cuts {b}")));
            }
        }
        Ok(())
    }

    /// Blocks are non-empty and `⊴` is reflexive.
    pub(super) fn check_quiescent(&self, phase: &'static str) -> Result<(), EngineError> {
        for b in self.pr.live() {
            if self.pr.block(b).size() == 0 {
                return Err(violation(phase, format!("{b} is empty")));
            }
            if !self.pr.rel.get(b, b) {
                return Err(violation(phase, format!("{b} is not related to itself")));
            }
        }
        Ok(())
    }
}
