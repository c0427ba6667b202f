//! Partition stabilization: refiner search, splitter computation and the
//! split-and-update loop.

use super::{violation, Engine, EngineError};
use crate::kripke::StateId;
use crate::prcore::{add_block_entries, BlockId};

impl Engine<'_> {
    /// Blocks `C` with `1 <= |B ∩ pre(C)| < |B|`. On return `C.count`
    /// holds `|B ∩ pre(C)|` for every candidate and all marks are clear.
    pub fn post_candidates(&mut self, b: BlockId) -> Vec<BlockId> {
        let ks = self.ks;
        let pr = &mut self.pr;
        let mut p: Vec<BlockId> = Vec::new();
        let mut per_state: Vec<BlockId> = Vec::new();
        let (begin, end) = (pr.block(b).begin, pr.block(b).end);
        for pos in begin..end {
            let x = pr.nodes()[pos].state;
            for &y in ks.succ(x) {
                let c = pr.block_of(y);
                let blk = pr.block_mut(c);
                if !blk.mark1 {
                    blk.mark1 = true;
                    blk.count = 0;
                    p.push(c);
                }
                if !blk.mark2 {
                    blk.mark2 = true;
                    blk.count += 1;
                    per_state.push(c);
                }
            }
            for c in per_state.drain(..) {
                pr.block_mut(c).mark2 = false;
            }
        }
        let size = pr.block(b).size();
        p.retain(|&c| {
            let blk = pr.block_mut(c);
            blk.mark1 = false;
            blk.count < size
        });
        p
    }

    /// A block `C` such that some `B` has `B ->∃ C`, reaches no `C' ▷ C`
    /// and is not contained in `pre(C)`; `None` when the pair is partition
    /// stable. Blocks are scanned in creation order.
    pub fn find_prefiner(&mut self) -> Option<BlockId> {
        if self.cfg.stats_enabled {
            self.stats.prefiner_calls += 1;
        }
        for b in self.pr.live() {
            for c in self.post_candidates(b) {
                if self.aux.count.get(b, c) == 1 {
                    return Some(c);
                }
            }
        }
        None
    }

    /// `pre(μ(C))` in ascending state order.
    pub fn pre_mu(&self, c: BlockId) -> Vec<StateId> {
        let pr = &self.pr;
        self.ks
            .states()
            .filter(|&x| {
                self.ks
                    .succ(x)
                    .iter()
                    .any(|&y| pr.rel.get(c, pr.block_of(y)))
            })
            .collect()
    }

    /// Splits with `pre(μ(C))` for partition refiners `C` until none is left.
    /// Returns `true` iff nothing was split.
    pub fn pstabilize(&mut self) -> Result<bool, EngineError> {
        if self.cfg.stats_enabled {
            self.stats.pstabilize_calls += 1;
        }
        let mut any_split = false;
        while let Some(c) = self.find_prefiner() {
            let s = self.pre_mu(c);
            let split = self.pr.split(&s);
            if split.is_empty() {
                return Err(violation(
                    "split",
                    format!("refiner {c} did not split any block"),
                ));
            }
            any_split = true;
            add_block_entries(&mut self.pr, &mut self.aux, split.len());
            self.update_rel(&split);
            self.update_bcount(&split);
            self.update_pre_e();
            self.update_rem(&split);
            self.update_count(&split)?;
            self.unrelate_split_halves(&split)?;
            if self.cfg.stats_enabled {
                self.stats.splits_total += 1;
                self.stats.new_blocks_total += 2 * split.len() as u64;
            }
            if self.cheap() {
                self.pr
                    .check_segments()
                    .map_err(|d| violation("split", d))?;
            }
        }
        if self.cfg.stats_enabled {
            self.stats.findprefiner_null_total += 1;
            if !self.has_pending_removes() {
                self.stats.findprefiner_null_returns += 1;
            }
        }
        if self.full() {
            self.check_partial_order("pstabilize")?;
            self.check_partition_stable("pstabilize")?;
        }
        if self.cheap() {
            self.check_quiescent("pstabilize")?;
        }
        Ok(!any_split)
    }
}
