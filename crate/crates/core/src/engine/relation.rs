//! Relation stabilization driven by the remove lists.

use super::{violation, Engine, EngineError};
use crate::instrument::RemoveSelection;
use crate::kripke::StateId;
use crate::prcore::{BlockId, GrowMatrix, RemoveEntry};

impl Engine<'_> {
    /// Current blocks covered by a remove entry: the block itself and every
    /// block split off from it since the entry was made.
    pub fn expand_remove_entry(&self, entry: RemoveEntry, out: &mut Vec<BlockId>) {
        let mut stack = vec![entry.block];
        while let Some(d) = stack.pop() {
            out.push(d);
            for &c in self.pr.block(d).children.iter().rev() {
                if c.0 < entry.stamp {
                    break;
                }
                stack.push(c);
            }
        }
    }

    /// One pass over the remove lists snapshotted at entry: for every `C`
    /// with a non-empty snapshot, `B ∈ C.pre_e` and `D` in the snapshot,
    /// drops `B ⊴ D` and updates `count(F, B)` for `F ->∃ D`. Entries whose
    /// count reaches zero go to `remove(B)` for the next pass.
    ///
    /// Returns `true` iff no pair was removed.
    pub fn rstabilize(&mut self) -> Result<bool, EngineError> {
        let call = self.rstabilize_calls;
        self.rstabilize_calls += 1;
        if self.cfg.stats_enabled {
            self.stats.rstabilize_calls += 1;
        }
        let old_remove: Vec<Vec<RemoveEntry>> = self
            .pr
            .live()
            .map(|c| std::mem::take(&mut self.pr.block_mut(c).remove))
            .collect();
        let rel_in = self.full().then(|| self.pr.rel.clone());
        let stamp = self.pr.num_blocks() as u32;
        let mut removed = false;
        let mut targets: Vec<BlockId> = Vec::new();

        for c in self.pr.live() {
            let entries = &old_remove[c.index()];
            if entries.is_empty() {
                continue;
            }
            targets.clear();
            for &entry in entries {
                self.expand_remove_entry(entry, &mut targets);
            }
            if self.cfg.stats_enabled {
                self.stats.remove_elements_total += targets.len() as u64;
                let mut states: Vec<StateId> =
                    targets.iter().flat_map(|&d| self.pr.members(d)).collect();
                states.sort_unstable();
                self.trace.push(RemoveSelection {
                    call,
                    block: self.pr.sorted_members(c),
                    removed: states,
                });
            }

            for bi in 0..self.pr.block(c).pre_e.len() {
                let b = self.pr.block(c).pre_e[bi];
                for &d in &targets {
                    if !self.pr.rel.get(b, d) {
                        continue;
                    }
                    self.pr.rel.set(b, d, false);
                    removed = true;
                    if self.cfg.stats_enabled {
                        self.stats.pairs_removed_total += 1;
                    }
                    for fi in 0..self.pr.block(d).pre_e.len() {
                        let f = self.pr.block(d).pre_e[fi];
                        let v = self.aux.count.get_mut(f, b);
                        if *v == 0 {
                            return Err(violation(
                                "rstabilize",
                                format!("count({f}, {b}) underflow"),
                            ));
                        }
                        *v -= 1;
                        if *v == 0 {
                            self.pr
                                .block_mut(b)
                                .remove
                                .push(RemoveEntry { block: f, stamp });
                        }
                    }
                }
            }

            if self.full() {
                self.check_tables("rstabilize iteration")?;
                self.check_remove_invariant(rel_in.as_ref().expect("snapshot taken in full mode"))?;
            }
        }

        if self.full() {
            self.check_partial_order("rstabilize")?;
        }
        if self.cheap() {
            self.check_quiescent("rstabilize")?;
        }
        Ok(!removed)
    }

    /// `remove(C) = { D | D ->∃ μ_in(C), D not->∃ μ(C) }` for every `C`.
    fn check_remove_invariant(&self, rel_in: &GrowMatrix<bool>) -> Result<(), EngineError> {
        let pr = &self.pr;
        for c in pr.live() {
            let mut actual: Vec<BlockId> = Vec::new();
            for &e in &pr.block(c).remove {
                self.expand_remove_entry(e, &mut actual);
            }
            actual.sort_unstable();
            let len = actual.len();
            actual.dedup();
            if actual.len() != len {
                return Err(violation(
                    "rstabilize iteration",
                    format!("remove({c}) has duplicates"),
                ));
            }
            let reaches = |d: BlockId, rel: &GrowMatrix<bool>| {
                pr.live()
                    .any(|e| rel.get(c, e) && self.aux.bcount.get(d, e))
            };
            let expected: Vec<BlockId> = pr
                .live()
                .filter(|&d| reaches(d, rel_in) && !reaches(d, &pr.rel))
                .collect();
            if actual != expected {
                return Err(violation(
                    "rstabilize iteration",
                    format!("remove({c}) is {actual:?}, expected {expected:?}"),
                ));
            }
        }
        Ok(())
    }
}
