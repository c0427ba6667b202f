//! Table initialization and the incremental updates that follow a split.

use super::{split_pairs, violation, Engine, EngineError};
use crate::prcore::{BlockId, RemoveEntry};

impl Engine<'_> {
    /// Fills `bcount`, `pre_e` and `count` for the initial pair and seeds
    /// every remove list with `{ D | D ->∃ Σ, count(D, C) = 0 }`.
    pub fn initialize(&mut self) -> Result<(), EngineError> {
        let pr = &self.pr;
        for b in pr.live() {
            for x in pr.members(b) {
                for &y in self.ks.succ(x) {
                    self.aux.bcount.set(b, pr.block_of(y), true);
                }
            }
        }
        self.update_pre_e();

        for d in self.pr.live() {
            for &b in &self.pr.block(d).pre_e {
                for c in self.pr.live() {
                    if self.pr.rel.get(c, d) {
                        *self.aux.count.get_mut(b, c) += 1;
                    }
                }
            }
        }

        let mut has_succ = vec![false; self.pr.num_blocks()];
        for b in self.pr.live() {
            for &d in &self.pr.block(b).pre_e {
                has_succ[d.index()] = true;
            }
        }
        let stamp = self.pr.num_blocks() as u32;
        for c in self.pr.live() {
            let list: Vec<RemoveEntry> = self
                .pr
                .live()
                .filter(|&d| has_succ[d.index()] && self.aux.count.get(d, c) == 0)
                .map(|block| RemoveEntry { block, stamp })
                .collect();
            self.pr.block_mut(c).remove = list;
        }

        if self.full() {
            self.check_tables("initialize")?;
        }
        Ok(())
    }

    /// Extends `⊴` to the new blocks: `D ⊴' E` iff `parent(D) ⊴ parent(E)`.
    pub fn update_rel(&mut self, split: &[BlockId]) {
        let pairs = split_pairs(&self.pr, split);
        for &(f, t) in &pairs {
            self.pr.rel.copy_col(t, f);
        }
        for &(f, t) in &pairs {
            self.pr.rel.copy_row(t, f);
        }
    }

    /// Recomputes `bcount` for the rows and columns of split blocks; other
    /// entries are unaffected by the split.
    pub fn update_bcount(&mut self, split: &[BlockId]) {
        let n = self.pr.num_blocks();
        for (f, t) in split_pairs(&self.pr, split) {
            for h in [f, t] {
                self.aux
                    .bcount
                    .row_mut(h)
                    .iter_mut()
                    .for_each(|v| *v = false);
                for r in 0..n as u32 {
                    self.aux.bcount.set(BlockId(r), h, false);
                }
            }
        }
        for (x, y) in self.ks.transitions() {
            self.aux
                .bcount
                .set(self.pr.block_of(x), self.pr.block_of(y), true);
        }
    }

    /// Rebuilds every `pre_e` list from the transitions, duplicate-free and
    /// in block order.
    pub fn update_pre_e(&mut self) {
        self.grow_scratch();
        for b in self.pr.live() {
            self.pr.block_mut(b).pre_e.clear();
        }
        self.block_stamp.iter_mut().for_each(|s| *s = u32::MAX);
        for b in self.pr.live() {
            let begin = self.pr.block(b).begin;
            let end = self.pr.block(b).end;
            for p in begin..end {
                let x = self.pr.nodes()[p].state;
                for &y in self.ks.succ(x) {
                    let e = self.pr.block_of(y);
                    if self.block_stamp[e.index()] != b.0 {
                        self.block_stamp[e.index()] = b.0;
                        self.pr.block_mut(e).pre_e.push(b);
                    }
                }
            }
        }
    }

    /// The block holding `B ∩ S` starts with a copy of its brother's remove
    /// list.
    pub fn update_rem(&mut self, split: &[BlockId]) {
        for (f, t) in split_pairs(&self.pr, split) {
            let list = self.pr.block(f).remove.clone();
            self.pr.block_mut(t).remove = list;
        }
    }

    /// Drops `t ⊴ f` for every split pair. States of `t` reach `μ(C)` and
    /// states of `f` do not, so no state of `f` simulates one of `t`. This
    /// keeps `⊴` antisymmetric, which the refiner test relies on.
    ///
    /// `count(F, t)` loses one for every `F ->∃ f`; rows that reach zero
    /// join `t`'s remove list.
    pub fn unrelate_split_halves(&mut self, split: &[BlockId]) -> Result<(), EngineError> {
        let stamp = self.pr.num_blocks() as u32;
        for (f, t) in split_pairs(&self.pr, split) {
            self.pr.rel.set(t, f, false);
            for i in 0..self.pr.block(f).pre_e.len() {
                let g = self.pr.block(f).pre_e[i];
                let v = self.aux.count.get_mut(g, t);
                if *v == 0 {
                    return Err(violation(
                        "unrelate_split_halves",
                        format!("count({g}, {t}) underflow"),
                    ));
                }
                *v -= 1;
                if *v == 0 {
                    self.pr
                        .block_mut(t)
                        .remove
                        .push(RemoveEntry { block: g, stamp });
                }
            }
        }
        if self.full() {
            self.check_tables("unrelate_split_halves")?;
            self.check_partial_order("unrelate_split_halves")?;
        }
        Ok(())
    }

    /// Brings `count` up to date after a split.
    ///
    /// New rows and columns start as copies of the parent's. For each split
    /// block the smaller half `X` is recomputed from its own transitions and
    /// the larger half `Z` is corrected with the same scan: `count(Z, C)`
    /// drops by one for every old block reached from `X` that `Z` no longer
    /// reaches. Finally every row that is not recomputed gains one for
    /// `C ⊴ X` when it reaches both halves of a split block.
    ///
    /// A half whose entry `count(h, C)` drops to zero while the parent's was
    /// positive no longer reaches `μ(C)`; it is appended to `C`'s remove
    /// list.
    pub fn update_count(&mut self, split: &[BlockId]) -> Result<(), EngineError> {
        self.grow_scratch();
        self.block_stamp.iter_mut().for_each(|s| *s = u32::MAX);
        self.parent_stamp.iter_mut().for_each(|s| *s = u32::MAX);
        let pairs = split_pairs(&self.pr, split);
        let n = self.pr.num_blocks();
        for &(f, t) in &pairs {
            self.aux.count.copy_col(t, f);
        }
        for &(f, t) in &pairs {
            self.aux.count.copy_row(t, f);
        }
        let parent_rows: Vec<Vec<u32>> = pairs
            .iter()
            .map(|&(f, _)| self.aux.count.row(f).to_vec())
            .collect();

        let halves: Vec<(BlockId, BlockId)> = pairs
            .iter()
            .map(|&(f, t)| {
                if self.pr.block(f).size() <= self.pr.block(t).size() {
                    (f, t)
                } else {
                    (t, f)
                }
            })
            .collect();
        for &(x, _) in &halves {
            self.rescanned[x.index()] = true;
        }

        for (k, &(x, z)) in halves.iter().enumerate() {
            let tag = k as u32;
            self.aux.count.row_mut(x).iter_mut().for_each(|v| *v = 0);
            let (begin, end) = (self.pr.block(x).begin, self.pr.block(x).end);
            for p in begin..end {
                let s = self.pr.nodes()[p].state;
                if self.cfg.stats_enabled {
                    self.stats.smaller_half_state_scans[s.index()] += 1;
                }
                for &y in self.ks.succ(s) {
                    let e = self.pr.block_of(y);
                    if self.block_stamp[e.index()] != tag {
                        self.block_stamp[e.index()] = tag;
                        for c in 0..n as u32 {
                            let c = BlockId(c);
                            if self.pr.rel.get(c, e) {
                                *self.aux.count.get_mut(x, c) += 1;
                            }
                        }
                    }
                    let parent = self.pr.parent_of(e);
                    if self.parent_stamp[parent.index()] != tag {
                        self.parent_stamp[parent.index()] = tag;
                        let z_reaches = self.aux.bcount.get(z, parent)
                            || self
                                .pr
                                .block(parent)
                                .brother
                                .is_some_and(|b| self.aux.bcount.get(z, b));
                        if !z_reaches {
                            for c in 0..n as u32 {
                                let c = BlockId(c);
                                if self.pr.rel.get(c, parent) {
                                    let v = self.aux.count.get_mut(z, c);
                                    if *v == 0 {
                                        return Err(violation(
                                            "update_count",
                                            format!("count({z}, {c}) underflow"),
                                        ));
                                    }
                                    *v -= 1;
                                }
                            }
                        }
                    }
                }
            }
        }

        for &(x, z) in &halves {
            for d in self.pr.block(x).pre_e.clone() {
                if !self.rescanned[d.index()] && self.aux.bcount.get(d, z) {
                    for c in 0..n as u32 {
                        let c = BlockId(c);
                        if self.pr.rel.get(c, x) {
                            *self.aux.count.get_mut(d, c) += 1;
                        }
                    }
                }
            }
        }
        for &(x, _) in &halves {
            self.rescanned[x.index()] = false;
        }

        let stamp = n as u32;
        for (&(f, t), parent_row) in pairs.iter().zip(&parent_rows) {
            for h in [f, t] {
                for c in 0..n as u32 {
                    let c = BlockId(c);
                    if parent_row[c.index()] > 0 && self.aux.count.get(h, c) == 0 {
                        self.pr
                            .block_mut(c)
                            .remove
                            .push(RemoveEntry { block: h, stamp });
                    }
                }
            }
        }

        if self.cheap() {
            self.check_count_bound("update_count")?;
        }
        if self.full() {
            self.check_tables("update_count")?;
        }
        Ok(())
    }
}
