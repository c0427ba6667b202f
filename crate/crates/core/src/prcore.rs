//! The mutable partition-relation pair and its auxiliary tables.
//!
//! States live in one ordered array; every block owns a contiguous segment
//! `[begin, end)` of it. Block ids index three resizable square matrices
//! (the relation, `bcount` and `count`) and are never reused: when a block
//! is split, the old id keeps the part outside the splitter and a fresh id
//! is allocated for the part inside it.

use std::fmt;

use crate::kripke::{KripkeStructure, StateId};

/// Handle of a block; also its row/column in every block-indexed matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockId(pub u32);

impl BlockId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for BlockId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B{}", self.0)
    }
}

/// A square matrix that gains one row and one column per new block.
///
/// Stored as a resizable array of resizable arrays, so adding an entry is
/// amortized O(current dimension).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrowMatrix<T> {
    rows: Vec<Vec<T>>,
}

impl<T: Copy + Default> GrowMatrix<T> {
    pub fn new(dim: usize) -> Self {
        GrowMatrix {
            rows: vec![vec![T::default(); dim]; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Appends a default-filled row and column; returns the new index.
    pub fn add_entry(&mut self) -> usize {
        let n = self.rows.len();
        for row in &mut self.rows {
            row.push(T::default());
        }
        self.rows.push(vec![T::default(); n + 1]);
        n
    }

    #[inline]
    pub fn get(&self, r: BlockId, c: BlockId) -> T {
        self.rows[r.index()][c.index()]
    }

    #[inline]
    pub fn set(&mut self, r: BlockId, c: BlockId, v: T) {
        self.rows[r.index()][c.index()] = v;
    }

    #[inline]
    pub fn get_mut(&mut self, r: BlockId, c: BlockId) -> &mut T {
        &mut self.rows[r.index()][c.index()]
    }

    pub fn row(&self, r: BlockId) -> &[T] {
        &self.rows[r.index()]
    }

    pub fn row_mut(&mut self, r: BlockId) -> &mut [T] {
        &mut self.rows[r.index()]
    }

    pub fn copy_row(&mut self, dst: BlockId, src: BlockId) {
        if dst != src {
            let src_row = self.rows[src.index()].clone();
            self.rows[dst.index()].copy_from_slice(&src_row);
        }
    }

    pub fn copy_col(&mut self, dst: BlockId, src: BlockId) {
        for row in &mut self.rows {
            row[dst.index()] = row[src.index()];
        }
    }
}

/// Outcome of the last split pass for one block.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Intersection {
    /// Not split by the last splitter.
    #[default]
    Null,
    /// The part inside the splitter.
    Tt,
    /// The part outside the splitter.
    Ff,
}

/// An entry of a block's remove list.
///
/// `stamp` is the block count when the entry was appended. If `block` is
/// split afterwards, the entry stands for `block` together with every
/// block split off from it with id `>= stamp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RemoveEntry {
    pub block: BlockId,
    pub stamp: u32,
}

#[derive(Clone, Debug, Default)]
pub struct Block {
    pub begin: usize,
    pub end: usize,
    /// Scratch counter used by the candidate search.
    pub count: usize,
    pub intersection: Intersection,
    pub brother: Option<BlockId>,
    /// Blocks `D` with `D ->∃ self`, duplicate-free.
    pub pre_e: Vec<BlockId>,
    pub remove: Vec<RemoveEntry>,
    pub mark1: bool,
    pub mark2: bool,
    /// Blocks split off from this one, in creation order.
    pub children: Vec<BlockId>,
    cut: usize,
}

impl Block {
    #[inline]
    pub fn size(&self) -> usize {
        self.end - self.begin
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StateNode {
    pub state: StateId,
    pub block: BlockId,
    pub mark: bool,
}

/// Partition of the states into contiguous segments plus a relation on
/// blocks.
#[derive(Clone, Debug)]
pub struct PartitionRelationPair {
    nodes: Vec<StateNode>,
    pos: Vec<usize>,
    blocks: Vec<Block>,
    pub rel: GrowMatrix<bool>,
}

/// Block-indexed bookkeeping: `bcount(B, C) = [B ->∃ C]` and
/// `count(B, C) = #{ E | C ⊴ E and B ->∃ E }`.
#[derive(Clone, Debug)]
pub struct AuxTables {
    pub bcount: GrowMatrix<bool>,
    pub count: GrowMatrix<u32>,
}

impl AuxTables {
    pub fn new(num_blocks: usize) -> Self {
        AuxTables {
            bcount: GrowMatrix::new(num_blocks),
            count: GrowMatrix::new(num_blocks),
        }
    }
}

/// `⟨P_ℓ, id⟩`: one block per label class (ordered by smallest member),
/// identity relation, all scratch fields cleared.
pub fn init_pr(ks: &KripkeStructure) -> PartitionRelationPair {
    let classes = ks.initial_label_partition();
    let mut nodes = Vec::with_capacity(ks.num_states());
    let mut pos = vec![0; ks.num_states()];
    let mut blocks = Vec::with_capacity(classes.len());
    for (b, class) in classes.iter().enumerate() {
        let begin = nodes.len();
        for &s in class {
            pos[s.index()] = nodes.len();
            nodes.push(StateNode {
                state: s,
                block: BlockId(b as u32),
                mark: false,
            });
        }
        blocks.push(Block {
            begin,
            end: nodes.len(),
            ..Block::default()
        });
    }
    let mut rel = GrowMatrix::new(blocks.len());
    for b in 0..blocks.len() as u32 {
        rel.set(BlockId(b), BlockId(b), true);
    }
    PartitionRelationPair {
        nodes,
        pos,
        blocks,
        rel,
    }
}

impl PartitionRelationPair {
    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn num_states(&self) -> usize {
        self.nodes.len()
    }

    /// Live blocks in creation order. Blocks never die, so this is every id.
    pub fn live(&self) -> impl ExactSizeIterator<Item = BlockId> + Clone {
        (0..self.blocks.len() as u32).map(BlockId)
    }

    #[inline]
    pub fn block(&self, b: BlockId) -> &Block {
        &self.blocks[b.index()]
    }

    #[inline]
    pub fn block_mut(&mut self, b: BlockId) -> &mut Block {
        &mut self.blocks[b.index()]
    }

    #[inline]
    pub fn block_of(&self, s: StateId) -> BlockId {
        self.nodes[self.pos[s.index()]].block
    }

    pub fn nodes(&self) -> &[StateNode] {
        &self.nodes
    }

    #[inline]
    pub fn position(&self, s: StateId) -> usize {
        self.pos[s.index()]
    }

    #[inline]
    pub fn node_mut(&mut self, s: StateId) -> &mut StateNode {
        let p = self.pos[s.index()];
        &mut self.nodes[p]
    }

    /// States of `b` in segment order.
    pub fn members(&self, b: BlockId) -> impl Iterator<Item = StateId> + '_ {
        let blk = &self.blocks[b.index()];
        self.nodes[blk.begin..blk.end].iter().map(|n| n.state)
    }

    pub fn sorted_members(&self, b: BlockId) -> Vec<StateId> {
        let mut v: Vec<StateId> = self.members(b).collect();
        v.sort_unstable();
        v
    }

    #[inline]
    pub fn related(&self, b: BlockId, c: BlockId) -> bool {
        self.rel.get(b, c)
    }

    /// `μ(C)`: the union of all blocks `E` with `C ⊴ E`, sorted.
    pub fn mu_states(&self, c: BlockId) -> Vec<StateId> {
        let mut out: Vec<StateId> = self
            .live()
            .filter(|&e| self.rel.get(c, e))
            .flat_map(|e| self.members(e))
            .collect();
        out.sort_unstable();
        out
    }

    /// The block containing `s` before the last split, identified by the id
    /// that kept the outside part.
    #[inline]
    pub fn parent_of(&self, b: BlockId) -> BlockId {
        let blk = &self.blocks[b.index()];
        match (blk.intersection, blk.brother) {
            (Intersection::Tt, Some(brother)) => brother,
            _ => b,
        }
    }

    /// Replaces every block `B` by `B ∩ S` and `B \ S`.
    ///
    /// Returns the ids of the properly split blocks; each such id now holds
    /// `B \ S` (`Ff`) and its `brother` holds `B ∩ S` (`Tt`). Blocks inside
    /// or outside `S` keep `Null`. `s` must be duplicate-free.
    pub fn split(&mut self, s: &[StateId]) -> Vec<BlockId> {
        for blk in &mut self.blocks {
            blk.intersection = Intersection::Null;
            blk.brother = None;
        }
        let mut touched: Vec<BlockId> = Vec::new();
        for &x in s {
            let p = self.pos[x.index()];
            let b = self.nodes[p].block;
            let blk = &mut self.blocks[b.index()];
            if blk.intersection == Intersection::Null {
                blk.intersection = Intersection::Ff;
                blk.cut = blk.end;
                touched.push(b);
            }
            debug_assert!(p < blk.cut, "splitter contains a duplicate state");
            // move x to the back of the block, in front of the moved states
            blk.cut -= 1;
            let q = blk.cut;
            self.nodes.swap(p, q);
            self.pos[self.nodes[p].state.index()] = p;
            self.pos[self.nodes[q].state.index()] = q;
        }

        let mut split = Vec::with_capacity(touched.len());
        for b in touched {
            let (begin, cut, end) = {
                let blk = &self.blocks[b.index()];
                (blk.begin, blk.cut, blk.end)
            };
            if cut == begin {
                // B ⊆ S
                self.blocks[b.index()].intersection = Intersection::Null;
                continue;
            }
            let t = BlockId(self.blocks.len() as u32);
            self.blocks.push(Block {
                begin: cut,
                end,
                intersection: Intersection::Tt,
                brother: Some(b),
                ..Block::default()
            });
            for node in &mut self.nodes[cut..end] {
                node.block = t;
            }
            let blk = &mut self.blocks[b.index()];
            blk.end = cut;
            blk.brother = Some(t);
            blk.children.push(t);
            split.push(b);
        }
        split
    }

    /// Checks that the live segments tile the state array and that every
    /// node points at the block whose segment holds it.
    pub fn check_segments(&self) -> Result<(), String> {
        let mut order: Vec<(usize, usize, BlockId)> = self
            .live()
            .map(|b| (self.blocks[b.index()].begin, self.blocks[b.index()].end, b))
            .collect();
        order.sort_unstable();
        let mut next = 0;
        for (begin, end, b) in order {
            if begin != next || end <= begin {
                return Err(format!(
                    "segment of {b} is [{begin}, {end}), expected to start at {next}"
                ));
            }
            for p in begin..end {
                if self.nodes[p].block != b {
                    return Err(format!(
                        "state {} at position {p} points at {}, not {b}",
                        self.nodes[p].state, self.nodes[p].block
                    ));
                }
            }
            next = end;
        }
        if next != self.nodes.len() {
            return Err(format!(
                "segments cover {next} of {} positions",
                self.nodes.len()
            ));
        }
        for (p, node) in self.nodes.iter().enumerate() {
            if self.pos[node.state.index()] != p {
                return Err(format!("position index of state {} is stale", node.state));
            }
        }
        Ok(())
    }

    /// Deep copy into an immutable result with blocks ordered by smallest
    /// member.
    pub fn extract_result(&self) -> SimulationResult {
        let mut blocks: Vec<(Vec<StateId>, BlockId)> =
            self.live().map(|b| (self.sorted_members(b), b)).collect();
        blocks.sort_unstable_by_key(|(members, _)| members[0]);
        let leq = blocks
            .iter()
            .map(|(_, b)| blocks.iter().map(|(_, c)| self.rel.get(*b, *c)).collect())
            .collect();
        let mut block_of = vec![0; self.num_states()];
        for (i, (members, _)) in blocks.iter().enumerate() {
            for s in members {
                block_of[s.index()] = i;
            }
        }
        SimulationResult {
            partition: blocks.into_iter().map(|(m, _)| m).collect(),
            leq,
            block_of,
        }
    }
}

/// Grows every block-indexed matrix by one entry per new block.
pub fn add_block_entries(pr: &mut PartitionRelationPair, aux: &mut AuxTables, new_blocks: usize) {
    for _ in 0..new_blocks {
        pr.rel.add_entry();
        aux.bcount.add_entry();
        aux.count.add_entry();
    }
    debug_assert_eq!(pr.rel.dim(), pr.num_blocks());
}

/// Final simulation partition with the partial order on its blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimulationResult {
    /// Blocks as sorted state lists, ordered by smallest member.
    pub partition: Vec<Vec<StateId>>,
    /// `leq[i][j]` iff block `i` is simulated by block `j`.
    pub leq: Vec<Vec<bool>>,
    block_of: Vec<usize>,
}

impl SimulationResult {
    pub fn from_parts(partition: Vec<Vec<StateId>>, leq: Vec<Vec<bool>>) -> Self {
        let n = partition.iter().map(Vec::len).sum();
        let mut block_of = vec![0; n];
        for (i, members) in partition.iter().enumerate() {
            for s in members {
                block_of[s.index()] = i;
            }
        }
        SimulationResult {
            partition,
            leq,
            block_of,
        }
    }

    pub fn num_blocks(&self) -> usize {
        self.partition.len()
    }

    pub fn block_index(&self, s: StateId) -> usize {
        self.block_of[s.index()]
    }

    /// `s ≤ t`: `t` simulates `s`.
    pub fn simulated_by(&self, s: StateId, t: StateId) -> bool {
        self.leq[self.block_of[s.index()]][self.block_of[t.index()]]
    }

    /// Non-diagonal order pairs `(i, j)` with block `i` ⊴ block `j`.
    pub fn order_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, row) in self.leq.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v && i != j {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Mutable access for harness self-tests that corrupt a result.
    pub fn leq_mut(&mut self) -> &mut Vec<Vec<bool>> {
        &mut self.leq
    }
}
