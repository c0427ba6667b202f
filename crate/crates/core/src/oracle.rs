//! Brute-force greatest-fixpoint computation of the simulation preorder.
//!
//! Slow on purpose: `O(|Σ|⁴ · |→|)` in the worst case. Used as the reference
//! the engine is tested against, so it shares no code with it beyond the
//! structure type.

use thiserror::Error;

use crate::kripke::{KripkeStructure, StateId};
use crate::prcore::SimulationResult;

/// Largest state count the test harnesses feed to the oracle.
pub const ORACLE_MAX_STATES: usize = 64;

/// A binary relation on states as a dense boolean matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateRelation {
    n: usize,
    matrix: Vec<bool>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("relation is not reflexive at state {0}")]
    NotReflexive(StateId),
    #[error("relation is not transitive: ({0}, {1}) and ({1}, {2}) but not ({0}, {2})")]
    NotTransitive(StateId, StateId, StateId),
}

impl StateRelation {
    pub fn empty(n: usize) -> Self {
        StateRelation {
            n,
            matrix: vec![false; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut r = StateRelation::empty(n);
        for s in 0..n {
            r.matrix[s * n + s] = true;
        }
        r
    }

    pub fn full(n: usize) -> Self {
        StateRelation {
            n,
            matrix: vec![true; n * n],
        }
    }

    pub fn num_states(&self) -> usize {
        self.n
    }

    pub fn get(&self, s: StateId, t: StateId) -> bool {
        self.matrix[s.index() * self.n + t.index()]
    }

    pub fn set(&mut self, s: StateId, t: StateId, v: bool) {
        self.matrix[s.index() * self.n + t.index()] = v;
    }

    /// All pairs in row-major order.
    pub fn pairs(&self) -> Vec<(StateId, StateId)> {
        let n = self.n as u32;
        (0..n)
            .flat_map(|s| (0..n).map(move |t| (StateId(s), StateId(t))))
            .filter(|&(s, t)| self.get(s, t))
            .collect()
    }

    /// `s ≤ t` iff `t`'s block is above `s`'s block in `result`.
    pub fn from_result(result: &SimulationResult, n: usize) -> Self {
        let mut r = StateRelation::empty(n);
        for s in 0..n as u32 {
            for t in 0..n as u32 {
                r.set(
                    StateId(s),
                    StateId(t),
                    result.simulated_by(StateId(s), StateId(t)),
                );
            }
        }
        r
    }

    /// The first pair (row-major) on which the relations disagree.
    pub fn first_difference(&self, other: &StateRelation) -> Option<(StateId, StateId)> {
        assert_eq!(self.n, other.n, "relations over different state counts");
        let i = self
            .matrix
            .iter()
            .zip(&other.matrix)
            .position(|(a, b)| a != b)?;
        Some((StateId((i / self.n) as u32), StateId((i % self.n) as u32)))
    }

    pub fn check_preorder(&self) -> Result<(), OracleError> {
        let n = self.n as u32;
        for s in (0..n).map(StateId) {
            if !self.get(s, s) {
                return Err(OracleError::NotReflexive(s));
            }
        }
        for s in (0..n).map(StateId) {
            for t in (0..n).map(StateId).filter(|&t| self.get(s, t)) {
                if let Some(u) = (0..n)
                    .map(StateId)
                    .find(|&u| self.get(t, u) && !self.get(s, u))
                {
                    return Err(OracleError::NotTransitive(s, t, u));
                }
            }
        }
        Ok(())
    }
}

/// `(s, t)` is kept iff every move of `s` is matched by a move of `t`
/// within the current relation.
fn matched(ks: &KripkeStructure, r: &StateRelation, s: StateId, t: StateId) -> bool {
    ks.succ(s)
        .iter()
        .all(|&s1| ks.succ(t).iter().any(|&t1| r.get(s1, t1)))
}

/// The largest simulation on `ks`: start from equal labels and drop
/// unmatched pairs until nothing changes.
pub fn brute_force_simulation(ks: &KripkeStructure) -> StateRelation {
    let n = ks.num_states();
    let mut r = StateRelation::empty(n);
    for s in ks.states() {
        for t in ks.states() {
            r.set(s, t, ks.label(s) == ks.label(t));
        }
    }
    loop {
        let mut next = r.clone();
        for (s, t) in r.pairs() {
            if !matched(ks, &r, s, t) {
                next.set(s, t, false);
            }
        }
        if next == r {
            return r;
        }
        r = next;
    }
}

/// Whether `r` is a simulation on `ks`.
pub fn is_simulation(ks: &KripkeStructure, r: &StateRelation) -> bool {
    r.pairs()
        .into_iter()
        .all(|(s, t)| ks.label(s) == ks.label(t) && matched(ks, r, s, t))
}

/// Equivalence classes of `r ∩ r⁻¹` ordered by smallest member, with the
/// induced order on classes.
pub fn simulation_partition(r: &StateRelation) -> Result<SimulationResult, OracleError> {
    r.check_preorder()?;
    let n = r.num_states();
    let mut class_of: Vec<Option<usize>> = vec![None; n];
    let mut blocks: Vec<Vec<StateId>> = Vec::new();
    for s in (0..n as u32).map(StateId) {
        if class_of[s.index()].is_some() {
            continue;
        }
        let members: Vec<StateId> = (s.0..n as u32)
            .map(StateId)
            .filter(|&t| r.get(s, t) && r.get(t, s))
            .collect();
        for t in &members {
            class_of[t.index()] = Some(blocks.len());
        }
        blocks.push(members);
    }
    let leq = blocks
        .iter()
        .map(|b| blocks.iter().map(|c| r.get(b[0], c[0])).collect())
        .collect();
    Ok(SimulationResult::from_parts(blocks, leq))
}

/// The first state pair on which `result` disagrees with the oracle.
pub fn compare_with_oracle(
    ks: &KripkeStructure,
    result: &SimulationResult,
) -> Option<(StateId, StateId)> {
    let expected = brute_force_simulation(ks);
    StateRelation::from_result(result, ks.num_states()).first_difference(&expected)
}
