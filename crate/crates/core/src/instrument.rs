//! Operation counters collected during a run, and the laws they must obey.

use serde::Serialize;

use crate::kripke::StateId;

/// Counters for one engine run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RunStats {
    /// Split passes that properly split at least one block.
    pub splits_total: u64,
    /// Both halves of every split block count as new: two per split block.
    pub new_blocks_total: u64,
    pub prefiner_calls: u64,
    /// Null answers given while every remove list was empty, so that the
    /// pair was both partition and relation stable.
    pub findprefiner_null_returns: u64,
    /// All null answers, one per partition-stabilization call.
    pub findprefiner_null_total: u64,
    pub pstabilize_calls: u64,
    pub rstabilize_calls: u64,
    /// Per state: how often it belonged to the smaller half rescanned when
    /// its block was split.
    pub smaller_half_state_scans: Vec<u32>,
    /// Remove-list blocks visited by relation stabilization.
    pub remove_elements_total: u64,
    pub pairs_removed_total: u64,
}

impl RunStats {
    pub fn new(num_states: usize) -> Self {
        RunStats {
            smaller_half_state_scans: vec![0; num_states],
            ..RunStats::default()
        }
    }

    pub fn max_smaller_half_scans(&self) -> u32 {
        self.smaller_half_state_scans
            .iter()
            .copied()
            .max()
            .unwrap_or(0)
    }

    /// Flat `key=value` lines, one counter per line.
    pub fn to_key_value(&self) -> String {
        format!(
            "splits_total={}\nnew_blocks_total={}\nprefiner_calls={}\nfindprefiner_null_returns={}\n\
             findprefiner_null_total={}\npstabilize_calls={}\nrstabilize_calls={}\n\
             smaller_half_max_scans={}\nremove_elements_total={}\npairs_removed_total={}\n",
            self.splits_total,
            self.new_blocks_total,
            self.prefiner_calls,
            self.findprefiner_null_returns,
            self.findprefiner_null_total,
            self.pstabilize_calls,
            self.rstabilize_calls,
            self.max_smaller_half_scans(),
            self.remove_elements_total,
            self.pairs_removed_total,
        )
    }
}

/// One block selected by relation stabilization, with the states covered
/// by its remove snapshot at that moment.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RemoveSelection {
    /// Index of the relation-stabilization call (0-based).
    pub call: u32,
    pub block: Vec<StateId>,
    pub removed: Vec<StateId>,
}

pub type RemoveTrace = Vec<RemoveSelection>;

/// `new_blocks_total == 2 (|P_sim| - |P_ℓ|)`.
pub fn assert_block_bound(stats: &RunStats, p_ell_size: usize, p_sim_size: usize) -> bool {
    p_sim_size >= p_ell_size && stats.new_blocks_total == 2 * (p_sim_size - p_ell_size) as u64
}

/// `⌈log₂ n⌉`, with `ceil_log2(0) = ceil_log2(1) = 0`.
pub fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// Every state was in a rescanned smaller half at most `⌈log₂ n⌉` times.
pub fn assert_smaller_half_bound(stats: &RunStats, n_states: usize) -> bool {
    let bound = ceil_log2(n_states);
    stats.smaller_half_state_scans.iter().all(|&c| c <= bound)
}

fn is_subset(small: &[StateId], big: &[StateId]) -> bool {
    let mut it = big.iter();
    small.iter().all(|s| it.by_ref().any(|b| b == s))
}

fn disjoint(a: &[StateId], b: &[StateId]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return false,
        }
    }
    true
}

/// For selections made in different calls whose blocks are nested (or
/// equal), the remove snapshots cover disjoint state sets. All state lists
/// in the trace are sorted.
pub fn assert_remove_disjointness(trace: &[RemoveSelection]) -> bool {
    first_remove_overlap(trace).is_none()
}

/// The first offending pair of trace indices, if any.
pub fn first_remove_overlap(trace: &[RemoveSelection]) -> Option<(usize, usize)> {
    for (i, a) in trace.iter().enumerate() {
        for (j, b) in trace.iter().enumerate().skip(i + 1) {
            if a.call == b.call {
                continue;
            }
            let nested = is_subset(&b.block, &a.block) || is_subset(&a.block, &b.block);
            if nested && !disjoint(&a.removed, &b.removed) {
                return Some((i, j));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(v: &[u32]) -> Vec<StateId> {
        v.iter().map(|&s| StateId(s)).collect()
    }

    #[test]
    fn log2_ceiling() {
        assert_eq!(
            [0, 1, 2, 3, 4, 5, 8, 9, 5000].map(ceil_log2),
            [0, 0, 1, 2, 2, 3, 3, 4, 13]
        );
    }

    #[test]
    fn block_bound() {
        let mut stats = RunStats::new(2);
        assert!(assert_block_bound(&stats, 3, 3));
        stats.new_blocks_total = 2;
        assert!(assert_block_bound(&stats, 1, 2));
        assert!(!assert_block_bound(&stats, 1, 3));
    }

    #[test]
    fn smaller_half_bound() {
        let mut stats = RunStats::new(2);
        assert!(assert_smaller_half_bound(&stats, 2));
        stats.smaller_half_state_scans[0] = 1;
        assert!(assert_smaller_half_bound(&stats, 2));
        stats.smaller_half_state_scans[0] = 2;
        assert!(!assert_smaller_half_bound(&stats, 2));
    }

    #[test]
    fn disjointness() {
        let sel = |call, block: &[u32], removed: &[u32]| RemoveSelection {
            call,
            block: ids(block),
            removed: ids(removed),
        };
        assert!(assert_remove_disjointness(&[
            sel(0, &[0, 1], &[2]),
            sel(0, &[0, 1], &[2])
        ]));
        assert!(assert_remove_disjointness(&[
            sel(0, &[0, 1], &[2]),
            sel(1, &[0], &[3])
        ]));
        assert!(!assert_remove_disjointness(&[
            sel(0, &[0, 1], &[2, 3]),
            sel(1, &[1], &[3])
        ]));
        // unrelated blocks may share removed states
        assert!(assert_remove_disjointness(&[
            sel(0, &[0], &[2]),
            sel(1, &[1], &[2])
        ]));
    }

    #[test]
    fn key_value_block() {
        let kv = RunStats::new(1).to_key_value();
        assert!(kv.lines().all(|l| l.split_once('=').is_some()));
        assert!(kv.contains("new_blocks_total=0\n"));
    }
}
