//! Shared tree machinery for the interval feasibility ranges, the
//! independent-constraint dynamic program, and the lower-extension matroid.
//!
//! The laminar tree is normalized before any dynamic programming: every
//! internal node whose children do not cover its whole extent gets an
//! artificial unconstrained leaf holding the uncovered candidates. After
//! normalization the children of an internal node partition its extent, which
//! is what makes the bottom-up recurrences exact.

use crate::labels::LaminarTree;
use crate::model::{CandidateId, LabelId};

/// One node of the normalized tree.
#[derive(Debug, Clone)]
pub(crate) struct SkelNode {
    /// Original label, `None` for the root and artificial leaves.
    pub label: Option<LabelId>,
    pub children: Vec<usize>,
    /// Sorted extent; for leaves this is the pool candidates are picked from.
    pub extent: Vec<CandidateId>,
    /// Interval bound folded in: root is pinned to `[k, k]`, artificial
    /// leaves and unconstrained labels are `[0, extent-size-or-m]`.
    pub lo: usize,
    pub hi: usize,
}

impl SkelNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

/// Normalized, bound-annotated laminar tree. Node 0 is the root.
#[derive(Debug, Clone)]
pub(crate) struct Skeleton {
    pub nodes: Vec<SkelNode>,
}

impl Skeleton {
    /// Builds the skeleton from a laminar tree and per-label interval bounds
    /// (indexed by label id; `None` means unconstrained). The root bound is
    /// pinned to `[k, k]`.
    pub fn new(tree: &LaminarTree, bounds: &[Option<(usize, usize)>], k: usize) -> Skeleton {
        let m = tree.node(tree.root()).extent.len();
        let mut nodes: Vec<SkelNode> = tree
            .nodes()
            .iter()
            .map(|n| {
                let (lo, hi) = match n.label {
                    Some(l) => bounds[l.idx()].unwrap_or((0, m)),
                    None => (k, k),
                };
                SkelNode {
                    label: n.label,
                    children: n.children.clone(),
                    extent: n.extent.clone(),
                    lo,
                    hi,
                }
            })
            .collect();
        // Artificial leaves: catch candidates of an internal node not covered
        // by any child.
        for idx in 0..nodes.len() {
            if nodes[idx].children.is_empty() {
                continue;
            }
            let mut covered: Vec<CandidateId> = nodes[idx]
                .children
                .iter()
                .flat_map(|&c| nodes[c].extent.iter().copied())
                .collect();
            covered.sort_unstable();
            covered.dedup();
            let exclusive: Vec<CandidateId> = nodes[idx]
                .extent
                .iter()
                .copied()
                .filter(|c| covered.binary_search(c).is_err())
                .collect();
            if !exclusive.is_empty() {
                let leaf = nodes.len();
                nodes.push(SkelNode {
                    label: None,
                    children: Vec::new(),
                    extent: exclusive,
                    lo: 0,
                    hi: m,
                });
                nodes[idx].children.push(leaf);
            }
        }
        Skeleton { nodes }
    }

    /// Node indices in an order where children precede parents.
    pub fn postorder(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(0usize, false)];
        while let Some((v, expanded)) = stack.pop() {
            if expanded {
                order.push(v);
            } else {
                stack.push((v, true));
                for &c in &self.nodes[v].children {
                    stack.push((c, false));
                }
            }
        }
        order
    }

    /// `[A1, A2]` per node: the achievable sizes of sub-committees under each
    /// node satisfying every constraint in its subtree. `None` marks nodes
    /// with no satisfying sub-committee at all. When `forced` is given,
    /// sub-committees must additionally contain the forced candidates
    /// assigned to each leaf's pool.
    pub fn ranges(&self, forced: Option<&[CandidateId]>) -> Vec<Option<(usize, usize)>> {
        let mut forced_in_pool = vec![0usize; self.nodes.len()];
        if let Some(forced) = forced {
            for (idx, node) in self.nodes.iter().enumerate() {
                if node.is_leaf() {
                    forced_in_pool[idx] = forced
                        .iter()
                        .filter(|c| node.extent.binary_search(c).is_ok())
                        .count();
                }
            }
        }
        let mut ranges: Vec<Option<(usize, usize)>> = vec![None; self.nodes.len()];
        for idx in self.postorder() {
            let node = &self.nodes[idx];
            ranges[idx] = if node.is_leaf() {
                let lo = node.lo.max(forced_in_pool[idx]);
                let hi = node.hi.min(node.extent.len());
                (lo <= hi).then_some((lo, hi))
            } else {
                let mut sum_lo = 0usize;
                let mut sum_hi = 0usize;
                let mut ok = true;
                for &c in &node.children {
                    match ranges[c] {
                        Some((lo, hi)) => {
                            sum_lo += lo;
                            sum_hi += hi;
                        }
                        None => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    let lo = sum_lo.max(node.lo);
                    let hi = sum_hi.min(node.hi).min(node.extent.len());
                    (lo <= hi).then_some((lo, hi))
                } else {
                    None
                }
            };
        }
        ranges
    }

    /// Whether `target` members can be chosen under the root subject to all
    /// bounds; the root pin makes this the committee-feasibility test.
    #[cfg(test)]
    pub fn feasible(&self, target: usize) -> bool {
        match self.ranges(None)[0] {
            Some((lo, hi)) => lo <= target && target <= hi,
            None => false,
        }
    }

    /// Whether some committee satisfying all bounds contains every candidate
    /// in `forced` (which must be sorted). This is exactly membership of
    /// `forced` in the lower extension of the committee family.
    pub fn extendable(&self, forced: &[CandidateId]) -> bool {
        debug_assert!(forced.windows(2).all(|w| w[0] < w[1]));
        match self.ranges(Some(forced))[0] {
            Some((lo, hi)) => {
                let target = self.nodes[0].lo; // root pinned to [k, k]
                lo <= target && target <= hi
            }
            None => false,
        }
    }

    /// Builds a committee of exactly `target` members satisfying all bounds,
    /// assuming `ranges = self.ranges(None)` admits it. Each node allocates
    /// its children their minimum feasible count, hands out the remainder
    /// left to right, and leaves take lowest-index candidates from their
    /// pools, so the construction is deterministic.
    pub fn fill(
        &self,
        ranges: &[Option<(usize, usize)>],
        node: usize,
        target: usize,
        out: &mut Vec<CandidateId>,
    ) {
        let n = &self.nodes[node];
        let (lo, hi) = ranges[node].expect("fill on infeasible node");
        debug_assert!(lo <= target && target <= hi);
        if n.is_leaf() {
            out.extend(n.extent.iter().copied().take(target));
            return;
        }
        let child_ranges: Vec<(usize, usize)> =
            n.children.iter().map(|&c| ranges[c].unwrap()).collect();
        let min_total: usize = child_ranges.iter().map(|r| r.0).sum();
        debug_assert!(min_total <= target);
        let mut extra = target - min_total;
        for (i, &c) in n.children.iter().enumerate() {
            let (clo, chi) = child_ranges[i];
            let take = clo + extra.min(chi - clo);
            extra -= take - clo;
            self.fill(ranges, c, take, out);
        }
        debug_assert_eq!(extra, 0, "remainder must be distributable");
    }

    /// Per-candidate lists of node indices whose extent contains the
    /// candidate; used for fast count checks.
    pub fn candidate_nodes(&self, m: usize) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); m];
        for (idx, node) in self.nodes.iter().enumerate() {
            for &c in &node.extent {
                out[c.idx()].push(idx as u32);
            }
        }
        out
    }
}
