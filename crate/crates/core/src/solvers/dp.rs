//! The two tree dynamic programs: exact winner determination for independent
//! constraints on 1-laminar labelings, and linear-time interval feasibility
//! ranges.

use crate::labels::LaminarTree;
use crate::model::{
    CandidateId, Committee, CountSet, DiversitySpec, Instance, SolveReport, SolveStatus,
};
use crate::solvers::tree::Skeleton;
use crate::solvers::SolveError;

pub(crate) const DP_ALGORITHM: &str = "dp-independent-1laminar";
pub(crate) const FEASIBILITY_ALGORITHM: &str = "feasibility-interval-1laminar";

fn inapplicable(algorithm: &'static str, requirement: impl Into<String>) -> SolveError {
    SolveError::Inapplicable {
        algorithm,
        requirement: requirement.into(),
    }
}

fn build_tree(instance: &Instance, algorithm: &'static str) -> Result<LaminarTree, SolveError> {
    LaminarTree::build_full(instance.labeling())
        .map_err(|e| inapplicable(algorithm, format!("1-laminar labeling required ({e})")))
}

/// One DP cell: the best sub-committee of a fixed size, or nothing when no
/// sub-committee satisfies the constraints (the table's bottom element).
type Cell = Option<(i64, Vec<CandidateId>)>;

/// Keeps the higher value; ties go to the lexicographically smaller
/// committee, which composes across disjoint candidate pools.
fn better(a: &(i64, Vec<CandidateId>), b: &(i64, Vec<CandidateId>)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 < b.1)
}

fn merge_members(a: &[CandidateId], b: &[CandidateId]) -> Vec<CandidateId> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Exact solver for separable objectives with per-label allowed-count sets on
/// a 1-laminar labeling.
///
/// Interval constraints are accepted too (an interval is an allowed-count
/// set). Bottom-up over the normalized tree: a leaf of size `w` takes the `w`
/// best candidates of its pool, an inner node splits its size across children
/// knapsack-style, and each node finally filters sizes through its own
/// allowed set.
pub fn dp_independent_1laminar(instance: &Instance) -> Result<SolveReport, SolveError> {
    let weights = instance.objective().separable_weights().ok_or_else(|| {
        inapplicable(DP_ALGORITHM, "separable objective required".to_string())
    })?;
    dp_independent(instance, Some(&weights))
}

/// Feasibility-only variant: candidate values are ignored (no sorting), so
/// the returned committee is just a witness in lexicographic-first order.
pub(crate) fn dp_independent_feasibility(instance: &Instance) -> Result<SolveReport, SolveError> {
    dp_independent(instance, None)
}

fn dp_independent(instance: &Instance, weights: Option<&[i64]>) -> Result<SolveReport, SolveError> {
    let tree = build_tree(instance, DP_ALGORITHM)?;
    let k = instance.k();
    let m = instance.m();
    // Interval bounds are irrelevant here; the skeleton only contributes the
    // normalized shape (artificial leaves included).
    let skeleton = Skeleton::new(&tree, &vec![None; instance.label_count()], k);
    // Allowed sizes per node: the root is pinned to {k}, artificial leaves
    // are unconstrained, labels take their spec sets.
    let allowed: Vec<Option<CountSet>> = skeleton
        .nodes
        .iter()
        .enumerate()
        .map(|(idx, node)| {
            if idx == 0 {
                Some(CountSet::new([k]))
            } else {
                match node.label {
                    Some(l) if instance.spec().is_constrained(l) => {
                        Some(instance.spec().allowed_counts(l, m))
                    }
                    _ => None,
                }
            }
        })
        .collect();

    let mut tables: Vec<Vec<Cell>> = vec![Vec::new(); skeleton.nodes.len()];
    for idx in skeleton.postorder() {
        let node = &skeleton.nodes[idx];
        let cap = k.min(node.extent.len());
        let mut cells: Vec<Cell> = vec![None; k + 1];
        if node.is_leaf() {
            let mut pool = node.extent.clone();
            if let Some(weights) = weights {
                // Best-first; equal weights keep index order so prefixes are
                // the lexicographically smallest maximum-value picks.
                pool.sort_by_key(|c| (-weights[c.idx()], *c));
            }
            let mut value = 0i64;
            let mut members: Vec<CandidateId> = Vec::new();
            for w in 0..=cap {
                if w > 0 {
                    let c = pool[w - 1];
                    value += weights.map_or(0, |ws| ws[c.idx()]);
                    members.push(c);
                }
                let mut sorted = members.clone();
                sorted.sort_unstable();
                cells[w] = Some((value, sorted));
            }
        } else {
            cells[0] = Some((0, Vec::new()));
            for &child in &node.children {
                let child_cells = &tables[child];
                let mut next: Vec<Cell> = vec![None; k + 1];
                for w in 0..=cap {
                    for x in 0..=w {
                        let (Some(acc), Some(part)) = (&cells[w - x], &child_cells[x]) else {
                            continue;
                        };
                        let cand = (acc.0 + part.0, merge_members(&acc.1, &part.1));
                        if next[w].as_ref().is_none_or(|cur| better(&cand, cur)) {
                            next[w] = Some(cand);
                        }
                    }
                }
                cells = next;
            }
        }
        if let Some(allowed) = &allowed[idx] {
            for (w, cell) in cells.iter_mut().enumerate() {
                if !allowed.contains(w) {
                    *cell = None;
                }
            }
        }
        tables[idx] = cells;
    }

    match tables[0][k].take() {
        Some((_, members)) => {
            let committee = Committee::new(members);
            debug_assert!(instance.is_diverse(&committee));
            let status = if weights.is_some() {
                SolveStatus::Optimal
            } else {
                SolveStatus::Heuristic
            };
            Ok(SolveReport::solved(status, committee, instance, DP_ALGORITHM))
        }
        None => Ok(SolveReport::infeasible(DP_ALGORITHM)),
    }
}

/// Achievable sub-committee size ranges per label. `None` plays the role of
/// an empty `[+inf, -inf]` range: no sub-committee under that label satisfies
/// its subtree's constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityRanges {
    pub per_label: Vec<Option<(usize, usize)>>,
}

/// Bottom-up interval feasibility: for every label the inclusive range
/// `[A1, A2]` of sizes of sub-committees within the label's extent satisfying
/// all constraints in its subtree, and the overall verdict obtained by
/// pinning the root to `[k, k]`.
pub fn feasibility_interval_1laminar(
    instance: &Instance,
) -> Result<(FeasibilityRanges, bool), SolveError> {
    let DiversitySpec::Interval { bounds } = instance.spec() else {
        return Err(inapplicable(
            FEASIBILITY_ALGORITHM,
            "interval diversity specification required",
        ));
    };
    let tree = build_tree(instance, FEASIBILITY_ALGORITHM)?;
    let skeleton = Skeleton::new(&tree, bounds, instance.k());
    let ranges = skeleton.ranges(None);
    let mut per_label = vec![None; instance.label_count()];
    for (idx, node) in skeleton.nodes.iter().enumerate() {
        if let Some(l) = node.label {
            per_label[l.idx()] = ranges[idx];
        }
    }
    let feasible = match ranges[0] {
        Some((lo, hi)) => lo <= instance.k() && instance.k() <= hi,
        None => false,
    };
    Ok((FeasibilityRanges { per_label }, feasible))
}

/// A deterministic witness committee for feasible interval instances.
pub(crate) fn interval_witness(instance: &Instance) -> Result<Option<Committee>, SolveError> {
    let DiversitySpec::Interval { bounds } = instance.spec() else {
        return Err(inapplicable(
            FEASIBILITY_ALGORITHM,
            "interval diversity specification required",
        ));
    };
    let tree = build_tree(instance, FEASIBILITY_ALGORITHM)?;
    let skeleton = Skeleton::new(&tree, bounds, instance.k());
    let ranges = skeleton.ranges(None);
    let k = instance.k();
    match ranges[0] {
        Some((lo, hi)) if lo <= k && k <= hi => {
            let mut members = Vec::with_capacity(k);
            skeleton.fill(&ranges, 0, k, &mut members);
            let committee = Committee::new(members);
            debug_assert!(instance.is_diverse(&committee));
            Ok(Some(committee))
        }
        _ => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::SolveStatus;
    use crate::objectives::Objective;
    use crate::solvers::SolveError;
    use crate::testkit::{cc_objective, committee, counts_spec, instance, interval_spec, oracle};

    fn weights_4321() -> Objective {
        Objective::separable(vec![4, 3, 2, 1])
    }

    #[test]
    fn dp_allowed_set_example() {
        // g = {c0, c1, c2} with allowed counts {0, 2}, k = 2.
        let inst = instance(
            4,
            &[&[0, 1, 2]],
            counts_spec(&[Some(&[0, 2])]),
            2,
            weights_4321(),
            None,
        );
        let report = dp_independent_1laminar(&inst).unwrap();
        assert_eq!(report.status, SolveStatus::Optimal);
        assert_eq!(report.committee.as_ref().unwrap(), &committee(&[0, 1]));
        assert_eq!(report.value, 7);
        assert_eq!(report.value, oracle(&inst).unwrap().0);
    }

    #[test]
    fn dp_single_seat() {
        let inst = instance(
            4,
            &[&[0, 1, 2]],
            counts_spec(&[Some(&[1])]),
            1,
            weights_4321(),
            None,
        );
        let report = dp_independent_1laminar(&inst).unwrap();
        assert_eq!(report.committee.as_ref().unwrap(), &committee(&[0]));
        assert_eq!(report.value, 4);
    }

    #[test]
    fn dp_infeasible_count() {
        // Three labeled members cannot fit in a committee of two.
        let inst = instance(
            4,
            &[&[0, 1, 2]],
            counts_spec(&[Some(&[3])]),
            2,
            weights_4321(),
            None,
        );
        let report = dp_independent_1laminar(&inst).unwrap();
        assert!(report.is_infeasible());
        assert!(oracle(&inst).is_none());
    }

    #[test]
    fn dp_rejects_non_separable() {
        let inst = instance(
            3,
            &[],
            counts_spec(&[]),
            1,
            cc_objective(3, &[&[0, 1, 2]]),
            None,
        );
        let err = dp_independent_1laminar(&inst).unwrap_err();
        assert!(matches!(err, SolveError::Inapplicable { .. }));
        assert!(err.to_string().contains("separable"));
    }

    #[test]
    fn dp_rejects_crossing_labels() {
        let inst = instance(
            3,
            &[&[0, 1], &[1, 2]],
            counts_spec(&[Some(&[1]), Some(&[1])]),
            2,
            Objective::separable(vec![1, 1, 1]),
            None,
        );
        let err = dp_independent_1laminar(&inst).unwrap_err();
        assert!(err.to_string().contains("1-laminar"));
    }

    #[test]
    fn dp_lexicographic_tie_break() {
        // All weights equal: the lexicographically smallest diverse committee
        // must win.
        let inst = instance(
            5,
            &[&[0, 1, 2]],
            counts_spec(&[Some(&[1])]),
            2,
            Objective::separable(vec![0, 0, 0, 0, 0]),
            None,
        );
        let report = dp_independent_1laminar(&inst).unwrap();
        let (value, best) = oracle(&inst).unwrap();
        assert_eq!(report.value, value);
        assert_eq!(report.committee.unwrap(), best);
        assert_eq!(best, committee(&[0, 3]));
    }

    /// The countries/continents hierarchy over five candidates.
    fn fig_instance(r1_bounds: (usize, usize)) -> crate::model::Instance {
        instance(
            5,
            &[&[0, 1], &[2], &[3], &[4], &[0, 1, 2], &[3, 4]],
            interval_spec(&[
                Some(r1_bounds),
                Some((0, 2)),
                Some((0, 2)),
                Some((0, 2)),
                Some((2, 2)),
                Some((2, 2)),
            ]),
            4,
            Objective::separable(vec![1, 1, 1, 1, 1]),
            None,
        )
    }

    #[test]
    fn feasibility_hierarchy_example() {
        let inst = fig_instance((1, 1));
        let (ranges, feasible) = feasibility_interval_1laminar(&inst).unwrap();
        assert!(feasible);
        // Exhibit {c0, c2, c3, c4}: one from r1, both continents filled.
        assert!(inst.is_diverse(&committee(&[0, 2, 3, 4])));
        assert_eq!(ranges.per_label[0], Some((1, 1)));
        assert_eq!(ranges.per_label[4], Some((2, 2)));
    }

    #[test]
    fn feasibility_infeasible_leaf_propagates() {
        let inst = fig_instance((3, 3));
        let (ranges, feasible) = feasibility_interval_1laminar(&inst).unwrap();
        assert!(!feasible);
        assert_eq!(ranges.per_label[0], None);
        assert_eq!(ranges.per_label[4], None);
        assert!(oracle(&inst).is_none());
    }

    #[test]
    fn feasibility_no_labels() {
        let inst = instance(
            4,
            &[],
            interval_spec(&[]),
            3,
            Objective::separable(vec![0, 0, 0, 0]),
            None,
        );
        let (_, feasible) = feasibility_interval_1laminar(&inst).unwrap();
        assert!(feasible);
    }

    #[test]
    fn feasibility_ranges_match_brute_force() {
        let inst = fig_instance((1, 1));
        let (ranges, _) = feasibility_interval_1laminar(&inst).unwrap();
        // Brute-force achievable sizes per label: subsets of the extent
        // satisfying every constraint in the label's subtree.
        for l in inst.label_ids() {
            let extent = inst.labeling().extent(l).to_vec();
            let subtree: Vec<_> = inst
                .label_ids()
                .filter(|&x| {
                    let xe = inst.labeling().extent(x);
                    !xe.is_empty()
                        && xe.iter().all(|c| extent.binary_search(c).is_ok())
                })
                .collect();
            let mut sizes = Vec::new();
            for mask in 0u32..1 << extent.len() {
                let picked: Vec<_> = extent
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &c)| c)
                    .collect();
                let ok = subtree.iter().all(|&x| {
                    let count = picked
                        .iter()
                        .filter(|c| inst.labeling().extent(x).binary_search(c).is_ok())
                        .count();
                    inst.spec().permits(x, count)
                });
                if ok {
                    sizes.push(picked.len());
                }
            }
            let expected = sizes
                .iter()
                .min()
                .map(|&lo| (lo, *sizes.iter().max().unwrap()));
            assert_eq!(ranges.per_label[l.idx()], expected, "label {l}");
        }
    }

    #[test]
    fn feasibility_requires_interval_spec() {
        let inst = instance(
            3,
            &[&[0]],
            counts_spec(&[Some(&[1])]),
            1,
            Objective::separable(vec![1, 1, 1]),
            None,
        );
        assert!(feasibility_interval_1laminar(&inst).is_err());
    }
}
