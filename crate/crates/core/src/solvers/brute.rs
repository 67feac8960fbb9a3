//! Exhaustive enumeration over all size-`k` committees: the ground-truth
//! oracle every other solver is validated against.

use itertools::Itertools;

use crate::model::{CandidateId, Committee, Instance, SolveReport, SolveStatus};
use crate::solvers::{SolveError, SolveMode};

pub(crate) const BRUTE_ALGORITHM: &str = "brute-force";

/// Default enumeration cap in committees.
pub const DEFAULT_BRUTE_CAP: u64 = 5_000_000;

fn combination_count(m: usize, k: usize) -> u128 {
    let k = k.min(m - k.min(m));
    let mut count: u128 = 1;
    for i in 0..k {
        count = count.saturating_mul((m - i) as u128) / (i as u128 + 1);
        if count > u64::MAX as u128 {
            return count;
        }
    }
    count
}

/// Enumerates all size-`k` committees in lexicographic order, filters by the
/// diversity predicate, and maximizes the objective. The first optimum in
/// enumeration order wins, which is exactly the lexicographically smallest
/// one. In feasibility mode the scan stops at the first diverse committee.
pub fn brute_force_with_cap(
    instance: &Instance,
    mode: SolveMode,
    cap: u64,
) -> Result<SolveReport, SolveError> {
    let combinations = combination_count(instance.m(), instance.k());
    if combinations > cap as u128 {
        return Err(SolveError::CapExceeded { combinations, cap });
    }
    let objective = instance.objective();
    let mut best: Option<(i64, Committee)> = None;
    for members in (0..instance.m() as u32).combinations(instance.k()) {
        let committee = Committee::from_sorted(members.into_iter().map(CandidateId).collect());
        if !instance.is_diverse(&committee) {
            continue;
        }
        if mode == SolveMode::Feasibility {
            return Ok(SolveReport::solved(
                SolveStatus::Heuristic,
                committee,
                instance,
                BRUTE_ALGORITHM,
            ));
        }
        let value = objective.value(&committee);
        if best.as_ref().is_none_or(|(b, _)| value > *b) {
            best = Some((value, committee));
        }
    }
    Ok(match best {
        Some((_, committee)) => {
            SolveReport::solved(SolveStatus::Optimal, committee, instance, BRUTE_ALGORITHM)
        }
        None => SolveReport::infeasible(BRUTE_ALGORITHM),
    })
}

/// [`brute_force_with_cap`] at the default cap.
pub fn brute_force(instance: &Instance, mode: SolveMode) -> Result<SolveReport, SolveError> {
    brute_force_with_cap(instance, mode, DEFAULT_BRUTE_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::Objective;
    use crate::testkit::{committee, instance, interval_spec, oracle};

    fn balanced() -> Instance {
        instance(
            4,
            &[&[0, 1], &[2, 3]],
            interval_spec(&[Some((1, 1)), Some((1, 1))]),
            2,
            Objective::separable(vec![4, 3, 2, 1]),
            None,
        )
    }

    #[test]
    fn brute_balanced_optimum() {
        let inst = balanced();
        let report = brute_force(&inst, SolveMode::Optimize).unwrap();
        assert_eq!(report.status, SolveStatus::Optimal);
        assert_eq!(report.committee.as_ref().unwrap(), &committee(&[0, 2]));
        assert_eq!(report.value, 6);
        // Cross-checked against the test-local enumeration oracle.
        let (value, best) = oracle(&inst).unwrap();
        assert_eq!((report.value, report.committee.unwrap()), (value, best));
    }

    #[test]
    fn brute_infeasible() {
        let inst = instance(
            4,
            &[&[0, 1]],
            interval_spec(&[Some((3, 4))]),
            2,
            Objective::separable(vec![1, 1, 1, 1]),
            None,
        );
        assert!(brute_force(&inst, SolveMode::Optimize).unwrap().is_infeasible());
    }

    #[test]
    fn brute_full_committee() {
        let inst = instance(
            3,
            &[&[0, 1, 2]],
            interval_spec(&[Some((0, 3))]),
            3,
            Objective::separable(vec![1, 2, 3]),
            None,
        );
        let report = brute_force(&inst, SolveMode::Optimize).unwrap();
        assert_eq!(report.committee.unwrap(), committee(&[0, 1, 2]));
    }

    #[test]
    fn brute_feasibility_mode_stops_early() {
        let inst = balanced();
        let report = brute_force(&inst, SolveMode::Feasibility).unwrap();
        assert_eq!(report.status, SolveStatus::Heuristic);
        // First diverse committee in lexicographic order.
        assert_eq!(report.committee.unwrap(), committee(&[0, 2]));
    }

    #[test]
    fn brute_cap_enforced() {
        let inst = instance(
            30,
            &[],
            interval_spec(&[]),
            15,
            Objective::separable(vec![0; 30]),
            None,
        );
        let err = brute_force_with_cap(&inst, SolveMode::Optimize, 1000).unwrap_err();
        match err {
            SolveError::CapExceeded { combinations, cap } => {
                assert_eq!(cap, 1000);
                assert_eq!(combinations, 155_117_520);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn combination_count_edges() {
        assert_eq!(combination_count(10, 0), 1);
        assert_eq!(combination_count(10, 10), 1);
        assert_eq!(combination_count(10, 5), 252);
        assert_eq!(combination_count(5, 2), combination_count(5, 3));
    }
}
