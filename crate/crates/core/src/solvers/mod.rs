//! Committee-selection algorithms and the dispatching front door.
//!
//! The [`solve`] dispatcher picks the strongest applicable algorithm from the
//! objective family, the constraint kind, and the recognized (or declared)
//! label structure, falling back to approximation and then to capped brute
//! force. Reports always name the algorithm that ran; approximations and
//! heuristics are never silently presented as exact.

pub(crate) mod tree;

mod brute;
mod dp;
mod greedy;
mod intersection;

pub use brute::{brute_force, brute_force_with_cap, DEFAULT_BRUTE_CAP};
pub use dp::{dp_independent_1laminar, feasibility_interval_1laminar, FeasibilityRanges};
pub use greedy::{
    balanced_pair_greedy, cc_balanced_complement, greedy_lower_extension, pair_greedy_guarantee,
};
pub use intersection::{
    matroid_intersection_feasibility, weighted_matroid_intersection, ExchangeGraph,
};

use thiserror::Error;

use crate::labels::{is_1_laminar, is_2_laminar};
use crate::model::{CandidateId, Instance, LabelId, LayerPartition, SolveReport, SolveStatus};

/// Failures that are not infeasibility: a requested algorithm does not apply
/// to the instance's shape, or resource caps were hit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("{algorithm} inapplicable: {requirement}")]
    Inapplicable {
        algorithm: &'static str,
        requirement: String,
    },
    #[error("brute force would enumerate {combinations} committees, above the cap of {cap}")]
    CapExceeded { combinations: u128, cap: u64 },
    #[error("no applicable algorithm within resource caps: {0}")]
    NoAlgorithm(String),
}

/// What the caller wants answered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SolveMode {
    #[default]
    Optimize,
    /// Any diverse committee settles the question; fast feasibility paths
    /// apply and returned committees carry no optimality claim.
    Feasibility,
}

/// Algorithm selection for [`solve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AlgorithmChoice {
    #[default]
    Auto,
    Dp,
    Greedy,
    Intersection,
    Pairs,
    CcComplement,
    Brute,
}

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub algorithm: AlgorithmChoice,
    pub mode: SolveMode,
    pub brute_cap: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            algorithm: AlgorithmChoice::Auto,
            mode: SolveMode::Optimize,
            brute_cap: DEFAULT_BRUTE_CAP,
        }
    }
}

/// Two disjoint candidate classes covering everything, with constraints that
/// force an even split of the committee.
#[derive(Debug, Clone)]
pub(crate) struct BalancedShape {
    pub side_a: Vec<CandidateId>,
    pub side_b: Vec<CandidateId>,
    pub half: usize,
}

/// Detects the balanced-committee shape: exactly two labels, disjoint extents
/// covering all candidates, and a constraint set whose only admissible split
/// is `k/2` on each side.
pub(crate) fn balanced_structure(instance: &Instance) -> Option<BalancedShape> {
    if instance.label_count() != 2 || instance.k() % 2 != 0 {
        return None;
    }
    let a = instance.labeling().extent(LabelId(0));
    let b = instance.labeling().extent(LabelId(1));
    if a.len() + b.len() != instance.m() {
        return None;
    }
    if a.iter().any(|c| b.binary_search(c).is_ok()) {
        return None;
    }
    let k = instance.k();
    let half = k / 2;
    let admissible: Vec<usize> = (0..=k)
        .filter(|&on_a| {
            instance.spec().permits(LabelId(0), on_a) && instance.spec().permits(LabelId(1), k - on_a)
        })
        .collect();
    if admissible != [half] {
        return None;
    }
    Some(BalancedShape {
        side_a: a.to_vec(),
        side_b: b.to_vec(),
        half,
    })
}

/// Whether the instance has the balanced-committee shape.
pub fn balanced_shape_exists(instance: &Instance) -> bool {
    balanced_structure(instance).is_some()
}

/// Label structure a dispatch decision can rely on.
#[derive(Debug, Clone)]
enum LabelStructure {
    OneLaminar,
    TwoLaminar,
    Unstructured,
}

fn resolve_structure(instance: &Instance) -> LabelStructure {
    if let Some(partition) = instance.layers() {
        return match partition.layers.len() {
            0 | 1 => LabelStructure::OneLaminar,
            2 => LabelStructure::TwoLaminar,
            _ => LabelStructure::Unstructured,
        };
    }
    if is_1_laminar(instance.labeling()) {
        LabelStructure::OneLaminar
    } else if is_2_laminar(instance.labeling()).is_some() {
        LabelStructure::TwoLaminar
    } else {
        LabelStructure::Unstructured
    }
}

/// Recognizes the labeling when no partition is declared; used by recognition
/// commands and tests. Returns the declared partition untouched when present.
pub fn effective_partition(instance: &Instance) -> Option<LayerPartition> {
    if let Some(p) = instance.layers() {
        return Some(p.clone());
    }
    is_2_laminar(instance.labeling())
}

/// Solves the instance with the requested algorithm. `Auto` picks the
/// strongest applicable exact method, then the best approximation, then brute
/// force under the cap.
pub fn solve(instance: &Instance, options: &SolveOptions) -> Result<SolveReport, SolveError> {
    match options.algorithm {
        AlgorithmChoice::Auto => auto_solve(instance, options),
        AlgorithmChoice::Dp => match options.mode {
            SolveMode::Optimize => dp_independent_1laminar(instance),
            SolveMode::Feasibility => dp::dp_independent_feasibility(instance),
        },
        AlgorithmChoice::Greedy => greedy_lower_extension(instance),
        AlgorithmChoice::Intersection => match options.mode {
            SolveMode::Optimize if instance.objective().separable_weights().is_some() => {
                weighted_matroid_intersection(instance)
            }
            _ => matroid_intersection_feasibility(instance),
        },
        AlgorithmChoice::Pairs => balanced_pair_greedy(instance),
        AlgorithmChoice::CcComplement => cc_balanced_complement(instance, instance.k() / 2),
        AlgorithmChoice::Brute => brute_force_with_cap(instance, options.mode, options.brute_cap),
    }
}

fn capped_brute(
    instance: &Instance,
    options: &SolveOptions,
) -> Result<SolveReport, SolveError> {
    brute_force_with_cap(instance, options.mode, options.brute_cap).map_err(|e| match e {
        SolveError::CapExceeded { combinations, cap } => SolveError::NoAlgorithm(format!(
            "only brute force applies and it would enumerate {combinations} committees \
             (cap {cap})"
        )),
        other => other,
    })
}

fn auto_solve(instance: &Instance, options: &SolveOptions) -> Result<SolveReport, SolveError> {
    let structure = resolve_structure(instance);
    let separable = instance.objective().separable_weights().is_some();
    let interval = instance.spec().is_interval();

    if options.mode == SolveMode::Feasibility {
        return match (&structure, interval) {
            (LabelStructure::OneLaminar, true) => {
                let witness = dp::interval_witness(instance)?;
                Ok(match witness {
                    Some(committee) => SolveReport::solved(
                        SolveStatus::Heuristic,
                        committee,
                        instance,
                        "feasibility-interval-1laminar",
                    ),
                    None => SolveReport::infeasible("feasibility-interval-1laminar"),
                })
            }
            (LabelStructure::TwoLaminar, true) => matroid_intersection_feasibility(instance),
            (LabelStructure::OneLaminar, false) => dp::dp_independent_feasibility(instance),
            _ => capped_brute(instance, options),
        };
    }

    if separable {
        return match (&structure, interval) {
            (LabelStructure::OneLaminar, true) => greedy_lower_extension(instance),
            (LabelStructure::OneLaminar, false) => dp_independent_1laminar(instance),
            (LabelStructure::TwoLaminar, true) => weighted_matroid_intersection(instance),
            _ => capped_brute(instance, options),
        };
    }
    // Submodular objectives: the pair greedy's guarantee beats the matroid
    // greedy's 1/2 whenever the balanced shape applies.
    if balanced_structure(instance).is_some() {
        return balanced_pair_greedy(instance);
    }
    if interval && matches!(structure, LabelStructure::OneLaminar) {
        return greedy_lower_extension(instance);
    }
    capped_brute(instance, options)
}
