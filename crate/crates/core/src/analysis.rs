//! Price of diversity: the exact ratio between the unconstrained optimum and
//! the best diverse committee's value.

use crate::model::{DiversitySpec, Instance, SolveStatus};
use crate::objectives::Objective;
use crate::ratio::Ratio;
use crate::solvers::{
    self, brute_force_with_cap, AlgorithmChoice, SolveError, SolveMode, SolveOptions,
};

/// How the ratio is reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PodRatio {
    /// Both optima computed exactly.
    Exact(Ratio),
    /// The constrained optimum was only bracketed by an approximation; the
    /// true ratio lies in `[lower, upper]`.
    Bounds { lower: Ratio, upper: Ratio },
    /// Division is meaningless (infeasible or nonpositive constrained
    /// optimum).
    Undefined { reason: String },
}

/// Result of a price-of-diversity computation. Ratios are exact rationals,
/// never floating point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PodReport {
    pub unconstrained: i64,
    /// `None` when no diverse committee exists.
    pub constrained: Option<i64>,
    pub ratio: PodRatio,
    /// `Some(satisfied)` when the balanced-plus-submodular bound of 2
    /// applies; `None` when the instance is outside that shape.
    pub balanced_submodular_bound: Option<bool>,
}

fn monotone_submodular(objective: &Objective) -> bool {
    match objective {
        Objective::ChamberlinCourant { .. } | Objective::KBorda { .. } => true,
        Objective::Separable { weights } => weights.iter().all(|&w| w >= 0),
        Objective::Table(_) => false,
    }
}

/// Exact optimum of the instance, preferring polynomial exact algorithms and
/// falling back to capped brute force.
fn exact_optimum(instance: &Instance, brute_cap: u64) -> Result<Option<i64>, SolveError> {
    if let Some(weights) = instance.objective().separable_weights() {
        if !has_constraints(instance) {
            // Unconstrained separable optimum: the k heaviest candidates.
            let mut sorted = weights;
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            return Ok(Some(sorted[..instance.k()].iter().sum()));
        }
        let options = SolveOptions {
            algorithm: AlgorithmChoice::Auto,
            mode: SolveMode::Optimize,
            brute_cap,
        };
        let report = solvers::solve(instance, &options)?;
        // Auto keeps separable instances on exact routes whenever the
        // structure allows; anything else fell back to brute force already.
        debug_assert!(matches!(
            report.status,
            SolveStatus::Optimal | SolveStatus::Infeasible
        ));
        return Ok((!report.is_infeasible()).then_some(report.value));
    }
    let report = brute_force_with_cap(instance, SolveMode::Optimize, brute_cap)?;
    Ok((!report.is_infeasible()).then_some(report.value))
}

/// Computes the price of diversity: the unconstrained optimum over all
/// size-`k` committees divided by the constrained optimum over diverse ones.
///
/// Both optima are computed exactly when possible. If the constrained side is
/// only reachable through the 1/2-approximate greedy (brute force over the
/// cap), the report carries an exact interval bracketing the ratio instead of
/// a point value.
pub fn price_of_diversity(instance: &Instance, brute_cap: u64) -> Result<PodReport, SolveError> {
    let relaxed = instance.relaxed();
    let unconstrained =
        exact_optimum(&relaxed, brute_cap)?.expect("k <= m: unconstrained committees exist");

    let (constrained, approx_lower) = match exact_optimum(instance, brute_cap) {
        Ok(opt) => (opt, None),
        Err(SolveError::CapExceeded { .. } | SolveError::NoAlgorithm(_))
            if instance.spec().is_interval() && monotone_submodular(instance.objective()) =>
        {
            // Greedy brackets the optimum: value <= opt <= 2 * value.
            let report = solvers::greedy_lower_extension(instance)?;
            if report.is_infeasible() {
                (None, None)
            } else {
                (None, Some(report.value))
            }
        }
        Err(e) => return Err(e),
    };

    let bound_applies = solvers_balanced(instance) && monotone_submodular(instance.objective());
    let (ratio, constrained) = match (constrained, approx_lower) {
        (Some(opt), _) if opt > 0 => (
            PodRatio::Exact(Ratio::new(unconstrained, opt)),
            Some(opt),
        ),
        (Some(opt), _) => (
            PodRatio::Undefined {
                reason: format!("constrained optimum {opt} is not positive"),
            },
            Some(opt),
        ),
        (None, Some(greedy)) if greedy > 0 => (
            PodRatio::Bounds {
                lower: Ratio::new(unconstrained, 2 * greedy),
                upper: Ratio::new(unconstrained, greedy),
            },
            None,
        ),
        (None, _) => (
            PodRatio::Undefined {
                reason: "no diverse committee exists".to_string(),
            },
            None,
        ),
    };
    let balanced_submodular_bound = match (&ratio, constrained) {
        (PodRatio::Exact(_), Some(opt)) if bound_applies => {
            Some(unconstrained as i128 <= 2 * opt as i128)
        }
        _ => None,
    };
    Ok(PodReport {
        unconstrained,
        constrained,
        ratio,
        balanced_submodular_bound,
    })
}

fn solvers_balanced(instance: &Instance) -> bool {
    crate::solvers::balanced_shape_exists(instance)
}

/// Whether constraints are present at all; a fully unconstrained instance has
/// price of diversity exactly 1.
pub fn has_constraints(instance: &Instance) -> bool {
    match instance.spec() {
        DiversitySpec::Independent { allowed } => allowed.iter().any(|a| a.is_some()),
        DiversitySpec::Interval { bounds } => bounds.iter().any(|b| b.is_some()),
    }
}
