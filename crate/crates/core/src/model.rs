//! Core domain types: candidates, labels, diversity specifications, validated
//! instances, and committees.
//!
//! An [`Instance`] is immutable once built; every solver reads from shared
//! state and never mutates it. [`Instance::is_diverse`] is the single source
//! of truth for the diversity predicate: all solvers and the brute-force
//! oracle are tested against it.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::objectives::Objective;
use crate::ratio::Ratio;

/// Index of a candidate, dense in `[0, m)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CandidateId(pub u32);

impl CandidateId {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for CandidateId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

/// Index of a label, dense in `[0, |L|)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelId(pub u32);

impl LabelId {
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for LabelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "l{}", self.0)
    }
}

/// A candidate with its display name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Candidate {
    pub name: String,
}

/// A label with its display name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Label {
    pub name: String,
}

/// The labeling function: per-candidate label sets plus the cached per-label
/// extents `C_l = { c | l in labels(c) }`.
///
/// Both directions are kept sorted; the cache is rebuilt on construction so it
/// can never drift from the assignment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    per_candidate: Vec<Vec<LabelId>>,
    extents: Vec<Vec<CandidateId>>,
}

impl Labeling {
    /// Builds a labeling for `label_count` labels from per-candidate label
    /// sets. Input sets are sorted and deduplicated.
    pub fn new(label_count: usize, mut per_candidate: Vec<Vec<LabelId>>) -> Self {
        let mut extents = vec![Vec::new(); label_count];
        for (c, labels) in per_candidate.iter_mut().enumerate() {
            labels.sort_unstable();
            labels.dedup();
            for &l in labels.iter() {
                extents[l.idx()].push(CandidateId(c as u32));
            }
        }
        Labeling {
            per_candidate,
            extents,
        }
    }

    pub fn candidate_count(&self) -> usize {
        self.per_candidate.len()
    }

    pub fn label_count(&self) -> usize {
        self.extents.len()
    }

    pub fn labels_of(&self, c: CandidateId) -> &[LabelId] {
        &self.per_candidate[c.idx()]
    }

    /// The extent `C_l`, sorted by candidate index. Empty extents are allowed.
    pub fn extent(&self, l: LabelId) -> &[CandidateId] {
        &self.extents[l.idx()]
    }

    pub fn label_ids(&self) -> impl Iterator<Item = LabelId> {
        (0..self.extents.len() as u32).map(LabelId)
    }
}

/// A set of permitted member counts for one label under an independent
/// constraint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountSet {
    counts: BTreeSet<usize>,
}

impl CountSet {
    pub fn new(counts: impl IntoIterator<Item = usize>) -> Self {
        CountSet {
            counts: counts.into_iter().collect(),
        }
    }

    pub fn contains(&self, count: usize) -> bool {
        self.counts.contains(&count)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.counts.iter().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

/// How diverse committees are specified. Constraint vectors are indexed by
/// label; `None` means the label is unconstrained (any count in `[0, m]` is
/// acceptable).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiversitySpec {
    /// Arbitrary per-label sets of acceptable counts.
    Independent { allowed: Vec<Option<CountSet>> },
    /// Per-label inclusive lower/upper bounds.
    Interval { bounds: Vec<Option<(usize, usize)>> },
}

impl DiversitySpec {
    /// An all-unconstrained interval spec over `label_count` labels.
    pub fn unconstrained(label_count: usize) -> Self {
        DiversitySpec::Interval {
            bounds: vec![None; label_count],
        }
    }

    pub fn label_count(&self) -> usize {
        match self {
            DiversitySpec::Independent { allowed } => allowed.len(),
            DiversitySpec::Interval { bounds } => bounds.len(),
        }
    }

    pub fn is_interval(&self) -> bool {
        matches!(self, DiversitySpec::Interval { .. })
    }

    /// Whether a committee containing `count` members of label `l` satisfies
    /// the constraint on `l`.
    pub fn permits(&self, l: LabelId, count: usize) -> bool {
        match self {
            DiversitySpec::Independent { allowed } => match &allowed[l.idx()] {
                Some(set) => set.contains(count),
                None => true,
            },
            DiversitySpec::Interval { bounds } => match bounds[l.idx()] {
                Some((lo, hi)) => lo <= count && count <= hi,
                None => true,
            },
        }
    }

    /// The interval bounds for `l`, with unconstrained labels widened to
    /// `[0, m]`. Only meaningful for interval specs.
    pub fn interval_of(&self, l: LabelId, m: usize) -> Option<(usize, usize)> {
        match self {
            DiversitySpec::Interval { bounds } => Some(bounds[l.idx()].unwrap_or((0, m))),
            DiversitySpec::Independent { .. } => None,
        }
    }

    /// The allowed-count view of the constraint on `l`: interval constraints
    /// are widened to explicit sets, unconstrained labels to `[0, m]`.
    pub fn allowed_counts(&self, l: LabelId, m: usize) -> CountSet {
        match self {
            DiversitySpec::Independent { allowed } => match &allowed[l.idx()] {
                Some(set) => set.clone(),
                None => CountSet::new(0..=m),
            },
            DiversitySpec::Interval { bounds } => match bounds[l.idx()] {
                Some((lo, hi)) => CountSet::new(lo..=hi.min(m)),
                None => CountSet::new(0..=m),
            },
        }
    }

    pub fn is_constrained(&self, l: LabelId) -> bool {
        match self {
            DiversitySpec::Independent { allowed } => allowed[l.idx()].is_some(),
            DiversitySpec::Interval { bounds } => bounds[l.idx()].is_some(),
        }
    }
}

/// Declared layer kinds for a label partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerKind {
    Laminar,
    Layered,
}

impl fmt::Display for LayerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LayerKind::Laminar => write!(f, "laminar"),
            LayerKind::Layered => write!(f, "layered"),
        }
    }
}

/// One layer of a label partition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layer {
    pub labels: Vec<LabelId>,
    pub kind: LayerKind,
}

/// An ordered partition of the label set into layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerPartition {
    pub layers: Vec<Layer>,
}

impl LayerPartition {
    /// Checks the partition property: layers are disjoint and cover all
    /// `label_count` labels.
    pub fn is_partition(&self, label_count: usize) -> bool {
        let mut seen = vec![false; label_count];
        for layer in &self.layers {
            for &l in &layer.labels {
                if l.idx() >= label_count || seen[l.idx()] {
                    return false;
                }
                seen[l.idx()] = true;
            }
        }
        seen.iter().all(|&s| s)
    }
}

/// A committee in canonical form: member ids sorted ascending, no duplicates.
///
/// `Ord` is the lexicographic order on the sorted member vector; this is the
/// tie-break order every solver uses, so equal member sets compare equal
/// bit-for-bit.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Committee {
    members: Vec<CandidateId>,
}

impl Committee {
    pub fn new(members: impl IntoIterator<Item = CandidateId>) -> Self {
        let mut members: Vec<_> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        Committee { members }
    }

    /// Wraps a vector already sorted ascending with no duplicates.
    pub fn from_sorted(members: Vec<CandidateId>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Committee { members }
    }

    pub fn empty() -> Self {
        Committee::default()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, c: CandidateId) -> bool {
        self.members.binary_search(&c).is_ok()
    }

    pub fn members(&self) -> &[CandidateId] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = CandidateId> + '_ {
        self.members.iter().copied()
    }

    /// A copy with `c` inserted.
    pub fn with(&self, c: CandidateId) -> Self {
        let mut members = self.members.clone();
        if let Err(pos) = members.binary_search(&c) {
            members.insert(pos, c);
        }
        Committee { members }
    }

    /// A copy with `c` removed.
    pub fn without(&self, c: CandidateId) -> Self {
        let mut members = self.members.clone();
        if let Ok(pos) = members.binary_search(&c) {
            members.remove(pos);
        }
        Committee { members }
    }
}

impl FromIterator<CandidateId> for Committee {
    fn from_iter<T: IntoIterator<Item = CandidateId>>(iter: T) -> Self {
        Committee::new(iter)
    }
}

/// Optimality claimed by a solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// The committee provably maximizes the objective over diverse committees.
    Optimal,
    /// The committee's value is at least `guarantee` times the optimum.
    Approximate { guarantee: Ratio },
    /// A valid diverse committee with no quality guarantee.
    Heuristic,
    /// No diverse committee of the requested size exists.
    Infeasible,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveStatus::Optimal => write!(f, "optimal"),
            SolveStatus::Approximate { guarantee } => {
                write!(f, "approximate (guarantee {guarantee})")
            }
            SolveStatus::Heuristic => write!(f, "heuristic"),
            SolveStatus::Infeasible => write!(f, "infeasible"),
        }
    }
}

/// The outcome of a solve: status, committee (absent exactly when
/// infeasible), objective value, and the algorithm that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub committee: Option<Committee>,
    pub value: i64,
    pub algorithm: String,
}

impl SolveReport {
    /// Builds a report for a found committee. The value is re-evaluated from
    /// the instance's objective, so the report can never disagree with it.
    pub fn solved(
        status: SolveStatus,
        committee: Committee,
        instance: &Instance,
        algorithm: &str,
    ) -> Self {
        debug_assert!(status != SolveStatus::Infeasible);
        let value = instance.objective().value(&committee);
        SolveReport {
            status,
            committee: Some(committee),
            value,
            algorithm: algorithm.to_string(),
        }
    }

    pub fn infeasible(algorithm: &str) -> Self {
        SolveReport {
            status: SolveStatus::Infeasible,
            committee: None,
            value: 0,
            algorithm: algorithm.to_string(),
        }
    }

    pub fn is_infeasible(&self) -> bool {
        self.status == SolveStatus::Infeasible
    }
}

/// Rejections raised while building an [`Instance`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("duplicate candidate name \"{0}\"")]
    DuplicateCandidateName(String),
    #[error("duplicate label name \"{0}\"")]
    DuplicateLabelName(String),
    #[error("k exceeds candidate count ({k} > {m})")]
    CommitteeSizeExceedsCandidates { k: usize, m: usize },
    #[error("constraint references unknown label \"{0}\"")]
    UnknownLabel(String),
    #[error("objective references unknown candidate \"{0}\"")]
    UnknownCandidate(String),
    #[error("negative bound {value} on label \"{label}\"")]
    NegativeBound { label: String, value: i64 },
    #[error("allowed count {value} on label \"{label}\" exceeds candidate count {m}")]
    CountOutOfRange { label: String, value: i64, m: usize },
    #[error("trivially infeasible label \"{label}\": lower bound {lo} exceeds upper bound {hi}")]
    TriviallyInfeasibleLabel { label: String, lo: usize, hi: usize },
    #[error("constraint vector covers {got} labels, instance has {expected}")]
    ConstraintArityMismatch { got: usize, expected: usize },
    #[error("invalid preference profile: {0}")]
    InvalidProfile(String),
    #[error("invalid layer declaration: {0}")]
    InvalidLayers(String),
    #[error("weight \"{text}\" for \"{candidate}\" is not an integer at scale {scale}")]
    FractionalWeight {
        candidate: String,
        text: String,
        scale: i64,
    },
    #[error("scale must be positive, got {0}")]
    NonPositiveScale(i64),
    #[error("invalid weight \"{text}\": {reason}")]
    MalformedWeight { text: String, reason: String },
    #[error("objective scores may overflow 64-bit range ({0})")]
    ScoreOverflow(String),
    #[error("objective shape mismatch: {0}")]
    ObjectiveMismatch(String),
}

/// A validated, immutable problem instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    candidates: Vec<Candidate>,
    labels: Vec<Label>,
    labeling: Labeling,
    spec: DiversitySpec,
    k: usize,
    objective: Objective,
    layers: Option<LayerPartition>,
}

impl Instance {
    /// Validates and assembles an instance from typed parts.
    ///
    /// Checks performed: unique names, `k <= m`, constraint arity and ranges
    /// (negative bounds and counts above `m` rejected; interval constraints
    /// with `lo > hi` rejected naming the offending label), objective shape
    /// (weight vector length, full permutations), declared layers forming a
    /// partition, and a conservative score-overflow guard.
    pub fn new(
        candidates: Vec<Candidate>,
        labels: Vec<Label>,
        labeling: Labeling,
        spec: DiversitySpec,
        k: usize,
        objective: Objective,
        layers: Option<LayerPartition>,
    ) -> Result<Self, ValidationError> {
        let m = candidates.len();
        let mut seen = BTreeSet::new();
        for c in &candidates {
            if !seen.insert(c.name.as_str()) {
                return Err(ValidationError::DuplicateCandidateName(c.name.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.name.as_str()) {
                return Err(ValidationError::DuplicateLabelName(l.name.clone()));
            }
        }
        if k > m {
            return Err(ValidationError::CommitteeSizeExceedsCandidates { k, m });
        }
        assert_eq!(labeling.candidate_count(), m, "labeling arity");
        assert_eq!(labeling.label_count(), labels.len(), "labeling arity");
        if spec.label_count() != labels.len() {
            return Err(ValidationError::ConstraintArityMismatch {
                got: spec.label_count(),
                expected: labels.len(),
            });
        }
        match &spec {
            DiversitySpec::Independent { allowed } => {
                for (i, set) in allowed.iter().enumerate() {
                    if let Some(set) = set {
                        for v in set.iter() {
                            if v > m {
                                return Err(ValidationError::CountOutOfRange {
                                    label: labels[i].name.clone(),
                                    value: v as i64,
                                    m,
                                });
                            }
                        }
                    }
                }
            }
            DiversitySpec::Interval { bounds } => {
                for (i, b) in bounds.iter().enumerate() {
                    if let Some((lo, hi)) = b {
                        if lo > hi {
                            return Err(ValidationError::TriviallyInfeasibleLabel {
                                label: labels[i].name.clone(),
                                lo: *lo,
                                hi: *hi,
                            });
                        }
                    }
                }
            }
        }
        objective.check_shape(m)?;
        if let Some(partition) = &layers {
            if !partition.is_partition(labels.len()) {
                return Err(ValidationError::InvalidLayers(
                    "layers must partition the label set".to_string(),
                ));
            }
            if !crate::labels::verify_partition(&labeling, partition) {
                return Err(ValidationError::InvalidLayers(
                    "a declared layer violates its declared kind".to_string(),
                ));
            }
        }
        Ok(Instance {
            candidates,
            labels,
            labeling,
            spec,
            k,
            objective,
            layers,
        })
    }

    pub fn m(&self) -> usize {
        self.candidates.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn label_count(&self) -> usize {
        self.labels.len()
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn candidate_name(&self, c: CandidateId) -> &str {
        &self.candidates[c.idx()].name
    }

    pub fn label_name(&self, l: LabelId) -> &str {
        &self.labels[l.idx()].name
    }

    pub fn labeling(&self) -> &Labeling {
        &self.labeling
    }

    pub fn spec(&self) -> &DiversitySpec {
        &self.spec
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn layers(&self) -> Option<&LayerPartition> {
        self.layers.as_ref()
    }

    pub fn candidate_ids(&self) -> impl Iterator<Item = CandidateId> {
        (0..self.candidates.len() as u32).map(CandidateId)
    }

    pub fn label_ids(&self) -> impl Iterator<Item = LabelId> {
        (0..self.labels.len() as u32).map(LabelId)
    }

    /// Per-label member counts of `w`.
    pub fn label_counts(&self, w: &Committee) -> Vec<usize> {
        let mut counts = vec![0usize; self.labels.len()];
        for c in w.iter() {
            for &l in self.labeling.labels_of(c) {
                counts[l.idx()] += 1;
            }
        }
        counts
    }

    /// Whether `w` is a diverse committee: exactly `k` members and every
    /// label's cardinality constraint satisfied.
    pub fn is_diverse(&self, w: &Committee) -> bool {
        if w.len() != self.k {
            return false;
        }
        let counts = self.label_counts(w);
        self.label_ids()
            .all(|l| self.spec.permits(l, counts[l.idx()]))
    }

    /// A copy of this instance with all diversity constraints dropped.
    /// Used for price-of-diversity baselines.
    pub fn relaxed(&self) -> Instance {
        Instance {
            candidates: self.candidates.clone(),
            labels: self.labels.clone(),
            labeling: self.labeling.clone(),
            spec: DiversitySpec::unconstrained(self.labels.len()),
            k: self.k,
            objective: self.objective.clone(),
            layers: self.layers.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objectives::Objective;

    fn names(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    pub(crate) fn basic_candidates(n: usize) -> Vec<Candidate> {
        names("c", n).into_iter().map(|name| Candidate { name }).collect()
    }

    pub(crate) fn basic_labels(names: &[&str]) -> Vec<Label> {
        names
            .iter()
            .map(|&name| Label {
                name: name.to_string(),
            })
            .collect()
    }

    /// Balanced two-label instance: F = {c0, c1}, M = {c2, c3}, k = 2,
    /// exactly one member from each side, weights 4, 3, 2, 1.
    pub(crate) fn balanced_fm() -> Instance {
        let labeling = Labeling::new(
            2,
            vec![
                vec![LabelId(0)],
                vec![LabelId(0)],
                vec![LabelId(1)],
                vec![LabelId(1)],
            ],
        );
        Instance::new(
            basic_candidates(4),
            basic_labels(&["F", "M"]),
            labeling,
            DiversitySpec::Interval {
                bounds: vec![Some((1, 1)), Some((1, 1))],
            },
            2,
            Objective::separable(vec![4, 3, 2, 1]),
            None,
        )
        .unwrap()
    }

    #[test]
    fn k_exceeding_m_rejected() {
        let err = Instance::new(
            basic_candidates(4),
            vec![],
            Labeling::new(0, vec![vec![]; 4]),
            DiversitySpec::unconstrained(0),
            5,
            Objective::separable(vec![1, 1, 1, 1]),
            None,
        )
        .unwrap_err();
        assert!(matches!(
            err,
            ValidationError::CommitteeSizeExceedsCandidates { k: 5, m: 4 }
        ));
        assert!(err.to_string().contains("k exceeds candidate count"));
    }

    #[test]
    fn balanced_instance_extent_caches() {
        let inst = balanced_fm();
        assert_eq!(
            inst.labeling().extent(LabelId(0)),
            &[CandidateId(0), CandidateId(1)]
        );
        assert_eq!(
            inst.labeling().extent(LabelId(1)),
            &[CandidateId(2), CandidateId(3)]
        );
    }

    #[test]
    fn inverted_interval_rejected_naming_label() {
        let labeling = Labeling::new(2, vec![vec![LabelId(0)]; 4]);
        let err = Instance::new(
            basic_candidates(4),
            basic_labels(&["F", "M"]),
            labeling,
            DiversitySpec::Interval {
                bounds: vec![Some((2, 1)), None],
            },
            2,
            Objective::separable(vec![1, 1, 1, 1]),
            None,
        )
        .unwrap_err();
        match &err {
            ValidationError::TriviallyInfeasibleLabel { label, .. } => assert_eq!(label, "F"),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(err.to_string().contains("\"F\""));
    }

    #[test]
    fn is_diverse_balanced_examples() {
        let inst = balanced_fm();
        let one_each = Committee::new([CandidateId(0), CandidateId(2)]);
        assert!(inst.is_diverse(&one_each));
        let both_f = Committee::new([CandidateId(0), CandidateId(1)]);
        assert!(!inst.is_diverse(&both_f));
    }

    #[test]
    fn is_diverse_independent_count_set() {
        // g = {c0, c1, c2} with allowed counts {0, 2}, k = 2.
        let labeling = Labeling::new(
            1,
            vec![vec![LabelId(0)], vec![LabelId(0)], vec![LabelId(0)], vec![]],
        );
        let inst = Instance::new(
            basic_candidates(4),
            basic_labels(&["g"]),
            labeling,
            DiversitySpec::Independent {
                allowed: vec![Some(CountSet::new([0, 2]))],
            },
            2,
            Objective::separable(vec![4, 3, 2, 1]),
            None,
        )
        .unwrap();
        // Count 1 is not in {0, 2}.
        assert!(!inst.is_diverse(&Committee::new([CandidateId(0), CandidateId(3)])));
        assert!(inst.is_diverse(&Committee::new([CandidateId(0), CandidateId(1)])));
    }

    #[test]
    fn diverse_committees_have_size_k() {
        let inst = balanced_fm();
        for members in [
            vec![],
            vec![CandidateId(0)],
            vec![CandidateId(0), CandidateId(2), CandidateId(3)],
        ] {
            let w = Committee::new(members);
            if inst.is_diverse(&w) {
                assert_eq!(w.len(), inst.k());
            }
        }
    }

    #[test]
    fn committee_canonical_form() {
        let a = Committee::new([CandidateId(3), CandidateId(1), CandidateId(1)]);
        let b = Committee::new([CandidateId(1), CandidateId(3)]);
        assert_eq!(a, b);
        assert_eq!(a.members(), &[CandidateId(1), CandidateId(3)]);
        // Lexicographic order on sorted members.
        let c = Committee::new([CandidateId(0), CandidateId(9)]);
        assert!(c < a);
    }

    #[test]
    fn duplicate_names_rejected() {
        let err = Instance::new(
            vec![
                Candidate { name: "x".into() },
                Candidate { name: "x".into() },
            ],
            vec![],
            Labeling::new(0, vec![vec![], vec![]]),
            DiversitySpec::unconstrained(0),
            1,
            Objective::separable(vec![1, 1]),
            None,
        )
        .unwrap_err();
        assert!(matches!(err, ValidationError::DuplicateCandidateName(_)));
    }
}
