//! The lower-extension matroid of the diverse-committee family for interval
//! constraints on one laminar layer.
//!
//! For a nonempty family `K` of size-`k` diverse committees, the lower
//! extension `{ T | exists S in K with T subset of S }` is the independence
//! family of a matroid. Independence queries maintain a full basis `B in K`
//! containing the current partial committee `W`: `W + y` is independent iff
//! `y` is in `B` or some swap `(B + y) - x` with `x in B - W` lands back in
//! `K`. Each successful query updates the basis, so `W` stays inside `B`.

use crate::labels::LaminarTree;
use crate::model::{CandidateId, Committee};
use crate::solvers::tree::Skeleton;

/// The unique minimal dependent subset of `W + y` when that set is dependent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    members: Vec<CandidateId>,
}

impl Circuit {
    pub fn members(&self) -> &[CandidateId] {
        &self.members
    }

    pub fn contains(&self, c: CandidateId) -> bool {
        self.members.binary_search(&c).is_ok()
    }
}

/// Independence oracle over the lower extension of the diverse committees of
/// one laminar layer, with basis maintenance.
///
/// A handle is single-threaded: independence tests mutate the maintained
/// basis. Multiple handles over the same immutable instance may run
/// concurrently.
#[derive(Debug, Clone)]
pub struct LowerExtensionMatroid {
    skeleton: Skeleton,
    candidate_nodes: Vec<Vec<u32>>,
    k: usize,
    basis: Committee,
}

/// Builds the matroid over the committee family defined by `tree` and the
/// per-label interval `bounds` (indexed by label id, `None` meaning
/// unconstrained), with committee size `k` pinned at the root.
///
/// Returns `None` when the family is empty; the matroid only exists for
/// nonempty families. The initial basis descends the feasibility ranges
/// choosing minimum counts and lowest-index candidates, so construction is
/// deterministic.
pub fn new_lower_extension(
    tree: &LaminarTree,
    bounds: &[Option<(usize, usize)>],
    k: usize,
) -> Option<LowerExtensionMatroid> {
    let m = tree.node(tree.root()).extent.len();
    let skeleton = Skeleton::new(tree, bounds, k);
    let ranges = skeleton.ranges(None);
    let (lo, hi) = ranges[0]?;
    if k < lo || k > hi {
        return None;
    }
    let mut members = Vec::with_capacity(k);
    skeleton.fill(&ranges, 0, k, &mut members);
    let basis = Committee::new(members);
    debug_assert_eq!(basis.len(), k);
    let candidate_nodes = skeleton.candidate_nodes(m);
    let matroid = LowerExtensionMatroid {
        skeleton,
        candidate_nodes,
        k,
        basis,
    };
    debug_assert!(matroid.in_family(&matroid.basis));
    Some(matroid)
}

impl LowerExtensionMatroid {
    pub fn rank(&self) -> usize {
        self.k
    }

    /// The maintained basis, a full diverse committee of the layer.
    pub fn basis(&self) -> &Committee {
        &self.basis
    }

    /// Whether `set` is a size-`k` committee meeting every bound of this
    /// layer, i.e. a basis of the matroid.
    pub fn in_family(&self, set: &Committee) -> bool {
        if set.len() != self.k {
            return false;
        }
        let mut counts = vec![0usize; self.skeleton.nodes.len()];
        for c in set.iter() {
            for &n in &self.candidate_nodes[c.idx()] {
                counts[n as usize] += 1;
            }
        }
        self.skeleton
            .nodes
            .iter()
            .zip(&counts)
            .all(|(node, &cnt)| node.lo <= cnt && cnt <= node.hi)
    }

    /// Whether `set` belongs to the lower extension: some committee of the
    /// family contains it. Checked directly by a feasibility pass with the
    /// members forced in, independent of the maintained basis.
    pub fn in_lower_extension(&self, set: &Committee) -> bool {
        self.skeleton.extendable(set.members())
    }

    fn swap_candidates<'a>(
        &'a self,
        w: &'a Committee,
        y: CandidateId,
    ) -> impl Iterator<Item = (CandidateId, Committee)> + 'a {
        self.basis
            .iter()
            .filter(move |&x| !w.contains(x))
            .map(move |x| (x, self.basis.without(x).with(y)))
    }

    /// Whether `w + y` stays in the lower extension, updating the basis to
    /// keep containing `w + y` when it does.
    ///
    /// Caller protocol: `w` must be contained in the maintained basis and `y`
    /// must not be in `w`; violations panic.
    pub fn can_extend(&mut self, w: &Committee, y: CandidateId) -> bool {
        self.check_protocol(w, y);
        if self.basis.contains(y) {
            return true;
        }
        let found = self
            .swap_candidates(w, y)
            .find(|(_, swapped)| self.in_family(swapped));
        match found {
            Some((_, swapped)) => {
                self.basis = swapped;
                debug_assert!(self.in_family(&self.basis));
                true
            }
            None => false,
        }
    }

    /// Non-mutating twin of [`Self::can_extend`].
    pub fn is_extension_independent(&self, w: &Committee, y: CandidateId) -> bool {
        self.check_protocol(w, y);
        self.basis.contains(y)
            || self
                .swap_candidates(w, y)
                .any(|(_, swapped)| self.in_family(&swapped))
    }

    /// The unique circuit of the dependent set `w + y`, computed against the
    /// basis: the circuit of `B + y` equals the circuit of `W + y`.
    ///
    /// Panics when called on an independent extension.
    pub fn circuit(&self, w: &Committee, y: CandidateId) -> Circuit {
        assert!(
            !self.is_extension_independent(w, y),
            "circuit requested for an independent extension"
        );
        let mut members: Vec<CandidateId> = self
            .swap_candidates(&Committee::empty(), y)
            .filter(|(_, swapped)| self.in_family(swapped))
            .map(|(x, _)| x)
            .collect();
        members.push(y);
        members.sort_unstable();
        debug_assert!(
            members.iter().all(|&c| c == y || w.contains(c)),
            "circuit must stay inside w + y"
        );
        Circuit { members }
    }

    /// Swaps `y` into the basis without growing `w`, as done before an
    /// augmentation: picks the first `x in B - w` whose removal keeps the
    /// family membership. `w + y` must be independent.
    pub(crate) fn swap_into_basis(&mut self, w: &Committee, y: CandidateId) {
        if self.basis.contains(y) {
            return;
        }
        let found = self
            .swap_candidates(w, y)
            .find(|(_, swapped)| self.in_family(swapped));
        let (_, swapped) = found.expect("swap_into_basis needs an independent extension");
        self.basis = swapped;
    }

    /// Applies an augmenting exchange to the basis: adds `ys`, removes `xs`.
    /// The result must stay in the family.
    pub(crate) fn apply_exchange(&mut self, ys: &[CandidateId], xs: &[CandidateId]) {
        let mut members: Vec<CandidateId> = self
            .basis
            .iter()
            .filter(|c| !xs.contains(c))
            .chain(ys.iter().copied().filter(|c| !self.basis.contains(*c)))
            .collect();
        members.sort_unstable();
        self.basis = Committee::from_sorted(members);
        assert!(
            self.in_family(&self.basis),
            "basis exchange left the committee family"
        );
    }

    /// Test-support check of the exchange lemma's conclusion: independence of
    /// `(w - xs) + ys`. Callers are responsible for the lemma's circuit
    /// conditions.
    pub fn frank_exchange_check(
        &self,
        w: &Committee,
        xs: &[CandidateId],
        ys: &[CandidateId],
    ) -> bool {
        let exchanged = Committee::new(
            w.iter()
                .filter(|c| !xs.contains(c))
                .chain(ys.iter().copied()),
        );
        self.in_lower_extension(&exchanged)
    }

    fn check_protocol(&self, w: &Committee, y: CandidateId) {
        assert!(
            w.iter().all(|c| self.basis.contains(c)),
            "caller protocol violation: w is not contained in the maintained basis"
        );
        assert!(!w.contains(y), "y must lie outside w");
    }
}
