//! Label-structure recognition and the rooted-tree representation of laminar
//! labelings.
//!
//! A labeling is 1-laminar when every pair of label extents is disjoint or
//! nested; such labelings are represented by a [`LaminarTree`]. Recognition
//! of 2-laminar structure reduces to 2-SAT over a conflict graph whose edges
//! are the *crossing* pairs: pairs that overlap with neither containing the
//! other. Disjoint pairs are laminar-compatible and get no clause.

pub mod twosat;

use thiserror::Error;

pub use twosat::TwoSatFormula;

use crate::model::{CandidateId, LabelId, Labeling, Layer, LayerKind, LayerPartition};

fn is_subset(a: &[CandidateId], b: &[CandidateId]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

fn intersects(a: &[CandidateId], b: &[CandidateId]) -> bool {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small.iter().any(|x| large.binary_search(x).is_ok())
}

/// Whether the extents of `x` and `y` cross: they overlap and neither
/// contains the other. Crossing pairs are exactly the ones a laminar family
/// cannot contain.
pub fn crossing(labeling: &Labeling, x: LabelId, y: LabelId) -> bool {
    debug_assert_ne!(x, y);
    let cx = labeling.extent(x);
    let cy = labeling.extent(y);
    intersects(cx, cy) && !is_subset(cx, cy) && !is_subset(cy, cx)
}

/// Whether the labeling restricted to `labels` is 1-laminar: no crossing pair.
pub fn is_1_laminar_among(labeling: &Labeling, labels: &[LabelId]) -> bool {
    for (i, &x) in labels.iter().enumerate() {
        for &y in &labels[i + 1..] {
            if crossing(labeling, x, y) {
                return false;
            }
        }
    }
    true
}

/// Whether the full labeling is 1-laminar.
pub fn is_1_laminar(labeling: &Labeling) -> bool {
    let labels: Vec<_> = labeling.label_ids().collect();
    is_1_laminar_among(labeling, &labels)
}

/// Whether the labeling restricted to `labels` is 1-layered: pairwise
/// disjoint extents.
pub fn is_1_layered_among(labeling: &Labeling, labels: &[LabelId]) -> bool {
    for (i, &x) in labels.iter().enumerate() {
        for &y in &labels[i + 1..] {
            if intersects(labeling.extent(x), labeling.extent(y)) {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("labeling is not 1-laminar: extents of labels {x} and {y} cross")]
pub struct NotLaminarError {
    pub x: LabelId,
    pub y: LabelId,
}

/// One node of a laminar tree. The root is synthetic (`label == None`) and
/// covers every candidate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub label: Option<LabelId>,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Candidates covered by this node, sorted.
    pub extent: Vec<CandidateId>,
}

/// Rooted-tree representation of a 1-laminar labeling: an arc runs from a
/// label to the minimal label strictly containing it, and every orphan hangs
/// off the synthetic root.
///
/// Labels with equal extents are chained parent-to-child in label-index
/// order, so the tree is deterministic: equal labelings produce identical
/// trees. After that normalization, children of a common parent have pairwise
/// disjoint extents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaminarTree {
    nodes: Vec<TreeNode>,
}

impl LaminarTree {
    /// Builds the tree over the labeling restricted to `labels`.
    /// `candidate_count` fixes the root extent.
    pub fn build(
        labeling: &Labeling,
        labels: &[LabelId],
        candidate_count: usize,
    ) -> Result<Self, NotLaminarError> {
        for (i, &x) in labels.iter().enumerate() {
            for &y in &labels[i + 1..] {
                if crossing(labeling, x, y) {
                    return Err(NotLaminarError { x, y });
                }
            }
        }
        let root_extent: Vec<_> = (0..candidate_count as u32).map(CandidateId).collect();
        let mut nodes = vec![TreeNode {
            label: None,
            parent: None,
            children: Vec::new(),
            extent: root_extent,
        }];
        // Larger extents first; equal extents in label-index order so they
        // chain deterministically.
        let mut order: Vec<LabelId> = labels.to_vec();
        order.sort_unstable_by_key(|&l| (usize::MAX - labeling.extent(l).len(), l));
        for l in order {
            let extent = labeling.extent(l).to_vec();
            // Parent: among already-placed nodes containing the extent, the
            // one with the smallest extent; ties (equal extents) resolve to
            // the most recently placed, extending the chain. Empty extents
            // attach directly under the root.
            let mut parent = 0usize;
            if !extent.is_empty() {
                let mut best_size = usize::MAX;
                for (idx, node) in nodes.iter().enumerate() {
                    if node.extent.len() >= extent.len()
                        && node.extent.len() <= best_size
                        && is_subset(&extent, &node.extent)
                    {
                        best_size = node.extent.len();
                        parent = idx;
                    }
                }
            }
            let idx = nodes.len();
            nodes.push(TreeNode {
                label: Some(l),
                parent: Some(parent),
                children: Vec::new(),
                extent,
            });
            nodes[parent].children.push(idx);
        }
        // Later nodes may sit between an earlier node and its chosen parent
        // only when extents are equal, which the placement order prevents;
        // children just need a stable presentation order.
        let keys: Vec<_> = nodes
            .iter()
            .map(|n| n.label.map(|l| l.0).unwrap_or(u32::MAX))
            .collect();
        for node in nodes.iter_mut() {
            node.children.sort_unstable_by_key(|&c| keys[c]);
        }
        Ok(LaminarTree { nodes })
    }

    /// Builds the tree over all labels of the labeling.
    pub fn build_full(labeling: &Labeling) -> Result<Self, NotLaminarError> {
        let labels: Vec<_> = labeling.label_ids().collect();
        LaminarTree::build(labeling, &labels, labeling.candidate_count())
    }

    pub fn root(&self) -> usize {
        0
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, idx: usize) -> &TreeNode {
        &self.nodes[idx]
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    /// Node indices of the subtree rooted at `idx`, including `idx` itself.
    pub fn descendants(&self, idx: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![idx];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.nodes[v].children.iter().copied());
        }
        out.sort_unstable();
        out
    }

    /// Indented text rendering, labels shown through `label_name` and extents
    /// through `candidate_name`.
    pub fn render(
        &self,
        label_name: &dyn Fn(LabelId) -> String,
        candidate_name: &dyn Fn(CandidateId) -> String,
    ) -> String {
        let mut out = String::new();
        self.render_node(0, 0, label_name, candidate_name, &mut out);
        out
    }

    fn render_node(
        &self,
        idx: usize,
        depth: usize,
        label_name: &dyn Fn(LabelId) -> String,
        candidate_name: &dyn Fn(CandidateId) -> String,
        out: &mut String,
    ) {
        let node = &self.nodes[idx];
        let name = match node.label {
            Some(l) => label_name(l),
            None => "(all)".to_string(),
        };
        let extent = node
            .extent
            .iter()
            .map(|&c| candidate_name(c))
            .collect::<Vec<_>>()
            .join(", ");
        out.push_str(&format!("{}{} {{{}}}\n", "  ".repeat(depth), name, extent));
        for &c in &node.children {
            self.render_node(c, depth + 1, label_name, candidate_name, out);
        }
    }
}

/// Recognizes 2-laminar structure. Builds a 2-SAT formula with an inequality
/// clause per crossing pair, solves it, and verifies both layers before
/// returning. The second layer may be empty when the labeling is already
/// 1-laminar.
pub fn is_2_laminar(labeling: &Labeling) -> Option<LayerPartition> {
    let n = labeling.label_count();
    let mut formula = TwoSatFormula::new(n);
    for x in 0..n {
        for y in x + 1..n {
            if crossing(labeling, LabelId(x as u32), LabelId(y as u32)) {
                // Crossing labels must land in different layers.
                formula.add_clause((x, true), (y, true));
                formula.add_clause((x, false), (y, false));
            }
        }
    }
    let assignment = formula.solve()?;
    let mut first = Vec::new();
    let mut second = Vec::new();
    for (i, &in_first) in assignment.iter().enumerate() {
        if in_first {
            first.push(LabelId(i as u32));
        } else {
            second.push(LabelId(i as u32));
        }
    }
    let partition = LayerPartition {
        layers: vec![
            Layer {
                labels: first,
                kind: LayerKind::Laminar,
            },
            Layer {
                labels: second,
                kind: LayerKind::Laminar,
            },
        ],
    };
    debug_assert!(verify_partition(labeling, &partition));
    if !verify_partition(labeling, &partition) {
        return None;
    }
    Some(partition)
}

/// Whether every declared-laminar layer is 1-laminar and every
/// declared-layered layer has pairwise disjoint extents. `p` must partition
/// the label set.
pub fn verify_partition(labeling: &Labeling, p: &LayerPartition) -> bool {
    if !p.is_partition(labeling.label_count()) {
        return false;
    }
    p.layers.iter().all(|layer| match layer.kind {
        LayerKind::Laminar => is_1_laminar_among(labeling, &layer.labels),
        LayerKind::Layered => is_1_layered_among(labeling, &layer.labels),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("label count {labels} exceeds the brute-force recognition cap {cap}")]
pub struct RecognitionCapError {
    pub labels: usize,
    pub cap: usize,
}

/// Default label cap for brute-force structure recognition.
pub const DEFAULT_RECOGNITION_CAP: usize = 16;

/// Exhaustively searches for a partition of the labels into `t` layers, each
/// with pairwise-disjoint extents. Backtracking over the label conflict graph
/// (conflict = overlapping extents); returns the first partition in canonical
/// order, with empty trailing layers kept so exactly `t` layers come back.
pub fn brute_recognize_t_layered(
    labeling: &Labeling,
    t: usize,
    cap: usize,
) -> Result<Option<LayerPartition>, RecognitionCapError> {
    let n = labeling.label_count();
    if n > cap {
        return Err(RecognitionCapError { labels: n, cap });
    }
    if t == 0 {
        return Ok(if n == 0 {
            Some(LayerPartition { layers: vec![] })
        } else {
            None
        });
    }
    let mut conflict = vec![vec![false; n]; n];
    for x in 0..n {
        for y in x + 1..n {
            if intersects(
                labeling.extent(LabelId(x as u32)),
                labeling.extent(LabelId(y as u32)),
            ) {
                conflict[x][y] = true;
                conflict[y][x] = true;
            }
        }
    }
    let mut colors = vec![usize::MAX; n];
    if !color_labels(0, n, t, &conflict, &mut colors) {
        return Ok(None);
    }
    let mut layers = vec![
        Layer {
            labels: Vec::new(),
            kind: LayerKind::Layered,
        };
        t
    ];
    for (i, &c) in colors.iter().enumerate() {
        layers[c].labels.push(LabelId(i as u32));
    }
    let partition = LayerPartition { layers };
    debug_assert!(verify_partition(labeling, &partition));
    Ok(Some(partition))
}

fn color_labels(
    label: usize,
    n: usize,
    t: usize,
    conflict: &[Vec<bool>],
    colors: &mut [usize],
) -> bool {
    if label == n {
        return true;
    }
    // Canonical color order: a label may open at most one new color, which
    // prunes permutations of identical partitions.
    let used = colors[..label].iter().copied().max().map_or(0, |c| c + 1);
    for color in 0..t.min(used + 1) {
        if (0..label).any(|other| colors[other] == color && conflict[label][other]) {
            continue;
        }
        colors[label] = color;
        if color_labels(label + 1, n, t, conflict, colors) {
            return true;
        }
        colors[label] = usize::MAX;
    }
    false
}
