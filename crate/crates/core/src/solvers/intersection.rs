//! Matroid intersection over the two lower-extension matroids of a 2-laminar
//! labeling: shortest-path augmentation for feasibility, and min-cost
//! augmentation for maximum-weight committees under separable objectives.

use std::collections::VecDeque;
use std::ops::Add;

use crate::labels::{is_2_laminar, LaminarTree};
use crate::matroid::{new_lower_extension, LowerExtensionMatroid};
use crate::model::{
    CandidateId, Committee, DiversitySpec, Instance, LayerPartition, SolveReport, SolveStatus,
};
use crate::solvers::SolveError;

pub(crate) const INTERSECTION_ALGORITHM: &str = "matroid-intersection";
pub(crate) const WEIGHTED_ALGORITHM: &str = "weighted-matroid-intersection";

fn inapplicable(algorithm: &'static str, requirement: impl Into<String>) -> SolveError {
    SolveError::Inapplicable {
        algorithm,
        requirement: requirement.into(),
    }
}

/// The auxiliary graph of one augmentation round. Sources are candidates
/// whose addition stays independent in the first matroid, sinks the same for
/// the second; arcs follow the circuits of dependent extensions.
#[derive(Debug, Clone)]
pub struct ExchangeGraph {
    /// Arcs `x -> y`: swapping `x` out repairs the first matroid after `y`
    /// enters.
    pub first_arcs: Vec<(CandidateId, CandidateId)>,
    /// Arcs `y -> x`: swapping `x` out repairs the second matroid.
    pub second_arcs: Vec<(CandidateId, CandidateId)>,
    pub sources: Vec<CandidateId>,
    pub sinks: Vec<CandidateId>,
}

impl ExchangeGraph {
    /// Builds the graph for the current common independent set `w`.
    pub fn build(
        first: &LowerExtensionMatroid,
        second: &LowerExtensionMatroid,
        w: &Committee,
        m: usize,
    ) -> ExchangeGraph {
        let mut graph = ExchangeGraph {
            first_arcs: Vec::new(),
            second_arcs: Vec::new(),
            sources: Vec::new(),
            sinks: Vec::new(),
        };
        for y in (0..m as u32).map(CandidateId) {
            if w.contains(y) {
                continue;
            }
            if first.is_extension_independent(w, y) {
                graph.sources.push(y);
            } else {
                for &x in first.circuit(w, y).members() {
                    if x != y {
                        graph.first_arcs.push((x, y));
                    }
                }
            }
            if second.is_extension_independent(w, y) {
                graph.sinks.push(y);
            } else {
                for &x in second.circuit(w, y).members() {
                    if x != y {
                        graph.second_arcs.push((y, x));
                    }
                }
            }
        }
        graph
    }

    fn adjacency(&self, m: usize) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); m];
        for &(u, v) in self.first_arcs.iter().chain(self.second_arcs.iter()) {
            adj[u.idx()].push(v.idx());
        }
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        adj
    }

    /// Shortest source-to-sink path by breadth-first search; ties resolve in
    /// candidate-index order. Returns the node sequence `y0, x1, y1, ..., ys`.
    pub fn shortest_path(&self, m: usize) -> Option<Vec<CandidateId>> {
        let adj = self.adjacency(m);
        let mut is_sink = vec![false; m];
        for &s in &self.sinks {
            is_sink[s.idx()] = true;
        }
        let mut parent = vec![usize::MAX; m];
        let mut seen = vec![false; m];
        let mut queue = VecDeque::new();
        for &s in &self.sources {
            seen[s.idx()] = true;
            parent[s.idx()] = s.idx();
            queue.push_back(s.idx());
        }
        while let Some(u) = queue.pop_front() {
            if is_sink[u] {
                let mut path = vec![u];
                let mut v = u;
                while parent[v] != v {
                    v = parent[v];
                    path.push(v);
                }
                path.reverse();
                return Some(path.into_iter().map(|i| CandidateId(i as u32)).collect());
            }
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = u;
                    queue.push_back(v);
                }
            }
        }
        None
    }
}

struct LayerMatroids {
    first: LowerExtensionMatroid,
    second: LowerExtensionMatroid,
}

/// Resolves the two laminar layers: a declared partition wins, otherwise
/// recognition runs. Single-layer declarations get an empty second layer.
fn two_layers(
    instance: &Instance,
    algorithm: &'static str,
) -> Result<LayerPartition, SolveError> {
    if let Some(partition) = instance.layers() {
        if partition.layers.len() > 2 {
            return Err(inapplicable(
                algorithm,
                format!(
                    "2-laminar structure required, {} layers declared",
                    partition.layers.len()
                ),
            ));
        }
        return Ok(partition.clone());
    }
    is_2_laminar(instance.labeling()).ok_or_else(|| {
        inapplicable(algorithm, "2-laminar structure required, recognition failed")
    })
}

/// Builds the per-layer matroids, or a ready infeasible report when a layer's
/// committee family is empty.
fn layer_matroids(
    instance: &Instance,
    algorithm: &'static str,
) -> Result<Result<LayerMatroids, SolveReport>, SolveError> {
    let DiversitySpec::Interval { bounds } = instance.spec() else {
        return Err(inapplicable(
            algorithm,
            "interval diversity specification required",
        ));
    };
    let partition = two_layers(instance, algorithm)?;
    let mut layer_labels = [Vec::new(), Vec::new()];
    for (i, layer) in partition.layers.iter().enumerate() {
        layer_labels[i.min(1)].extend(layer.labels.iter().copied());
    }
    let mut matroids = Vec::with_capacity(2);
    for labels in &layer_labels {
        let tree = LaminarTree::build(instance.labeling(), labels, instance.m()).map_err(|e| {
            inapplicable(algorithm, format!("declared layer is not 1-laminar ({e})"))
        })?;
        match new_lower_extension(&tree, bounds, instance.k()) {
            Some(mat) => matroids.push(mat),
            None => return Ok(Err(SolveReport::infeasible(algorithm))),
        }
    }
    let second = matroids.pop().unwrap();
    let first = matroids.pop().unwrap();
    Ok(Ok(LayerMatroids { first, second }))
}

/// One augmentation step shared by both variants: pre-path basis swaps for
/// the endpoints, then the symmetric-difference exchange on both bases and
/// the committee.
fn apply_path(
    mats: &mut LayerMatroids,
    w: &Committee,
    path: &[CandidateId],
) -> Committee {
    let entering: Vec<CandidateId> = path.iter().copied().step_by(2).collect();
    let leaving: Vec<CandidateId> = path.iter().copied().skip(1).step_by(2).collect();
    debug_assert_eq!(entering.len(), leaving.len() + 1);
    mats.first.swap_into_basis(w, entering[0]);
    mats.second.swap_into_basis(w, *entering.last().unwrap());
    mats.first.apply_exchange(&entering, &leaving);
    mats.second.apply_exchange(&entering, &leaving);
    let next = Committee::new(
        w.iter()
            .filter(|c| !leaving.contains(c))
            .chain(entering.iter().copied()),
    );
    assert_eq!(next.len(), w.len() + 1, "augmentation must grow w by one");
    assert!(
        next.iter().all(|c| mats.first.basis().contains(c)),
        "w must stay inside the first basis"
    );
    assert!(
        next.iter().all(|c| mats.second.basis().contains(c)),
        "w must stay inside the second basis"
    );
    next
}

/// Maximum common independent set via shortest augmenting paths: feasible
/// exactly when it reaches size `k`. The returned committee carries no
/// optimality claim.
pub fn matroid_intersection_feasibility(instance: &Instance) -> Result<SolveReport, SolveError> {
    let mut mats = match layer_matroids(instance, INTERSECTION_ALGORITHM)? {
        Ok(mats) => mats,
        Err(report) => return Ok(report),
    };
    let mut w = Committee::empty();
    while w.len() < instance.k() {
        let graph = ExchangeGraph::build(&mats.first, &mats.second, &w, instance.m());
        let Some(path) = graph.shortest_path(instance.m()) else {
            return Ok(SolveReport::infeasible(INTERSECTION_ALGORITHM));
        };
        w = apply_path(&mut mats, &w, &path);
    }
    debug_assert!(instance.is_diverse(&w));
    Ok(SolveReport::solved(
        SolveStatus::Heuristic,
        w,
        instance,
        INTERSECTION_ALGORITHM,
    ))
}

/// Additive path cost: objective weight first, then a lexicographic
/// perturbation so value ties resolve toward the lexicographically smallest
/// committee, then hop count (fewest arcs among equal-cost paths).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Cost {
    weight: i128,
    tie: i128,
    hops: u32,
}

impl Add for Cost {
    type Output = Cost;
    fn add(self, rhs: Cost) -> Cost {
        Cost {
            weight: self.weight + rhs.weight,
            tie: self.tie + rhs.tie,
            hops: self.hops + rhs.hops,
        }
    }
}

/// Maximum-weight committee of size `k` in the intersection, by `k` rounds of
/// min-cost augmentation: entering candidates cost their negated weight,
/// leaving candidates their weight, with shortest paths found by Bellman-Ford
/// over the (cost, tie, hops) order.
pub fn weighted_matroid_intersection(instance: &Instance) -> Result<SolveReport, SolveError> {
    let weights = instance.objective().separable_weights().ok_or_else(|| {
        inapplicable(WEIGHTED_ALGORITHM, "separable objective required")
    })?;
    let mut mats = match layer_matroids(instance, WEIGHTED_ALGORITHM)? {
        Ok(mats) => mats,
        Err(report) => return Ok(report),
    };
    let m = instance.m();
    // Distinct powers of two make every committee's perturbed value unique,
    // so the extreme set of each size is unique and ties land on the
    // lexicographically smallest committee. Skipped for very wide instances.
    let bonus: Vec<i128> = if m <= 120 {
        (0..m).map(|idx| 1i128 << (m - 1 - idx)).collect()
    } else {
        vec![0; m]
    };
    let node_cost = |v: CandidateId, w: &Committee| -> Cost {
        let sign = if w.contains(v) { 1 } else { -1 };
        Cost {
            weight: sign * weights[v.idx()] as i128,
            tie: sign * bonus[v.idx()],
            hops: 0,
        }
    };
    let hop = Cost {
        weight: 0,
        tie: 0,
        hops: 1,
    };

    let mut w = Committee::empty();
    for _ in 0..instance.k() {
        let graph = ExchangeGraph::build(&mats.first, &mats.second, &w, m);
        // Bellman-Ford; arcs in deterministic order, m rounds suffice since
        // min-cost paths are simple when w is extreme.
        let mut arcs: Vec<(usize, usize)> = graph
            .first_arcs
            .iter()
            .chain(graph.second_arcs.iter())
            .map(|&(u, v)| (u.idx(), v.idx()))
            .collect();
        arcs.sort_unstable();
        arcs.dedup();
        let mut dist: Vec<Option<Cost>> = vec![None; m];
        let mut parent: Vec<usize> = (0..m).collect();
        for &s in &graph.sources {
            dist[s.idx()] = Some(node_cost(s, &w));
        }
        for round in 0..=m {
            let mut changed = false;
            for &(u, v) in &arcs {
                let Some(du) = dist[u] else { continue };
                let cand = du + node_cost(CandidateId(v as u32), &w) + hop;
                if dist[v].is_none_or(|dv| cand < dv) {
                    dist[v] = Some(cand);
                    parent[v] = u;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
            assert!(round < m, "negative-cost cycle: augmentation invariant broken");
        }
        let best_sink = graph
            .sinks
            .iter()
            .filter_map(|&s| dist[s.idx()].map(|d| (d, s)))
            .min();
        let Some((_, sink)) = best_sink else {
            return Ok(SolveReport::infeasible(WEIGHTED_ALGORITHM));
        };
        let mut path = vec![sink.idx()];
        let mut v = sink.idx();
        while parent[v] != v {
            v = parent[v];
            assert!(!path.contains(&v), "min-cost path must be simple");
            path.push(v);
        }
        path.reverse();
        let path: Vec<CandidateId> = path.into_iter().map(|i| CandidateId(i as u32)).collect();
        w = apply_path(&mut mats, &w, &path);
    }
    debug_assert!(instance.is_diverse(&w));
    Ok(SolveReport::solved(
        SolveStatus::Optimal,
        w,
        instance,
        WEIGHTED_ALGORITHM,
    ))
}
