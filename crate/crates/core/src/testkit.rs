//! Shared helpers for unit tests: compact instance construction and an
//! enumeration oracle independent of the solver implementations.

use crate::model::{
    Candidate, CandidateId, Committee, CountSet, DiversitySpec, Instance, Label, LabelId,
    Labeling, LayerPartition,
};
use crate::objectives::{Objective, PreferenceProfile};

pub fn committee(ids: &[u32]) -> Committee {
    Committee::new(ids.iter().map(|&i| CandidateId(i)))
}

pub fn interval_spec(bounds: &[Option<(usize, usize)>]) -> DiversitySpec {
    DiversitySpec::Interval {
        bounds: bounds.to_vec(),
    }
}

pub fn counts_spec(allowed: &[Option<&[usize]>]) -> DiversitySpec {
    DiversitySpec::Independent {
        allowed: allowed
            .iter()
            .map(|a| a.map(|counts| CountSet::new(counts.iter().copied())))
            .collect(),
    }
}

pub fn cc_objective(m: usize, rankings: &[&[u32]]) -> Objective {
    let rankings = rankings
        .iter()
        .map(|r| r.iter().map(|&c| CandidateId(c)).collect())
        .collect();
    Objective::ChamberlinCourant {
        profile: PreferenceProfile::new(m, rankings).unwrap(),
    }
}

/// Builds an instance with candidates `c0..`, labels `g0..`, label extents
/// given by candidate indices.
pub fn instance(
    m: usize,
    extents: &[&[u32]],
    spec: DiversitySpec,
    k: usize,
    objective: Objective,
    layers: Option<LayerPartition>,
) -> Instance {
    let candidates = (0..m)
        .map(|i| Candidate {
            name: format!("c{i}"),
        })
        .collect();
    let labels = (0..extents.len())
        .map(|i| Label {
            name: format!("g{i}"),
        })
        .collect();
    let mut per_candidate = vec![Vec::new(); m];
    for (l, extent) in extents.iter().enumerate() {
        for &c in extent.iter() {
            per_candidate[c as usize].push(LabelId(l as u32));
        }
    }
    let labeling = Labeling::new(extents.len(), per_candidate);
    Instance::new(candidates, labels, labeling, spec, k, objective, layers).unwrap()
}

/// Enumeration oracle: best diverse committee by (value, then lexicographic
/// order), straight from the definitions. Independent of every solver.
pub fn oracle(instance: &Instance) -> Option<(i64, Committee)> {
    assert!(instance.m() <= 22, "oracle limited to small instances");
    let m = instance.m();
    let k = instance.k();
    let mut best: Option<(i64, Committee)> = None;
    for mask in 0u32..1 << m {
        if mask.count_ones() as usize != k {
            continue;
        }
        let committee = Committee::new(
            (0..m)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| CandidateId(i as u32)),
        );
        if !instance.is_diverse(&committee) {
            continue;
        }
        let value = instance.objective().value(&committee);
        let replace = match &best {
            None => true,
            Some((v, c)) => value > *v || (value == *v && committee < *c),
        };
        if replace {
            best = Some((value, committee));
        }
    }
    best
}
