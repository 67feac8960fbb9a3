//! Deterministic pseudo-random instance generation for the CLI, benchmarks,
//! and test corpora. The same seed always yields a byte-identical document.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::io::{
    ConstraintEntry, InstanceFile, LayerEntry, LayerKindEntry, ObjectiveEntry, WeightValue,
};

use std::collections::BTreeMap;

/// Structural family of a generated instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenerateKind {
    /// Two disjoint classes, even split forced, Chamberlin-Courant objective.
    Balanced,
    /// Hierarchical labels with interval constraints, separable objective.
    Laminar,
    /// Two declared disjoint layers with interval constraints, separable
    /// objective.
    Layered,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("candidate count must be in [1, 10000], got {0}")]
    CandidateCountOutOfRange(usize),
    #[error("committee size {k} exceeds candidate count {m}")]
    CommitteeTooLarge { k: usize, m: usize },
    #[error("balanced instances need an even committee size, got {0}")]
    OddBalancedCommittee(usize),
}

fn candidate_names(m: usize) -> Vec<String> {
    let width = (m.max(2) - 1).to_string().len();
    (0..m).map(|i| format!("c{i:0width$}")).collect()
}

/// Generates an instance document of the requested kind. Deterministic: the
/// output depends only on the arguments.
pub fn generate(
    kind: GenerateKind,
    m: usize,
    k: usize,
    seed: u64,
) -> Result<InstanceFile, GenerateError> {
    if m == 0 || m > 10_000 {
        return Err(GenerateError::CandidateCountOutOfRange(m));
    }
    if k > m {
        return Err(GenerateError::CommitteeTooLarge { k, m });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        GenerateKind::Balanced => generate_balanced(m, k, &mut rng),
        GenerateKind::Laminar => Ok(generate_laminar(m, k, &mut rng)),
        GenerateKind::Layered => Ok(generate_layered(m, k, &mut rng)),
    }
}

fn random_profile(names: &[String], voters: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<String>> {
    (0..voters)
        .map(|_| {
            let mut ranking = names.to_vec();
            ranking.shuffle(rng);
            ranking
        })
        .collect()
}

fn generate_balanced(
    m: usize,
    k: usize,
    rng: &mut ChaCha8Rng,
) -> Result<InstanceFile, GenerateError> {
    if k % 2 != 0 {
        return Err(GenerateError::OddBalancedCommittee(k));
    }
    let half = k / 2;
    let names = candidate_names(m);
    // Random sides, but each side large enough to fill its half.
    let mut side_of = vec![false; m];
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    for (pos, &c) in order.iter().enumerate() {
        side_of[c] = if pos < half {
            false
        } else if pos < 2 * half {
            true
        } else {
            rng.gen()
        };
    }
    let candidates = names
        .iter()
        .enumerate()
        .map(|(i, name)| crate::io::CandidateEntry {
            name: name.clone(),
            labels: vec![if side_of[i] { "group_b" } else { "group_a" }.to_string()],
        })
        .collect();
    let mut constraints = BTreeMap::new();
    for group in ["group_a", "group_b"] {
        constraints.insert(
            group.to_string(),
            ConstraintEntry::Range {
                min: Some(half as i64),
                max: Some(half as i64),
            },
        );
    }
    let voters = rng.gen_range(2..=4);
    Ok(InstanceFile {
        candidates,
        labels: vec!["group_a".to_string(), "group_b".to_string()],
        layers: None,
        constraints,
        k,
        objective: ObjectiveEntry::ChamberlinCourant {
            profile: random_profile(&names, voters, rng),
        },
    })
}

/// Recursively carves a shuffled candidate order into nested segments; each
/// segment becomes a label, so the family is laminar by construction.
fn carve(
    order: &[usize],
    depth: usize,
    rng: &mut ChaCha8Rng,
    extents: &mut Vec<Vec<usize>>,
) {
    if order.len() < 2 || depth == 0 || extents.len() >= 12 {
        return;
    }
    extents.push(order.to_vec());
    let parts = rng.gen_range(2..=3.min(order.len()));
    let mut cuts: Vec<usize> = (1..order.len()).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(parts - 1).collect();
    cuts.sort_unstable();
    cuts.insert(0, 0);
    cuts.push(order.len());
    for w in cuts.windows(2) {
        if rng.gen_bool(0.8) {
            carve(&order[w[0]..w[1]], depth - 1, rng, extents);
        }
    }
}

fn interval_constraints(
    extents: &[Vec<usize>],
    label_names: &[String],
    k: usize,
    rng: &mut ChaCha8Rng,
) -> BTreeMap<String, ConstraintEntry> {
    let mut constraints = BTreeMap::new();
    for (l, extent) in extents.iter().enumerate() {
        if rng.gen_bool(0.3) {
            continue; // leave some labels unconstrained
        }
        let cap = extent.len().min(k);
        let lo = rng.gen_range(0..=cap);
        let hi = rng.gen_range(lo..=extent.len());
        constraints.insert(
            label_names[l].clone(),
            ConstraintEntry::Range {
                min: Some(lo as i64),
                max: Some(hi as i64),
            },
        );
    }
    constraints
}

fn separable_objective(names: &[String], rng: &mut ChaCha8Rng) -> ObjectiveEntry {
    ObjectiveEntry::Separable {
        weights: names
            .iter()
            .map(|n| {
                (
                    n.clone(),
                    WeightValue::Number(rng.gen_range(0..=100i64).into()),
                )
            })
            .collect(),
        scale: 1,
    }
}

fn generate_laminar(m: usize, k: usize, rng: &mut ChaCha8Rng) -> InstanceFile {
    let names = candidate_names(m);
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(rng);
    let mut extents: Vec<Vec<usize>> = Vec::new();
    carve(&order, 4, rng, &mut extents);
    let label_names: Vec<String> = (0..extents.len()).map(|i| format!("g{i}")).collect();
    let mut candidate_labels = vec![Vec::new(); m];
    for (l, extent) in extents.iter().enumerate() {
        for &c in extent {
            candidate_labels[c].push(label_names[l].clone());
        }
    }
    let constraints = interval_constraints(&extents, &label_names, k, rng);
    InstanceFile {
        candidates: names
            .iter()
            .enumerate()
            .map(|(i, name)| crate::io::CandidateEntry {
                name: name.clone(),
                labels: candidate_labels[i].clone(),
            })
            .collect(),
        labels: label_names,
        layers: None,
        constraints,
        k,
        objective: separable_objective(&names, rng),
    }
}

/// A random partition of the candidates into `groups` disjoint label extents
/// (some possibly empty, pruned).
fn random_partition_layer(
    m: usize,
    groups: usize,
    prefix: &str,
    rng: &mut ChaCha8Rng,
) -> (Vec<String>, Vec<Vec<usize>>) {
    let mut extents = vec![Vec::new(); groups];
    for c in 0..m {
        extents[rng.gen_range(0..groups)].push(c);
    }
    extents.retain(|e| !e.is_empty());
    let names = (0..extents.len())
        .map(|i| format!("{prefix}{i}"))
        .collect();
    (names, extents)
}

fn generate_layered(m: usize, k: usize, rng: &mut ChaCha8Rng) -> InstanceFile {
    let names = candidate_names(m);
    let first_groups = rng.gen_range(2..=3.min(m).max(2));
    let second_groups = rng.gen_range(2..=3.min(m).max(2));
    let (first_names, first_extents) = random_partition_layer(m, first_groups, "x", rng);
    let (second_names, second_extents) = random_partition_layer(m, second_groups, "y", rng);
    let mut candidate_labels = vec![Vec::new(); m];
    for (l, extent) in first_extents.iter().enumerate() {
        for &c in extent {
            candidate_labels[c].push(first_names[l].clone());
        }
    }
    for (l, extent) in second_extents.iter().enumerate() {
        for &c in extent {
            candidate_labels[c].push(second_names[l].clone());
        }
    }
    let mut constraints = interval_constraints(&first_extents, &first_names, k, rng);
    constraints.extend(interval_constraints(&second_extents, &second_names, k, rng));
    let mut labels = first_names.clone();
    labels.extend(second_names.iter().cloned());
    InstanceFile {
        candidates: names
            .iter()
            .enumerate()
            .map(|(i, name)| crate::io::CandidateEntry {
                name: name.clone(),
                labels: candidate_labels[i].clone(),
            })
            .collect(),
        labels,
        layers: Some(vec![
            LayerEntry {
                labels: first_names,
                kind: LayerKindEntry::Layered,
            },
            LayerEntry {
                labels: second_names,
                kind: LayerKindEntry::Layered,
            },
        ]),
        constraints,
        k,
        objective: separable_objective(&names, rng),
    }
}
