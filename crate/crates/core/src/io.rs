//! The instance file format: a JSON document listing candidates with their
//! labels, constraints per label, the committee size, and the objective.
//!
//! Decimal weights are scaled to exact integers at load time through the
//! per-instance `scale` field; fractional remainders are a validation error,
//! never rounded. Unknown keys are rejected.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{
    Candidate, CandidateId, CountSet, DiversitySpec, Instance, Label, LabelId, Labeling, Layer,
    LayerKind, LayerPartition, ValidationError,
};
use crate::objectives::{Objective, PreferenceProfile};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Validation(#[from] ValidationError),
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct CandidateEntry {
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum LayerKindEntry {
    Laminar,
    Layered,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct LayerEntry {
    pub labels: Vec<String>,
    pub kind: LayerKindEntry,
}

/// Constraint on one label: either an explicit allowed-count set or an
/// inclusive interval (omitted halves default to `0` and `m`).
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged, deny_unknown_fields)]
pub enum ConstraintEntry {
    Allowed {
        allowed: Vec<i64>,
    },
    Range {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        min: Option<i64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max: Option<i64>,
    },
}

/// A weight written either as a JSON number or as a decimal string.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum WeightValue {
    Number(serde_json::Number),
    Text(String),
}

impl WeightValue {
    fn decimal_text(&self) -> String {
        match self {
            WeightValue::Number(n) => n.to_string(),
            WeightValue::Text(t) => t.clone(),
        }
    }
}

fn default_scale() -> i64 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum ObjectiveEntry {
    #[serde(rename = "separable")]
    Separable {
        weights: BTreeMap<String, WeightValue>,
        #[serde(default = "default_scale")]
        scale: i64,
    },
    #[serde(rename = "cc")]
    ChamberlinCourant { profile: Vec<Vec<String>> },
    #[serde(rename = "k-borda")]
    KBorda { profile: Vec<Vec<String>> },
}

/// The on-disk instance document.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub candidates: Vec<CandidateEntry>,
    pub labels: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layers: Option<Vec<LayerEntry>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub constraints: BTreeMap<String, ConstraintEntry>,
    pub k: usize,
    pub objective: ObjectiveEntry,
}

/// Parses a decimal text into an integer at the given scale, exactly.
/// `"1.25"` at scale 100 is 125; anything with a nonzero remainder is
/// rejected.
pub fn parse_scaled_decimal(text: &str, scale: i64) -> Result<i64, ValidationError> {
    let malformed = |reason: &str| ValidationError::MalformedWeight {
        text: text.to_string(),
        reason: reason.to_string(),
    };
    let trimmed = text.trim();
    let (negative, digits) = match trimmed.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, trimmed.strip_prefix('+').unwrap_or(trimmed)),
    };
    if digits.is_empty() {
        return Err(malformed("empty"));
    }
    if digits.contains(['e', 'E']) {
        return Err(malformed("exponent notation not supported"));
    }
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(malformed("no digits"));
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(malformed("invalid character"));
    }
    if int_part.len() + frac_part.len() > 25 {
        return Err(malformed("too many digits"));
    }
    let mut combined: i128 = 0;
    for c in int_part.chars().chain(frac_part.chars()) {
        combined = combined * 10 + (c as u8 - b'0') as i128;
    }
    if negative {
        combined = -combined;
    }
    let denominator = 10i128.pow(frac_part.len() as u32);
    let scaled = combined * scale as i128;
    if scaled % denominator != 0 {
        return Err(ValidationError::FractionalWeight {
            candidate: String::new(),
            text: text.to_string(),
            scale,
        });
    }
    let value = scaled / denominator;
    i64::try_from(value).map_err(|_| malformed("out of 64-bit range"))
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<InstanceFile, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("instance files serialize");
        out.push('\n');
        out
    }

    /// Validates the raw document into a canonical [`Instance`].
    pub fn validate(&self) -> Result<Instance, IoError> {
        Ok(validate_instance(self)?)
    }
}

fn label_index(
    names: &BTreeMap<String, LabelId>,
    name: &str,
) -> Result<LabelId, ValidationError> {
    names
        .get(name)
        .copied()
        .ok_or_else(|| ValidationError::UnknownLabel(name.to_string()))
}

fn candidate_index(
    names: &BTreeMap<String, CandidateId>,
    name: &str,
) -> Result<CandidateId, ValidationError> {
    names
        .get(name)
        .copied()
        .ok_or_else(|| ValidationError::UnknownCandidate(name.to_string()))
}

/// Resolves names, scales weights, and assembles the canonical [`Instance`].
/// Validation is idempotent: serializing the result and validating again
/// yields an identical instance.
pub fn validate_instance(file: &InstanceFile) -> Result<Instance, ValidationError> {
    let m = file.candidates.len();
    let candidates: Vec<Candidate> = file
        .candidates
        .iter()
        .map(|c| Candidate {
            name: c.name.clone(),
        })
        .collect();
    let labels: Vec<Label> = file
        .labels
        .iter()
        .map(|name| Label { name: name.clone() })
        .collect();
    let mut candidate_ids = BTreeMap::new();
    for (i, c) in file.candidates.iter().enumerate() {
        if candidate_ids
            .insert(c.name.clone(), CandidateId(i as u32))
            .is_some()
        {
            return Err(ValidationError::DuplicateCandidateName(c.name.clone()));
        }
    }
    let mut label_ids = BTreeMap::new();
    for (i, name) in file.labels.iter().enumerate() {
        if label_ids.insert(name.clone(), LabelId(i as u32)).is_some() {
            return Err(ValidationError::DuplicateLabelName(name.clone()));
        }
    }

    let mut per_candidate = Vec::with_capacity(m);
    for c in &file.candidates {
        let mut ids = Vec::with_capacity(c.labels.len());
        for name in &c.labels {
            ids.push(label_index(&label_ids, name)?);
        }
        per_candidate.push(ids);
    }
    let labeling = Labeling::new(labels.len(), per_candidate);

    for name in file.constraints.keys() {
        label_index(&label_ids, name)?;
    }
    let spec = build_spec(file, &labels, m)?;

    let layers = match &file.layers {
        Some(entries) => {
            let mut layers = Vec::with_capacity(entries.len());
            for entry in entries {
                let mut ids = Vec::with_capacity(entry.labels.len());
                for name in &entry.labels {
                    ids.push(label_index(&label_ids, name)?);
                }
                layers.push(Layer {
                    labels: ids,
                    kind: match entry.kind {
                        LayerKindEntry::Laminar => LayerKind::Laminar,
                        LayerKindEntry::Layered => LayerKind::Layered,
                    },
                });
            }
            Some(LayerPartition { layers })
        }
        None => None,
    };

    let objective = build_objective(file, &candidate_ids, m)?;
    Instance::new(candidates, labels, labeling, spec, file.k, objective, layers)
}

fn build_spec(
    file: &InstanceFile,
    labels: &[Label],
    m: usize,
) -> Result<DiversitySpec, ValidationError> {
    let any_allowed = file
        .constraints
        .values()
        .any(|c| matches!(c, ConstraintEntry::Allowed { .. }));
    // Pre-validate every entry, naming the label.
    for (name, entry) in &file.constraints {
        match entry {
            ConstraintEntry::Allowed { allowed } => {
                for &v in allowed {
                    if v < 0 {
                        return Err(ValidationError::NegativeBound {
                            label: name.clone(),
                            value: v,
                        });
                    }
                    if v as usize > m {
                        return Err(ValidationError::CountOutOfRange {
                            label: name.clone(),
                            value: v,
                            m,
                        });
                    }
                }
            }
            ConstraintEntry::Range { min, max } => {
                for v in [min, max].into_iter().flatten() {
                    if *v < 0 {
                        return Err(ValidationError::NegativeBound {
                            label: name.clone(),
                            value: *v,
                        });
                    }
                }
                let lo = min.unwrap_or(0) as usize;
                let hi = max.map_or(m, |v| v as usize);
                if lo > hi {
                    return Err(ValidationError::TriviallyInfeasibleLabel {
                        label: name.clone(),
                        lo,
                        hi,
                    });
                }
            }
        }
    }
    let entry_for = |l: usize| file.constraints.get(&labels[l].name);
    if any_allowed {
        // Mixed documents normalize to an independent specification.
        let allowed = (0..labels.len())
            .map(|l| {
                entry_for(l).map(|entry| match entry {
                    ConstraintEntry::Allowed { allowed } => {
                        CountSet::new(allowed.iter().map(|&v| v as usize))
                    }
                    ConstraintEntry::Range { min, max } => {
                        let lo = min.unwrap_or(0) as usize;
                        let hi = max.map_or(m, |v| (v as usize).min(m));
                        CountSet::new(lo..=hi)
                    }
                })
            })
            .collect();
        Ok(DiversitySpec::Independent { allowed })
    } else {
        let bounds = (0..labels.len())
            .map(|l| {
                entry_for(l).map(|entry| match entry {
                    ConstraintEntry::Range { min, max } => {
                        (min.unwrap_or(0) as usize, max.map_or(m, |v| v as usize))
                    }
                    ConstraintEntry::Allowed { .. } => unreachable!("no allowed entries"),
                })
            })
            .collect();
        Ok(DiversitySpec::Interval { bounds })
    }
}

fn build_objective(
    file: &InstanceFile,
    candidate_ids: &BTreeMap<String, CandidateId>,
    m: usize,
) -> Result<Objective, ValidationError> {
    match &file.objective {
        ObjectiveEntry::Separable { weights, scale } => {
            if *scale <= 0 {
                return Err(ValidationError::NonPositiveScale(*scale));
            }
            let mut resolved = vec![0i64; m];
            for (name, value) in weights {
                let c = candidate_index(candidate_ids, name)?;
                let text = value.decimal_text();
                resolved[c.idx()] =
                    parse_scaled_decimal(&text, *scale).map_err(|e| match e {
                        ValidationError::FractionalWeight { text, scale, .. } => {
                            ValidationError::FractionalWeight {
                                candidate: name.clone(),
                                text,
                                scale,
                            }
                        }
                        other => other,
                    })?;
            }
            Ok(Objective::Separable { weights: resolved })
        }
        ObjectiveEntry::ChamberlinCourant { profile } | ObjectiveEntry::KBorda { profile } => {
            let mut rankings = Vec::with_capacity(profile.len());
            for ranking in profile {
                let mut ids = Vec::with_capacity(ranking.len());
                for name in ranking {
                    ids.push(candidate_index(candidate_ids, name)?);
                }
                rankings.push(ids);
            }
            let profile = PreferenceProfile::new(m, rankings)?;
            Ok(match &file.objective {
                ObjectiveEntry::ChamberlinCourant { .. } => {
                    Objective::ChamberlinCourant { profile }
                }
                _ => Objective::KBorda { profile },
            })
        }
    }
}

/// Serializes an instance back into the document shape. Weights come out at
/// scale 1; the table objective has no document form and panics.
pub fn instance_to_file(instance: &Instance) -> InstanceFile {
    let candidates = instance
        .candidate_ids()
        .map(|c| CandidateEntry {
            name: instance.candidate_name(c).to_string(),
            labels: instance
                .labeling()
                .labels_of(c)
                .iter()
                .map(|&l| instance.label_name(l).to_string())
                .collect(),
        })
        .collect();
    let labels = instance
        .label_ids()
        .map(|l| instance.label_name(l).to_string())
        .collect();
    let mut constraints = BTreeMap::new();
    for l in instance.label_ids() {
        let name = instance.label_name(l).to_string();
        match instance.spec() {
            DiversitySpec::Independent { allowed } => {
                if let Some(set) = &allowed[l.idx()] {
                    constraints.insert(
                        name,
                        ConstraintEntry::Allowed {
                            allowed: set.iter().map(|v| v as i64).collect(),
                        },
                    );
                }
            }
            DiversitySpec::Interval { bounds } => {
                if let Some((lo, hi)) = bounds[l.idx()] {
                    constraints.insert(
                        name,
                        ConstraintEntry::Range {
                            min: Some(lo as i64),
                            max: Some(hi as i64),
                        },
                    );
                }
            }
        }
    }
    let layers = instance.layers().map(|partition| {
        partition
            .layers
            .iter()
            .map(|layer| LayerEntry {
                labels: layer
                    .labels
                    .iter()
                    .map(|&l| instance.label_name(l).to_string())
                    .collect(),
                kind: match layer.kind {
                    LayerKind::Laminar => LayerKindEntry::Laminar,
                    LayerKind::Layered => LayerKindEntry::Layered,
                },
            })
            .collect()
    });
    let objective = match instance.objective() {
        Objective::Separable { weights } => ObjectiveEntry::Separable {
            weights: instance
                .candidate_ids()
                .filter(|c| weights[c.idx()] != 0)
                .map(|c| {
                    (
                        instance.candidate_name(c).to_string(),
                        WeightValue::Number(weights[c.idx()].into()),
                    )
                })
                .collect(),
            scale: 1,
        },
        Objective::ChamberlinCourant { profile } => ObjectiveEntry::ChamberlinCourant {
            profile: profile_names(instance, profile.rankings()),
        },
        Objective::KBorda { profile } => ObjectiveEntry::KBorda {
            profile: profile_names(instance, profile.rankings()),
        },
        Objective::Table(_) => panic!("table objectives have no document form"),
    };
    InstanceFile {
        candidates,
        labels,
        layers,
        constraints,
        k: instance.k(),
        objective,
    }
}

fn profile_names(instance: &Instance, rankings: &[Vec<CandidateId>]) -> Vec<Vec<String>> {
    rankings
        .iter()
        .map(|r| {
            r.iter()
                .map(|&c| instance.candidate_name(c).to_string())
                .collect()
        })
        .collect()
}
