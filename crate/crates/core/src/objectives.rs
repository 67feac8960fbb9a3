//! Objective functions over committees: separable weights, k-Borda, and
//! Chamberlin-Courant, behind one value / marginal-contribution interface.
//!
//! All scores are exact `i64`; instance validation guarantees the arithmetic
//! cannot overflow. A fourth table-backed objective exists so tests can
//! exercise non-submodular behavior; the instance file format never produces
//! it.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::model::{CandidateId, Committee, ValidationError};

/// Borda score of position `i` out of `m`: `m - i`. Positions are 1-based.
pub fn borda_score(m: usize, position: usize) -> i64 {
    assert!(
        position >= 1 && position <= m,
        "position {position} out of range [1, {m}]"
    );
    (m - position) as i64
}

/// A list of rankings, one per voter, each a full permutation of the
/// candidates, with a cached position lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceProfile {
    rankings: Vec<Vec<CandidateId>>,
    /// positions[v][c] = 1-based rank of candidate c in voter v's ranking.
    positions: Vec<Vec<u32>>,
    m: usize,
}

impl PreferenceProfile {
    pub fn new(m: usize, rankings: Vec<Vec<CandidateId>>) -> Result<Self, ValidationError> {
        let mut positions = Vec::with_capacity(rankings.len());
        for (v, ranking) in rankings.iter().enumerate() {
            if ranking.len() != m {
                return Err(ValidationError::InvalidProfile(format!(
                    "voter {v} ranks {} of {m} candidates",
                    ranking.len()
                )));
            }
            let mut pos = vec![0u32; m];
            for (i, c) in ranking.iter().enumerate() {
                if c.idx() >= m {
                    return Err(ValidationError::InvalidProfile(format!(
                        "voter {v} ranks unknown candidate index {}",
                        c.idx()
                    )));
                }
                if pos[c.idx()] != 0 {
                    return Err(ValidationError::InvalidProfile(format!(
                        "voter {v} ranks candidate {} twice",
                        c.idx()
                    )));
                }
                pos[c.idx()] = (i + 1) as u32;
            }
            positions.push(pos);
        }
        Ok(PreferenceProfile {
            rankings,
            positions,
            m,
        })
    }

    pub fn voter_count(&self) -> usize {
        self.rankings.len()
    }

    pub fn candidate_count(&self) -> usize {
        self.m
    }

    pub fn rankings(&self) -> &[Vec<CandidateId>] {
        &self.rankings
    }

    /// 1-based position of `c` in voter `v`'s ranking.
    pub fn position(&self, v: usize, c: CandidateId) -> usize {
        self.positions[v][c.idx()] as usize
    }
}

/// An explicit subset-to-value table over a small ground set, indexed by
/// candidate bitmask. Test support: lets property tests feed adversarial
/// (e.g. non-submodular) objectives through the same interface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueTable {
    m: usize,
    values: Vec<i64>,
}

impl ValueTable {
    /// `values[mask]` is the value of the subset encoded by `mask`;
    /// `values[0]` must be 0 and the table must cover all `2^m` subsets.
    pub fn new(m: usize, values: Vec<i64>) -> Self {
        assert!(m <= 20, "value table limited to small ground sets");
        assert_eq!(values.len(), 1usize << m, "table must cover all subsets");
        assert_eq!(values[0], 0, "empty set must have value 0");
        ValueTable { m, values }
    }

    fn mask(&self, s: &Committee) -> usize {
        s.iter().fold(0usize, |acc, c| acc | (1 << c.idx()))
    }
}

/// The objective families solvers understand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Objective {
    /// `f(S) = sum of w_c over c in S`.
    Separable { weights: Vec<i64> },
    /// Sum over voters of the Borda scores of all committee members.
    KBorda { profile: PreferenceProfile },
    /// Sum over voters of the Borda score of the voter's best-ranked member.
    ChamberlinCourant { profile: PreferenceProfile },
    /// Explicit subset-value table (test support).
    Table(ValueTable),
}

impl Objective {
    pub fn separable(weights: Vec<i64>) -> Self {
        Objective::Separable { weights }
    }

    /// Number of candidates the objective is defined over.
    pub fn ground_size(&self) -> usize {
        match self {
            Objective::Separable { weights } => weights.len(),
            Objective::KBorda { profile } | Objective::ChamberlinCourant { profile } => {
                profile.candidate_count()
            }
            Objective::Table(t) => t.m,
        }
    }

    /// Validates the objective against the instance's candidate count and
    /// guards against `i64` overflow in any committee score.
    pub(crate) fn check_shape(&self, m: usize) -> Result<(), ValidationError> {
        if self.ground_size() != m {
            return Err(ValidationError::ObjectiveMismatch(format!(
                "objective covers {} candidates, instance has {m}",
                self.ground_size()
            )));
        }
        match self {
            Objective::Separable { weights } => {
                let total: i128 = weights.iter().map(|&w| (w as i128).abs()).sum();
                if total > i64::MAX as i128 {
                    return Err(ValidationError::ScoreOverflow(
                        "sum of absolute weights".to_string(),
                    ));
                }
            }
            Objective::KBorda { profile } | Objective::ChamberlinCourant { profile } => {
                let n = profile.voter_count() as i128;
                if n * (m as i128) * (m as i128) > i64::MAX as i128 {
                    return Err(ValidationError::ScoreOverflow(
                        "voters times squared candidate count".to_string(),
                    ));
                }
            }
            Objective::Table(_) => {}
        }
        Ok(())
    }

    /// The committee's score. The empty committee always scores 0.
    pub fn value(&self, s: &Committee) -> i64 {
        match self {
            Objective::Separable { weights } => s.iter().map(|c| weights[c.idx()]).sum(),
            Objective::KBorda { profile } => {
                let m = profile.candidate_count();
                (0..profile.voter_count())
                    .map(|v| {
                        s.iter()
                            .map(|c| borda_score(m, profile.position(v, c)))
                            .sum::<i64>()
                    })
                    .sum()
            }
            Objective::ChamberlinCourant { profile } => {
                if s.is_empty() {
                    return 0;
                }
                let m = profile.candidate_count();
                (0..profile.voter_count())
                    .map(|v| {
                        let best = s.iter().map(|c| profile.position(v, c)).min().unwrap();
                        borda_score(m, best)
                    })
                    .sum()
            }
            Objective::Table(t) => t.values[t.mask(s)],
        }
    }

    /// Marginal contribution `f(X | S) = f(S + X) - f(S)`. `x` must be
    /// disjoint from `s`.
    pub fn marginal(&self, x: &[CandidateId], s: &Committee) -> i64 {
        assert!(
            x.iter().all(|&c| !s.contains(c)),
            "marginal set overlaps the committee"
        );
        if x.is_empty() {
            return 0;
        }
        if let Objective::Separable { weights } = self {
            return x.iter().map(|c| weights[c.idx()]).sum();
        }
        let union = Committee::new(s.iter().chain(x.iter().copied()));
        self.value(&union) - self.value(s)
    }

    /// Whether the objective is a fixed per-candidate weight sum; returns the
    /// weight vector. k-Borda qualifies because each candidate's total Borda
    /// score across voters is a fixed weight.
    pub fn separable_weights(&self) -> Option<Vec<i64>> {
        match self {
            Objective::Separable { weights } => Some(weights.clone()),
            Objective::KBorda { profile } => {
                let m = profile.candidate_count();
                Some(
                    (0..m)
                        .map(|c| {
                            (0..profile.voter_count())
                                .map(|v| borda_score(m, profile.position(v, CandidateId(c as u32))))
                                .sum()
                        })
                        .collect(),
                )
            }
            _ => None,
        }
    }
}

/// Randomized diminishing-returns check: samples nested pairs `S subset of
/// S'` and candidates `c` outside `S'`, and reports `false` on any violation
/// of `f(S + c) - f(S) >= f(S' + c) - f(S')`. Intended for small ground sets.
pub fn is_submodular_witness(obj: &Objective, trials: usize, seed: u64) -> bool {
    let m = obj.ground_size();
    assert!(m <= 15, "witness check limited to small ground sets");
    if m == 0 {
        return true;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        // Sample S subset of S' by assigning each candidate to one of:
        // outside both, only in S', or in both.
        let mut small = Vec::new();
        let mut large = Vec::new();
        let mut outside = Vec::new();
        for c in 0..m {
            let c = CandidateId(c as u32);
            match rng.gen_range(0..3) {
                0 => outside.push(c),
                1 => large.push(c),
                _ => {
                    small.push(c);
                    large.push(c);
                }
            }
        }
        if outside.is_empty() {
            continue;
        }
        let c = outside[rng.gen_range(0..outside.len())];
        let small = Committee::new(small);
        let large = Committee::new(large);
        if obj.marginal(&[c], &small) < obj.marginal(&[c], &large) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn borda_score_formula() {
        assert_eq!(borda_score(3, 1), 2);
        assert_eq!(borda_score(3, 3), 0);
        assert_eq!(borda_score(5, 2), 3);
    }

    #[test]
    #[should_panic]
    fn borda_position_out_of_range() {
        borda_score(3, 4);
    }

    fn cc_profile() -> PreferenceProfile {
        // Two voters over {a, b, c}: v1: a > b > c, v2: c > b > a.
        PreferenceProfile::new(
            3,
            vec![
                vec![CandidateId(0), CandidateId(1), CandidateId(2)],
                vec![CandidateId(2), CandidateId(1), CandidateId(0)],
            ],
        )
        .unwrap()
    }

    #[test]
    fn separable_value() {
        let obj = Objective::separable(vec![4, 3, 2, 1]);
        let s = Committee::new([CandidateId(0), CandidateId(2)]);
        assert_eq!(obj.value(&s), 6);
    }

    #[test]
    fn cc_value_hand_evaluated() {
        let obj = Objective::ChamberlinCourant {
            profile: cc_profile(),
        };
        // {b}: each voter's representative is b at position 2, beta = 1 each.
        assert_eq!(obj.value(&Committee::new([CandidateId(1)])), 2);
        // {a, c}: each voter's best member sits at position 1.
        assert_eq!(
            obj.value(&Committee::new([CandidateId(0), CandidateId(2)])),
            4
        );
        assert_eq!(obj.value(&Committee::empty()), 0);
    }

    #[test]
    fn marginal_matches_value_difference() {
        let sep = Objective::separable(vec![4, 3, 2, 1]);
        assert_eq!(
            sep.marginal(&[CandidateId(1)], &Committee::new([CandidateId(0)])),
            3
        );
        let cc = Objective::ChamberlinCourant {
            profile: cc_profile(),
        };
        let base = Committee::new([CandidateId(1)]);
        let expected = cc.value(&Committee::new([CandidateId(0), CandidateId(1)])) - cc.value(&base);
        assert_eq!(cc.marginal(&[CandidateId(0)], &base), expected);
        assert_eq!(expected, 1);
        assert_eq!(cc.marginal(&[], &base), 0);
    }

    #[test]
    #[should_panic]
    fn marginal_rejects_overlap() {
        let obj = Objective::separable(vec![1, 2]);
        obj.marginal(&[CandidateId(0)], &Committee::new([CandidateId(0)]));
    }

    #[test]
    fn separable_marginal_constant_in_base() {
        let obj = Objective::separable(vec![5, -2, 7, 0]);
        let bases = [
            Committee::empty(),
            Committee::new([CandidateId(0)]),
            Committee::new([CandidateId(0), CandidateId(2)]),
        ];
        for base in &bases {
            assert_eq!(obj.marginal(&[CandidateId(3)], base), 0);
            if !base.contains(CandidateId(2)) {
                assert_eq!(obj.marginal(&[CandidateId(2)], base), 7);
            }
        }
    }

    #[test]
    fn kborda_weights_match_value() {
        let profile = cc_profile();
        let obj = Objective::KBorda { profile };
        let weights = obj.separable_weights().unwrap();
        // a: 2 + 0, b: 1 + 1, c: 0 + 2.
        assert_eq!(weights, vec![2, 2, 2]);
        let s = Committee::new([CandidateId(0), CandidateId(1)]);
        assert_eq!(obj.value(&s), 4);
    }

    #[test]
    fn cc_and_kborda_pass_submodular_witness() {
        let cc = Objective::ChamberlinCourant {
            profile: cc_profile(),
        };
        assert!(is_submodular_witness(&cc, 500, 7));
        let kb = Objective::KBorda {
            profile: cc_profile(),
        };
        assert!(is_submodular_witness(&kb, 500, 7));
    }

    #[test]
    fn supermodular_table_detected() {
        // f(S) = |S|^2: marginals grow with the base set.
        let values = (0..8u32).map(|mask| (mask.count_ones() as i64).pow(2)).collect();
        let table = Objective::Table(ValueTable::new(3, values));
        assert!(!is_submodular_witness(&table, 500, 7));
    }

    #[test]
    fn profile_must_be_full_permutation() {
        let err = PreferenceProfile::new(3, vec![vec![CandidateId(0), CandidateId(1)]]);
        assert!(err.is_err());
        let err = PreferenceProfile::new(
            2,
            vec![vec![CandidateId(0), CandidateId(0)]],
        );
        assert!(err.is_err());
    }

    #[test]
    fn exhaustive_cc_submodularity_small() {
        // All nested pairs on a 5-candidate, 3-voter profile.
        let profile = PreferenceProfile::new(
            5,
            vec![
                vec![0, 1, 2, 3, 4].into_iter().map(CandidateId).collect(),
                vec![4, 2, 0, 3, 1].into_iter().map(CandidateId).collect(),
                vec![3, 0, 4, 1, 2].into_iter().map(CandidateId).collect(),
            ],
        )
        .unwrap();
        let obj = Objective::ChamberlinCourant { profile };
        let m = 5;
        for small_mask in 0u32..(1 << m) {
            for large_mask in 0u32..(1 << m) {
                if small_mask & large_mask != small_mask {
                    continue;
                }
                let small = Committee::new(
                    (0..m).filter(|i| small_mask >> i & 1 == 1).map(|i| CandidateId(i as u32)),
                );
                let large = Committee::new(
                    (0..m).filter(|i| large_mask >> i & 1 == 1).map(|i| CandidateId(i as u32)),
                );
                for c in 0..m {
                    if large_mask >> c & 1 == 1 {
                        continue;
                    }
                    let c = CandidateId(c as u32);
                    assert!(obj.marginal(&[c], &small) >= obj.marginal(&[c], &large));
                }
            }
        }
    }
}
