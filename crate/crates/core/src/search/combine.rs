//! Disjunctive combination of theories and bound-based pruning.
//!
//! For `H1 ∨ H2` the exact probability of an example lies between the
//! completely-overlapping case `max(p1, p2)` and the disjoint case
//! `min(p1 + p2, 1)`. Before inference the midpoint of that interval stands
//! in for the unknown value; after inference the exact values are used.
//! Either way a combination is discarded when its values exceed the
//! expectations in total, since adding further clauses can only raise them.

use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use super::{score_theory, PruneMode, ScoredTheory, SearchError};
use crate::inference::KnowledgeBase;
use crate::metrics::MetricError;
use crate::program::ProbExample;

/// Over-coverage below this total is treated as balance, absorbing the
/// rounding left when predictions and expectations agree analytically.
pub const PRUNE_SLACK: f64 = 1e-9;

fn unit(p: f64) -> Result<f64, MetricError> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(MetricError::OutOfDomain(p))
    }
}

/// `(max(p1,p2), min(p1+p2,1))`.
pub fn disjunction_bounds(p1: f64, p2: f64) -> Result<(f64, f64), MetricError> {
    let (p1, p2) = (unit(p1)?, unit(p2)?);
    Ok((p1.max(p2), (p1 + p2).min(1.0)))
}

/// Midpoint of [`disjunction_bounds`].
pub fn estimate_disjunction(p1: f64, p2: f64) -> Result<f64, MetricError> {
    let (lo, hi) = disjunction_bounds(p1, p2)?;
    Ok((lo + hi) / 2.0)
}

/// `true` when `Σ (value_i - expected_i) > 0`, i.e. the combination already
/// over-covers the examples overall.
pub fn overcovers(values: &[f64], examples: &[ProbExample]) -> bool {
    let total: f64 = values.iter().zip(examples).map(|(v, e)| v - e.expected).sum();
    total > PRUNE_SLACK
}

/// Counters for one call of [`generate_combinations`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CombinationStats {
    pub pairs: usize,
    pub skipped_subset: usize,
    pub duplicates: usize,
    pub pre_pruned: usize,
    pub evaluated: usize,
    pub inference_calls: usize,
    pub post_pruned: usize,
    pub kept: usize,
}

/// Builds `H_p ∨ H_s` for every primary/secondary pair, prunes as configured,
/// scores the survivors exactly, and returns them in pair order.
pub fn generate_combinations(
    primary: &[ScoredTheory],
    secondary: &[ScoredTheory],
    kb: &KnowledgeBase,
    examples: &[ProbExample],
    prune: PruneMode,
    depth_bound: usize,
) -> Result<(Vec<ScoredTheory>, CombinationStats), SearchError> {
    let mut stats = CombinationStats::default();
    let mut seen = HashSet::new();
    let mut candidates = Vec::new();
    for hp in primary {
        for hs in secondary {
            stats.pairs += 1;
            if hp.theory.contains_all(&hs.theory) {
                stats.skipped_subset += 1;
                continue;
            }
            let theory = hp.theory.union(&hs.theory);
            let key = theory.key();
            if seen.contains(&key) {
                stats.duplicates += 1;
                continue;
            }
            if prune.pre() {
                let estimates = hp
                    .predictions
                    .values()
                    .iter()
                    .zip(hs.predictions.values())
                    .map(|(&a, &b)| estimate_disjunction(a, b))
                    .collect::<Result<Vec<f64>, _>>()?;
                if overcovers(&estimates, examples) {
                    stats.pre_pruned += 1;
                    continue;
                }
            }
            seen.insert(key);
            candidates.push(theory);
        }
    }
    stats.evaluated = candidates.len();
    stats.inference_calls = candidates.len() * examples.len();
    let scored: Vec<ScoredTheory> =
        candidates.par_iter().map(|t| score_theory(kb, examples, t.clone(), depth_bound)).collect::<Result<_, _>>()?;
    let kept: Vec<ScoredTheory> = if prune.post() {
        let before = scored.len();
        let kept: Vec<ScoredTheory> =
            scored.into_iter().filter(|h| !overcovers(h.predictions.values(), examples)).collect();
        stats.post_pruned = before - kept.len();
        kept
    } else {
        scored
    };
    stats.kept = kept.len();
    Ok((kept, stats))
}
