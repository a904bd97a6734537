//! The stochastic theory search.
//!
//! Single-clause hypotheses are generated and scored first. For each larger
//! theory length, a primary set (the best theories of the previous length)
//! and a secondary set (the best single clauses plus a fresh random sample
//! of the others) are selected and every primary theory is extended by
//! disjunction with every secondary clause. All scored theories are kept and
//! the best one by the evaluation metric is returned.

mod combine;
mod report;
mod select;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::hypgen::{generate_length_one, GenConfig, GenError};
use crate::inference::{query_probability, InferenceError, KnowledgeBase, DEFAULT_DEPTH_BOUND};
use crate::logic::{Theory, TheoryKey};
use crate::metrics::{MetricError, PredictionVector, Score};
use crate::program::{ProbExample, Program};
use crate::rng::{seeded_rng, RNG_ALGORITHM};

pub use combine::{
    disjunction_bounds, estimate_disjunction, generate_combinations, overcovers, CombinationStats, PRUNE_SLACK,
};
pub use report::{fmt_f64, IterationReport, LearnReport, LengthBest, TimingReport};
pub use select::{select_primary, select_secondary};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RankMetric {
    Rmse,
    Pacc,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalMetric {
    Rmse,
    Pacc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PruneMode {
    None,
    Pre,
    Post,
    Both,
}

impl PruneMode {
    pub fn pre(self) -> bool {
        matches!(self, PruneMode::Pre | PruneMode::Both)
    }

    pub fn post(self) -> bool {
        matches!(self, PruneMode::Post | PruneMode::Both)
    }
}

macro_rules! text_enum {
    ($ty:ident { $($variant:ident => $text:literal),* $(,)? }) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self { $($ty::$variant => $text),* })
            }
        }

        impl FromStr for $ty {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s.to_ascii_lowercase().as_str() {
                    $($text => Ok($ty::$variant),)*
                    _ => Err(format!("unknown value `{s}`; expected one of: {}", [$($text),*].join(", "))),
                }
            }
        }
    };
}

text_enum!(RankMetric { Rmse => "rmse", Pacc => "pacc", Random => "random" });
text_enum!(EvalMetric { Rmse => "rmse", Pacc => "pacc" });
text_enum!(PruneMode { None => "none", Pre => "pre", Post => "post", Both => "both" });

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchConfig {
    pub max_theory_length: usize,
    pub psize: usize,
    pub ssize: usize,
    pub rank_metric: RankMetric,
    pub eval_metric: EvalMetric,
    pub prune_mode: PruneMode,
    pub seed: u64,
    pub depth_bound: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_theory_length: 3,
            psize: 20,
            ssize: 200,
            rank_metric: RankMetric::Pacc,
            eval_metric: EvalMetric::Pacc,
            prune_mode: PruneMode::Both,
            seed: 0,
            depth_bound: DEFAULT_DEPTH_BOUND,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    Config(String),
    #[error("no examples")]
    NoExamples,
    #[error(transparent)]
    Generation(#[from] GenError),
    #[error("hypothesis generation produced no clause covering any example")]
    GenerationEmpty,
    #[error(transparent)]
    Inference(#[from] InferenceError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("no theories to choose from")]
    EmptyTheorySet,
}

/// A theory with its per-example probabilities and scores.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoredTheory {
    pub theory: Theory,
    pub predictions: PredictionVector,
    pub score: Score,
    /// Some proof search hit the depth bound; predictions are lower bounds.
    pub truncated: bool,
}

/// Runs exact inference for every example and scores the result.
pub fn score_theory(
    kb: &KnowledgeBase,
    examples: &[ProbExample],
    theory: Theory,
    depth_bound: usize,
) -> Result<ScoredTheory, SearchError> {
    let mut truncated = false;
    let values = examples
        .iter()
        .map(|e| {
            let r = query_probability(kb, &theory, &e.atom, depth_bound);
            truncated |= r.truncated;
            r.probability
        })
        .collect();
    let predictions = PredictionVector(values);
    let score = Score::compute(&predictions, examples)?;
    Ok(ScoredTheory { theory, predictions, score, truncated })
}

fn eval_order(metric: EvalMetric, a: &ScoredTheory, b: &ScoredTheory) -> Ordering {
    let by_metric = match metric {
        EvalMetric::Rmse => a.score.rmse.total_cmp(&b.score.rmse),
        EvalMetric::Pacc => b.score.pacc.total_cmp(&a.score.pacc),
    };
    by_metric.then_with(|| a.theory.len().cmp(&b.theory.len())).then_with(|| a.theory.key().cmp(&b.theory.key()))
}

/// Lowest RMSE or highest PAcc; ties go to fewer clauses, then to the
/// canonical key.
pub fn best_theory<'a>(
    all: impl IntoIterator<Item = &'a ScoredTheory>,
    metric: EvalMetric,
) -> Result<&'a ScoredTheory, SearchError> {
    all.into_iter().min_by(|a, b| eval_order(metric, a, b)).ok_or(SearchError::EmptyTheorySet)
}

/// Result of [`skill_learn`].
#[derive(Clone, Debug)]
pub struct LearnOutcome {
    pub best: ScoredTheory,
    pub hypotheses: Vec<ScoredTheory>,
    pub report: LearnReport,
}

fn check_config(cfg: &SearchConfig) -> Result<(), SearchError> {
    let fail = |m: &str| Err(SearchError::Config(m.into()));
    if cfg.max_theory_length == 0 {
        return fail("max_theory_length must be at least 1");
    }
    if cfg.psize == 0 {
        return fail("psize must be at least 1");
    }
    if cfg.ssize < cfg.psize {
        return fail("ssize must be at least psize");
    }
    if cfg.depth_bound == 0 {
        return fail("depth_bound must be at least 1");
    }
    Ok(())
}

/// The full learning loop over a validated program and its examples.
pub fn skill_learn(
    prog: &Program,
    examples: &[ProbExample],
    gen_cfg: &GenConfig,
    cfg: &SearchConfig,
) -> Result<LearnOutcome, SearchError> {
    check_config(cfg)?;
    if examples.is_empty() {
        return Err(SearchError::NoExamples);
    }
    let started = Instant::now();
    let kb = KnowledgeBase::new(prog)?;
    let generated = generate_length_one(&kb, prog, examples, gen_cfg, cfg.depth_bound)?;
    if generated.clauses.is_empty() {
        return Err(SearchError::GenerationEmpty);
    }
    let hyps1: Vec<ScoredTheory> = generated
        .clauses
        .par_iter()
        .map(|c| score_theory(&kb, examples, Theory::single(c), cfg.depth_bound))
        .collect::<Result<_, _>>()?;
    let generation_ms = started.elapsed().as_secs_f64() * 1e3;

    let mut rng = seeded_rng(cfg.seed);
    let mut all: BTreeMap<TheoryKey, ScoredTheory> = hyps1.iter().map(|h| (h.theory.key(), h.clone())).collect();
    let mut hyps_n = hyps1.clone();
    let mut iterations = Vec::new();
    let mut iteration_ms = Vec::new();
    for length in 2..=cfg.max_theory_length {
        let t0 = Instant::now();
        let primary = select_primary(&hyps_n, cfg.psize, cfg.rank_metric, &mut rng);
        let secondary = select_secondary(&hyps1, cfg.psize, cfg.ssize, cfg.rank_metric, &mut rng);
        let (next, stats) =
            generate_combinations(&primary, &secondary, &kb, examples, cfg.prune_mode, cfg.depth_bound)?;
        for h in &next {
            all.entry(h.theory.key()).or_insert_with(|| h.clone());
        }
        iterations.push(IterationReport { length, primary: primary.len(), secondary: secondary.len(), stats });
        iteration_ms.push(t0.elapsed().as_secs_f64() * 1e3);
        hyps_n = next;
    }

    let best = best_theory(all.values(), cfg.eval_metric)?.clone();
    let mut per_length = Vec::new();
    for length in 1..=cfg.max_theory_length {
        if let Ok(b) = best_theory(all.values().filter(|h| h.theory.len() == length), cfg.eval_metric) {
            per_length.push(LengthBest::from_scored(length, b));
        }
    }
    let truncated = all.values().filter(|h| h.truncated).count();
    let report = LearnReport {
        rng_algorithm: RNG_ALGORITHM.to_string(),
        generated_raw: generated.raw,
        generated_unique: generated.raw - generated.removed,
        permutations_removed: generated.removed,
        uncovering_removed: generated.uncovering,
        hypotheses: hyps1.len(),
        hypothesis_inference_calls: hyps1.len() * examples.len(),
        iterations,
        best_per_length: per_length,
        theories_scored: all.len(),
        truncated_theories: truncated,
        best: LengthBest::from_scored(best.theory.len(), &best),
        timing: TimingReport { generation_ms, iteration_ms, total_ms: started.elapsed().as_secs_f64() * 1e3 },
    };
    Ok(LearnOutcome { best, hypotheses: hyps1, report })
}
