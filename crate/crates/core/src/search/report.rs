use std::fmt::Write;

use serde::Serialize;

use super::{CombinationStats, ScoredTheory};
use crate::metrics::Score;

/// Shortest round-trip form, switching to exponent notation for very small
/// or very large magnitudes.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if a != 0.0 && !(1e-6..1e15).contains(&a) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IterationReport {
    pub length: usize,
    pub primary: usize,
    pub secondary: usize,
    #[serde(flatten)]
    pub stats: CombinationStats,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LengthBest {
    pub length: usize,
    pub clauses: Vec<String>,
    pub score: Score,
    pub predictions: Vec<f64>,
}

impl LengthBest {
    pub fn from_scored(length: usize, h: &ScoredTheory) -> Self {
        LengthBest {
            length,
            clauses: h.theory.clauses().map(|c| c.to_string()).collect(),
            score: h.score,
            predictions: h.predictions.values().to_vec(),
        }
    }
}

/// Wall-clock measurements. Kept apart from everything else because they
/// are the only part of a run that is not reproducible.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TimingReport {
    pub generation_ms: f64,
    pub iteration_ms: Vec<f64>,
    pub total_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LearnReport {
    pub rng_algorithm: String,
    pub generated_raw: usize,
    pub generated_unique: usize,
    pub permutations_removed: usize,
    pub uncovering_removed: usize,
    pub hypotheses: usize,
    pub hypothesis_inference_calls: usize,
    pub iterations: Vec<IterationReport>,
    pub best_per_length: Vec<LengthBest>,
    pub theories_scored: usize,
    pub truncated_theories: usize,
    pub best: LengthBest,
    #[serde(skip)]
    pub timing: TimingReport,
}

impl LearnReport {
    /// Total exact inference calls, single-clause scoring included.
    pub fn inference_calls(&self) -> usize {
        self.hypothesis_inference_calls + self.iterations.iter().map(|i| i.stats.inference_calls).sum::<usize>()
    }

    /// Deterministic sections of the text report.
    pub fn render_body(&self, out: &mut String, sqrt_rmse: bool) {
        let rmse = |s: &Score| if sqrt_rmse { s.rmse.sqrt() } else { s.rmse };
        let _ = writeln!(out, "[generation]");
        let _ = writeln!(out, "candidates = {}", self.generated_raw);
        let _ = writeln!(out, "unique = {}", self.generated_unique);
        let _ = writeln!(out, "permutations_removed = {}", self.permutations_removed);
        let _ = writeln!(out, "non_covering_removed = {}", self.uncovering_removed);
        let _ = writeln!(out, "hypotheses = {}", self.hypotheses);
        let _ = writeln!(out, "inference_calls = {}", self.hypothesis_inference_calls);
        for it in &self.iterations {
            let s = &it.stats;
            let _ = writeln!(out, "\n[iteration {}]", it.length);
            let _ = writeln!(out, "primary = {}", it.primary);
            let _ = writeln!(out, "secondary = {}", it.secondary);
            let _ = writeln!(out, "pairs = {}", s.pairs);
            let _ = writeln!(out, "skipped_subset = {}", s.skipped_subset);
            let _ = writeln!(out, "duplicates = {}", s.duplicates);
            let _ = writeln!(out, "pre_pruned = {}", s.pre_pruned);
            let _ = writeln!(out, "evaluated = {}", s.evaluated);
            let _ = writeln!(out, "inference_calls = {}", s.inference_calls);
            let _ = writeln!(out, "post_pruned = {}", s.post_pruned);
            let _ = writeln!(out, "kept = {}", s.kept);
        }
        let _ = writeln!(out, "\n[best per length]");
        for b in &self.best_per_length {
            let _ = writeln!(
                out,
                "length {}: pacc = {} rmse = {}",
                b.length,
                fmt_f64(b.score.pacc),
                fmt_f64(rmse(&b.score))
            );
            for c in &b.clauses {
                let _ = writeln!(out, "  {c}");
            }
        }
        let _ = writeln!(out, "\n[result]");
        let _ = writeln!(out, "theories_scored = {}", self.theories_scored);
        let _ = writeln!(out, "truncated_theories = {}", self.truncated_theories);
        let _ = writeln!(out, "total_inference_calls = {}", self.inference_calls());
        let _ = writeln!(out, "clauses = {}", self.best.clauses.len());
        for c in &self.best.clauses {
            let _ = writeln!(out, "  {c}");
        }
        let s = &self.best.score;
        let _ = writeln!(out, "rmse = {}", fmt_f64(rmse(s)));
        let _ = writeln!(out, "pacc = {}", fmt_f64(s.pacc));
        let _ = writeln!(out, "tp = {}", fmt_f64(s.confusion.tp));
        let _ = writeln!(out, "tn = {}", fmt_f64(s.confusion.tn));
        let _ = writeln!(out, "fp = {}", fmt_f64(s.confusion.fp));
        let _ = writeln!(out, "fn = {}", fmt_f64(s.confusion.fn_));
        let preds: Vec<String> = self.best.predictions.iter().map(|&p| fmt_f64(p)).collect();
        let _ = writeln!(out, "predictions = [{}]", preds.join(", "));
    }

    pub fn render_timing(&self, out: &mut String) {
        let t = &self.timing;
        let _ = writeln!(out, "generation_ms = {:.3}", t.generation_ms);
        for (it, ms) in self.iterations.iter().zip(&t.iteration_ms) {
            let _ = writeln!(out, "iteration_{}_ms = {:.3}", it.length, ms);
        }
        let _ = writeln!(out, "total_ms = {:.3}", t.total_ms);
    }
}
