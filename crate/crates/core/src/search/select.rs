use std::cmp::Ordering;
use std::collections::BTreeSet;

use rand::seq::index;
use rand::Rng;

use super::{RankMetric, ScoredTheory};

/// Best-first order for a deterministic rank metric; ties fall back to the
/// canonical theory key.
pub(crate) fn rank_order(metric: RankMetric, a: &ScoredTheory, b: &ScoredTheory) -> Ordering {
    let by_metric = match metric {
        RankMetric::Rmse => a.score.rmse.total_cmp(&b.score.rmse),
        RankMetric::Pacc => b.score.pacc.total_cmp(&a.score.pacc),
        RankMetric::Random => Ordering::Equal,
    };
    by_metric.then_with(|| a.theory.key().cmp(&b.theory.key()))
}

fn sorted_by_key(hyps: &[ScoredTheory]) -> Vec<ScoredTheory> {
    let mut v = hyps.to_vec();
    v.sort_by_key(|a| a.theory.key());
    v
}

/// Uniform draws without replacement, from a key-sorted population so the
/// outcome depends only on the population and the generator state.
fn draw<R: Rng>(population: &[ScoredTheory], n: usize, rng: &mut R) -> Vec<ScoredTheory> {
    let pool = sorted_by_key(population);
    index::sample(rng, pool.len(), n).into_iter().map(|i| pool[i].clone()).collect()
}

/// The `psize` best theories by `rank`, or `psize` uniform draws for
/// [`RankMetric::Random`]. A population no larger than `psize` is returned
/// whole.
pub fn select_primary<R: Rng>(
    hyps_n: &[ScoredTheory],
    psize: usize,
    rank: RankMetric,
    rng: &mut R,
) -> Vec<ScoredTheory> {
    if hyps_n.len() <= psize {
        let mut all = hyps_n.to_vec();
        all.sort_by(|a, b| rank_order(rank, a, b));
        return all;
    }
    match rank {
        RankMetric::Random => draw(hyps_n, psize, rng),
        _ => {
            let mut all = hyps_n.to_vec();
            all.sort_by(|a, b| rank_order(rank, a, b));
            all.truncate(psize);
            all
        }
    }
}

/// The `psize` best single-clause hypotheses plus `ssize - psize` distinct
/// uniform draws from the rest. The random tail is drawn fresh on every call.
pub fn select_secondary<R: Rng>(
    hyps1: &[ScoredTheory],
    psize: usize,
    ssize: usize,
    rank: RankMetric,
    rng: &mut R,
) -> Vec<ScoredTheory> {
    if hyps1.len() <= ssize {
        let mut all = hyps1.to_vec();
        all.sort_by(|a, b| rank_order(rank, a, b));
        return all;
    }
    let mut out = select_primary(hyps1, psize.min(ssize), rank, rng);
    let taken: BTreeSet<_> = out.iter().map(|h| h.theory.key()).collect();
    let rest: Vec<ScoredTheory> = hyps1.iter().filter(|h| !taken.contains(&h.theory.key())).cloned().collect();
    out.extend(draw(&rest, ssize - out.len(), rng));
    out
}
