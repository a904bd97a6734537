//! Disjunction bounds, the midpoint estimate and the over-coverage test
//! used to discard combinations.
//!
//! Run with `cargo run --example pruning_bounds`.

use skill::hypgen::{generate_length_one, GenConfig};
use skill::inference::KnowledgeBase;
use skill::logic::Theory;
use skill::program::{parse_examples, parse_program};
use skill::rps::{generate, Rounds};
use skill::search::{disjunction_bounds, estimate_disjunction, generate_combinations, score_theory, PruneMode};

fn main() {
    for (p1, p2) in [(0.2, 0.3), (0.5, 0.7), (0.0, 0.4)] {
        let (lo, hi) = disjunction_bounds(p1, p2).unwrap();
        println!("P1={p1} P2={p2}: [{lo:.2}, {hi:.2}] midpoint {:.3}", estimate_disjunction(p1, p2).unwrap());
    }

    let data = generate(3, Rounds::PerPair(10), true, 0).unwrap();
    let program = parse_program(&data.pbk).unwrap();
    let examples = parse_examples(&data.pex).unwrap();
    let kb = KnowledgeBase::new(&program).unwrap();
    let g = generate_length_one(&kb, &program, &examples, &GenConfig::default(), 32).unwrap();
    let hyps: Vec<_> = g.clauses.iter().map(|c| score_theory(&kb, &examples, Theory::single(c), 32).unwrap()).collect();
    println!("\nall pairs of {} single clauses:", hyps.len());
    for mode in [PruneMode::None, PruneMode::Pre, PruneMode::Post, PruneMode::Both] {
        let (kept, s) = generate_combinations(&hyps, &hyps, &kb, &examples, mode, 32).unwrap();
        println!(
            "{:>4}: pre-pruned {:3} evaluated {:3} inference calls {:4} post-pruned {:3} kept {:3}",
            mode.to_string(),
            s.pre_pruned,
            s.evaluated,
            s.inference_calls,
            s.post_pruned,
            kept.len()
        );
    }
}
