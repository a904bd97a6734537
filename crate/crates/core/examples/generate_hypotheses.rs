//! Single-clause hypotheses from mode declarations, before and after
//! removing permutations and clauses that cover no positive example.
//!
//! Run with `cargo run --example generate_hypotheses`.

use skill::hypgen::{enumerate_candidates, generate_length_one, GenConfig};
use skill::inference::KnowledgeBase;
use skill::program::{parse_examples, parse_program};
use skill::rps::{generate, Rounds};

fn main() {
    let data = generate(3, Rounds::PerPair(10), true, 1).unwrap();
    let program = parse_program(&data.pbk).unwrap();
    let examples = parse_examples(&data.pex).unwrap();
    let cfg = GenConfig::default();
    let raw = enumerate_candidates(&program, &cfg).unwrap();
    println!("{} raw candidates, for example:", raw.len());
    for c in raw.iter().take(4) {
        println!("  {c}");
    }
    let kb = KnowledgeBase::new(&program).unwrap();
    let g = generate_length_one(&kb, &program, &examples, &cfg, 32).unwrap();
    println!("{} permutations removed, {} non-covering removed, {} kept:", g.removed, g.uncovering, g.clauses.len());
    for c in &g.clauses {
        println!("  {c}");
    }
}
