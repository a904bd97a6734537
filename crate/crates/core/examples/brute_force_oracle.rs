//! Compares exact inference with possible-world enumeration on a small
//! program that mixes independent facts, a disjunction and a helper rule.
//!
//! Run with `cargo run --example brute_force_oracle`.

use skill::inference::{brute_force_probability, query_probability, KnowledgeBase, WorldScope};
use skill::logic::Theory;
use skill::program::{parse_clauses, parse_program};

const BK: &str = "
0.6::edge(a,b). 0.3::edge(b,c). 0.7::edge(a,c).
0.5::color(c,red); 0.2::color(c,blue).
reach(X,Y) :- edge(X,Y).
reach(X,Y) :- edge(X,Z), edge(Z,Y).
";

fn main() {
    let kb = KnowledgeBase::new(&parse_program(BK).unwrap()).unwrap();
    let theory = Theory::from_clauses(&parse_clauses("target(X) :- reach(X,Y), color(Y,red).").unwrap());
    for q in ["target(a)", "target(b)", "reach(a,c)"] {
        let atom = parse_clauses(&format!("{q}.")).unwrap().remove(0).head;
        let exact = query_probability(&kb, &theory, &atom, 32).probability;
        let worlds = brute_force_probability(&kb, &theory, &atom, 32, WorldScope::AllVars).unwrap();
        println!("{q:12} exact {exact:.12}  worlds {worlds:.12}  diff {:.1e}", (exact - worlds).abs());
    }
}
