//! Exact query probability for two rock-paper-scissors players.
//!
//! Run with `cargo run --example infer_rps`.

use skill::inference::{collect_proofs, query_probability, KnowledgeBase};
use skill::logic::Theory;
use skill::program::{parse_clauses, parse_program};
use skill::rps::ground_truth_rules;

const BK: &str = "
0.1::plays(playerA,rock); 0.1::plays(playerA,paper); 0.8::plays(playerA,scissors).
0.1::plays(playerB,rock); 0.3::plays(playerB,paper); 0.6::plays(playerB,scissors).
";

fn main() {
    let kb = KnowledgeBase::new(&parse_program(BK).unwrap()).unwrap();
    let theory = Theory::from_clauses(&ground_truth_rules());
    println!("theory:\n{theory}");
    for q in ["beats(playerA,playerB)", "beats(playerB,playerA)"] {
        let atom = parse_clauses(&format!("{q}.")).unwrap().remove(0).head;
        let dnf = collect_proofs(&kb, &theory, &atom, 32);
        let r = query_probability(&kb, &theory, &atom, 32);
        println!("{q}: {} proofs, P = {:.4}", dnf.disjuncts.len(), r.probability);
    }
}
