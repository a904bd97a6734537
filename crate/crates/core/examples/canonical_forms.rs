//! Clauses that differ only in body order and variable names share a
//! canonical form, so theories built from them collapse to one key.
//!
//! Run with `cargo run --example canonical_forms`.

use skill::logic::{canonicalize, Theory};
use skill::program::parse_clauses;

fn main() {
    let cs = parse_clauses(
        "beats(A,B) :- plays(B,scissors), plays(A,rock).
         beats(P,Q) :- plays(P,rock), plays(Q,scissors).
         h(X) :- p(X,Y), p(X,Z).
         h(X) :- p(X,Y), p(X,Y).",
    )
    .unwrap();
    for c in &cs {
        println!("{c:45} => {}", canonicalize(c));
    }
    let t1 = Theory::from_clauses(&cs[..1]);
    let t2 = Theory::from_clauses(&cs[1..2]);
    println!("same theory key: {}", t1.key() == t2.key());
    println!("repeated literal kept apart: {}", canonicalize(&cs[2]) != canonicalize(&cs[3]));
}
