//! Random non-recursive programs for property tests and the acceptance run.
//!
//! Programs are built as text and parsed, so the parser is exercised too.
//! Every program uses constants `a`..`c`, probabilistic facts over `p/1`,
//! `q/1` and `e/2`, annotated disjunctions over `d/2`, deterministic rules
//! for `r/1` and `s/1`, and theories for `h/1`.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use skill::logic::{Atom, Clause, Term, Theory};
use skill::program::{parse_clauses, parse_program, Program};
use skill::rng::{seeded_rng, SkillRng};

pub const CONSTANTS: [&str; 3] = ["a", "b", "c"];
/// Worlds in the largest program; keeps the oracle fast.
pub const MAX_WORLD_PRODUCT: usize = 1 << 13;

pub struct Case {
    pub text: String,
    pub program: Program,
    pub theory: Vec<Clause>,
    pub queries: Vec<Atom>,
    pub choice_vars: usize,
}

fn prob<R: Rng>(rng: &mut R) -> f64 {
    match rng.gen_range(0..10) {
        0 => 1.0,
        1 => 0.5,
        _ => (rng.gen_range(1..1000) as f64) / 1000.0,
    }
}

fn constant<R: Rng>(rng: &mut R, n: usize) -> &'static str {
    CONSTANTS[rng.gen_range(0..n)]
}

/// A random body literal text over `vars`; `rules` adds the rule predicates.
fn literal<R: Rng>(rng: &mut R, vars: &[&str], n_const: usize, rules: bool) -> String {
    let arg = |rng: &mut R| -> String {
        if rng.gen_bool(0.8) {
            vars.choose(rng).unwrap().to_string()
        } else {
            constant(rng, n_const).to_string()
        }
    };
    let preds: &[&str] = if rules { &["p", "q", "e", "d", "r", "s"] } else { &["p", "q", "e", "d"] };
    match *preds.choose(rng).unwrap() {
        p @ ("p" | "q" | "r" | "s") => format!("{p}({})", arg(rng)),
        p => format!("{p}({},{})", arg(rng), arg(rng)),
    }
}

/// A clause `head(X) :- ...` with 1 to 3 body literals.
pub fn random_clause<R: Rng>(rng: &mut R, head: &str, n_const: usize, rules: bool) -> String {
    let n = rng.gen_range(1..=3);
    let body: Vec<String> = (0..n).map(|_| literal(rng, &["X", "Y", "X"], n_const, rules)).collect();
    format!("{head}(X) :- {}.", body.join(", "))
}

/// A random program with at most `max_vars` choice variables, plus a
/// theory of 1 to 3 clauses and ground queries.
pub fn random_case_with(rng: &mut SkillRng, max_vars: usize) -> Case {
    let n_const = if rng.gen_bool(0.7) { 2 } else { 3 };
    let target = rng.gen_range(1..=max_vars);
    let mut text = String::new();
    let mut vars = 0;
    let mut worlds = 1usize;
    while vars < target {
        if rng.gen_bool(0.3) {
            let k = rng.gen_range(2..=3);
            if worlds * (k + 1) > MAX_WORLD_PRODUCT {
                break;
            }
            let x = constant(rng, n_const);
            let mut remaining = 1.0f64;
            let mut alts = Vec::new();
            let full = rng.gen_bool(0.4);
            let mut used = Vec::new();
            for i in 0..k {
                let y = CONSTANTS[(i + rng.gen_range(0..n_const)) % n_const];
                if used.contains(&y) {
                    continue;
                }
                used.push(y);
                let p = if full && i + 1 == k {
                    remaining
                } else {
                    (remaining * rng.gen_range(1..=9) as f64 / 10.0 * 1000.0).round() / 1000.0
                };
                remaining -= p;
                alts.push(format!("{p}::d({x},{y})"));
            }
            text.push_str(&alts.join("; "));
            text.push_str(".\n");
            worlds *= alts.len() + 1;
        } else {
            if worlds * 2 > MAX_WORLD_PRODUCT {
                break;
            }
            let atom = match rng.gen_range(0..3) {
                0 => format!("p({})", constant(rng, n_const)),
                1 => format!("q({})", constant(rng, n_const)),
                _ => format!("e({},{})", constant(rng, n_const), constant(rng, n_const)),
            };
            text.push_str(&format!("{}::{atom}.\n", prob(rng)));
            worlds *= 2;
        }
        vars += 1;
    }
    // Every base predicate is declared so no rule refers to an unknown one.
    if !text.contains("p(") {
        text.push_str("0.0::p(a).\n");
        vars += 1;
    }
    for rule_head in ["r", "s"] {
        for _ in 0..rng.gen_range(0..=2) {
            text.push_str(&random_clause(rng, rule_head, n_const, false));
            text.push('\n');
        }
    }
    let program = parse_program(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
    let theory_text: Vec<String> = (0..rng.gen_range(1..=3)).map(|_| random_clause(rng, "h", n_const, true)).collect();
    let theory = parse_clauses(&theory_text.join("\n")).unwrap();
    let mut queries = Vec::new();
    for c in &CONSTANTS[..n_const] {
        queries.push(Atom::new("h", vec![Term::constant(c)]));
    }
    queries.push(Atom::new("r", vec![Term::constant(constant(rng, n_const))]));
    Case { text, program, theory, queries, choice_vars: vars }
}

pub fn random_case(seed: u64) -> Case {
    random_case_with(&mut seeded_rng(seed), 12)
}

pub fn theory(cs: &[Clause]) -> Theory {
    Theory::from_clauses(cs)
}
