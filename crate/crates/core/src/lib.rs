//! A stochastic inductive logic learner for probabilistic data.
//!
//! Given probabilistic background knowledge (independent facts and
//! annotated disjunctions, plus deterministic rules), mode declarations and
//! examples annotated with expected probabilities, the learner searches for
//! a set of definite clauses whose predicted example probabilities best
//! match the expectations.
//!
//! * [`logic`]: terms, unification and canonical clause forms.
//! * [`program`]: the `.pbk`/`.pex` text formats and validation.
//! * [`inference`]: exact query probabilities and a possible-world oracle.
//! * [`hypgen`]: single-clause hypotheses from mode declarations.
//! * [`metrics`]: RMSE, probabilistic accuracy and confusion counts.
//! * [`search`]: the primary/secondary combination search with pruning.
//! * [`rps`]: a synthetic rock-paper-scissors data generator.
//! * [`cli`]: the `skill` command line.
//!
//! ```
//! use skill::inference::{query_probability, KnowledgeBase};
//! use skill::logic::Theory;
//! use skill::program::{parse_clauses, parse_program};
//!
//! let bk = parse_program(
//!     "0.1::plays(a,rock); 0.1::plays(a,paper); 0.8::plays(a,scissors).\n\
//!      0.1::plays(b,rock); 0.3::plays(b,paper); 0.6::plays(b,scissors).",
//! ).unwrap();
//! let theory = Theory::from_clauses(&skill::rps::ground_truth_rules());
//! let query = parse_clauses("beats(a,b).").unwrap().remove(0).head;
//! let kb = KnowledgeBase::new(&bk).unwrap();
//! let p = query_probability(&kb, &theory, &query, 32).probability;
//! assert!((p - 0.31).abs() < 1e-12);
//! ```

pub mod cli;
pub mod hypgen;
pub mod inference;
pub mod logic;
pub mod metrics;
pub mod program;
pub mod rng;
pub mod rps;
pub mod search;
