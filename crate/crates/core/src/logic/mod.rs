//! First-order terms, unification and canonical clause forms.

mod canonical;
mod term;
mod unify;

pub use canonical::{canonicalize, renumber, theory_key, Theory, TheoryKey, MAX_PERMUTED_GROUP};
pub use term::{Atom, Clause, PredKey, Sym, Term, Var};
pub use unify::{unify, Substitution};
