//! Exact query probabilities under the distribution semantics.
//!
//! A query is answered in two stages: [`collect_proofs`] runs SLD resolution
//! over the background knowledge plus a candidate theory and records, for
//! every refutation, the probabilistic choices it consumed; then
//! [`dnf_probability`] computes the exact probability of the disjunction of
//! those choice sets. [`brute_force_probability`] is an independent oracle
//! that sums possible worlds directly.

mod dnf;
mod oracle;
mod sld;

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::logic::{Atom, Clause, PredKey, Substitution, Sym, Term, Theory, Var};
use crate::program::Program;

pub use dnf::dnf_probability;
pub use oracle::{brute_force_probability, WorldScope, MAX_WORLDS};
pub use sld::collect_proofs;

/// Default bound on resolution steps per derivation.
pub const DEFAULT_DEPTH_BOUND: usize = 32;

/// Refuse to ground a single non-ground statement into more instances.
const MAX_GROUNDINGS: usize = 1_000_000;

/// One random variable of the compiled program: an independent fact, or one
/// alternative of an annotated disjunction.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Choice {
    Fact(u32),
    Alt { ad: u32, alt: u32 },
}

impl fmt::Display for Choice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Choice::Fact(i) => write!(f, "f{i}"),
            Choice::Alt { ad, alt } => write!(f, "d{ad}={alt}"),
        }
    }
}

/// The probabilistic support of one proof. Never holds two different
/// alternatives of the same disjunction.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct ChoiceSet(BTreeSet<Choice>);

impl ChoiceSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a choice, returning `false` (and leaving the set unchanged) if
    /// it conflicts with an already selected alternative.
    pub fn insert(&mut self, c: Choice) -> bool {
        if let Choice::Alt { ad, .. } = c {
            let lo = Choice::Alt { ad, alt: 0 };
            let hi = Choice::Alt { ad, alt: u32::MAX };
            if self.0.range(lo..=hi).any(|other| *other != c) {
                return false;
            }
        }
        self.0.insert(c);
        true
    }

    pub fn contains(&self, c: &Choice) -> bool {
        self.0.contains(c)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Choice> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_subset(&self, other: &ChoiceSet) -> bool {
        self.0.is_subset(&other.0)
    }

    fn remove(&mut self, c: &Choice) -> bool {
        self.0.remove(c)
    }
}

impl FromIterator<Choice> for ChoiceSet {
    /// Panics on an inconsistent collection.
    fn from_iter<I: IntoIterator<Item = Choice>>(iter: I) -> Self {
        let mut s = ChoiceSet::new();
        for c in iter {
            assert!(s.insert(c), "inconsistent choice set");
        }
        s
    }
}

/// Disjunction of proofs, plus whether any derivation hit the depth bound
/// (in which case the probability is a lower bound).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Dnf {
    pub disjuncts: Vec<ChoiceSet>,
    pub truncated: bool,
}

/// Probabilities of the random variables, indexed like [`Choice`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ChoiceTable {
    pub facts: Vec<f64>,
    pub ads: Vec<Vec<f64>>,
}

impl ChoiceTable {
    pub fn weight(&self, c: Choice) -> f64 {
        match c {
            Choice::Fact(i) => self.facts[i as usize],
            Choice::Alt { ad, alt } => self.ads[ad as usize][alt as usize],
        }
    }

    /// Mass of "no alternative selected" for one disjunction.
    pub fn residual(&self, ad: u32) -> f64 {
        (1.0 - self.ads[ad as usize].iter().sum::<f64>()).max(0.0)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InferenceError {
    #[error("possible-world space of {worlds} worlds exceeds the limit of {limit}")]
    WorldSpaceTooLarge { worlds: f64, limit: usize },
    #[error("grounding {statement} over {constants} constants yields too many instances")]
    GroundingTooLarge { statement: String, constants: usize },
}

#[derive(Clone, Debug)]
pub(crate) struct GroundFact {
    pub atom: Atom,
    pub choice: Choice,
}

/// A program compiled for querying: probabilistic statements grounded over
/// the program's constants and indexed by predicate.
#[derive(Clone, Debug)]
pub struct KnowledgeBase {
    pub(crate) facts: HashMap<PredKey, Vec<GroundFact>>,
    pub(crate) rules: HashMap<PredKey, Vec<Clause>>,
    table: ChoiceTable,
}

impl KnowledgeBase {
    pub fn new(p: &Program) -> Result<Self, InferenceError> {
        let universe: Vec<Sym> = p.constants().into_iter().collect();
        let mut facts: HashMap<PredKey, Vec<GroundFact>> = HashMap::new();
        let mut table = ChoiceTable::default();
        for f in &p.facts {
            for atom in ground_all(std::slice::from_ref(&f.atom), &universe)? {
                let atom = atom.into_iter().next().unwrap();
                let choice = Choice::Fact(table.facts.len() as u32);
                table.facts.push(f.prob);
                facts.entry(atom.key()).or_default().push(GroundFact { atom, choice });
            }
        }
        for ad in &p.ads {
            let atoms: Vec<Atom> = ad.alternatives.iter().map(|(_, a)| a.clone()).collect();
            let probs: Vec<f64> = ad.alternatives.iter().map(|(p, _)| *p).collect();
            for grounded in ground_all(&atoms, &universe)? {
                let index = table.ads.len() as u32;
                table.ads.push(probs.clone());
                for (alt, atom) in grounded.into_iter().enumerate() {
                    let choice = Choice::Alt { ad: index, alt: alt as u32 };
                    facts.entry(atom.key()).or_default().push(GroundFact { atom, choice });
                }
            }
        }
        let mut rules: HashMap<PredKey, Vec<Clause>> = HashMap::new();
        for r in &p.rules {
            rules.entry(r.head.key()).or_default().push(r.clone());
        }
        Ok(KnowledgeBase { facts, rules, table })
    }

    pub fn table(&self) -> &ChoiceTable {
        &self.table
    }

    pub fn fact_count(&self) -> usize {
        self.table.facts.len()
    }

    pub fn disjunction_count(&self) -> usize {
        self.table.ads.len()
    }

    /// Proof collection followed by exact DNF evaluation.
    pub fn query(&self, theory: &Theory, query: &Atom, depth_bound: usize) -> QueryResult {
        query_probability(self, theory, query, depth_bound)
    }
}

/// Grounds the shared variables of a group of atoms over `universe`.
fn ground_all(atoms: &[Atom], universe: &[Sym]) -> Result<Vec<Vec<Atom>>, InferenceError> {
    let mut vars: Vec<Var> = Vec::new();
    for a in atoms {
        for v in a.vars() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
    }
    if vars.is_empty() {
        return Ok(vec![atoms.to_vec()]);
    }
    let count = (universe.len() as f64).powi(vars.len() as i32);
    if count > MAX_GROUNDINGS as f64 {
        return Err(InferenceError::GroundingTooLarge {
            statement: atoms.iter().map(|a| a.to_string()).collect::<Vec<_>>().join("; "),
            constants: universe.len(),
        });
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; vars.len()];
    if universe.is_empty() {
        return Ok(out);
    }
    loop {
        let mut s = Substitution::new();
        for (v, &i) in vars.iter().zip(&idx) {
            s.unify_terms(&Term::Var(*v), &Term::Const(universe[i].clone()));
        }
        out.push(atoms.iter().map(|a| s.apply_atom(a)).collect());
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(out);
            }
            idx[k] += 1;
            if idx[k] < universe.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QueryResult {
    pub probability: f64,
    pub truncated: bool,
}

/// Probability that the background knowledge together with `theory`
/// entails the ground atom `query`.
pub fn query_probability(kb: &KnowledgeBase, theory: &Theory, query: &Atom, depth_bound: usize) -> QueryResult {
    let dnf = collect_proofs(kb, theory, query, depth_bound);
    QueryResult { probability: dnf_probability(&dnf, kb.table()), truncated: dnf.truncated }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::program::parse_program;

    #[test]
    fn choice_set_rejects_conflicting_alternatives() {
        let mut s = ChoiceSet::new();
        assert!(s.insert(Choice::Alt { ad: 0, alt: 1 }));
        assert!(s.insert(Choice::Alt { ad: 0, alt: 1 }));
        assert!(s.insert(Choice::Alt { ad: 1, alt: 0 }));
        assert!(!s.insert(Choice::Alt { ad: 0, alt: 2 }));
        assert!(s.insert(Choice::Fact(0)));
        assert_eq!(s.len(), 3);
    }

    #[test]
    fn non_ground_facts_are_grounded_over_constants() {
        let p = parse_program("0.5::p(X).\nq(a). q(b).\n0.2::r(X,c); 0.3::s(X).").unwrap();
        let kb = KnowledgeBase::new(&p).unwrap();
        // constants: a, b, c
        assert_eq!(kb.fact_count(), 3 + 2);
        assert_eq!(kb.disjunction_count(), 3);
        let r = &kb.facts[&PredKey { name: Sym::new("r"), arity: 2 }];
        assert_eq!(r.len(), 3);
        assert_eq!(r[1].atom.to_string(), "r(b,c)");
    }
}
