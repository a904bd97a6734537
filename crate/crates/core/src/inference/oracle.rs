//! Possible-world enumeration, kept independent of proof collection and
//! Shannon expansion so it can check them.

use std::collections::{BTreeSet, HashMap, HashSet};

use super::{collect_proofs, Choice, InferenceError, KnowledgeBase};
use crate::logic::{Atom, Clause, PredKey, Substitution, Theory};

/// Largest world space the oracle will enumerate.
pub const MAX_WORLDS: usize = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WorldScope {
    /// Only variables that occur in some proof of the query.
    ProofVars,
    /// Every fact and disjunction of the compiled program.
    AllVars,
}

/// One random variable with its outcomes: `(choice or None, weight)`.
type Outcomes = Vec<(Option<Choice>, f64)>;

struct WorldProver<'a> {
    kb: &'a KnowledgeBase,
    theory: HashMap<PredKey, Vec<&'a Clause>>,
    world: &'a HashSet<Choice>,
    depth_bound: usize,
    next_var: u32,
}

impl WorldProver<'_> {
    fn provable(&mut self, goals: &[Atom], subst: &Substitution, depth: usize) -> bool {
        let Some((goal, rest)) = goals.split_last() else {
            return true;
        };
        if depth >= self.depth_bound {
            return false;
        }
        let key = goal.key();
        let kb = self.kb;
        for fact in kb.facts.get(&key).into_iter().flatten() {
            if !self.world.contains(&fact.choice) {
                continue;
            }
            let mut s = subst.clone();
            if s.unify_atoms(goal, &fact.atom) && self.provable(rest, &s, depth + 1) {
                return true;
            }
        }
        let mut clauses: Vec<&Clause> = kb.rules.get(&key).into_iter().flatten().collect();
        clauses.extend(self.theory.get(&key).into_iter().flatten().copied());
        for clause in clauses {
            let renamed = clause.shifted(self.next_var);
            self.next_var += clause.var_span();
            let mut s = subst.clone();
            if !s.unify_atoms(goal, &renamed.head) {
                continue;
            }
            let mut next = rest.to_vec();
            next.extend(renamed.body.into_iter().rev());
            if self.provable(&next, &s, depth + 1) {
                return true;
            }
        }
        false
    }
}

/// Sums the weights of all possible worlds in which `query` is derivable.
pub fn brute_force_probability(
    kb: &KnowledgeBase,
    theory: &Theory,
    query: &Atom,
    depth_bound: usize,
    scope: WorldScope,
) -> Result<f64, InferenceError> {
    let table = kb.table();
    let (facts, ads): (BTreeSet<u32>, BTreeSet<u32>) = match scope {
        WorldScope::AllVars => ((0..table.facts.len() as u32).collect(), (0..table.ads.len() as u32).collect()),
        WorldScope::ProofVars => {
            let dnf = collect_proofs(kb, theory, query, depth_bound);
            let mut f = BTreeSet::new();
            let mut a = BTreeSet::new();
            for c in dnf.disjuncts.iter().flat_map(|d| d.iter()) {
                match *c {
                    Choice::Fact(i) => f.insert(i),
                    Choice::Alt { ad, .. } => a.insert(ad),
                };
            }
            (f, a)
        }
    };
    let mut vars: Vec<Outcomes> = Vec::new();
    for &i in &facts {
        let p = table.facts[i as usize];
        vars.push(vec![(Some(Choice::Fact(i)), p), (None, 1.0 - p)]);
    }
    for &ad in &ads {
        let mut o: Outcomes = table.ads[ad as usize]
            .iter()
            .enumerate()
            .map(|(alt, &p)| (Some(Choice::Alt { ad, alt: alt as u32 }), p))
            .collect();
        o.push((None, table.residual(ad)));
        vars.push(o);
    }
    let worlds: f64 = vars.iter().map(|o| o.len() as f64).product();
    if worlds > MAX_WORLDS as f64 {
        return Err(InferenceError::WorldSpaceTooLarge { worlds, limit: MAX_WORLDS });
    }

    let mut by_head: HashMap<PredKey, Vec<&Clause>> = HashMap::new();
    for c in theory.clauses() {
        by_head.entry(c.head.key()).or_default().push(c);
    }
    let offset = query.vars().iter().map(|v| v.0 + 1).max().unwrap_or(0);
    let mut idx = vec![0usize; vars.len()];
    let mut total = 0.0;
    loop {
        let weight: f64 = vars.iter().zip(&idx).map(|(o, &i)| o[i].1).product();
        if weight > 0.0 {
            let world: HashSet<Choice> = vars.iter().zip(&idx).filter_map(|(o, &i)| o[i].0).collect();
            let mut prover = WorldProver { kb, theory: by_head.clone(), world: &world, depth_bound, next_var: offset };
            if prover.provable(std::slice::from_ref(query), &Substitution::new(), 0) {
                total += weight;
            }
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(total.clamp(0.0, 1.0));
            }
            idx[k] += 1;
            if idx[k] < vars[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}
