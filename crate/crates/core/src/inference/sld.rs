use std::collections::HashMap;

use super::{ChoiceSet, Dnf, KnowledgeBase};
use crate::logic::{Atom, Clause, PredKey, Substitution, Theory};

struct Prover<'a> {
    kb: &'a KnowledgeBase,
    theory: HashMap<PredKey, Vec<&'a Clause>>,
    depth_bound: usize,
    next_var: u32,
    out: Dnf,
}

impl<'a> Prover<'a> {
    /// `goals` is a stack: the next goal to resolve is the last element.
    fn solve(&mut self, goals: &[Atom], subst: &Substitution, choices: &ChoiceSet, depth: usize) {
        let Some((goal, rest)) = goals.split_last() else {
            self.out.disjuncts.push(choices.clone());
            return;
        };
        if depth >= self.depth_bound {
            self.out.truncated = true;
            return;
        }
        let key = goal.key();
        let kb = self.kb;
        if let Some(facts) = kb.facts.get(&key) {
            for fact in facts {
                let mut s = subst.clone();
                if !s.unify_atoms(goal, &fact.atom) {
                    continue;
                }
                let mut cs = choices.clone();
                if cs.insert(fact.choice) {
                    self.solve(rest, &s, &cs, depth + 1);
                }
            }
        }
        let bk = kb.rules.get(&key).into_iter().flatten();
        let th = self.theory.get(&key).into_iter().flatten().copied();
        let clauses: Vec<&Clause> = bk.chain(th).collect();
        for clause in clauses {
            let renamed = clause.shifted(self.next_var);
            self.next_var += clause.var_span();
            let mut s = subst.clone();
            if !s.unify_atoms(goal, &renamed.head) {
                continue;
            }
            let mut next: Vec<Atom> = rest.to_vec();
            next.extend(renamed.body.into_iter().rev());
            self.solve(&next, &s, choices, depth + 1);
        }
    }
}

/// Collects one choice set per SLD refutation of `query` from the
/// background knowledge plus `theory`. Derivations longer than
/// `depth_bound` resolution steps are dropped and flagged.
pub fn collect_proofs(kb: &KnowledgeBase, theory: &Theory, query: &Atom, depth_bound: usize) -> Dnf {
    let mut by_head: HashMap<PredKey, Vec<&Clause>> = HashMap::new();
    for c in theory.clauses() {
        by_head.entry(c.head.key()).or_default().push(c);
    }
    let offset = query.vars().iter().map(|v| v.0 + 1).max().unwrap_or(0);
    let mut prover = Prover { kb, theory: by_head, depth_bound, next_var: offset, out: Dnf::default() };
    prover.solve(std::slice::from_ref(query), &Substitution::new(), &ChoiceSet::new(), 0);
    prover.out
}
