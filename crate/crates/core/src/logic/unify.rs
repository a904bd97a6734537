use std::collections::HashMap;

use super::term::{Atom, Term, Var};

/// Variable bindings, stored in triangular form and resolved on demand.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Substitution {
    bindings: HashMap<Var, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn get(&self, v: Var) -> Option<&Term> {
        self.bindings.get(&v)
    }

    /// Follows variable-to-variable chains until an unbound variable or a
    /// non-variable term.
    pub fn walk<'a>(&'a self, mut t: &'a Term) -> &'a Term {
        while let Term::Var(v) = t {
            match self.bindings.get(v) {
                Some(next) => t = next,
                None => break,
            }
        }
        t
    }

    /// Fully applies the substitution to a term.
    pub fn apply(&self, t: &Term) -> Term {
        match self.walk(t) {
            Term::Compound(name, args) => Term::Compound(name.clone(), args.iter().map(|a| self.apply(a)).collect()),
            other => other.clone(),
        }
    }

    pub fn apply_atom(&self, a: &Atom) -> Atom {
        Atom { pred: a.pred.clone(), args: a.args.iter().map(|t| self.apply(t)).collect() }
    }

    /// The idempotent form: every binding fully resolved.
    pub fn normalized(&self) -> Substitution {
        let bindings = self.bindings.keys().map(|v| (*v, self.apply(&Term::Var(*v)))).collect();
        Substitution { bindings }
    }

    fn occurs(&self, v: Var, t: &Term) -> bool {
        match self.walk(t) {
            Term::Var(w) => *w == v,
            Term::Const(_) => false,
            Term::Compound(_, args) => args.iter().any(|a| self.occurs(v, a)),
        }
    }

    /// Unifies two terms in place. On failure the substitution may hold
    /// partial bindings, so callers that need the old state must clone.
    pub fn unify_terms(&mut self, a: &Term, b: &Term) -> bool {
        let a = self.walk(a).clone();
        let b = self.walk(b).clone();
        match (&a, &b) {
            (Term::Var(x), Term::Var(y)) if x == y => true,
            (Term::Var(x), _) => {
                if self.occurs(*x, &b) {
                    return false;
                }
                self.bindings.insert(*x, b);
                true
            }
            (_, Term::Var(y)) => {
                if self.occurs(*y, &a) {
                    return false;
                }
                self.bindings.insert(*y, a);
                true
            }
            (Term::Const(x), Term::Const(y)) => x == y,
            (Term::Compound(f, xs), Term::Compound(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.unify_terms(x, y))
            }
            _ => false,
        }
    }

    pub fn unify_atoms(&mut self, a: &Atom, b: &Atom) -> bool {
        a.pred == b.pred
            && a.args.len() == b.args.len()
            && a.args.iter().zip(&b.args).all(|(x, y)| self.unify_terms(x, y))
    }
}

/// Most general unifier of `a` and `b` extending `s`, with occurs check.
pub fn unify(a: &Atom, b: &Atom, s: &Substitution) -> Option<Substitution> {
    let mut out = s.clone();
    out.unify_atoms(a, b).then_some(out)
}
