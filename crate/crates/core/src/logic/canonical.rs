//! Normal forms for clauses and theories.
//!
//! Two clauses that differ only in the order of their body literals and in
//! the names of their variables map to the same canonical clause. Literals
//! are first sorted by a variable-blind shape key; literals whose shapes tie
//! are tried in every order and the ordering whose renumbered serialization
//! is least wins. This is renaming-and-reordering equivalence only; clauses
//! that are equivalent by theta-subsumption (`h(X) :- p(X,Y), p(X,Z)` versus
//! `h(X) :- p(X,Y)`) keep distinct forms.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::term::{Atom, Clause, Sym, Term, Var};

/// Largest tied group that is permuted exhaustively. Larger groups keep
/// their incoming order.
pub const MAX_PERMUTED_GROUP: usize = 6;

/// Upper bound on the number of orderings tried for one clause. Above it the
/// largest tied groups are frozen until the product fits.
const MAX_ORDERINGS: usize = 40_320;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Shape {
    Var,
    Const(Sym),
    Compound(Sym, Vec<Shape>),
}

fn shape(t: &Term) -> Shape {
    match t {
        Term::Var(_) => Shape::Var,
        Term::Const(c) => Shape::Const(c.clone()),
        Term::Compound(f, args) => Shape::Compound(f.clone(), args.iter().map(shape).collect()),
    }
}

fn literal_key(a: &Atom) -> (Sym, usize, Vec<Shape>) {
    (a.pred.clone(), a.arity(), a.args.iter().map(shape).collect())
}

/// Renumbers variables densely from 0 in first-occurrence order.
pub fn renumber(c: &Clause) -> Clause {
    let map: HashMap<Var, u32> = c.vars_in_order().into_iter().zip(0..).collect();
    let mut f = |v: Var| Term::Var(Var(map[&v]));
    Clause { head: c.head.map_vars(&mut f), body: c.body.iter().map(|a| a.map_vars(&mut f)).collect() }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Returns the canonical representative of `c`.
pub fn canonicalize(c: &Clause) -> Clause {
    let mut body: Vec<(_, &Atom)> = c.body.iter().map(|a| (literal_key(a), a)).collect();
    body.sort_by(|x, y| x.0.cmp(&y.0));

    // Ranges of equal shape keys.
    let mut groups: Vec<std::ops::Range<usize>> = Vec::new();
    let mut start = 0;
    for i in 1..=body.len() {
        if i == body.len() || body[i].0 != body[start].0 {
            groups.push(start..i);
            start = i;
        }
    }
    let mut permuted: Vec<bool> = groups.iter().map(|g| g.len() > 1 && g.len() <= MAX_PERMUTED_GROUP).collect();
    loop {
        let total: usize = groups
            .iter()
            .zip(&permuted)
            .filter(|(_, p)| **p)
            .map(|(g, _)| factorial(g.len()))
            .fold(1usize, |acc, f| acc.saturating_mul(f));
        if total <= MAX_ORDERINGS {
            break;
        }
        let largest = (0..groups.len()).filter(|&i| permuted[i]).max_by_key(|&i| groups[i].len()).unwrap();
        permuted[largest] = false;
    }

    let atoms: Vec<&Atom> = body.iter().map(|(_, a)| *a).collect();
    let mut order: Vec<usize> = (0..atoms.len()).collect();
    let mut best: Option<(String, Clause)> = None;
    let active: Vec<std::ops::Range<usize>> =
        groups.iter().zip(&permuted).filter(|(_, p)| **p).map(|(g, _)| g.clone()).collect();
    search_orders(&active, 0, &mut order, &mut |ord| {
        let candidate =
            renumber(&Clause { head: c.head.clone(), body: ord.iter().map(|&i| atoms[i].clone()).collect() });
        let text = candidate.to_string();
        if best.as_ref().is_none_or(|(b, _)| text < *b) {
            best = Some((text, candidate));
        }
    });
    best.map(|(_, c)| c).expect("at least one ordering is visited")
}

/// Visits every combination of permutations of the given index ranges.
fn search_orders(
    groups: &[std::ops::Range<usize>],
    gi: usize,
    order: &mut Vec<usize>,
    visit: &mut impl FnMut(&[usize]),
) {
    if gi == groups.len() {
        visit(order);
        return;
    }
    let g = groups[gi].clone();
    permute(order, g.start, g.end, &mut |o| search_orders(groups, gi + 1, o, visit));
}

fn permute(v: &mut Vec<usize>, k: usize, end: usize, visit: &mut impl FnMut(&mut Vec<usize>)) {
    if k + 1 >= end {
        visit(v);
        return;
    }
    for i in k..end {
        v.swap(k, i);
        permute(v, k + 1, end, visit);
        v.swap(k, i);
    }
}

/// A set of canonical clauses, read as their disjunction.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Theory {
    clauses: BTreeSet<Clause>,
}

/// Order-insensitive identity of a theory.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TheoryKey(Vec<Clause>);

impl Theory {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_clauses<'a>(clauses: impl IntoIterator<Item = &'a Clause>) -> Self {
        Theory { clauses: clauses.into_iter().map(canonicalize).collect() }
    }

    pub fn single(c: &Clause) -> Self {
        Self::from_clauses([c])
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn clauses(&self) -> impl Iterator<Item = &Clause> {
        self.clauses.iter()
    }

    pub fn contains_all(&self, other: &Theory) -> bool {
        other.clauses.is_subset(&self.clauses)
    }

    pub fn union(&self, other: &Theory) -> Theory {
        Theory { clauses: self.clauses.union(&other.clauses).cloned().collect() }
    }

    pub fn key(&self) -> TheoryKey {
        TheoryKey(self.clauses.iter().cloned().collect())
    }
}

pub fn theory_key(t: &Theory) -> TheoryKey {
    t.key()
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.clauses {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: u32) -> Term {
        Term::var(i)
    }

    fn atom(p: &str, args: Vec<Term>) -> Atom {
        Atom::new(p, args)
    }

    #[test]
    fn rename_and_reorder_collapse() {
        // h(X) :- q(X,Y), p(Y)   vs   h(A) :- p(B), q(A,B)
        let c1 = Clause::new(atom("h", vec![v(0)]), vec![atom("q", vec![v(0), v(1)]), atom("p", vec![v(1)])]);
        let c2 = Clause::new(atom("h", vec![v(7)]), vec![atom("p", vec![v(3)]), atom("q", vec![v(7), v(3)])]);
        assert_eq!(canonicalize(&c1), canonicalize(&c2));
    }

    #[test]
    fn renumbers_from_zero() {
        let c = Clause::new(atom("h", vec![v(5)]), vec![atom("p", vec![v(5)])]);
        assert_eq!(canonicalize(&c).to_string(), "h(V0) :- p(V0).");
    }

    #[test]
    fn tied_literals_resolved_by_least_serialization() {
        // h(X,Y) :- p(Y,Z), p(X,Y) and h(X,Y) :- p(X,Y), p(Y,Z)
        let c1 =
            Clause::new(atom("h", vec![v(0), v(1)]), vec![atom("p", vec![v(1), v(2)]), atom("p", vec![v(0), v(1)])]);
        let c2 =
            Clause::new(atom("h", vec![v(0), v(1)]), vec![atom("p", vec![v(0), v(1)]), atom("p", vec![v(1), v(2)])]);
        let k1 = canonicalize(&c1);
        assert_eq!(k1, canonicalize(&c2));
        assert_eq!(k1.to_string(), "h(V0,V1) :- p(V0,V1), p(V1,V2).");
    }

    #[test]
    fn theory_keys_are_set_like() {
        let c1 = Clause::new(atom("h", vec![v(0)]), vec![atom("p", vec![v(0)])]);
        let c2 = Clause::new(atom("h", vec![v(0)]), vec![atom("q", vec![v(0)])]);
        assert_eq!(Theory::from_clauses([&c1, &c2]).key(), Theory::from_clauses([&c2, &c1]).key());
        assert_eq!(Theory::from_clauses([&c1]).key(), Theory::from_clauses([&c1, &c1]).key());
        assert_ne!(Theory::from_clauses([&c1]).key(), Theory::from_clauses([&c2]).key());
    }

    #[test]
    fn union_and_subset() {
        let c1 = Clause::new(atom("h", vec![v(0)]), vec![atom("p", vec![v(0)])]);
        let c2 = Clause::new(atom("h", vec![v(0)]), vec![atom("q", vec![v(0)])]);
        let t1 = Theory::single(&c1);
        let t12 = t1.union(&Theory::single(&c2));
        assert_eq!(t12.len(), 2);
        assert!(t12.contains_all(&t1));
        assert!(!t1.contains_all(&t12));
    }
}
