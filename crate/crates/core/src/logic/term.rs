use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// An interned name: predicate, functor or constant symbol.
///
/// Ordering and equality go through the string contents so that every
/// derived order (and therefore every canonical form) is independent of
/// construction order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym(Arc<str>);

impl Sym {
    pub fn new(s: &str) -> Self {
        Sym(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Sym {
    fn from(s: &str) -> Self {
        Sym::new(s)
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if needs_quotes(&self.0) {
            write!(f, "'{}'", self.0.replace('\\', "\\\\").replace('\'', "\\'"))
        } else {
            f.write_str(&self.0)
        }
    }
}

fn needs_quotes(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        None => true,
        Some(c) if c.is_ascii_lowercase() => !s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_'),
        Some(c) if c.is_ascii_digit() => !is_number_literal(s),
        Some(_) => true,
    }
}

fn is_number_literal(s: &str) -> bool {
    let mut parts = s.splitn(2, '.');
    let int = parts.next().unwrap_or("");
    let frac = parts.next();
    !int.is_empty()
        && int.chars().all(|c| c.is_ascii_digit())
        && frac.is_none_or(|f| !f.is_empty() && f.chars().all(|c| c.is_ascii_digit()))
}

/// A logic variable, identified by an ordinal local to its clause.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Var(pub u32);

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Term {
    Var(Var),
    Const(Sym),
    Compound(Sym, Vec<Term>),
}

impl Term {
    pub fn var(id: u32) -> Self {
        Term::Var(Var(id))
    }

    pub fn constant(s: &str) -> Self {
        Term::Const(Sym::new(s))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::Compound(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<Var>) {
        match self {
            Term::Var(v) => out.push(*v),
            Term::Const(_) => {}
            Term::Compound(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn collect_constants(&self, out: &mut BTreeSet<Sym>) {
        match self {
            Term::Var(_) => {}
            Term::Const(c) => {
                out.insert(c.clone());
            }
            Term::Compound(_, args) => args.iter().for_each(|a| a.collect_constants(out)),
        }
    }

    pub fn has_compound(&self) -> bool {
        matches!(self, Term::Compound(..))
    }

    /// Rewrites every variable through `f`.
    pub fn map_vars(&self, f: &mut impl FnMut(Var) -> Term) -> Term {
        match self {
            Term::Var(v) => f(*v),
            Term::Const(_) => self.clone(),
            Term::Compound(name, args) => Term::Compound(name.clone(), args.iter().map(|a| a.map_vars(f)).collect()),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "V{}", v.0),
            Term::Const(c) => write!(f, "{c}"),
            Term::Compound(name, args) => {
                write!(f, "{name}(")?;
                write_args(f, args)?;
                f.write_str(")")
            }
        }
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Atom {
    pub pred: Sym,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: &str, args: Vec<Term>) -> Self {
        Atom { pred: Sym::new(pred), args }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }

    /// Predicate indicator, `name/arity`.
    pub fn key(&self) -> PredKey {
        PredKey { name: self.pred.clone(), arity: self.args.len() }
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.args.iter().for_each(|a| a.collect_vars(&mut out));
        out
    }

    pub fn map_vars(&self, f: &mut impl FnMut(Var) -> Term) -> Atom {
        Atom { pred: self.pred.clone(), args: self.args.iter().map(|a| a.map_vars(f)).collect() }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pred)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            write_args(f, &self.args)?;
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// `name/arity`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PredKey {
    pub name: Sym,
    pub arity: usize,
}

impl fmt::Display for PredKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

/// A definite clause. An empty body makes it a fact.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Clause {
    pub head: Atom,
    pub body: Vec<Atom>,
}

impl Clause {
    pub fn new(head: Atom, body: Vec<Atom>) -> Self {
        Clause { head, body }
    }

    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        std::iter::once(&self.head).chain(self.body.iter())
    }

    /// Variables in first-occurrence order, head first.
    pub fn vars_in_order(&self) -> Vec<Var> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for atom in self.atoms() {
            for v in atom.vars() {
                if seen.insert(v) {
                    out.push(v);
                }
            }
        }
        out
    }

    /// One past the largest variable id, or 0 for a ground clause.
    pub fn var_span(&self) -> u32 {
        self.atoms().flat_map(|a| a.vars()).map(|v| v.0 + 1).max().unwrap_or(0)
    }

    /// Shifts every variable id by `offset`, giving a renamed-apart copy.
    pub fn shifted(&self, offset: u32) -> Clause {
        let mut f = |v: Var| Term::Var(Var(v.0 + offset));
        Clause { head: self.head.map_vars(&mut f), body: self.body.iter().map(|a| a.map_vars(&mut f)).collect() }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.head)?;
        if !self.body.is_empty() {
            f.write_str(" :- ")?;
            for (i, b) in self.body.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{b}")?;
            }
        }
        f.write_str(".")
    }
}
