//! Probabilistic background knowledge, examples and mode declarations.
//!
//! Text format (`.pbk` programs, `.pex` examples):
//!
//! ```text
//! % line comment
//! 0.4::beats(playerA,playerB).                       % probabilistic fact
//! 0.1::plays(a,rock); 0.3::plays(a,paper); 0.6::plays(a,scissors).
//! wins(X) :- beats(X,Y).                             % deterministic rule
//! p(a).                                              % fact with probability 1
//! modeh(beats(+player,+player)).                     % head mode
//! modeb(plays(+player,#object)).                     % body mode
//! type(rock, object).                                % constant type declaration
//! ```
//!
//! Mode markers: `+t` is an input argument that must reuse a variable of
//! type `t`, `-t` introduces a fresh output variable of type `t`, `#t` is
//! filled with each declared constant of type `t`.

mod parser;
mod validate;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::logic::{Atom, Clause, PredKey, Sym};

pub use parser::{parse_clauses, parse_examples, parse_program};
pub use validate::{validate, Diagnostic};

/// Tolerance on the sum of annotated-disjunction probabilities, to absorb
/// rounding in decimal text.
pub const AD_SUM_SLACK: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct ProbFact {
    pub prob: f64,
    pub atom: Atom,
}

/// Mutually exclusive alternatives; at most one holds in any world. When
/// the probabilities sum to less than one, the remainder is the mass of
/// "none of them".
#[derive(Clone, Debug, PartialEq)]
pub struct AnnotatedDisjunction {
    pub alternatives: Vec<(f64, Atom)>,
}

impl AnnotatedDisjunction {
    pub fn total(&self) -> f64 {
        self.alternatives.iter().map(|(p, _)| p).sum()
    }

    /// Probability that no alternative is selected, clamped at zero.
    pub fn residual(&self) -> f64 {
        (1.0 - self.total()).max(0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModeKind {
    Head,
    Body,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Marker {
    Input(Sym),
    Output(Sym),
    Constant(Sym),
}

impl Marker {
    pub fn type_name(&self) -> &Sym {
        match self {
            Marker::Input(t) | Marker::Output(t) | Marker::Constant(t) => t,
        }
    }
}

impl fmt::Display for Marker {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Marker::Input(t) => write!(f, "+{t}"),
            Marker::Output(t) => write!(f, "-{t}"),
            Marker::Constant(t) => write!(f, "#{t}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModeDecl {
    pub kind: ModeKind,
    pub pred: Sym,
    pub args: Vec<Marker>,
}

impl ModeDecl {
    pub fn key(&self) -> PredKey {
        PredKey { name: self.pred.clone(), arity: self.args.len() }
    }
}

impl fmt::Display for ModeDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kw = match self.kind {
            ModeKind::Head => "modeh",
            ModeKind::Body => "modeb",
        };
        write!(f, "{kw}({}(", self.pred)?;
        for (i, m) in self.args.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str(")).")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbExample {
    pub atom: Atom,
    pub expected: f64,
}

impl fmt::Display for ProbExample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}::{}.", self.expected, self.atom)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Program {
    pub facts: Vec<ProbFact>,
    pub ads: Vec<AnnotatedDisjunction>,
    pub rules: Vec<Clause>,
    pub modes: Vec<ModeDecl>,
    pub type_decls: BTreeMap<Sym, Sym>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProgramError {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: probability {value} is outside [0,1]")]
    ProbabilityRange { line: usize, col: usize, value: f64 },
    #[error("{line}:{col}: annotated disjunction probabilities sum to {sum}, above 1")]
    DisjunctionSum { line: usize, col: usize, sum: f64 },
    #[error("recursive rule set: {cycle}")]
    Recursive { cycle: String },
    #[error("predicate {pred} is defined both by facts and by rules")]
    MixedPredicate { pred: String },
    #[error("{line}:{col}: constant {constant} already has type {existing}")]
    ConflictingType { line: usize, col: usize, constant: String, existing: String },
    #[error("{line}:{col}: example {atom} is not ground")]
    NonGroundExample { line: usize, col: usize, atom: String },
    #[error("{line}:{col}: duplicate example {atom}")]
    DuplicateExample { line: usize, col: usize, atom: String },
    #[error("{line}:{col}: {what} is not allowed here")]
    Unexpected { line: usize, col: usize, what: String },
}

impl Program {
    /// Predicates that have facts or annotated-disjunction alternatives.
    pub fn fact_predicates(&self) -> BTreeSet<PredKey> {
        self.facts
            .iter()
            .map(|f| f.atom.key())
            .chain(self.ads.iter().flat_map(|ad| ad.alternatives.iter().map(|(_, a)| a.key())))
            .collect()
    }

    pub fn rule_predicates(&self) -> BTreeSet<PredKey> {
        self.rules.iter().map(|r| r.head.key()).collect()
    }

    /// Every predicate the program can prove something about.
    pub fn defined_predicates(&self) -> BTreeSet<PredKey> {
        let mut out = self.fact_predicates();
        out.extend(self.rule_predicates());
        out
    }

    /// All constants mentioned anywhere, including type declarations.
    pub fn constants(&self) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        let atoms = self
            .facts
            .iter()
            .map(|f| &f.atom)
            .chain(self.ads.iter().flat_map(|ad| ad.alternatives.iter().map(|(_, a)| a)))
            .chain(self.rules.iter().flat_map(|r| r.atoms()));
        for a in atoms {
            a.args.iter().for_each(|t| t.collect_constants(&mut out));
        }
        out.extend(self.type_decls.keys().cloned());
        out
    }

    /// Declared constants of one type, in symbol order.
    pub fn constants_of_type(&self, ty: &Sym) -> Vec<Sym> {
        self.type_decls.iter().filter(|(_, t)| *t == ty).map(|(c, _)| c.clone()).collect()
    }

    pub fn head_modes(&self) -> impl Iterator<Item = &ModeDecl> {
        self.modes.iter().filter(|m| m.kind == ModeKind::Head)
    }

    pub fn body_modes(&self) -> impl Iterator<Item = &ModeDecl> {
        self.modes.iter().filter(|m| m.kind == ModeKind::Body)
    }

    /// Structural checks applied after parsing: facts and rules define
    /// disjoint predicates, and the rule dependency graph is acyclic.
    pub fn check(&self) -> Result<(), ProgramError> {
        let facts = self.fact_predicates();
        if let Some(p) = self.rule_predicates().intersection(&facts).next() {
            return Err(ProgramError::MixedPredicate { pred: p.to_string() });
        }
        check_acyclic(&self.rules)
    }
}

fn check_acyclic(rules: &[Clause]) -> Result<(), ProgramError> {
    let mut edges: HashMap<PredKey, BTreeSet<PredKey>> = HashMap::new();
    for r in rules {
        edges.entry(r.head.key()).or_default().extend(r.body.iter().map(Atom::key));
    }
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    fn visit(
        p: &PredKey,
        edges: &HashMap<PredKey, BTreeSet<PredKey>>,
        marks: &mut HashMap<PredKey, Mark>,
        stack: &mut Vec<PredKey>,
    ) -> Result<(), ProgramError> {
        match marks.get(p) {
            Some(Mark::Done) => return Ok(()),
            Some(Mark::Active) => {
                let from = stack.iter().position(|q| q == p).unwrap_or(0);
                let mut cycle: Vec<String> = stack[from..].iter().map(|q| q.to_string()).collect();
                cycle.push(p.to_string());
                return Err(ProgramError::Recursive { cycle: cycle.join(" -> ") });
            }
            None => {}
        }
        marks.insert(p.clone(), Mark::Active);
        stack.push(p.clone());
        if let Some(next) = edges.get(p) {
            for q in next {
                visit(q, edges, marks, stack)?;
            }
        }
        stack.pop();
        marks.insert(p.clone(), Mark::Done);
        Ok(())
    }
    let mut marks = HashMap::new();
    let mut heads: Vec<&PredKey> = edges.keys().collect();
    heads.sort();
    for p in heads {
        visit(p, &edges, &mut marks, &mut Vec::new())?;
    }
    Ok(())
}

/// Prints in the same grammar the parser reads; probabilities use the
/// shortest decimal that round-trips to the same `f64`.
impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, t) in &self.type_decls {
            writeln!(f, "type({c}, {t}).")?;
        }
        for m in &self.modes {
            writeln!(f, "{m}")?;
        }
        for fact in &self.facts {
            if fact.prob == 1.0 {
                writeln!(f, "{}.", fact.atom)?;
            } else {
                writeln!(f, "{}::{}.", fact.prob, fact.atom)?;
            }
        }
        for ad in &self.ads {
            for (i, (p, a)) in ad.alternatives.iter().enumerate() {
                let sep = if i + 1 == ad.alternatives.len() { "." } else { ";" };
                write!(f, "{p}::{a}{sep}")?;
                if i + 1 < ad.alternatives.len() {
                    f.write_str(" ")?;
                }
            }
            writeln!(f)?;
        }
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

/// Writes examples one per line in `.pex` form.
pub fn format_examples(examples: &[ProbExample]) -> String {
    examples.iter().map(|e| format!("{e}\n")).collect()
}
