//! Single-clause hypothesis generation from mode declarations.
//!
//! Heads come from `modeh` templates and bodies are grown left to right from
//! `modeb` templates: a `+t` argument reuses a variable of type `t` already
//! in the clause, `-t` introduces a fresh variable, and `#t` is filled with
//! each declared constant of type `t`. Every candidate is canonicalized,
//! permutation duplicates are dropped, and a clause survives only if it
//! gives some example with positive expected value a nonzero probability.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use crate::inference::{query_probability, KnowledgeBase};
use crate::logic::{canonicalize, Atom, Clause, PredKey, Sym, Term, Theory, Var};
use crate::program::{Marker, ModeDecl, ProbExample, Program};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenConfig {
    pub max_body_literals: usize,
    /// How far (in output-variable hops) a body variable may be from the
    /// head's variables.
    pub max_var_depth: usize,
    pub allow_constants: bool,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig { max_body_literals: 3, max_var_depth: 2, allow_constants: true }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GenError {
    #[error("max_body_literals must be at least 1")]
    ZeroBodyLiterals,
    #[error("max_var_depth must be at least 1")]
    ZeroVarDepth,
    #[error("no head mode declared")]
    NoHeadMode,
}

/// Output of [`generate_length_one`].
#[derive(Clone, Debug, PartialEq)]
pub struct Generated {
    /// Canonical, covering clauses in canonical order.
    pub clauses: Vec<Clause>,
    /// Candidates enumerated before deduplication.
    pub raw: usize,
    /// Candidates removed as permutations of another candidate.
    pub removed: usize,
    /// Unique candidates dropped because they cover no example.
    pub uncovering: usize,
}

#[derive(Clone)]
struct TypedVar {
    var: Var,
    ty: Sym,
    depth: usize,
}

struct Enumerator<'a> {
    prog: &'a Program,
    cfg: &'a GenConfig,
    body_modes: Vec<&'a ModeDecl>,
    out: Vec<Clause>,
}

impl Enumerator<'_> {
    fn constants(&self, ty: &Sym) -> Vec<Sym> {
        self.prog.constants_of_type(ty)
    }

    fn heads(&self, mode: &ModeDecl) -> Vec<(Atom, Vec<TypedVar>)> {
        let mut partial: Vec<(Vec<Term>, Vec<TypedVar>)> = vec![(Vec::new(), Vec::new())];
        for marker in &mode.args {
            let mut next = Vec::new();
            for (args, vars) in partial {
                match marker {
                    Marker::Constant(ty) if self.cfg.allow_constants => {
                        for c in self.constants(ty) {
                            let mut a = args.clone();
                            a.push(Term::Const(c));
                            next.push((a, vars.clone()));
                        }
                    }
                    other => {
                        let var = Var(vars.len() as u32);
                        let mut a = args.clone();
                        a.push(Term::Var(var));
                        let mut v = vars.clone();
                        v.push(TypedVar { var, ty: other.type_name().clone(), depth: 0 });
                        next.push((a, v));
                    }
                }
            }
            partial = next;
        }
        partial.into_iter().map(|(args, vars)| (Atom { pred: mode.pred.clone(), args }, vars)).collect()
    }

    /// Every way to instantiate `mode` as the next body literal.
    fn literals(&self, mode: &ModeDecl, vars: &[TypedVar]) -> Vec<(Atom, Vec<TypedVar>)> {
        // Inputs and constants first; outputs are fresh and need the input depth.
        let mut partial: Vec<(Vec<Option<Term>>, usize)> = vec![(Vec::new(), 0)];
        for marker in &mode.args {
            let mut next = Vec::new();
            for (args, depth) in partial {
                match marker {
                    Marker::Input(ty) => {
                        for v in vars.iter().filter(|v| v.ty == *ty) {
                            let mut a = args.clone();
                            a.push(Some(Term::Var(v.var)));
                            next.push((a, depth.max(v.depth)));
                        }
                    }
                    Marker::Constant(ty) => {
                        if !self.cfg.allow_constants {
                            continue;
                        }
                        for c in self.constants(ty) {
                            let mut a = args.clone();
                            a.push(Some(Term::Const(c)));
                            next.push((a, depth));
                        }
                    }
                    Marker::Output(_) => {
                        let mut a = args.clone();
                        a.push(None);
                        next.push((a, depth));
                    }
                }
            }
            partial = next;
        }
        let mut out = Vec::new();
        for (args, input_depth) in partial {
            let out_depth = input_depth + 1;
            let has_outputs = args.iter().any(Option::is_none);
            if has_outputs && out_depth > self.cfg.max_var_depth {
                continue;
            }
            let mut new_vars = vars.to_vec();
            let terms = args
                .into_iter()
                .zip(&mode.args)
                .map(|(t, m)| {
                    t.unwrap_or_else(|| {
                        let var = Var(new_vars.len() as u32);
                        new_vars.push(TypedVar { var, ty: m.type_name().clone(), depth: out_depth });
                        Term::Var(var)
                    })
                })
                .collect();
            out.push((Atom { pred: mode.pred.clone(), args: terms }, new_vars));
        }
        out
    }

    fn grow(&mut self, head: &Atom, body: &mut Vec<Atom>, vars: &[TypedVar]) {
        if !body.is_empty() {
            self.out.push(Clause::new(head.clone(), body.clone()));
        }
        if body.len() >= self.cfg.max_body_literals {
            return;
        }
        for mode in self.body_modes.clone() {
            for (lit, next_vars) in self.literals(mode, vars) {
                if body.contains(&lit) {
                    continue;
                }
                body.push(lit);
                self.grow(head, body, &next_vars);
                body.pop();
            }
        }
    }
}

/// Enumerates every mode-conforming clause, before deduplication.
pub fn enumerate_candidates(prog: &Program, cfg: &GenConfig) -> Result<Vec<Clause>, GenError> {
    if cfg.max_body_literals == 0 {
        return Err(GenError::ZeroBodyLiterals);
    }
    if cfg.max_var_depth == 0 {
        return Err(GenError::ZeroVarDepth);
    }
    let heads: Vec<&ModeDecl> = prog.head_modes().collect();
    if heads.is_empty() {
        return Err(GenError::NoHeadMode);
    }
    let mut e = Enumerator { prog, cfg, body_modes: Vec::new(), out: Vec::new() };
    for mode in heads {
        // No recursion through the target predicate.
        e.body_modes = prog.body_modes().filter(|b| b.pred != mode.pred || b.args.len() != mode.args.len()).collect();
        for (head, vars) in e.heads(mode) {
            e.grow(&head, &mut Vec::new(), &vars);
        }
    }
    Ok(e.out)
}

/// `(unique, removed)` canonical forms among `raw`.
pub fn count_dedup(raw: &[Clause]) -> (usize, usize) {
    let unique: BTreeSet<Clause> = raw.iter().map(canonicalize).collect();
    (unique.len(), raw.len() - unique.len())
}

/// Single-clause hypotheses that cover at least one example with positive
/// expected value, canonicalized, deduplicated and in canonical order.
pub fn generate_length_one(
    kb: &KnowledgeBase,
    prog: &Program,
    examples: &[ProbExample],
    cfg: &GenConfig,
    depth_bound: usize,
) -> Result<Generated, GenError> {
    let raw = enumerate_candidates(prog, cfg)?;
    let unique: BTreeSet<Clause> = raw.iter().map(canonicalize).collect();
    let removed = raw.len() - unique.len();
    let mut positives: BTreeMap<PredKey, Vec<&Atom>> = BTreeMap::new();
    for e in examples.iter().filter(|e| e.expected > 0.0) {
        positives.entry(e.atom.key()).or_default().push(&e.atom);
    }
    let candidates: Vec<Clause> = unique.into_iter().collect();
    let covering: Vec<bool> = candidates
        .par_iter()
        .map(|c| {
            let theory = Theory::single(c);
            positives
                .get(&c.head.key())
                .into_iter()
                .flatten()
                .any(|q| query_probability(kb, &theory, q, depth_bound).probability > 0.0)
        })
        .collect();
    let total = candidates.len();
    let clauses: Vec<Clause> = candidates.into_iter().zip(covering).filter(|(_, keep)| *keep).map(|(c, _)| c).collect();
    Ok(Generated { uncovering: total - clauses.len(), clauses, raw: raw.len(), removed })
}
