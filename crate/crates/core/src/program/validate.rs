use std::collections::BTreeSet;
use std::fmt;

use super::{Marker, ProbExample, Program};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Diagnostic {
    /// An example predicate that no head mode can produce.
    NoHeadMode { example: String, pred: String },
    /// A body mode refers to a predicate the program never defines.
    UndefinedBodyPredicate { pred: String },
    /// A `#type` marker whose type has no declared constants.
    UntypedConstantMarker { pred: String, ty: String },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::NoHeadMode { example, pred } => {
                write!(f, "example {example}: no modeh declaration for {pred}")
            }
            Diagnostic::UndefinedBodyPredicate { pred } => {
                write!(f, "modeb predicate {pred} is not defined in the background knowledge")
            }
            Diagnostic::UntypedConstantMarker { pred, ty } => {
                write!(f, "mode for {pred} uses #{ty} but no constant is declared with type {ty}")
            }
        }
    }
}

/// Cross-checks a program against its examples and mode declarations.
/// An empty result means the pair is ready for learning.
pub fn validate(p: &Program, es: &[ProbExample]) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let head_keys: BTreeSet<_> = p.head_modes().map(|m| m.key()).collect();
    let mut reported = BTreeSet::new();
    for e in es {
        let key = e.atom.key();
        if !head_keys.contains(&key) && reported.insert(key.clone()) {
            out.push(Diagnostic::NoHeadMode { example: e.atom.to_string(), pred: key.to_string() });
        }
    }
    let defined = p.defined_predicates();
    let body_keys: BTreeSet<_> = p.body_modes().map(|m| m.key()).collect();
    for key in body_keys {
        if !defined.contains(&key) {
            out.push(Diagnostic::UndefinedBodyPredicate { pred: key.to_string() });
        }
    }
    let typed: BTreeSet<_> = p.type_decls.values().collect();
    let mut seen = BTreeSet::new();
    for m in &p.modes {
        for marker in &m.args {
            if let Marker::Constant(ty) = marker {
                if !typed.contains(ty) && seen.insert((m.key(), ty.clone())) {
                    out.push(Diagnostic::UntypedConstantMarker { pred: m.key().to_string(), ty: ty.to_string() });
                }
            }
        }
    }
    out
}
