use std::collections::{HashMap, HashSet};

use super::{
    AnnotatedDisjunction, Marker, ModeDecl, ModeKind, ProbExample, ProbFact, Program, ProgramError, AD_SUM_SLACK,
};
use crate::logic::{Atom, Clause, Sym, Term, Var};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Name(String),
    Quoted(String),
    Variable(String),
    Number(String),
    LParen,
    RParen,
    Comma,
    Dot,
    Semi,
    Neck,
    Annot,
    Plus,
    Minus,
    Hash,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Name(s) | Tok::Variable(s) | Tok::Number(s) => format!("`{s}`"),
            Tok::Quoted(s) => format!("'{s}'"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Neck => "`:-`".into(),
            Tok::Annot => "`::`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Hash => "`#`".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ProgramError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let syntax = |line, col, msg: String| ProgramError::Syntax { line, col, msg };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut col);
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            if c.is_ascii_lowercase() {
                Tok::Name(s)
            } else {
                Tok::Variable(s)
            }
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            col += i - start;
            Tok::Number(chars[start..i].iter().collect())
        } else if c == '\'' {
            let mut s = String::new();
            i += 1;
            col += 1;
            loop {
                match chars.get(i) {
                    None | Some('\n') => return Err(syntax(tl, tc, "unterminated quoted atom".into())),
                    Some('\\') if i + 1 < chars.len() => {
                        s.push(chars[i + 1]);
                        i += 2;
                        col += 2;
                    }
                    Some('\'') => {
                        i += 1;
                        col += 1;
                        break;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                        col += 1;
                    }
                }
            }
            Tok::Quoted(s)
        } else {
            let next = chars.get(i + 1).copied();
            let (tok, n) = match (c, next) {
                (':', Some('-')) => (Tok::Neck, 2),
                (':', Some(':')) => (Tok::Annot, 2),
                ('(', _) => (Tok::LParen, 1),
                (')', _) => (Tok::RParen, 1),
                (',', _) => (Tok::Comma, 1),
                ('.', _) => (Tok::Dot, 1),
                (';', _) => (Tok::Semi, 1),
                ('+', _) => (Tok::Plus, 1),
                ('-', _) => (Tok::Minus, 1),
                ('#', _) => (Tok::Hash, 1),
                _ => return Err(syntax(tl, tc, format!("unexpected character `{c}`"))),
            };
            advance(n, &mut i, &mut col);
            tok
        };
        out.push(Spanned { tok, line: tl, col: tc });
    }
    Ok(out)
}

/// One parsed top-level statement.
enum Statement {
    Fact(f64, Atom),
    Disjunction(Vec<(f64, Atom)>),
    Rule(Clause),
    Mode(ModeDecl),
    Type(Sym, Sym),
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
    vars: HashMap<String, u32>,
    next_var: u32,
}

impl Parser {
    fn new(text: &str) -> Result<Self, ProgramError> {
        let toks = lex(text)?;
        let lines = text.split('\n').count();
        let last = text.rsplit('\n').next().map_or(0, |l| l.chars().count());
        Ok(Parser { toks, pos: 0, end: (lines, last + 1), vars: HashMap::new(), next_var: 0 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|s| &s.tok)
    }

    fn here(&self) -> (usize, usize) {
        self.toks.get(self.pos).map_or(self.end, |s| (s.line, s.col))
    }

    fn error(&self, msg: impl Into<String>) -> ProgramError {
        let (line, col) = self.here();
        ProgramError::Syntax { line, col, msg: msg.into() }
    }

    fn unexpected(&self, wanted: &str) -> ProgramError {
        match self.peek() {
            Some(t) => self.error(format!("expected {wanted}, found {}", t.describe())),
            None => self.error(format!("expected {wanted}, found end of input")),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|s| s.tok.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok, wanted: &str) -> Result<(), ProgramError> {
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(wanted))
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn start_statement(&mut self) {
        self.vars.clear();
        self.next_var = 0;
    }

    fn name(&mut self) -> Result<String, ProgramError> {
        match self.peek() {
            Some(Tok::Name(s)) | Some(Tok::Quoted(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn term(&mut self) -> Result<Term, ProgramError> {
        match self.peek().cloned() {
            Some(Tok::Variable(v)) => {
                self.pos += 1;
                let id = if v == "_" {
                    let id = self.next_var;
                    self.next_var += 1;
                    id
                } else if let Some(&id) = self.vars.get(&v) {
                    id
                } else {
                    let id = self.next_var;
                    self.next_var += 1;
                    self.vars.insert(v, id);
                    id
                };
                Ok(Term::Var(Var(id)))
            }
            Some(Tok::Number(n)) => {
                self.pos += 1;
                Ok(Term::Const(Sym::new(&n)))
            }
            Some(Tok::Name(_)) | Some(Tok::Quoted(_)) => {
                let name = self.name()?;
                if self.peek() == Some(&Tok::LParen) {
                    let args = self.args()?;
                    Ok(Term::Compound(Sym::new(&name), args))
                } else {
                    Ok(Term::Const(Sym::new(&name)))
                }
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    fn args(&mut self) -> Result<Vec<Term>, ProgramError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut args = vec![self.term()?];
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            args.push(self.term()?);
        }
        self.expect(Tok::RParen, "`,` or `)`")?;
        Ok(args)
    }

    fn atom(&mut self) -> Result<Atom, ProgramError> {
        let name = self.name()?;
        let args = if self.peek() == Some(&Tok::LParen) { self.args()? } else { Vec::new() };
        Ok(Atom { pred: Sym::new(&name), args })
    }

    fn probability(&mut self) -> Result<f64, ProgramError> {
        let (line, col) = self.here();
        match self.bump() {
            Some(Tok::Number(n)) => {
                let value: f64 =
                    n.parse().map_err(|_| ProgramError::Syntax { line, col, msg: format!("bad probability `{n}`") })?;
                if !(0.0..=1.0).contains(&value) {
                    return Err(ProgramError::ProbabilityRange { line, col, value });
                }
                Ok(value)
            }
            _ => {
                self.pos -= 1;
                Err(self.unexpected("a probability"))
            }
        }
    }

    fn is_annotated(&self) -> bool {
        matches!(self.peek(), Some(Tok::Number(_))) && self.peek_at(1) == Some(&Tok::Annot)
    }

    fn is_directive(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Name(s)) if s == kw) && self.peek_at(1) == Some(&Tok::LParen)
    }

    fn mode(&mut self, kind: ModeKind) -> Result<ModeDecl, ProgramError> {
        self.pos += 1;
        self.expect(Tok::LParen, "`(`")?;
        let pred = self.name()?;
        let mut args = Vec::new();
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            loop {
                let marker = match self.bump() {
                    Some(Tok::Plus) => Marker::Input(Sym::new(&self.name()?)),
                    Some(Tok::Minus) => Marker::Output(Sym::new(&self.name()?)),
                    Some(Tok::Hash) => Marker::Constant(Sym::new(&self.name()?)),
                    _ => {
                        self.pos -= 1;
                        return Err(self.unexpected("a mode marker `+type`, `-type` or `#type`"));
                    }
                };
                args.push(marker);
                match self.bump() {
                    Some(Tok::Comma) => continue,
                    Some(Tok::RParen) => break,
                    _ => {
                        self.pos -= 1;
                        return Err(self.unexpected("`,` or `)`"));
                    }
                }
            }
        }
        if kind == ModeKind::Head && args.is_empty() {
            return Err(self.error("head mode needs at least one argument marker"));
        }
        self.expect(Tok::RParen, "`)`")?;
        self.expect(Tok::Dot, "`.`")?;
        Ok(ModeDecl { kind, pred: Sym::new(&pred), args })
    }

    fn statement(&mut self) -> Result<(Statement, (usize, usize)), ProgramError> {
        self.start_statement();
        let at = self.here();
        if self.is_annotated() {
            let mut alts = Vec::new();
            loop {
                let p = self.probability()?;
                self.expect(Tok::Annot, "`::`")?;
                let a = self.atom()?;
                alts.push((p, a));
                match self.bump() {
                    Some(Tok::Semi) => {
                        if !self.is_annotated() {
                            return Err(self.unexpected("an annotated alternative `P::atom`"));
                        }
                    }
                    Some(Tok::Dot) => break,
                    Some(Tok::Neck) => {
                        self.pos -= 1;
                        let (line, col) = self.here();
                        return Err(ProgramError::Unexpected { line, col, what: "a probabilistic rule".into() });
                    }
                    _ => {
                        self.pos -= 1;
                        return Err(self.unexpected("`;` or `.`"));
                    }
                }
            }
            if alts.len() == 1 {
                let (p, a) = alts.pop().unwrap();
                return Ok((Statement::Fact(p, a), at));
            }
            let sum: f64 = alts.iter().map(|(p, _)| p).sum();
            if sum > 1.0 + AD_SUM_SLACK {
                return Err(ProgramError::DisjunctionSum { line: at.0, col: at.1, sum });
            }
            return Ok((Statement::Disjunction(alts), at));
        }
        if self.is_directive("modeh") {
            return Ok((Statement::Mode(self.mode(ModeKind::Head)?), at));
        }
        if self.is_directive("modeb") {
            return Ok((Statement::Mode(self.mode(ModeKind::Body)?), at));
        }
        let head = self.atom()?;
        if head.pred.as_str() == "type" && head.arity() == 2 {
            self.expect(Tok::Dot, "`.`")?;
            return match (&head.args[0], &head.args[1]) {
                (Term::Const(c), Term::Const(t)) => Ok((Statement::Type(c.clone(), t.clone()), at)),
                _ => Err(ProgramError::Syntax {
                    line: at.0,
                    col: at.1,
                    msg: "type declarations take a constant and a type name".into(),
                }),
            };
        }
        match self.bump() {
            Some(Tok::Dot) => Ok((Statement::Fact(1.0, head), at)),
            Some(Tok::Neck) => {
                let mut body = vec![self.atom()?];
                loop {
                    match self.bump() {
                        Some(Tok::Comma) => body.push(self.atom()?),
                        Some(Tok::Dot) => break,
                        _ => {
                            self.pos -= 1;
                            return Err(self.unexpected("`,` or `.`"));
                        }
                    }
                }
                Ok((Statement::Rule(Clause::new(head, body)), at))
            }
            _ => {
                self.pos -= 1;
                Err(self.unexpected("`.` or `:-`"))
            }
        }
    }
}

/// Parses a `.pbk` program and runs the structural load checks.
pub fn parse_program(text: &str) -> Result<Program, ProgramError> {
    let mut p = Parser::new(text)?;
    let mut prog = Program::default();
    while !p.at_end() {
        let (stmt, (line, col)) = p.statement()?;
        match stmt {
            Statement::Fact(prob, atom) => prog.facts.push(ProbFact { prob, atom }),
            Statement::Disjunction(alternatives) => prog.ads.push(AnnotatedDisjunction { alternatives }),
            Statement::Rule(c) => prog.rules.push(c),
            Statement::Mode(m) => prog.modes.push(m),
            Statement::Type(c, t) => {
                if let Some(existing) = prog.type_decls.get(&c) {
                    if *existing != t {
                        return Err(ProgramError::ConflictingType {
                            line,
                            col,
                            constant: c.to_string(),
                            existing: existing.to_string(),
                        });
                    }
                }
                prog.type_decls.insert(c, t);
            }
        }
    }
    prog.check()?;
    Ok(prog)
}

/// Parses a `.pex` file: `P::atom.` or bare `atom.` (expected 1.0).
pub fn parse_examples(text: &str) -> Result<Vec<ProbExample>, ProgramError> {
    let mut p = Parser::new(text)?;
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    while !p.at_end() {
        let (stmt, (line, col)) = p.statement()?;
        let (expected, atom) = match stmt {
            Statement::Fact(prob, atom) => (prob, atom),
            Statement::Disjunction(_) => {
                return Err(ProgramError::Unexpected { line, col, what: "an annotated disjunction".into() })
            }
            Statement::Rule(_) => return Err(ProgramError::Unexpected { line, col, what: "a rule".into() }),
            Statement::Mode(_) | Statement::Type(..) => {
                return Err(ProgramError::Unexpected { line, col, what: "a declaration".into() })
            }
        };
        if !atom.is_ground() {
            return Err(ProgramError::NonGroundExample { line, col, atom: atom.to_string() });
        }
        if !seen.insert(atom.clone()) {
            return Err(ProgramError::DuplicateExample { line, col, atom: atom.to_string() });
        }
        out.push(ProbExample { atom, expected });
    }
    Ok(out)
}

/// Parses a theory file: rules and facts only.
pub fn parse_clauses(text: &str) -> Result<Vec<Clause>, ProgramError> {
    let mut p = Parser::new(text)?;
    let mut out = Vec::new();
    while !p.at_end() {
        let (stmt, (line, col)) = p.statement()?;
        match stmt {
            Statement::Rule(c) => out.push(c),
            Statement::Fact(1.0, atom) => out.push(Clause::new(atom, Vec::new())),
            _ => {
                return Err(ProgramError::Unexpected {
                    line,
                    col,
                    what: "a probabilistic statement or declaration in a theory".into(),
                })
            }
        }
    }
    Ok(out)
}
