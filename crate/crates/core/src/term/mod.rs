//! Lattice terms and identities.
//!
//! Terms are written as s-expressions: `(v t1 t2 ...)` is a join, `(^ t1 t2
//! ...)` a meet, and any other identifier a variable. Operators need at least
//! two arguments. Identities are `(= lhs rhs)` or `(<= lhs rhs)`.

pub mod builtin;
pub mod eval;
pub mod sigma;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use builtin::builtin;
pub use eval::{check, check_with, CheckOptions, CheckOutcome, SearchMode, Witness};
pub use sigma::{check_sigma, SigmaKind, SigmaOutcome};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Join(Vec<Term>),
    Meet(Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    /// Join of the given terms; a single term is returned unchanged.
    pub fn join(mut ts: Vec<Term>) -> Term {
        assert!(!ts.is_empty(), "empty join");
        if ts.len() == 1 {
            ts.pop().unwrap()
        } else {
            Term::Join(ts)
        }
    }

    /// Meet of the given terms; a single term is returned unchanged.
    pub fn meet(mut ts: Vec<Term>) -> Term {
        assert!(!ts.is_empty(), "empty meet");
        if ts.len() == 1 {
            ts.pop().unwrap()
        } else {
            Term::Meet(ts)
        }
    }

    /// Variables in order of first occurrence.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Join(ts) | Term::Meet(ts) => ts.iter().for_each(|t| t.collect_vars(out)),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Join(ts) | Term::Meet(ts) => 1 + ts.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Evaluates with `value(name)` for variables.
    pub fn eval(
        &self,
        l: &crate::lattice::FinLattice,
        value: &impl Fn(&str) -> usize,
    ) -> usize {
        match self {
            Term::Var(v) => value(v),
            Term::Join(ts) => ts
                .iter()
                .map(|t| t.eval(l, value))
                .reduce(|a, b| l.join(a, b))
                .unwrap(),
            Term::Meet(ts) => ts
                .iter()
                .map(|t| t.eval(l, value))
                .reduce(|a, b| l.meet(a, b))
                .unwrap(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Join(ts) | Term::Meet(ts) => {
                f.write_str(if matches!(self, Term::Join(_)) { "(v" } else { "(^" })?;
                for t in ts {
                    write!(f, " {t}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "eq")]
    Equals,
    #[serde(rename = "le")]
    Below,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identity {
    pub name: String,
    /// Declared order; witnesses are least in this order.
    pub vars: Vec<String>,
    pub relation: Relation,
    pub lhs: Term,
    pub rhs: Term,
    /// For an equation, `rhs ≤ lhs` holds in every lattice, so only
    /// `lhs ≤ rhs` needs checking.
    pub rhs_below_lhs: bool,
}

impl Identity {
    pub fn new(
        name: &str,
        vars: &[&str],
        relation: Relation,
        lhs: Term,
        rhs: Term,
    ) -> Result<Identity> {
        let id = Identity {
            name: name.to_string(),
            vars: vars.iter().map(|s| s.to_string()).collect(),
            relation,
            lhs,
            rhs,
            rhs_below_lhs: false,
        };
        id.validate()?;
        Ok(id)
    }

    pub fn validate(&self) -> Result<()> {
        for v in self.lhs.variables().into_iter().chain(self.rhs.variables()) {
            if !self.vars.contains(&v) {
                return Err(Error::UndeclaredVariable {
                    name: self.name.clone(),
                    var: v,
                });
            }
        }
        let mut sorted = self.vars.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Syntax {
                pos: 0,
                msg: format!("identity `{}` declares a variable twice", self.name),
            });
        }
        Ok(())
    }

    /// `(= lhs rhs)` or `(<= lhs rhs)`.
    pub fn to_sexpr(&self) -> String {
        let op = match self.relation {
            Relation::Equals => "=",
            Relation::Below => "<=",
        };
        format!("({op} {} {})", self.lhs, self.rhs)
    }

    pub fn to_file(&self) -> IdentityFile {
        IdentityFile {
            name: self.name.clone(),
            vars: self.vars.clone(),
            relation: self.relation,
            lhs: self.lhs.to_string(),
            rhs: self.rhs.to_string(),
        }
    }
}

/// On-disk identity format.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IdentityFile {
    pub name: String,
    pub vars: Vec<String>,
    pub relation: Relation,
    pub lhs: String,
    pub rhs: String,
}

impl IdentityFile {
    pub fn to_identity(&self) -> Result<Identity> {
        if self.lhs.trim().is_empty() || self.rhs.trim().is_empty() {
            return Err(Error::Syntax {
                pos: 0,
                msg: format!("identity `{}` has an empty side", self.name),
            });
        }
        let id = Identity {
            name: self.name.clone(),
            vars: self.vars.clone(),
            relation: self.relation,
            lhs: parse_term(&self.lhs)?,
            rhs: parse_term(&self.rhs)?,
            rhs_below_lhs: false,
        };
        id.validate()?;
        Ok(id)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Atom(String),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        match c {
            '(' => {
                out.push((pos, Tok::Open));
                chars.next();
            }
            ')' => {
                out.push((pos, Tok::Close));
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            ';' => {
                // comment to end of line
                while let Some(&(_, c)) = chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    chars.next();
                }
            }
            _ => {
                let mut s = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c == '(' || c == ')' || c.is_whitespace() || c == ';' {
                        break;
                    }
                    s.push(c);
                    chars.next();
                }
                if !s
                    .chars()
                    .all(|c| c.is_alphanumeric() || "_'*^v<=∨∧.-".contains(c))
                {
                    return Err(Error::Syntax {
                        pos,
                        msg: format!("unexpected token `{s}`"),
                    });
                }
                out.push((pos, Tok::Atom(s)));
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
}

#[derive(Debug)]
enum Node {
    Term(Term),
    Identity(Relation, Term, Term),
}

impl Parser {
    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            pos,
            msg: msg.into(),
        })
    }

    fn node(&mut self) -> Result<Node> {
        let start = self.pos();
        match self.toks.get(self.i).cloned() {
            None => self.err(start, "unexpected end of input"),
            Some((_, Tok::Close)) => self.err(start, "unexpected `)`"),
            Some((_, Tok::Atom(a))) => {
                self.i += 1;
                if is_operator(&a) {
                    return self.err(start, format!("operator `{a}` outside head position"));
                }
                Ok(Node::Term(Term::Var(a)))
            }
            Some((_, Tok::Open)) => {
                self.i += 1;
                let head_pos = self.pos();
                let head = match self.toks.get(self.i).cloned() {
                    Some((_, Tok::Atom(a))) => a,
                    _ => return self.err(head_pos, "expected an operator after `(`"),
                };
                self.i += 1;
                let mut args = Vec::new();
                loop {
                    match self.toks.get(self.i) {
                        Some((_, Tok::Close)) => {
                            self.i += 1;
                            break;
                        }
                        None => return self.err(self.end, "unclosed `(`"),
                        _ => {
                            let p = self.pos();
                            match self.node()? {
                                Node::Term(t) => args.push(t),
                                Node::Identity(..) => {
                                    return self.err(p, "identity nested inside a term")
                                }
                            }
                        }
                    }
                }
                match head.as_str() {
                    "v" | "∨" | "join" | "^" | "∧" | "meet" => {
                        if args.len() < 2 {
                            return self.err(
                                start,
                                format!("`{head}` needs at least 2 arguments, got {}", args.len()),
                            );
                        }
                        Ok(Node::Term(if matches!(head.as_str(), "v" | "∨" | "join") {
                            Term::Join(args)
                        } else {
                            Term::Meet(args)
                        }))
                    }
                    "=" | "<=" => {
                        if args.len() != 2 {
                            return self.err(start, format!("`{head}` needs exactly 2 arguments"));
                        }
                        let rhs = args.pop().unwrap();
                        let lhs = args.pop().unwrap();
                        let rel = if head == "=" {
                            Relation::Equals
                        } else {
                            Relation::Below
                        };
                        Ok(Node::Identity(rel, lhs, rhs))
                    }
                    _ => self.err(head_pos, format!("unknown operator `{head}`")),
                }
            }
        }
    }
}

fn is_operator(a: &str) -> bool {
    matches!(a, "^" | "∨" | "∧" | "=" | "<=")
}

fn parse_node(text: &str) -> Result<Node> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        i: 0,
        end: text.len(),
    };
    let node = p.node()?;
    if p.i != p.toks.len() {
        let pos = p.pos();
        return p.err(pos, "trailing input");
    }
    Ok(node)
}

pub fn parse_term(text: &str) -> Result<Term> {
    match parse_node(text)? {
        Node::Term(t) => Ok(t),
        Node::Identity(..) => Err(Error::Syntax {
            pos: 0,
            msg: "expected a term, found an identity".into(),
        }),
    }
}

/// Parses `(= lhs rhs)` or `(<= lhs rhs)`; variables are declared in order of
/// first occurrence.
pub fn parse_identity(name: &str, text: &str) -> Result<Identity> {
    match parse_node(text)? {
        Node::Identity(relation, lhs, rhs) => {
            let mut vars = lhs.variables();
            for v in rhs.variables() {
                if !vars.contains(&v) {
                    vars.push(v);
                }
            }
            Ok(Identity {
                name: name.to_string(),
                vars,
                relation,
                lhs,
                rhs,
                rhs_below_lhs: false,
            })
        }
        Node::Term(_) => Err(Error::Syntax {
            pos: 0,
            msg: "expected `(= lhs rhs)` or `(<= lhs rhs)`".into(),
        }),
    }
}
