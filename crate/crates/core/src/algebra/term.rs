use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use super::Signature;
use crate::{Error, Result};

/// A term over some signature: a variable or a symbol applied to arguments.
///
/// Children are shared behind `Arc`, so cloning and building large term
/// families is cheap.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Arc<str>),
    App(Arc<str>, Arc<[Term]>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(Arc::from(name))
    }

    pub fn app(symbol: &str, args: Vec<Term>) -> Term {
        Term::App(Arc::from(symbol), args.into())
    }

    /// `app` with an already shared symbol name.
    pub fn app_shared(symbol: Arc<str>, args: Vec<Term>) -> Term {
        Term::App(symbol, args.into())
    }

    pub fn binary(symbol: &str, left: Term, right: Term) -> Term {
        Term::app(symbol, vec![left, right])
    }

    pub fn unary(symbol: &str, arg: Term) -> Term {
        Term::app(symbol, vec![arg])
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App(_, args) => args,
        }
    }

    /// Syntactic depth: variables and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => args.iter().map(|a| a.depth() + 1).max().unwrap_or(0),
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn vars(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Arc<str>>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Variables in order of first occurrence (left to right).
    pub fn vars_in_order(&self) -> Vec<Arc<str>> {
        let mut out = Vec::new();
        self.collect_vars_ordered(&mut out);
        out
    }

    fn collect_vars_ordered(&self, out: &mut Vec<Arc<str>>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars_ordered(out)),
        }
    }

    pub fn contains_var(&self, name: &str) -> bool {
        match self {
            Term::Var(v) => &**v == name,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(name)),
        }
    }

    /// Simultaneous substitution; unmapped variables stay as they are.
    pub fn substitute(&self, sigma: &Substitution) -> Term {
        match self {
            Term::Var(v) => sigma.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.substitute(sigma)).collect())
            }
        }
    }

    /// Replaces a single variable.
    pub fn replace_var(&self, name: &str, by: &Term) -> Term {
        match self {
            Term::Var(v) if &**v == name => by.clone(),
            Term::Var(_) => self.clone(),
            Term::App(f, args) => {
                Term::App(f.clone(), args.iter().map(|a| a.replace_var(name, by)).collect())
            }
        }
    }

    /// Maximum depth at which `name` occurs, if it occurs.
    pub fn var_occurrence_depth(&self, name: &str) -> Option<usize> {
        match self {
            Term::Var(v) => (&**v == name).then_some(0),
            Term::App(_, args) => args
                .iter()
                .filter_map(|a| a.var_occurrence_depth(name))
                .max()
                .map(|d| d + 1),
        }
    }

    /// Checks every application against the signature and that no variable
    /// name clashes with a symbol.
    pub fn check(&self, sig: &Signature) -> Result<()> {
        match self {
            Term::Var(v) => {
                if sig.contains(v) {
                    Err(Error::SignatureMismatch(format!(
                        "variable `{v}` clashes with a symbol name"
                    )))
                } else {
                    Ok(())
                }
            }
            Term::App(f, args) => {
                let arity = sig.arity(f).ok_or_else(|| Error::UnknownSymbol(f.to_string()))?;
                if arity != args.len() {
                    return Err(Error::ArityMismatch {
                        symbol: f.to_string(),
                        expected: arity,
                        found: args.len(),
                    });
                }
                args.iter().try_for_each(|a| a.check(sig))
            }
        }
    }

    /// Matches `self` as a pattern against `target`, extending `sigma`.
    pub fn match_into(&self, target: &Term, sigma: &mut Substitution) -> bool {
        match self {
            Term::Var(v) => match sigma.get(v) {
                Some(bound) => bound == target,
                None => {
                    sigma.insert(v.clone(), target.clone());
                    true
                }
            },
            Term::App(f, args) => match target {
                Term::App(g, targs) if f == g && args.len() == targs.len() => {
                    args.iter().zip(targs.iter()).all(|(p, t)| p.match_into(t, sigma))
                }
                _ => false,
            },
        }
    }

    /// Parses the s-expression syntax `(sym arg ...)`. A bare identifier is a
    /// nullary symbol when the signature declares it, and a variable otherwise.
    pub fn parse(src: &str, sig: &Signature) -> Result<Term> {
        let tokens = tokenize(src);
        let mut pos = 0;
        let t = parse_tokens(&tokens, &mut pos, sig)?;
        if pos != tokens.len() {
            return Err(Error::Parse(format!("trailing input in `{src}`")));
        }
        t.check(sig)?;
        Ok(t)
    }
}

/// A substitution of terms for variables.
pub type Substitution = BTreeMap<Arc<str>, Term>;

fn tokenize(src: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in src.chars() {
        if c == '(' || c == ')' || c.is_whitespace() {
            if !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            if !c.is_whitespace() {
                out.push(c.to_string());
            }
        } else {
            cur.push(c);
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn parse_tokens(tokens: &[String], pos: &mut usize, sig: &Signature) -> Result<Term> {
    let tok = tokens
        .get(*pos)
        .ok_or_else(|| Error::Parse("unexpected end of term".into()))?;
    *pos += 1;
    match tok.as_str() {
        "(" => {
            let head = tokens
                .get(*pos)
                .ok_or_else(|| Error::Parse("missing symbol after `(`".into()))?
                .clone();
            if head == "(" || head == ")" {
                return Err(Error::Parse("expected a symbol after `(`".into()));
            }
            *pos += 1;
            let mut args = Vec::new();
            loop {
                match tokens.get(*pos).map(String::as_str) {
                    Some(")") => {
                        *pos += 1;
                        break;
                    }
                    Some(_) => args.push(parse_tokens(tokens, pos, sig)?),
                    None => return Err(Error::Parse("unbalanced parentheses".into())),
                }
            }
            if args.is_empty() && !sig.contains(&head) {
                // `(x)` is accepted as the variable x.
                return Ok(Term::var(&head));
            }
            Ok(Term::app(&head, args))
        }
        ")" => Err(Error::Parse("unexpected `)`".into())),
        name => {
            if sig.arity(name) == Some(0) {
                Ok(Term::app(name, Vec::new()))
            } else {
                Ok(Term::var(name))
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(s, args) if args.is_empty() => write!(f, "{s}"),
            Term::App(s, args) => {
                write!(f, "({s}")?;
                for a in args.iter() {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Assignment of carrier elements to variable names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Valuation(BTreeMap<Arc<str>, usize>);

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, var: &str, value: usize) {
        self.0.insert(Arc::from(var), value);
    }

    pub fn get(&self, var: &str) -> Option<usize> {
        self.0.get(var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Arc<str>, usize)> + '_ {
        self.0.iter().map(|(k, &v)| (k, v))
    }
}

impl<S: AsRef<str>> FromIterator<(S, usize)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (S, usize)>>(iter: I) -> Self {
        Valuation(iter.into_iter().map(|(k, v)| (Arc::from(k.as_ref()), v)).collect())
    }
}
