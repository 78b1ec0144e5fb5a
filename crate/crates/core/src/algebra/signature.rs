use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

/// Operation symbols with their arities, kept in sorted order.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    symbols: BTreeMap<Arc<str>, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<S: AsRef<str>>(pairs: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let mut sig = Signature::new();
        for (name, arity) in pairs {
            sig.add(name.as_ref(), arity)?;
        }
        Ok(sig)
    }

    /// Adds a symbol. Re-adding a name with a different arity is an error.
    pub fn add(&mut self, name: &str, arity: usize) -> Result<()> {
        validate_symbol_name(name)?;
        match self.symbols.get(name) {
            Some(&a) if a != arity => Err(Error::SignatureMismatch(format!(
                "symbol `{name}` declared with arities {a} and {arity}"
            ))),
            _ => {
                self.symbols.insert(Arc::from(name), arity);
                Ok(())
            }
        }
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.symbols.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.symbols.contains_key(name)
    }

    /// Symbols in sorted order.
    pub fn symbols(&self) -> impl Iterator<Item = (&Arc<str>, usize)> + '_ {
        self.symbols.iter().map(|(k, &v)| (k, v))
    }

    /// Position of a symbol in the sorted order.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.keys().position(|k| &**k == name)
    }

    pub fn symbol_at(&self, index: usize) -> Option<(&Arc<str>, usize)> {
        self.symbols().nth(index)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols_of_arity(&self, arity: usize) -> impl Iterator<Item = &Arc<str>> + '_ {
        self.symbols
            .iter()
            .filter(move |(_, &a)| a == arity)
            .map(|(k, _)| k)
    }

    pub fn max_arity(&self) -> usize {
        self.symbols.values().copied().max().unwrap_or(0)
    }

    /// Signature of the binary non-indexed product: every pair of
    /// same-arity symbols `(f, g)` becomes the symbol `f⊗g`.
    pub fn nonindexed_product(&self, other: &Signature) -> Signature {
        let mut out = Signature::new();
        for (f, a) in self.symbols() {
            for g in other.symbols_of_arity(a) {
                out.symbols.insert(Arc::from(product_symbol(f, g)), a);
            }
        }
        out
    }
}

/// Name of the pair symbol `⟨f, g⟩` in a non-indexed product signature.
pub fn product_symbol(f: &str, g: &str) -> String {
    format!("{f}⊗{g}")
}

fn validate_symbol_name(name: &str) -> Result<()> {
    if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == '(' || c == ')') {
        return Err(Error::Parse(format!("invalid symbol name `{name}`")));
    }
    Ok(())
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.symbols.iter()).finish()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.symbols().map(|(s, a)| format!("{s}:{a}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}
