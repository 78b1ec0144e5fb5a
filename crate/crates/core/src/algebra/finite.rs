use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use super::{Signature, Term, Valuation};
use crate::{Error, Result};

/// A finite algebra on the carrier `{0..size-1}`.
///
/// Each symbol's table is flattened row-major with the first argument most
/// significant: `f(a0, .., ak-1)` lives at `Σ ai * n^(k-1-i)`. Tables are
/// stored in the signature's sorted symbol order.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    name: String,
    signature: Signature,
    size: usize,
    tables: Vec<Vec<usize>>,
}

impl FiniteAlgebra {
    /// Builds an algebra from flattened tables keyed by symbol name.
    pub fn new(
        name: impl Into<String>,
        signature: Signature,
        size: usize,
        tables: BTreeMap<String, Vec<usize>>,
    ) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidAlgebra("carrier must be nonempty".into()));
        }
        let mut ordered = Vec::with_capacity(signature.len());
        for (sym, arity) in signature.symbols() {
            let table = tables
                .get(&**sym)
                .ok_or_else(|| Error::InvalidAlgebra(format!("missing table for `{sym}`")))?;
            let cells = cell_count(size, arity)?;
            if table.len() != cells {
                return Err(Error::InvalidAlgebra(format!(
                    "table for `{sym}` has {} cells, expected {cells}",
                    table.len()
                )));
            }
            if let Some(bad) = table.iter().find(|&&v| v >= size) {
                return Err(Error::InvalidAlgebra(format!(
                    "table for `{sym}` has entry {bad} outside 0..{size}"
                )));
            }
            ordered.push(table.clone());
        }
        if let Some(extra) = tables.keys().find(|k| !signature.contains(k)) {
            return Err(Error::UnknownSymbol(extra.clone()));
        }
        Ok(FiniteAlgebra {
            name: name.into(),
            signature,
            size,
            tables: ordered,
        })
    }

    /// Builds an algebra by evaluating `op(symbol, args)` on every cell.
    pub fn from_fn(
        name: impl Into<String>,
        signature: Signature,
        size: usize,
        mut op: impl FnMut(&str, &[usize]) -> usize,
    ) -> Result<Self> {
        let mut tables = BTreeMap::new();
        for (sym, arity) in signature.symbols() {
            let cells = cell_count(size, arity)?;
            let mut args = vec![0; arity];
            let mut table = Vec::with_capacity(cells);
            for cell in 0..cells {
                decode_cell(cell, size, &mut args);
                table.push(op(sym, &args));
            }
            tables.insert(sym.to_string(), table);
        }
        FiniteAlgebra::new(name, signature, size, tables)
    }

    /// Internal constructor for tables already in signature order and validated.
    pub(crate) fn from_ordered(
        name: String,
        signature: Signature,
        size: usize,
        tables: Vec<Vec<usize>>,
    ) -> Self {
        debug_assert_eq!(tables.len(), signature.len());
        FiniteAlgebra {
            name,
            signature,
            size,
            tables,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Flattened table of the symbol at `index` in signature order.
    pub fn table(&self, index: usize) -> &[usize] {
        &self.tables[index]
    }

    pub fn tables(&self) -> &[Vec<usize>] {
        &self.tables
    }

    pub fn table_of(&self, symbol: &str) -> Option<&[usize]> {
        self.signature.index_of(symbol).map(|i| self.tables[i].as_slice())
    }

    /// Applies the symbol at `index` to `args` (length is not checked).
    #[inline]
    pub fn apply_index(&self, index: usize, args: &[usize]) -> usize {
        self.tables[index][encode_cell(args, self.size)]
    }

    pub fn apply(&self, symbol: &str, args: &[usize]) -> Result<usize> {
        let index = self
            .signature
            .index_of(symbol)
            .ok_or_else(|| Error::UnknownSymbol(symbol.to_string()))?;
        let arity = self.signature.arity(symbol).unwrap_or(0);
        if arity != args.len() {
            return Err(Error::ArityMismatch {
                symbol: symbol.to_string(),
                expected: arity,
                found: args.len(),
            });
        }
        if let Some(&bad) = args.iter().find(|&&a| a >= self.size) {
            return Err(Error::InvalidAlgebra(format!("element {bad} outside carrier")));
        }
        Ok(self.apply_index(index, args))
    }

    /// Evaluates a term under a valuation.
    pub fn eval(&self, t: &Term, v: &Valuation) -> Result<usize> {
        self.eval_with(t, &|name| v.get(name))
    }

    /// Evaluates a term, looking variables up through `lookup`.
    pub fn eval_with(&self, t: &Term, lookup: &dyn Fn(&str) -> Option<usize>) -> Result<usize> {
        match t {
            Term::Var(x) => match lookup(x) {
                Some(a) if a < self.size => Ok(a),
                Some(a) => Err(Error::InvalidAlgebra(format!(
                    "valuation sends `{x}` to {a}, outside carrier of size {}",
                    self.size
                ))),
                None => Err(Error::UnboundVariable(x.to_string())),
            },
            Term::App(f, args) => {
                let mut vals = Vec::with_capacity(args.len());
                for a in args.iter() {
                    vals.push(self.eval_with(a, lookup)?);
                }
                self.apply(f, &vals)
            }
        }
    }

    /// Compiles `t` for repeated evaluation with variables bound by slot.
    pub fn compile(&self, t: &Term, vars: &[Arc<str>]) -> Result<CompiledTerm> {
        CompiledTerm::new(&self.signature, t, vars)
    }

    /// The unary term function `a ↦ t(a)` of a term whose only variable is `var`.
    pub fn term_function(&self, t: &Term, var: &str) -> Result<Vec<usize>> {
        let vars = [Arc::from(var)];
        let c = self.compile(t, &vars)?;
        let mut stack = Vec::new();
        Ok((0..self.size).map(|a| c.eval_with_stack(self, &[a], &mut stack)).collect())
    }

    /// Relabels elements: element `a` of `self` becomes `perm[a]`.
    pub fn permute(&self, perm: &[usize]) -> FiniteAlgebra {
        let n = self.size;
        let mut inv = vec![0; n];
        for (a, &b) in perm.iter().enumerate() {
            inv[b] = a;
        }
        let mut tables = Vec::with_capacity(self.tables.len());
        let mut args = Vec::new();
        for (index, (_, arity)) in self.signature.symbols().enumerate() {
            args.resize(arity, 0);
            let cells = self.tables[index].len();
            let mut out = vec![0; cells];
            for (cell, slot) in out.iter_mut().enumerate() {
                decode_cell(cell, n, &mut args);
                for a in args.iter_mut() {
                    *a = inv[*a];
                }
                *slot = perm[self.apply_index(index, &args)];
            }
            tables.push(out);
        }
        FiniteAlgebra::from_ordered(self.name.clone(), self.signature.clone(), n, tables)
    }

    /// True when `map` (indexed by elements of `self`) is a homomorphism into `other`.
    pub fn is_homomorphism(&self, map: &[usize], other: &FiniteAlgebra) -> bool {
        if self.signature != other.signature || map.len() != self.size {
            return false;
        }
        let mut args = Vec::new();
        let mut image = Vec::new();
        for (index, (_, arity)) in self.signature.symbols().enumerate() {
            args.resize(arity, 0);
            for cell in 0..self.tables[index].len() {
                decode_cell(cell, self.size, &mut args);
                image.clear();
                image.extend(args.iter().map(|&a| map[a]));
                if map[self.apply_index(index, &args)] != other.apply_index(index, &image) {
                    return false;
                }
            }
        }
        true
    }

    /// Tables keyed by symbol name, in signature order.
    pub fn named_tables(&self) -> BTreeMap<String, Vec<usize>> {
        self.signature
            .symbols()
            .zip(&self.tables)
            .map(|((s, _), t)| (s.to_string(), t.clone()))
            .collect()
    }
}

impl fmt::Debug for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteAlgebra")
            .field("name", &self.name)
            .field("signature", &self.signature)
            .field("size", &self.size)
            .field("tables", &self.named_tables())
            .finish()
    }
}

/// `n^arity`, checked against overflow.
pub fn cell_count(n: usize, arity: usize) -> Result<usize> {
    n.checked_pow(arity as u32).ok_or(Error::CapExceeded {
        what: "table size",
        limit: usize::MAX,
        actual: usize::MAX,
    })
}

#[inline]
pub fn encode_cell(args: &[usize], n: usize) -> usize {
    args.iter().fold(0, |acc, &a| acc * n + a)
}

/// Inverse of [`encode_cell`]; fills `args` (its length is the arity).
#[inline]
pub fn decode_cell(mut cell: usize, n: usize, args: &mut [usize]) {
    for slot in args.iter_mut().rev() {
        *slot = cell % n;
        cell /= n;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Instr {
    Var(usize),
    Op { index: usize, arity: usize },
}

/// A term flattened into a postfix program over variable slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompiledTerm {
    code: Vec<Instr>,
}

impl CompiledTerm {
    pub fn new(sig: &Signature, t: &Term, vars: &[Arc<str>]) -> Result<Self> {
        let mut code = Vec::new();
        emit(sig, t, vars, &mut code)?;
        Ok(CompiledTerm { code })
    }

    /// Evaluates with `env[i]` bound to the `i`-th compiled variable.
    pub fn eval(&self, alg: &FiniteAlgebra, env: &[usize]) -> usize {
        let mut stack = Vec::with_capacity(self.code.len());
        self.eval_with_stack(alg, env, &mut stack)
    }

    /// Same as [`CompiledTerm::eval`] reusing a scratch stack.
    pub fn eval_with_stack(&self, alg: &FiniteAlgebra, env: &[usize], stack: &mut Vec<usize>) -> usize {
        stack.clear();
        let n = alg.size;
        for ins in &self.code {
            match *ins {
                Instr::Var(slot) => stack.push(env[slot]),
                Instr::Op { index, arity } => {
                    let base = stack.len() - arity;
                    let cell = stack[base..].iter().fold(0, |acc, &a| acc * n + a);
                    stack.truncate(base);
                    stack.push(alg.tables[index][cell]);
                }
            }
        }
        stack[0]
    }
}

fn emit(sig: &Signature, t: &Term, vars: &[Arc<str>], code: &mut Vec<Instr>) -> Result<()> {
    match t {
        Term::Var(x) => {
            let slot = vars
                .iter()
                .position(|v| v == x)
                .ok_or_else(|| Error::UnboundVariable(x.to_string()))?;
            code.push(Instr::Var(slot));
        }
        Term::App(f, args) => {
            let index = sig.index_of(f).ok_or_else(|| Error::UnknownSymbol(f.to_string()))?;
            let arity = sig.arity(f).unwrap_or(0);
            if arity != args.len() {
                return Err(Error::ArityMismatch {
                    symbol: f.to_string(),
                    expected: arity,
                    found: args.len(),
                });
            }
            for a in args.iter() {
                emit(sig, a, vars, code)?;
            }
            code.push(Instr::Op { index, arity });
        }
    }
    Ok(())
}

/// Calls `f` on every tuple in `{0..n-1}^k` in row-major order.
pub fn for_each_tuple(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut tuple = vec![0; k];
    if k > 0 && n == 0 {
        return;
    }
    loop {
        f(&tuple);
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < n {
                break;
            }
            tuple[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b2() -> FiniteAlgebra {
        let sig = Signature::from_pairs([("and", 2), ("or", 2), ("not", 1)]).unwrap();
        FiniteAlgebra::from_fn("B2", sig, 2, |s, a| match s {
            "and" => a[0] & a[1],
            "or" => a[0] | a[1],
            _ => 1 - a[0],
        })
        .unwrap()
    }

    #[test]
    fn eval_conjunction() {
        let alg = b2();
        let t = Term::parse("(and x y)", alg.signature()).unwrap();
        let v: Valuation = [("x", 1), ("y", 0)].into_iter().collect();
        assert_eq!(alg.eval(&t, &v).unwrap(), 0);
        let x = Term::var("x");
        assert_eq!(alg.eval(&x, &[("x", 1)].into_iter().collect()).unwrap(), 1);
    }

    #[test]
    fn eval_errors() {
        let alg = b2();
        let t = Term::parse("(and x y)", alg.signature()).unwrap();
        let v: Valuation = [("x", 1)].into_iter().collect();
        assert_eq!(alg.eval(&t, &v), Err(Error::UnboundVariable("y".into())));
        let bad = Term::app("and", vec![Term::var("x")]);
        assert!(matches!(
            alg.eval(&bad, &[("x", 0)].into_iter().collect()),
            Err(Error::ArityMismatch { .. })
        ));
    }

    #[test]
    fn compiled_matches_tree_eval() {
        let alg = b2();
        let t = Term::parse("(or (not x) (and x y))", alg.signature()).unwrap();
        let vars: Vec<Arc<str>> = vec![Arc::from("x"), Arc::from("y")];
        let c = alg.compile(&t, &vars).unwrap();
        for_each_tuple(2, 2, |e| {
            let v: Valuation = [("x", e[0]), ("y", e[1])].into_iter().collect();
            assert_eq!(c.eval(&alg, e), alg.eval(&t, &v).unwrap());
        });
    }

    #[test]
    fn table_validation() {
        let sig = Signature::from_pairs([("f", 1)]).unwrap();
        let mut tables = BTreeMap::new();
        tables.insert("f".to_string(), vec![0, 2]);
        assert!(FiniteAlgebra::new("A", sig.clone(), 2, tables.clone()).is_err());
        tables.insert("f".to_string(), vec![0]);
        assert!(FiniteAlgebra::new("A", sig, 2, tables).is_err());
    }

    #[test]
    fn permutation_is_isomorphism() {
        let alg = b2();
        let swapped = alg.permute(&[1, 0]);
        assert!(alg.is_homomorphism(&[1, 0], &swapped));
        assert_ne!(alg, swapped);
    }
}
