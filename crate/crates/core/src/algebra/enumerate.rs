use std::sync::Arc;

use super::finite::cell_count;
use super::{FiniteAlgebra, Signature, Term};
use crate::{Caps, Error, Result};

/// Every term over `sig` with variables among `vars` and depth at most `depth`.
///
/// Order is depth-lexicographic: layer by layer; inside a layer, symbols in
/// signature order and argument tuples in lexicographic order of the
/// positions of their components in the output so far. Depth 0 lists the
/// variables in the given order, then the constants.
pub fn enumerate_terms(sig: &Signature, vars: &[&str], depth: usize) -> Vec<Term> {
    let mut all: Vec<Term> = vars.iter().map(|v| Term::var(v)).collect();
    all.extend(sig.symbols_of_arity(0).map(|c| Term::app_shared(c.clone(), Vec::new())));
    let mut layer_start = 0;
    for _ in 0..depth {
        let prev_len = all.len();
        let mut layer = Vec::new();
        for (sym, arity) in sig.symbols() {
            if arity == 0 {
                continue;
            }
            let mut idx = vec![0usize; arity];
            loop {
                if idx.iter().any(|&i| i >= layer_start) {
                    let args = idx.iter().map(|&i| all[i].clone()).collect();
                    layer.push(Term::app_shared(sym.clone(), args));
                }
                if !advance(&mut idx, prev_len) {
                    break;
                }
            }
        }
        if layer.is_empty() {
            break;
        }
        layer_start = prev_len;
        all.extend(layer);
    }
    all
}

/// Number of terms [`enumerate_terms`] would produce, without building them.
pub fn count_terms(sig: &Signature, vars: usize, depth: usize) -> u128 {
    let mut total = vars as u128 + sig.symbols_of_arity(0).count() as u128;
    let mut below = 0u128;
    for _ in 0..depth {
        let mut layer = 0u128;
        for (_, arity) in sig.symbols() {
            if arity > 0 {
                layer = layer.saturating_add(total.saturating_pow(arity as u32).saturating_sub(below.saturating_pow(arity as u32)));
            }
        }
        if layer == 0 {
            break;
        }
        below = total;
        total = total.saturating_add(layer);
    }
    total
}

fn advance(idx: &mut [usize], bound: usize) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < bound {
            return true;
        }
        idx[i] = 0;
    }
    false
}

/// The space of all operation-table assignments for a signature and size.
///
/// Algebras are indexed in mixed radix: the concatenation of all tables (in
/// signature order, row-major) read as a base-`n` numeral, first cell most
/// significant.
#[derive(Clone, Debug)]
pub struct AlgebraSpace {
    sig: Signature,
    n: usize,
    cells: Vec<usize>,
    total_cells: usize,
}

impl AlgebraSpace {
    pub fn new(sig: &Signature, n: usize, caps: &Caps) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidAlgebra("carrier must be nonempty".into()));
        }
        let cells: Vec<usize> = sig
            .symbols()
            .map(|(_, a)| cell_count(n, a))
            .collect::<Result<_>>()?;
        let total_cells: usize = cells.iter().sum();
        Caps::check("table cells for enumeration", total_cells, caps.table_budget)?;
        Ok(AlgebraSpace {
            sig: sig.clone(),
            n,
            cells,
            total_cells,
        })
    }

    /// Number of algebras, or `None` when it does not fit in 128 bits.
    pub fn count(&self) -> Option<u128> {
        (self.n as u128).checked_pow(u32::try_from(self.total_cells).ok()?)
    }

    /// The algebra with the given index.
    pub fn algebra_at(&self, mut index: u128) -> FiniteAlgebra {
        let mut flat = vec![0; self.total_cells];
        for slot in flat.iter_mut().rev() {
            *slot = (index % self.n as u128) as usize;
            index /= self.n as u128;
        }
        self.build(&flat)
    }

    fn build(&self, flat: &[usize]) -> FiniteAlgebra {
        let mut tables = Vec::with_capacity(self.cells.len());
        let mut at = 0;
        for &c in &self.cells {
            tables.push(flat[at..at + c].to_vec());
            at += c;
        }
        FiniteAlgebra::from_ordered(format!("A{}", self.n), self.sig.clone(), self.n, tables)
    }

    /// Every algebra in index order.
    pub fn iter(&self) -> impl Iterator<Item = FiniteAlgebra> + '_ {
        let mut flat = vec![0; self.total_cells];
        let mut done = false;
        std::iter::from_fn(move || {
            if done {
                return None;
            }
            let alg = self.build(&flat);
            done = !advance(&mut flat, self.n);
            Some(alg)
        })
    }
}

/// All algebras of size `n` over `sig`; with `iso_prune`, one per isomorphism class.
pub fn enumerate_algebras(sig: &Signature, n: usize, iso_prune: bool, caps: &Caps) -> Result<Vec<FiniteAlgebra>> {
    let space = AlgebraSpace::new(sig, n, caps)?;
    let perms = if iso_prune { permutations(n) } else { Vec::new() };
    let mut out: Vec<FiniteAlgebra> = Vec::new();
    for (i, alg) in space.iter().enumerate() {
        if iso_prune && !is_lex_minimal(&alg, &perms) {
            continue;
        }
        out.push(alg.with_name(format!("A{n}#{i}")));
    }
    Ok(out)
}

/// The lexicographically least relabelling of `alg`'s tables.
pub fn canonical_form(alg: &FiniteAlgebra) -> FiniteAlgebra {
    let mut best = alg.clone();
    for p in permutations(alg.size()) {
        let q = alg.permute(&p);
        if q.tables() < best.tables() {
            best = q;
        }
    }
    best
}

/// True when no relabelling gives lexicographically smaller tables, so each
/// isomorphism class has exactly one such member.
pub fn is_lex_minimal(alg: &FiniteAlgebra, perms: &[Vec<usize>]) -> bool {
    perms.iter().all(|p| alg.permute(p).tables() >= alg.tables())
}

/// All permutations of `{0..n-1}` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// Shared variable names `x`, `y`, then `z1, z2, ...`.
pub fn var_names(count: usize) -> Vec<Arc<str>> {
    (0..count)
        .map(|i| match i {
            0 => Arc::from("x"),
            1 => Arc::from("y"),
            _ => Arc::from(format!("z{}", i - 1)),
        })
        .collect()
}
