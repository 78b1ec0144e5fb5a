use std::collections::BTreeSet;

use super::congruence::is_congruence;
use super::finite::{cell_count, decode_cell};
use super::{FiniteAlgebra, Partition, Signature};
use crate::{Caps, Error, Result, Subset};

/// Index of a tuple in a product carrier, first factor most significant.
pub fn product_index(coords: &[usize], sizes: &[usize]) -> usize {
    coords.iter().zip(sizes).fold(0, |acc, (&c, &s)| acc * s + c)
}

/// Inverse of [`product_index`].
pub fn product_coords(mut index: usize, sizes: &[usize]) -> Vec<usize> {
    let mut out = vec![0; sizes.len()];
    for (slot, &s) in out.iter_mut().zip(sizes).rev() {
        *slot = index % s;
        index /= s;
    }
    out
}

fn product_size(sizes: &[usize], caps: &Caps) -> Result<usize> {
    let total = sizes
        .iter()
        .try_fold(1usize, |acc, &s| acc.checked_mul(s))
        .unwrap_or(usize::MAX);
    Caps::check("product size", total, caps.product_max)?;
    Ok(total)
}

/// Direct product over one signature with componentwise operations.
pub fn direct_product(algs: &[FiniteAlgebra], caps: &Caps) -> Result<FiniteAlgebra> {
    let first = algs
        .first()
        .ok_or_else(|| Error::InvalidAlgebra("direct product of no factors".into()))?;
    let sig = first.signature().clone();
    if let Some(bad) = algs.iter().find(|a| a.signature() != &sig) {
        return Err(Error::SignatureMismatch(format!(
            "factor `{}` has signature {}, expected {}",
            bad.name(),
            bad.signature(),
            sig
        )));
    }
    let sizes: Vec<usize> = algs.iter().map(FiniteAlgebra::size).collect();
    let n = product_size(&sizes, caps)?;
    let coords: Vec<Vec<usize>> = (0..n).map(|i| product_coords(i, &sizes)).collect();
    let mut tables = Vec::with_capacity(sig.len());
    let mut args = Vec::new();
    let mut factor_args = Vec::new();
    for (index, (_, arity)) in sig.symbols().enumerate() {
        args.resize(arity, 0);
        factor_args.resize(arity, 0);
        let cells = cell_count(n, arity)?;
        let mut table = Vec::with_capacity(cells);
        let mut out = vec![0; algs.len()];
        for cell in 0..cells {
            decode_cell(cell, n, &mut args);
            for (j, alg) in algs.iter().enumerate() {
                for (fa, &a) in factor_args.iter_mut().zip(&args) {
                    *fa = coords[a][j];
                }
                out[j] = alg.apply_index(index, &factor_args);
            }
            table.push(product_index(&out, &sizes));
        }
        tables.push(table);
    }
    let name = algs.iter().map(FiniteAlgebra::name).collect::<Vec<_>>().join("×");
    Ok(FiniteAlgebra::from_ordered(name, sig, n, tables))
}

/// Binary non-indexed product: symbol `f⊗g` acts as `f` on first and `g` on second coordinates.
pub fn nonindexed_product(a1: &FiniteAlgebra, a2: &FiniteAlgebra, caps: &Caps) -> Result<FiniteAlgebra> {
    let sizes = [a1.size(), a2.size()];
    let n = product_size(&sizes, caps)?;
    let sig = a1.signature().nonindexed_product(a2.signature());
    let name = format!("{}⊗{}", a1.name(), a2.name());
    let s1 = a1.signature();
    let s2 = a2.signature();
    FiniteAlgebra::from_fn(name, sig, n, |sym, args| {
        let (f, g) = split_product_symbol(sym, s1, s2).expect("symbol built from both signatures");
        let xs: Vec<usize> = args.iter().map(|&a| a / sizes[1]).collect();
        let ys: Vec<usize> = args.iter().map(|&a| a % sizes[1]).collect();
        let i = s1.index_of(f).expect("first symbol");
        let j = s2.index_of(g).expect("second symbol");
        product_index(&[a1.apply_index(i, &xs), a2.apply_index(j, &ys)], &sizes)
    })
}

/// Splits `f⊗g` into its components, trying every split point so that
/// symbol names containing `⊗` still resolve.
pub fn split_product_symbol<'a>(sym: &'a str, s1: &Signature, s2: &Signature) -> Option<(&'a str, &'a str)> {
    sym.match_indices('⊗').find_map(|(i, m)| {
        let (f, g) = (&sym[..i], &sym[i + m.len()..]);
        (s1.contains(f) && s2.contains(g)).then_some((f, g))
    })
}

/// Quotient by a congruence; block `i` of `theta` becomes element `i`.
pub fn quotient(alg: &FiniteAlgebra, theta: &Partition) -> Result<FiniteAlgebra> {
    if theta.len() != alg.size() {
        return Err(Error::InvalidPartition(format!(
            "partition over {} elements, algebra has {}",
            theta.len(),
            alg.size()
        )));
    }
    if !is_congruence(alg, theta) {
        return Err(Error::NotACongruence);
    }
    let reps: Vec<usize> = theta.blocks().iter().map(|b| b[0]).collect();
    let name = format!("{}/θ", alg.name());
    FiniteAlgebra::from_fn(name, alg.signature().clone(), reps.len(), |sym, args| {
        let i = alg.signature().index_of(sym).expect("own symbol");
        let lifted: Vec<usize> = args.iter().map(|&b| reps[b]).collect();
        theta.block_of(alg.apply_index(i, &lifted))
    })
}

/// The least subuniverse containing `seed` (constants are always included).
pub fn subuniverse_generated(alg: &FiniteAlgebra, seed: &Subset) -> Subset {
    let n = alg.size();
    let mut inside = seed.clone();
    let mut args = Vec::new();
    loop {
        let members = inside.to_vec();
        let mut grew = false;
        for (index, (_, arity)) in alg.signature().symbols().enumerate() {
            args.resize(arity, 0);
            let k = members.len();
            if arity > 0 && k == 0 {
                continue;
            }
            let combos = k.pow(arity as u32);
            for c in 0..combos {
                let mut rest = c;
                for slot in args.iter_mut().rev() {
                    *slot = members[rest % k];
                    rest /= k;
                }
                grew |= inside.insert(alg.apply_index(index, &args));
            }
        }
        if !grew {
            debug_assert!(inside.iter().all(|a| a < n));
            return inside;
        }
    }
}

/// All nonempty subuniverses, sorted by size then lexicographically.
pub fn subuniverses(alg: &FiniteAlgebra, caps: &Caps) -> Result<Vec<Subset>> {
    Caps::check("algebra size for the subuniverse sweep", alg.size(), caps.product_max)?;
    let generated: Vec<Subset> = (0..alg.size())
        .map(|a| subuniverse_generated(alg, &Subset::singleton(a)))
        .collect();
    let mut found: BTreeSet<Subset> = generated.iter().cloned().collect();
    let mut frontier: Vec<Subset> = found.iter().cloned().collect();
    while let Some(s) = frontier.pop() {
        for g in &generated {
            if g.is_subset(&s) {
                continue;
            }
            let joined = subuniverse_generated(alg, &s.union(g));
            if found.insert(joined.clone()) {
                frontier.push(joined);
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// The subalgebra on a subuniverse, re-indexed in increasing element order.
/// Returns it with the embedding (new index to old element).
pub fn subalgebra(alg: &FiniteAlgebra, universe: &Subset) -> Result<(FiniteAlgebra, Vec<usize>)> {
    if universe.is_empty() {
        return Err(Error::InvalidAlgebra("empty subuniverse".into()));
    }
    if subuniverse_generated(alg, universe) != *universe {
        return Err(Error::InvalidAlgebra(format!("{universe} is not closed under the operations")));
    }
    let embed = universe.to_vec();
    let mut back = vec![usize::MAX; alg.size()];
    for (i, &a) in embed.iter().enumerate() {
        back[a] = i;
    }
    let name = format!("{}|{}", alg.name(), universe);
    let sub = FiniteAlgebra::from_fn(name, alg.signature().clone(), embed.len(), |sym, args| {
        let i = alg.signature().index_of(sym).expect("own symbol");
        let lifted: Vec<usize> = args.iter().map(|&b| embed[b]).collect();
        back[alg.apply_index(i, &lifted)]
    })?;
    Ok((sub, embed))
}
