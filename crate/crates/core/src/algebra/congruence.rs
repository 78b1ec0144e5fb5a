use super::finite::{decode_cell, for_each_tuple};
use super::{FiniteAlgebra, Partition};
use crate::{Caps, Result};

/// True when every operation maps related tuples to related results.
///
/// Checks one argument position at a time, which is enough by transitivity.
pub fn is_congruence(alg: &FiniteAlgebra, p: &Partition) -> bool {
    if p.len() != alg.size() {
        return false;
    }
    let n = alg.size();
    let mut args = Vec::new();
    for (index, (_, arity)) in alg.signature().symbols().enumerate() {
        args.resize(arity, 0);
        let table = alg.table(index);
        for cell in 0..table.len() {
            decode_cell(cell, n, &mut args);
            let out = table[cell];
            for i in 0..arity {
                let orig = args[i];
                for b in 0..n {
                    if b != orig && p.related(b, orig) {
                        args[i] = b;
                        if !p.related(alg.apply_index(index, &args), out) {
                            return false;
                        }
                    }
                }
                args[i] = orig;
            }
        }
    }
    true
}

/// The coarsest congruence contained in `p`, by stable partition refinement.
///
/// Each round gives every element a signature made of its current block and,
/// for every symbol, position and tuple of other arguments, the block of the
/// result when the element is placed there. Blocks are split by signature
/// until a round leaves the block count unchanged.
pub fn largest_congruence_below(alg: &FiniteAlgebra, p: &Partition) -> Partition {
    let n = alg.size();
    let mut current = p.clone();
    let units: Vec<(usize, usize)> = alg
        .signature()
        .symbols()
        .enumerate()
        .filter(|(_, (_, arity))| *arity > 0)
        .map(|(index, (_, arity))| (index, arity))
        .collect();
    if units.is_empty() {
        return current;
    }
    let mut args = Vec::new();
    loop {
        let mut sigs: Vec<Vec<usize>> = (0..n).map(|a| vec![current.block_of(a)]).collect();
        for &(index, arity) in &units {
            args.resize(arity, 0);
            let mut others = vec![0; arity - 1];
            for i in 0..arity {
                let contexts = n.pow(arity as u32 - 1);
                for ctx in 0..contexts {
                    decode_cell(ctx, n, &mut others);
                    args[..i].copy_from_slice(&others[..i]);
                    args[i + 1..].copy_from_slice(&others[i..]);
                    for (a, sig) in sigs.iter_mut().enumerate() {
                        args[i] = a;
                        sig.push(current.block_of(alg.apply_index(index, &args)));
                    }
                }
            }
        }
        let next = Partition::from_labels(&sigs);
        if next.num_blocks() == current.num_blocks() {
            return current;
        }
        current = next;
    }
}

/// All congruences, by checking every partition of the carrier.
pub fn congruences_bruteforce(alg: &FiniteAlgebra, caps: &Caps) -> Result<Vec<Partition>> {
    Caps::check("algebra size for the congruence oracle", alg.size(), caps.oracle_max)?;
    let mut out: Vec<Partition> = Partition::all(alg.size())
        .filter(|p| is_congruence_by_pairs(alg, p))
        .collect();
    out.sort();
    Ok(out)
}

/// The oracle's reading of the definition: for all pairs of related tuples,
/// the results are related. Deliberately independent of [`is_congruence`].
fn is_congruence_by_pairs(alg: &FiniteAlgebra, p: &Partition) -> bool {
    let n = alg.size();
    for (index, (_, arity)) in alg.signature().symbols().enumerate() {
        let mut ok = true;
        for_each_tuple(n, arity, |a| {
            if !ok {
                return;
            }
            for_each_tuple(n, arity, |b| {
                if ok && a.iter().zip(b).all(|(&x, &y)| p.related(x, y)) {
                    ok = p.related(alg.apply_index(index, a), alg.apply_index(index, b));
                }
            });
        });
        if !ok {
            return false;
        }
    }
    true
}

/// The coarsest brute-force congruence refining `p`.
pub fn coarsest_congruence_below_oracle(alg: &FiniteAlgebra, p: &Partition, caps: &Caps) -> Result<Partition> {
    let below: Vec<Partition> = congruences_bruteforce(alg, caps)?
        .into_iter()
        .filter(|c| c.refines(p))
        .collect();
    let coarsest = below
        .iter()
        .find(|c| below.iter().all(|d| d.refines(c)))
        .cloned()
        .expect("identity is always a congruence below p");
    Ok(coarsest)
}

/// True when all blocks of every congruence have equal size.
pub fn is_congruence_uniform(alg: &FiniteAlgebra, caps: &Caps) -> Result<bool> {
    Ok(congruences_bruteforce(alg, caps)?.iter().all(Partition::is_uniform))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Signature;

    fn b4() -> FiniteAlgebra {
        let sig = Signature::from_pairs([("and", 2), ("or", 2), ("not", 1)]).unwrap();
        FiniteAlgebra::from_fn("B4", sig, 4, |s, a| match s {
            "and" => a[0] & a[1],
            "or" => a[0] | a[1],
            _ => 3 ^ a[0],
        })
        .unwrap()
    }

    fn pointed(n: usize) -> FiniteAlgebra {
        let sig = Signature::from_pairs([("⊤", 1)]).unwrap();
        FiniteAlgebra::from_fn("P", sig, n, |_, _| 0).unwrap()
    }

    #[test]
    fn b4_congruences() {
        let cs = congruences_bruteforce(&b4(), &Caps::default()).unwrap();
        assert_eq!(cs.len(), 4);
        let atoms = Partition::from_blocks(4, &[vec![3, 1], vec![0, 2]]).unwrap();
        assert!(cs.contains(&atoms));
        assert!(cs.contains(&Partition::identity(4)));
        assert!(cs.contains(&Partition::total(4)));
    }

    #[test]
    fn refinement_on_b4() {
        let alg = b4();
        let atoms = Partition::from_blocks(4, &[vec![3, 1], vec![0, 2]]).unwrap();
        assert_eq!(largest_congruence_below(&alg, &atoms), atoms);
        assert_eq!(largest_congruence_below(&alg, &Partition::total(4)), Partition::total(4));
        let id = Partition::identity(4);
        assert_eq!(largest_congruence_below(&alg, &id), id);
        let top_split = Partition::from_blocks(4, &[vec![1, 2, 3], vec![0]]).unwrap();
        assert_eq!(largest_congruence_below(&alg, &top_split), id);
    }

    #[test]
    fn uniformity() {
        let caps = Caps::default();
        assert!(is_congruence_uniform(&b4(), &caps).unwrap());
        assert!(is_congruence_uniform(&pointed(1), &caps).unwrap());
        assert!(!is_congruence_uniform(&pointed(3), &caps).unwrap());
        assert_eq!(congruences_bruteforce(&pointed(2), &caps).unwrap().len(), 2);
        assert_eq!(congruences_bruteforce(&pointed(1), &caps).unwrap(), vec![Partition::identity(1)]);
    }

    #[test]
    fn oracle_cap() {
        let caps = Caps { oracle_max: 3, ..Caps::default() };
        assert!(congruences_bruteforce(&b4(), &caps).is_err());
    }
}
