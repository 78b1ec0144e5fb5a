//! Small named algebras used by the gallery.

use crate::algebra::{FiniteAlgebra, Signature};
use crate::{Caps, Result};

pub fn boolean_signature() -> Signature {
    Signature::from_pairs([("and", 2), ("or", 2), ("not", 1)]).expect("valid signature")
}

pub fn implication_signature() -> Signature {
    Signature::from_pairs([("→", 2)]).expect("valid signature")
}

pub fn pointed_signature() -> Signature {
    Signature::from_pairs([("⊤", 1)]).expect("valid signature")
}

/// The Boolean algebra of subsets of `atoms` atoms, elements as bitmasks.
///
/// With two atoms the elements are 0 = ⊥, 1 = a, 2 = b, 3 = ⊤.
pub fn boolean_algebra(atoms: usize) -> Result<FiniteAlgebra> {
    let n = 1usize << atoms;
    let top = n - 1;
    FiniteAlgebra::from_fn(format!("B{n}"), boolean_signature(), n, |sym, a| match sym {
        "and" => a[0] & a[1],
        "or" => a[0] | a[1],
        _ => top ^ a[0],
    })
}

/// The implication reduct of a Boolean algebra: `a → b = ¬a ∨ b`.
pub fn implication_algebra(atoms: usize) -> Result<FiniteAlgebra> {
    let n = 1usize << atoms;
    let top = n - 1;
    FiniteAlgebra::from_fn(format!("B{n}-imp"), implication_signature(), n, |_, a| (top ^ a[0]) | a[1])
}

/// `⟨{0..n-1}; ⊤⟩` with `⊤` constantly `point`.
pub fn pointed_set(n: usize, point: usize) -> Result<FiniteAlgebra> {
    FiniteAlgebra::from_fn(format!("P{n}.{point}"), pointed_signature(), n, |_, _| point)
}

/// One pointed set per size `1..=max`, pointed at 0.
pub fn pointed_sets(max: usize) -> Result<Vec<FiniteAlgebra>> {
    (1..=max).map(|n| pointed_set(n, 0)).collect()
}

/// Every algebra over `sig` with at most `max` elements, up to isomorphism.
pub fn small_algebras(sig: &Signature, max: usize, caps: &Caps) -> Result<Vec<FiniteAlgebra>> {
    let mut out = Vec::new();
    for n in 1..=max {
        out.extend(crate::algebra::enumerate_algebras(sig, n, true, caps)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b4_layout() {
        let b4 = boolean_algebra(2).unwrap();
        assert_eq!(b4.apply("and", &[1, 2]).unwrap(), 0);
        assert_eq!(b4.apply("or", &[1, 2]).unwrap(), 3);
        assert_eq!(b4.apply("not", &[1]).unwrap(), 2);
        let imp = implication_algebra(1).unwrap();
        assert_eq!(imp.table(0), &[1, 1, 0, 1]);
    }
}
