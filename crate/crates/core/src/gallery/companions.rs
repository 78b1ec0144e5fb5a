use std::fmt;
use std::str::FromStr;

use crate::algebra::FiniteAlgebra;
use crate::logic::{reduced_filters_on, FilterNotion, LogicKind, LogicPresentation};
use crate::matrix::matrix_product;
use crate::{Caps, Error, Matrix, Result, Subset};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Companion {
    /// Same consequences from nonempty premises, no theorems.
    Theoremless,
    /// Drops the models with empty filter.
    Plus,
}

impl FromStr for Companion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theoremless" => Ok(Companion::Theoremless),
            "plus" => Ok(Companion::Plus),
            other => Err(Error::BadParam(format!("unknown companion `{other}`"))),
        }
    }
}

impl fmt::Display for Companion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Companion::Theoremless => "theoremless",
            Companion::Plus => "plus",
        })
    }
}

/// Defining matrices of `l`. Rule presentations are replaced by their
/// reduced models on `inventory`, which makes the result inventory-bound.
pub fn defining_matrices(
    l: &LogicPresentation,
    inventory: Option<&[FiniteAlgebra]>,
    caps: &Caps,
) -> Result<(Vec<Matrix>, FilterNotion, bool)> {
    match &l.kind {
        LogicKind::Matrices(ms) => Ok((ms.clone(), FilterNotion::Exact, false)),
        LogicKind::Rules(_) => {
            let inventory = inventory
                .ok_or_else(|| Error::Unsupported("a rule presentation needs an inventory to be turned into matrices".into()))?;
            let mut out = Vec::new();
            let mut notion = FilterNotion::Exact;
            for a in inventory {
                let r = reduced_filters_on(l, a, caps)?;
                notion = notion.and(r.notion);
                out.extend(r.matrices);
            }
            if out.is_empty() {
                return Err(Error::Unsupported("no reduced models on the inventory".into()));
            }
            Ok((out, notion, true))
        }
    }
}

/// The theoremless (`⊢∅`) or plus (`⊢⁺`) companion of `l`, as a matrix presentation.
/// The flag is true when the result only reflects the supplied inventory.
pub fn companions(
    l: &LogicPresentation,
    which: Companion,
    inventory: Option<&[FiniteAlgebra]>,
    caps: &Caps,
) -> Result<(LogicPresentation, bool)> {
    let (mut ms, _, bounded) = defining_matrices(l, inventory, caps)?;
    let name = match which {
        Companion::Theoremless => {
            let mut algebras: Vec<FiniteAlgebra> = Vec::new();
            for m in &ms {
                if !algebras.contains(m.algebra()) {
                    algebras.push(m.algebra().clone());
                }
            }
            for a in algebras {
                let empty = Matrix::new(a, Subset::empty())?;
                if !ms.contains(&empty) {
                    ms.push(empty);
                }
            }
            format!("{}∅", l.name)
        }
        Companion::Plus => {
            ms.retain(|m| !m.filter().is_empty());
            if ms.is_empty() {
                return Err(Error::Unsupported("every defining matrix has an empty filter".into()));
            }
            format!("{}⁺", l.name)
        }
    };
    let out = LogicPresentation::from_matrices(name, l.signature.clone(), ms)?.with_budget(l.variable_budget);
    Ok((out, bounded))
}

/// Pairwise non-indexed products of the defining matrices.
pub fn product_of_logics(l1: &LogicPresentation, l2: &LogicPresentation, caps: &Caps) -> Result<LogicPresentation> {
    let (Some(m1), Some(m2)) = (l1.matrices(), l2.matrices()) else {
        return Err(Error::Unsupported("products need matrix presentations".into()));
    };
    let mut ms = Vec::with_capacity(m1.len() * m2.len());
    for a in m1 {
        for b in m2 {
            ms.push(matrix_product(a, b, caps)?);
        }
    }
    let sig = l1.signature.nonindexed_product(&l2.signature);
    Ok(LogicPresentation::from_matrices(format!("{}⊗{}", l1.name, l2.name), sig, ms)?
        .with_budget(l1.variable_budget.min(l2.variable_budget)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Term;
    use crate::gallery::algebras::{pointed_set, pointed_signature};
    use crate::logic::entails;

    #[test]
    fn theoremless_assertional() {
        let sig = pointed_signature();
        let ms = (1..=2)
            .map(|n| Matrix::new(pointed_set(n, 0).unwrap(), Subset::singleton(0)).unwrap())
            .collect();
        let l = LogicPresentation::from_matrices("A", sig.clone(), ms).unwrap();
        let (t, bounded) = companions(&l, Companion::Theoremless, None, &Caps::default()).unwrap();
        assert!(!bounded);
        let top = Term::parse("(⊤ x)", &sig).unwrap();
        assert!(entails(&l, &[], &top).unwrap());
        assert!(!entails(&t, &[], &top).unwrap());
        assert!(entails(&t, &[Term::var("y")], &top).unwrap());
        let (again, _) = companions(&t, Companion::Theoremless, None, &Caps::default()).unwrap();
        assert_eq!(again.matrices().unwrap().len(), t.matrices().unwrap().len());
    }
}
