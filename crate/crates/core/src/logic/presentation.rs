use std::collections::BTreeSet;
use std::sync::Arc;

use super::Rule;
use crate::algebra::finite::for_each_tuple;
use crate::algebra::{CompiledTerm, Signature, Term};
use crate::{Error, Matrix, Result};

/// Default number of variables a matrix-presented logic may use in one query.
pub const DEFAULT_VARIABLE_BUDGET: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LogicKind {
    Rules(Vec<Rule>),
    Matrices(Vec<Matrix>),
}

/// A logic given by finitely many rules or by finitely many defining matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicPresentation {
    pub name: String,
    pub signature: Signature,
    pub kind: LogicKind,
    pub variable_budget: usize,
}

impl LogicPresentation {
    pub fn from_rules(name: impl Into<String>, signature: Signature, rules: Vec<Rule>) -> Result<Self> {
        for r in &rules {
            r.check(&signature)?;
        }
        Ok(LogicPresentation {
            name: name.into(),
            signature,
            kind: LogicKind::Rules(rules),
            variable_budget: DEFAULT_VARIABLE_BUDGET,
        })
    }

    pub fn from_matrices(name: impl Into<String>, signature: Signature, matrices: Vec<Matrix>) -> Result<Self> {
        if matrices.is_empty() {
            return Err(Error::Unsupported("a matrix presentation needs at least one matrix".into()));
        }
        if let Some(m) = matrices.iter().find(|m| m.algebra().signature() != &signature) {
            return Err(Error::SignatureMismatch(format!(
                "matrix over `{}` has signature {}, logic has {}",
                m.algebra().name(),
                m.algebra().signature(),
                signature
            )));
        }
        Ok(LogicPresentation {
            name: name.into(),
            signature,
            kind: LogicKind::Matrices(matrices),
            variable_budget: DEFAULT_VARIABLE_BUDGET,
        })
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.variable_budget = budget;
        self
    }

    pub fn rules(&self) -> Option<&[Rule]> {
        match &self.kind {
            LogicKind::Rules(r) => Some(r),
            LogicKind::Matrices(_) => None,
        }
    }

    pub fn matrices(&self) -> Option<&[Matrix]> {
        match &self.kind {
            LogicKind::Matrices(m) => Some(m),
            LogicKind::Rules(_) => None,
        }
    }

    pub fn is_rules(&self) -> bool {
        matches!(self.kind, LogicKind::Rules(_))
    }

    /// Whether some rule has no premises. Only meaningful for rule presentations.
    pub fn has_axioms(&self) -> bool {
        self.rules().is_some_and(|rs| rs.iter().any(Rule::is_axiom))
    }
}

/// A matrix and valuation refuting `Γ ⊢ φ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Countermodel {
    pub matrix: usize,
    pub vars: Vec<Arc<str>>,
    pub values: Vec<usize>,
}

/// Consequence of a matrix-presented logic: `Γ ⊢ φ` iff every valuation into
/// every defining matrix that sends `Γ` into the filter sends `φ` there too.
pub fn entails(l: &LogicPresentation, gamma: &[Term], phi: &Term) -> Result<bool> {
    Ok(countermodel(l, gamma, phi)?.is_none())
}

/// The first defining matrix and valuation refuting `Γ ⊢ φ`, if any.
pub fn countermodel(l: &LogicPresentation, gamma: &[Term], phi: &Term) -> Result<Option<Countermodel>> {
    let matrices = l
        .matrices()
        .ok_or_else(|| Error::Unsupported("entailment is decided for matrix presentations only".into()))?;
    let mut vars: BTreeSet<Arc<str>> = phi.vars();
    for g in gamma {
        vars.extend(g.vars());
    }
    if vars.len() > l.variable_budget {
        return Err(Error::BudgetExceeded {
            needed: vars.len(),
            budget: l.variable_budget,
        });
    }
    let vars: Vec<Arc<str>> = vars.into_iter().collect();
    let gs: Vec<CompiledTerm> = gamma
        .iter()
        .map(|g| CompiledTerm::new(&l.signature, g, &vars))
        .collect::<Result<_>>()?;
    let p = CompiledTerm::new(&l.signature, phi, &vars)?;
    let mut stack = Vec::new();
    for (i, m) in matrices.iter().enumerate() {
        let mut found = None;
        for_each_tuple(m.size(), vars.len(), |env| {
            if found.is_none()
                && gs.iter().all(|g| m.filter().contains(g.eval_with_stack(m.algebra(), env, &mut stack)))
                && !m.filter().contains(p.eval_with_stack(m.algebra(), env, &mut stack))
            {
                found = Some(env.to_vec());
            }
        });
        if let Some(values) = found {
            return Ok(Some(Countermodel {
                matrix: i,
                vars,
                values,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FiniteAlgebra;
    use crate::Subset;

    fn b2() -> FiniteAlgebra {
        let sig = Signature::from_pairs([("and", 2), ("or", 2), ("not", 1)]).unwrap();
        FiniteAlgebra::from_fn("B2", sig, 2, |s, a| match s {
            "and" => a[0] & a[1],
            "or" => a[0] | a[1],
            _ => 1 - a[0],
        })
        .unwrap()
    }

    fn logic(filters: &[usize]) -> LogicPresentation {
        let alg = b2();
        let ms = filters
            .iter()
            .map(|&f| Matrix::new(alg.clone(), Subset::singleton(f)).unwrap())
            .collect();
        LogicPresentation::from_matrices("L", alg.signature().clone(), ms).unwrap()
    }

    #[test]
    fn classical_consequences() {
        let l = logic(&[1]);
        let sig = l.signature.clone();
        let x = Term::var("x");
        assert!(entails(&l, std::slice::from_ref(&x), &Term::parse("(or x y)", &sig).unwrap()).unwrap());
        assert!(entails(&l, std::slice::from_ref(&x), &x).unwrap());
        assert!(entails(&l, &[], &Term::parse("(or x (not x))", &sig).unwrap()).unwrap());
    }

    #[test]
    fn pair_logic_has_no_excluded_middle() {
        let l = logic(&[1, 0]);
        let lem = Term::parse("(or x (not x))", &l.signature).unwrap();
        let cm = countermodel(&l, &[], &lem).unwrap().unwrap();
        assert_eq!(cm.matrix, 1);
    }

    #[test]
    fn budget_is_enforced() {
        let l = logic(&[1]).with_budget(1);
        let t = Term::parse("(or x y)", &l.signature).unwrap();
        assert!(matches!(entails(&l, &[], &t), Err(Error::BudgetExceeded { needed: 2, budget: 1 })));
    }
}
