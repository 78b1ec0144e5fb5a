use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::algebra::finite::for_each_tuple;
use crate::algebra::{CompiledTerm, FiniteAlgebra, Signature, Substitution, Term};
use crate::{Error, Matrix, Result};

/// A finitary rule `Γ ▷ φ`. Premises are kept sorted and without repeats.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rule {
    premises: Vec<Term>,
    conclusion: Term,
}

impl Rule {
    pub fn new(premises: impl IntoIterator<Item = Term>, conclusion: Term) -> Self {
        let set: BTreeSet<Term> = premises.into_iter().collect();
        Rule {
            premises: set.into_iter().collect(),
            conclusion,
        }
    }

    /// A rule without premises.
    pub fn axiom(conclusion: Term) -> Self {
        Rule::new([], conclusion)
    }

    pub fn premises(&self) -> &[Term] {
        &self.premises
    }

    pub fn conclusion(&self) -> &Term {
        &self.conclusion
    }

    pub fn is_axiom(&self) -> bool {
        self.premises.is_empty()
    }

    /// Variables of premises and conclusion, sorted.
    pub fn vars(&self) -> Vec<Arc<str>> {
        let mut set = self.conclusion.vars();
        for p in &self.premises {
            set.extend(p.vars());
        }
        set.into_iter().collect()
    }

    pub fn substitute(&self, sigma: &Substitution) -> Rule {
        Rule::new(
            self.premises.iter().map(|p| p.substitute(sigma)),
            self.conclusion.substitute(sigma),
        )
    }

    pub fn check(&self, sig: &Signature) -> Result<()> {
        self.premises.iter().try_for_each(|p| p.check(sig))?;
        self.conclusion.check(sig)
    }

    /// Compiles the rule's terms against `sig` over its own variables.
    pub fn compile(&self, sig: &Signature) -> Result<CompiledRule> {
        let vars = self.vars();
        let premises = self
            .premises
            .iter()
            .map(|p| CompiledTerm::new(sig, p, &vars))
            .collect::<Result<_>>()?;
        let conclusion = CompiledTerm::new(sig, &self.conclusion, &vars)?;
        Ok(CompiledRule {
            vars,
            premises,
            conclusion,
        })
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.premises.iter().map(ToString::to_string).collect();
        write!(f, "{{{}}} ▷ {}", ps.join(", "), self.conclusion)
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A rule compiled for evaluation; valuations are tuples indexed like `vars`.
#[derive(Clone, Debug)]
pub struct CompiledRule {
    pub vars: Vec<Arc<str>>,
    pub premises: Vec<CompiledTerm>,
    pub conclusion: CompiledTerm,
}

impl CompiledRule {
    /// Calls `f(premise values, conclusion value)` for every valuation.
    pub fn for_each_instance(&self, alg: &FiniteAlgebra, mut f: impl FnMut(&[usize], usize)) {
        let mut stack = Vec::new();
        let mut vals = vec![0; self.premises.len()];
        for_each_tuple(alg.size(), self.vars.len(), |env| {
            for (v, p) in vals.iter_mut().zip(&self.premises) {
                *v = p.eval_with_stack(alg, env, &mut stack);
            }
            let c = self.conclusion.eval_with_stack(alg, env, &mut stack);
            f(&vals, c);
        });
    }
}

/// True when every valuation sending all premises into the filter sends the conclusion there too.
pub fn is_model(m: &Matrix, r: &Rule) -> Result<bool> {
    Ok(counter_valuation(m, r)?.is_none())
}

/// A valuation (over `r.vars()`) witnessing that `m` is not a model of `r`.
pub fn counter_valuation(m: &Matrix, r: &Rule) -> Result<Option<Vec<usize>>> {
    r.check(m.algebra().signature()).map_err(|e| match e {
        Error::UnknownSymbol(s) => Error::SignatureMismatch(format!("rule uses `{s}`, unknown to the matrix")),
        other => other,
    })?;
    let c = r.compile(m.algebra().signature())?;
    let mut stack = Vec::new();
    let mut found = None;
    let alg = m.algebra();
    for_each_tuple(alg.size(), c.vars.len(), |env| {
        if found.is_some() {
            return;
        }
        let holds = c.premises.iter().all(|p| m.filter().contains(p.eval_with_stack(alg, env, &mut stack)));
        if holds && !m.filter().contains(c.conclusion.eval_with_stack(alg, env, &mut stack)) {
            found = Some(env.to_vec());
        }
    });
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Subset;

    fn b2_imp() -> FiniteAlgebra {
        let sig = Signature::from_pairs([("→", 2)]).unwrap();
        FiniteAlgebra::from_fn("B2", sig, 2, |_, a| usize::from(a[0] == 0 || a[1] == 1)).unwrap()
    }

    #[test]
    fn modus_ponens_on_b2() {
        let alg = b2_imp();
        let sig = alg.signature().clone();
        let mp = Rule::new(
            [Term::var("x"), Term::parse("(→ x y)", &sig).unwrap()],
            Term::var("y"),
        );
        let m = Matrix::new(alg, Subset::singleton(1)).unwrap();
        assert!(is_model(&m, &mp).unwrap());
        let bare = Rule::axiom(Term::var("x"));
        assert!(!is_model(&m, &bare).unwrap());
        assert_eq!(counter_valuation(&m, &bare).unwrap(), Some(vec![0]));
        assert_eq!(mp.to_string(), "{x, (→ x y)} ▷ y");
    }

    #[test]
    fn pointed_set_models_axiom() {
        let sig = Signature::from_pairs([("⊤", 1)]).unwrap();
        let alg = FiniteAlgebra::from_fn("P2", sig.clone(), 2, |_, _| 1).unwrap();
        let r = Rule::axiom(Term::parse("(⊤ x)", &sig).unwrap());
        assert!(is_model(&Matrix::new(alg.clone(), Subset::singleton(1)).unwrap(), &r).unwrap());
        assert!(!is_model(&Matrix::new(alg, Subset::singleton(0)).unwrap(), &r).unwrap());
    }

    #[test]
    fn foreign_symbol_is_a_signature_mismatch() {
        let alg = b2_imp();
        let r = Rule::axiom(Term::app("f", vec![Term::var("x")]));
        let m = Matrix::new(alg, Subset::singleton(1)).unwrap();
        assert!(matches!(is_model(&m, &r), Err(Error::SignatureMismatch(_))));
    }
}
