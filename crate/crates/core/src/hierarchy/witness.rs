use std::collections::HashSet;

use serde::Serialize;

use super::consequence::{Consequence, Tri};
use crate::algebra::enumerate::{count_terms, enumerate_terms};
use crate::algebra::{FiniteAlgebra, Signature, Term};
use crate::logic::{FilterLattice, LogicPresentation};
use crate::{Caps, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    Protoalgebraic,
    Equivalential,
    TruthEq,
    ParamTruthEq,
    OrderAlg,
    InjectiveTheorem,
}

/// Terms (and term pairs) certifying membership in a class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessSet {
    pub kind: WitnessKind,
    pub terms: Vec<Term>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub pairs: Vec<(Term, Term)>,
}

impl WitnessSet {
    pub fn new(kind: WitnessKind, terms: Vec<Term>) -> Self {
        WitnessSet {
            kind,
            terms,
            pairs: Vec::new(),
        }
    }
}

fn x() -> Term {
    Term::var("x")
}

fn y() -> Term {
    Term::var("y")
}

/// Checks `∅ ⊢ ∇(x, x)` and `x, ∇(x, y) ⊢ y`.
pub fn check_protoalgebraic_conditions(c: &Consequence<'_>, nabla: &[Term]) -> Result<(Tri, Tri)> {
    let mut first = Tri::Yes;
    for t in nabla {
        match c.theorem(&t.replace_var("y", &x()))? {
            Tri::Yes => {}
            Tri::No => {
                first = Tri::No;
                break;
            }
            Tri::Unknown => first = Tri::Unknown,
        }
    }
    if first == Tri::No {
        return Ok((first, Tri::Unknown));
    }
    let mut gamma = vec![x()];
    gamma.extend(nabla.iter().cloned());
    Ok((first, c.decide(&gamma, &y())?))
}

/// Searches singletons, then pairs, of terms in `x, y` up to `depth`.
///
/// A candidate is returned only when both defining conditions are
/// established, so a returned set always re-verifies.
pub fn find_protoalgebraic_witness(
    l: &LogicPresentation,
    inventory: &[FiniteAlgebra],
    depth: usize,
    max_set: usize,
    caps: &Caps,
) -> Result<Option<WitnessSet>> {
    let c = Consequence::new(l, inventory, caps)?;
    find_protoalgebraic_witness_with(&c, depth, max_set, caps)
}

/// Candidate terms over `vars` up to `depth`, refusing oversized spaces.
pub fn candidate_terms(sig: &Signature, vars: &[&str], depth: usize, caps: &Caps) -> Result<Vec<Term>> {
    let count = count_terms(sig, vars.len(), depth);
    Caps::check(
        "witness candidate terms",
        usize::try_from(count).unwrap_or(usize::MAX),
        caps.witness_max_candidates,
    )?;
    Ok(enumerate_terms(sig, vars, depth))
}

pub fn find_protoalgebraic_witness_with(
    c: &Consequence<'_>,
    depth: usize,
    max_set: usize,
    caps: &Caps,
) -> Result<Option<WitnessSet>> {
    if max_set > 2 {
        return Err(Error::BadParam("witness sets larger than 2 are not searched".into()));
    }
    let candidates = candidate_terms(&c.logic().signature, &["x", "y"], depth, caps)?;
    // Terms failing the first condition cannot appear in any witness.
    let mut usable = Vec::new();
    for t in &candidates {
        let (first, second) = check_protoalgebraic_conditions(c, std::slice::from_ref(t))?;
        if first == Tri::No {
            continue;
        }
        if max_set >= 1 && first == Tri::Yes && second == Tri::Yes {
            return Ok(Some(WitnessSet::new(WitnessKind::Protoalgebraic, vec![t.clone()])));
        }
        usable.push(t.clone());
    }
    if max_set >= 2 {
        let pairs = usable.len() * usable.len().saturating_sub(1) / 2;
        Caps::check("protoalgebraic witness pairs", pairs, caps.witness_max_pairs)?;
        for i in 0..usable.len() {
            for j in i + 1..usable.len() {
                let set = [usable[i].clone(), usable[j].clone()];
                if check_protoalgebraic_conditions(c, &set)? == (Tri::Yes, Tri::Yes) {
                    return Ok(Some(WitnessSet::new(WitnessKind::Protoalgebraic, set.to_vec())));
                }
            }
        }
    }
    Ok(None)
}

/// Names of the parameter variables used alongside `x`, `y`.
pub fn param_names(params: usize) -> Vec<String> {
    if params == 1 {
        vec!["z".to_string()]
    } else {
        (1..=params).map(|i| format!("z{i}")).collect()
    }
}

/// All `φ(ψ(x, z⃗), ψ(y, z⃗))` with `φ ∈ ∇` and `ψ` a term in `x, z⃗` of depth at most `depth`.
pub fn congruence_formulas_with_params(
    nabla: &WitnessSet,
    sig: &Signature,
    depth: usize,
    params: usize,
) -> Result<Vec<Term>> {
    if nabla.kind != WitnessKind::Protoalgebraic {
        return Err(Error::BadParam("congruence formulas need a protoalgebraic witness".into()));
    }
    let names = param_names(params);
    let mut vars = vec!["x"];
    vars.extend(names.iter().map(String::as_str));
    let psis = enumerate_terms(sig, &vars, depth);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for phi in &nabla.terms {
        for psi in &psis {
            let px = psi.clone();
            let py = psi.replace_var("x", &y());
            let mut sigma = crate::algebra::Substitution::new();
            sigma.insert("x".into(), px);
            sigma.insert("y".into(), py);
            let t = phi.substitute(&sigma);
            if seen.insert(t.clone()) {
                out.push(t);
            }
        }
    }
    Ok(out)
}

/// First theorem `φ(x)` (in depth-lex order) whose term function is injective
/// on every algebra carrying a reduced model in the inventory.
pub fn find_injective_theorem(
    l: &LogicPresentation,
    inventory: &[FiniteAlgebra],
    depth: usize,
    caps: &Caps,
) -> Result<Option<Term>> {
    let lattices = inventory
        .iter()
        .map(|a| FilterLattice::new(l, a, caps))
        .collect::<Result<Vec<_>>>()?;
    let c = Consequence::from_lattices(l, &lattices);
    let carriers: Vec<&FiniteAlgebra> = lattices
        .iter()
        .filter(|lat| !lat.reduced_filters().is_empty())
        .map(FilterLattice::algebra)
        .collect();
    for t in candidate_terms(&l.signature, &["x"], depth, caps)? {
        let mut injective = true;
        for a in &carriers {
            let f = a.term_function(&t, "x")?;
            let distinct: HashSet<usize> = f.iter().copied().collect();
            if distinct.len() != f.len() {
                injective = false;
                break;
            }
        }
        if injective && c.theorem(&t)? == Tri::Yes {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// Theoremhood in the implicational logic axiomatized by `∅ ▷ x → x` and modus ponens.
pub fn nabla_theorem_oracle(t: &Term) -> bool {
    match t {
        Term::App(f, args) => &**f == "→" && args.len() == 2 && args[0] == args[1],
        Term::Var(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_shapes() {
        let sig = Signature::from_pairs([("→", 2)]).unwrap();
        let p = |s: &str| Term::parse(s, &sig).unwrap();
        assert!(nabla_theorem_oracle(&p("(→ x x)")));
        assert!(!nabla_theorem_oracle(&p("(→ x y)")));
        assert!(nabla_theorem_oracle(&p("(→ (→ x y) (→ x y))")));
        assert!(!nabla_theorem_oracle(&p("x")));
    }

    #[test]
    fn congruence_formulas_count_and_shape() {
        let sig = Signature::from_pairs([("→", 2)]).unwrap();
        let nabla = WitnessSet::new(WitnessKind::Protoalgebraic, vec![Term::parse("(→ x y)", &sig).unwrap()]);
        let out = congruence_formulas_with_params(&nabla, &sig, 1, 1).unwrap();
        assert!(out.contains(&Term::parse("(→ x y)", &sig).unwrap()));
        assert!(out.contains(&Term::parse("(→ (→ x z) (→ y z))", &sig).unwrap()));
        assert_eq!(out.len(), enumerate_terms(&sig, &["x", "z"], 1).len());
    }
}
