//! Bounded forward chaining for rule-presented logics.
//!
//! Derives every formula reachable from a set of facts by rule instances
//! whose terms stay within a depth bound. A derivation found this way is a
//! genuine proof; failure to derive says nothing beyond the bound.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use crate::algebra::enumerate::enumerate_terms;
use crate::algebra::{Signature, Substitution, Term};
use crate::logic::Rule;

/// Result of a chaining run.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub derived: HashSet<Term>,
    /// False when the term cap stopped the run early.
    pub complete: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct ChainLimits {
    /// Largest term depth kept.
    pub depth: usize,
    /// Largest number of derived terms.
    pub max_terms: usize,
}

impl Default for ChainLimits {
    fn default() -> Self {
        ChainLimits {
            depth: 3,
            max_terms: 200_000,
        }
    }
}

/// Saturates `facts` under `rules` with terms over `vars` of depth at most `limits.depth`.
pub fn chain(sig: &Signature, rules: &[Rule], facts: &[Term], vars: &[&str], limits: ChainLimits) -> Derivation {
    let mut derived: HashSet<Term> = facts.iter().filter(|t| t.depth() <= limits.depth).cloned().collect();
    let mut order: Vec<Term> = derived.iter().cloned().collect();
    order.sort();
    // Variables of a rule not bound by its premises range over the pool.
    let free_vars = |r: &Rule| -> Vec<(Arc<str>, usize)> {
        let mut bound = BTreeSet::new();
        for p in r.premises() {
            bound.extend(p.vars());
        }
        r.conclusion()
            .vars()
            .into_iter()
            .filter(|v| !bound.contains(v))
            .map(|v| {
                let occ = r.conclusion().var_occurrence_depth(&v).unwrap_or(0);
                (v, occ)
            })
            .collect()
    };

    // Free conclusion variables range over terms of depth at most
    // `limits.depth - occurrence depth`, so the pool stops there.
    let pool_depth = rules
        .iter()
        .flat_map(|r| free_vars(r).into_iter().map(|(_, occ)| occ))
        .filter(|&occ| occ <= limits.depth)
        .map(|occ| limits.depth - occ)
        .max();
    let pool = pool_depth.map_or_else(Vec::new, |d| enumerate_terms(sig, vars, d));
    let by_depth: Vec<Vec<&Term>> = (0..=limits.depth)
        .map(|d| pool.iter().filter(|t| t.depth() <= d).collect())
        .collect();

    let mut complete = true;

    loop {
        let before = derived.len();
        for r in rules {
            let free = free_vars(r);
            if free.iter().any(|(_, occ)| *occ > limits.depth) {
                continue;
            }
            let mut matches: Vec<Substitution> = Vec::new();
            let mut prem: Vec<&Term> = r.premises().iter().collect();
            prem.sort_by_key(|p| std::cmp::Reverse(p.size()));
            match_premises(&prem, &order, &derived, &mut Substitution::new(), &mut matches);
            for sigma in matches {
                let mut out = Vec::new();
                extend_free(&free, 0, &by_depth, limits.depth, &mut sigma.clone(), &mut |s| {
                    out.push(r.conclusion().substitute(s));
                });
                for t in out {
                    if t.depth() > limits.depth || derived.contains(&t) {
                        continue;
                    }
                    if derived.len() >= limits.max_terms {
                        complete = false;
                        break;
                    }
                    derived.insert(t.clone());
                    order.push(t);
                }
            }
        }
        if derived.len() == before || !complete {
            break;
        }
    }
    Derivation { derived, complete }
}

fn extend_free(
    free: &[(Arc<str>, usize)],
    i: usize,
    by_depth: &[Vec<&Term>],
    depth: usize,
    sigma: &mut Substitution,
    f: &mut dyn FnMut(&Substitution),
) {
    if i == free.len() {
        f(sigma);
        return;
    }
    let (v, occ) = &free[i];
    for t in &by_depth[depth - occ] {
        sigma.insert(v.clone(), (*t).clone());
        extend_free(free, i + 1, by_depth, depth, sigma, f);
    }
    sigma.remove(v);
}

/// All substitutions (on premise variables) sending every premise into `facts`.
fn match_premises(
    prem: &[&Term],
    order: &[Term],
    facts: &HashSet<Term>,
    sigma: &mut Substitution,
    out: &mut Vec<Substitution>,
) {
    let Some((first, rest)) = prem.split_first() else {
        out.push(sigma.clone());
        return;
    };
    // Fully bound premises are a membership test.
    if first.vars().iter().all(|v| sigma.contains_key(v)) {
        if facts.contains(&first.substitute(sigma)) {
            match_premises(rest, order, facts, sigma, out);
        }
        return;
    }
    for t in order {
        let mut s = sigma.clone();
        if first.match_into(t, &mut s) {
            match_premises(rest, order, facts, &mut s, out);
        }
    }
}

/// The theorems of depth at most `depth` over `vars`, as far as chaining finds them.
pub fn bounded_theorems(sig: &Signature, rules: &[Rule], vars: &[&str], depth: usize) -> Derivation {
    chain(
        sig,
        rules,
        &[],
        vars,
        ChainLimits {
            depth,
            ..ChainLimits::default()
        },
    )
}

/// Whether `phi` is derivable from `gamma` with all terms of depth at most
/// `max(depth of gamma ∪ {phi}) + slack`.
pub fn derivable(sig: &Signature, rules: &[Rule], gamma: &[Term], phi: &Term, slack: usize) -> bool {
    let mut vars: BTreeSet<Arc<str>> = phi.vars();
    for g in gamma {
        vars.extend(g.vars());
    }
    let names: Vec<&str> = vars.iter().map(|v| &**v).collect();
    let depth = gamma.iter().chain(std::iter::once(phi)).map(Term::depth).max().unwrap_or(0) + slack;
    let d = chain(
        sig,
        rules,
        gamma,
        &names,
        ChainLimits {
            depth,
            ..ChainLimits::default()
        },
    );
    d.derived.contains(phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nabla() -> (Signature, Vec<Rule>) {
        let sig = Signature::from_pairs([("→", 2)]).unwrap();
        let rules = vec![
            Rule::axiom(Term::parse("(→ x x)", &sig).unwrap()),
            Rule::new([Term::var("x"), Term::parse("(→ x y)", &sig).unwrap()], Term::var("y")),
        ];
        (sig, rules)
    }

    #[test]
    fn axioms_instantiate_within_depth() {
        let (sig, rules) = nabla();
        let d = bounded_theorems(&sig, &rules, &["x", "y"], 2);
        // (→ ψ ψ) for the 6 terms ψ of depth ≤ 1
        assert_eq!(d.derived.len(), 6);
        assert!(d.complete);
    }

    #[test]
    fn modus_ponens_from_facts() {
        let (sig, rules) = nabla();
        let imp = Term::parse("(→ x y)", &sig).unwrap();
        assert!(derivable(&sig, &rules, &[Term::var("x"), imp.clone()], &Term::var("y"), 0));
        assert!(!derivable(&sig, &rules, &[imp], &Term::var("y"), 1));
        assert!(!derivable(&sig, &rules, &[], &Term::var("x"), 1));
    }
}
