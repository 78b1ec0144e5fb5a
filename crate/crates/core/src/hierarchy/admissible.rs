use std::collections::BTreeSet;
use std::sync::Arc;

use super::consequence::{Consequence, Tri};
use super::witness::nabla_theorem_oracle;
use crate::algebra::enumerate::enumerate_terms;
use crate::algebra::{Substitution, Term};
use crate::logic::{FilterNotion, Rule};
use crate::verdict::{Bounds, Verdict, Witness};
use crate::Result;

/// How theoremhood is decided during an admissibility check.
pub enum TheoremDecider<'a> {
    /// Exact: theorems are the terms `ψ → ψ`.
    NablaSyntactic,
    /// Derivations and countermodels within bounds.
    Bounded(&'a Consequence<'a>),
}

impl TheoremDecider<'_> {
    pub fn theorem(&self, t: &Term) -> Result<Tri> {
        match self {
            TheoremDecider::NablaSyntactic => Ok(if nabla_theorem_oracle(t) { Tri::Yes } else { Tri::No }),
            TheoremDecider::Bounded(c) => c.theorem(t),
        }
    }

    /// Theoremhood of `p` under `sigma`; the syntactic decider works on the
    /// instance without building it.
    fn theorem_instance(&self, p: &Term, sigma: &Substitution) -> Result<Tri> {
        match self {
            TheoremDecider::NablaSyntactic => {
                let yes = match p {
                    Term::Var(v) => sigma.get(v).is_some_and(nabla_theorem_oracle),
                    Term::App(f, args) => &**f == "→" && args.len() == 2 && eq_under(&args[0], &args[1], sigma),
                };
                Ok(if yes { Tri::Yes } else { Tri::No })
            }
            TheoremDecider::Bounded(c) => c.theorem(&p.substitute(sigma)),
        }
    }

    /// Whether `phi` follows once `premises` are known theorems.
    fn follows(&self, premises: &[Term], phi: &Term) -> Result<Tri> {
        let t = self.theorem(phi)?;
        if t != Tri::Unknown {
            return Ok(t);
        }
        match self {
            TheoremDecider::Bounded(c) if c.decide(premises, phi)? == Tri::Yes => Ok(Tri::Yes),
            _ => Ok(Tri::Unknown),
        }
    }
}

/// `a` and `b` are equal after applying `sigma` to both.
fn eq_under(a: &Term, b: &Term, sigma: &Substitution) -> bool {
    fn resolve<'t>(t: &'t Term, sigma: &'t Substitution, bound: bool) -> (&'t Term, bool) {
        match t {
            Term::Var(v) if bound => sigma.get(v).map_or((t, false), |s| (s, false)),
            _ => (t, bound),
        }
    }
    fn go(a: &Term, sa: bool, b: &Term, sb: bool, sigma: &Substitution) -> bool {
        let (a, sa) = resolve(a, sigma, sa);
        let (b, sb) = resolve(b, sigma, sb);
        match (a, b) {
            (Term::Var(x), Term::Var(y)) => x == y,
            (Term::App(f, xs), Term::App(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys.iter()).all(|(x, y)| go(x, sa, y, sb, sigma))
            }
            _ => false,
        }
    }
    go(a, true, b, true, sigma)
}

/// Checks that every substitution instance of `r` with terms of depth at most
/// `subst_depth` (over the rule's variables) whose premises are theorems has
/// a theorem as conclusion.
pub fn check_admissibility_bounded(
    decider: &TheoremDecider<'_>,
    r: &Rule,
    sig: &crate::algebra::Signature,
    subst_depth: usize,
    mut bounds: Bounds,
) -> Result<Verdict> {
    if let TheoremDecider::Bounded(c) = decider {
        if c.decide(r.premises(), r.conclusion())? == Tri::Yes {
            bounds.note("the rule is derivable, hence admissible");
            return Ok(Verdict::holds(bounds).with_evidence(format!("derivable: {r}")));
        }
    }
    let vars = r.vars();
    let names: Vec<&str> = vars.iter().map(|v| &**v).collect();
    let pool = enumerate_terms(sig, &names, subst_depth);
    // Premises become checkable once all their variables are assigned.
    let ready: Vec<Vec<&Term>> = (0..vars.len())
        .map(|i| {
            let assigned: BTreeSet<&Arc<str>> = vars[..=i].iter().collect();
            let before: BTreeSet<&Arc<str>> = vars[..i].iter().collect();
            r.premises()
                .iter()
                .filter(|p| {
                    let pv = p.vars();
                    pv.iter().all(|v| assigned.contains(v)) && !pv.iter().all(|v| before.contains(v))
                })
                .collect()
        })
        .collect();
    let ground: Vec<&Term> = r.premises().iter().filter(|p| p.vars().is_empty()).collect();

    let mut state = Search {
        decider,
        rule: r,
        vars: &vars,
        pool: &pool,
        ready: &ready,
        unknown: false,
        failure: None,
        instances: 0,
    };
    for p in ground {
        if decider.theorem(p)? != Tri::Yes {
            return Ok(Verdict::holds(bounds.with_depth(subst_depth)));
        }
    }
    state.run(0, &mut Substitution::new())?;
    bounds = bounds.with_depth(subst_depth);
    bounds.note(format!("substitutions of depth at most {subst_depth}"));
    if let TheoremDecider::Bounded(c) = decider {
        bounds.filter_notion = bounds.filter_notion.and(c.notion());
        bounds.note("theoremhood decided by bounded derivation and inventory countermodels");
    }
    let instances = state.instances;
    Ok(match state.failure {
        Some(sigma) => Verdict::fails(
            Witness::Substitution {
                sigma,
                reason: "premises are theorems but the conclusion is not".into(),
            },
            bounds,
        ),
        None if state.unknown => Verdict::unknown(bounds),
        None => Verdict::holds(bounds).with_evidence(format!("{instances} instances with theorem premises")),
    })
}

struct Search<'s> {
    decider: &'s TheoremDecider<'s>,
    rule: &'s Rule,
    vars: &'s [Arc<str>],
    pool: &'s [Term],
    ready: &'s [Vec<&'s Term>],
    unknown: bool,
    failure: Option<Substitution>,
    instances: usize,
}

impl Search<'_> {
    fn run(&mut self, i: usize, sigma: &mut Substitution) -> Result<()> {
        if self.failure.is_some() {
            return Ok(());
        }
        if i == self.vars.len() {
            self.instances += 1;
            let verdict = match self.decider {
                TheoremDecider::NablaSyntactic => self.decider.theorem_instance(self.rule.conclusion(), sigma)?,
                TheoremDecider::Bounded(_) => {
                    let premises: Vec<Term> = self.rule.premises().iter().map(|p| p.substitute(sigma)).collect();
                    self.decider.follows(&premises, &self.rule.conclusion().substitute(sigma))?
                }
            };
            match verdict {
                Tri::Yes => {}
                Tri::No => self.failure = Some(sigma.clone()),
                Tri::Unknown => self.unknown = true,
            }
            return Ok(());
        }
        for t in self.pool {
            sigma.insert(self.vars[i].clone(), t.clone());
            let mut ok = true;
            for p in &self.ready[i] {
                match self.decider.theorem_instance(p, sigma)? {
                    Tri::Yes => {}
                    Tri::No => {
                        ok = false;
                        break;
                    }
                    Tri::Unknown => {
                        self.unknown = true;
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                self.run(i + 1, sigma)?;
            }
            if self.failure.is_some() {
                break;
            }
        }
        sigma.remove(&self.vars[i]);
        Ok(())
    }
}

/// Bounds for an admissibility check decided syntactically.
pub fn syntactic_bounds(budget: usize) -> Bounds {
    Bounds::new("none".into(), FilterNotion::Exact, budget)
}
