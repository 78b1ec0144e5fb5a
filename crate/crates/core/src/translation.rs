use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{FiniteAlgebra, Signature, Term};
use crate::json::inventory_fingerprint;
use crate::logic::{FilterLattice, FilterNotion, LogicPresentation, Rule};
use crate::logic::rule::counter_valuation;
use crate::verdict::{Bounds, Verdict, Witness};
use crate::{Caps, Error, Matrix, Result};

/// An arity-preserving map from source symbols to target terms; the image
/// of an `n`-ary symbol uses only the variables `x1..xn`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Translation {
    source: Signature,
    target: Signature,
    map: BTreeMap<Arc<str>, Term>,
}

/// Name of the `i`-th (1-based) argument variable of a translation image.
pub fn arg_var(i: usize) -> Arc<str> {
    Arc::from(format!("x{i}"))
}

impl Translation {
    pub fn new(source: Signature, target: Signature, images: BTreeMap<String, Term>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (sym, arity) in source.symbols() {
            let image = images
                .get(&**sym)
                .ok_or_else(|| Error::SignatureMismatch(format!("translation has no image for `{sym}`")))?;
            image.check(&target)?;
            let allowed: Vec<Arc<str>> = (1..=arity).map(arg_var).collect();
            if let Some(v) = image.vars().into_iter().find(|v| !allowed.contains(v)) {
                return Err(Error::SignatureMismatch(format!(
                    "image of `{sym}` uses `{v}`, outside x1..x{arity}"
                )));
            }
            map.insert(sym.clone(), image.clone());
        }
        if let Some(extra) = images.keys().find(|k| !source.contains(k)) {
            return Err(Error::UnknownSymbol(extra.clone()));
        }
        Ok(Translation { source, target, map })
    }

    pub fn identity(sig: &Signature) -> Self {
        let map = sig
            .symbols()
            .map(|(s, a)| (s.clone(), Term::app_shared(s.clone(), (1..=a).map(|i| Term::Var(arg_var(i))).collect())))
            .collect();
        Translation {
            source: sig.clone(),
            target: sig.clone(),
            map,
        }
    }

    pub fn source(&self) -> &Signature {
        &self.source
    }

    pub fn target(&self) -> &Signature {
        &self.target
    }

    pub fn map(&self) -> &BTreeMap<Arc<str>, Term> {
        &self.map
    }

    /// Replaces every source symbol by its image, homomorphically.
    pub fn translate_term(&self, t: &Term) -> Result<Term> {
        match t {
            Term::Var(_) => Ok(t.clone()),
            Term::App(f, args) => {
                let image = self.map.get(f).ok_or_else(|| Error::UnknownSymbol(f.to_string()))?;
                if args.len() != self.source.arity(f).unwrap_or(0) {
                    return Err(Error::ArityMismatch {
                        symbol: f.to_string(),
                        expected: self.source.arity(f).unwrap_or(0),
                        found: args.len(),
                    });
                }
                let mut sigma = BTreeMap::new();
                for (i, a) in args.iter().enumerate() {
                    sigma.insert(arg_var(i + 1), self.translate_term(a)?);
                }
                Ok(image.substitute(&sigma))
            }
        }
    }

    pub fn translate_rule(&self, r: &Rule) -> Result<Rule> {
        let premises = r.premises().iter().map(|p| self.translate_term(p)).collect::<Result<Vec<_>>>()?;
        Ok(Rule::new(premises, self.translate_term(r.conclusion())?))
    }

    /// The source-signature algebra on the same carrier, each symbol
    /// interpreted by its image term.
    pub fn reduct(&self, alg: &FiniteAlgebra) -> Result<FiniteAlgebra> {
        if alg.signature() != &self.target {
            return Err(Error::SignatureMismatch(format!(
                "algebra `{}` is not over the translation target {}",
                alg.name(),
                self.target
            )));
        }
        let mut compiled = BTreeMap::new();
        for (sym, arity) in self.source.symbols() {
            let vars: Vec<Arc<str>> = (1..=arity).map(arg_var).collect();
            compiled.insert(sym.to_string(), alg.compile(&self.map[sym], &vars)?);
        }
        FiniteAlgebra::from_fn(format!("{}^τ", alg.name()), self.source.clone(), alg.size(), |sym, args| {
            compiled[sym].eval(alg, args)
        })
    }
}

/// `tau_reduct` under its usual name.
pub fn tau_reduct(tau: &Translation, alg: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    tau.reduct(alg)
}

/// Checks, on every inventory algebra, that each reduced target model
/// reducts to a reduced source model.
pub fn check_interpretation_bounded(
    tau: &Translation,
    source: &LogicPresentation,
    target: &LogicPresentation,
    inventory: &[FiniteAlgebra],
    caps: &Caps,
) -> Result<Verdict> {
    if tau.source != source.signature || tau.target != target.signature {
        return Err(Error::SignatureMismatch(
            "translation signatures do not match the two logics".into(),
        ));
    }
    let mut bounds = Bounds::new(
        inventory_fingerprint(inventory),
        FilterNotion::Exact,
        source.variable_budget.max(target.variable_budget),
    );
    bounds.note("reduced models are Suszko-reduced models over the inventory");
    bounds.note("only the direct condition on reduced models is checked");
    let translated: Vec<Rule> = match source.rules() {
        Some(rs) => rs.iter().map(|r| tau.translate_rule(r)).collect::<Result<_>>()?,
        None => Vec::new(),
    };
    for alg in inventory {
        let lattice = FilterLattice::new(target, alg, caps)?;
        bounds.filter_notion = bounds.filter_notion.and(lattice.notion());
        let reduct = tau.reduct(alg)?;
        let source_lattice = FilterLattice::new(source, &reduct, caps)?;
        bounds.filter_notion = bounds.filter_notion.and(source_lattice.notion());
        for f in lattice.reduced_filters() {
            let target_model = Matrix::new(alg.clone(), f.clone())?;
            for r in &translated {
                if let Some(vals) = counter_valuation(&target_model, r)? {
                    let witness = Witness::Matrix {
                        matrix: Matrix::new(reduct.clone(), f.clone())?,
                        reason: format!("translated rule {r} fails under valuation {vals:?}"),
                    };
                    return Ok(Verdict::fails(witness, bounds));
                }
            }
            let model = Matrix::new(reduct.clone(), f.clone())?;
            if source_lattice.position(&f).is_none() {
                let witness = Witness::Matrix {
                    matrix: model,
                    reason: "filter of a reduced target model is not a source filter on the reduct".into(),
                };
                return Ok(Verdict::fails(witness, bounds));
            }
            if !source_lattice.suszko(&f)?.is_identity() {
                let witness = Witness::Matrix {
                    matrix: model,
                    reason: "reduct of a reduced target model is not Suszko-reduced for the source".into(),
                };
                return Ok(Verdict::fails(witness, bounds));
            }
        }
    }
    Ok(Verdict::holds(bounds))
}

/// Re-verifies an interpretation failure: the witness matrix (a reduct of a
/// reduced target model) is not a Suszko-reduced model of the source.
pub fn recheck_interpretation_witness(source: &LogicPresentation, w: &Witness, caps: &Caps) -> Result<bool> {
    let Witness::Matrix { matrix, .. } = w else {
        return Ok(false);
    };
    let lattice = FilterLattice::new(source, matrix.algebra(), caps)?;
    Ok(!lattice.reduced_filters().contains(matrix.filter()))
}
