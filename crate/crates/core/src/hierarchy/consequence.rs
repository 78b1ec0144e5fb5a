use std::fmt;

use serde::Serialize;

use crate::algebra::{FiniteAlgebra, Term};
use crate::chaining::derivable;
use crate::logic::{countermodel, entails, FilterLattice, FilterNotion, LogicKind, LogicPresentation};
use crate::{Caps, Matrix, Result};

/// Answer of a consequence query that may be undecided within bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tri::Yes => "yes",
            Tri::No => "no",
            Tri::Unknown => "unknown",
        })
    }
}

/// Decides `Γ ⊢ φ` for a presentation.
///
/// Matrix presentations are decided exactly. For rule presentations a
/// bounded derivation gives `Yes`, a countermodel among the filters of the
/// inventory algebras gives `No`, and anything else is `Unknown`.
pub struct Consequence<'a> {
    logic: &'a LogicPresentation,
    models: Option<LogicPresentation>,
    slack: usize,
    notion: FilterNotion,
}

impl<'a> Consequence<'a> {
    pub fn new(l: &'a LogicPresentation, inventory: &[FiniteAlgebra], caps: &Caps) -> Result<Self> {
        if !l.is_rules() {
            return Ok(Self::from_lattices(l, &[]));
        }
        let lattices = inventory
            .iter()
            .map(|a| FilterLattice::new(l, a, caps))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_lattices(l, &lattices))
    }

    pub fn from_lattices(l: &'a LogicPresentation, lattices: &[FilterLattice]) -> Self {
        let mut notion = FilterNotion::Exact;
        let mut matrices = Vec::new();
        if l.is_rules() {
            for lat in lattices {
                notion = notion.and(lat.notion());
                for f in lat.filters() {
                    matrices.push(Matrix::new(lat.algebra().clone(), f.clone()).expect("filter in range"));
                }
            }
        }
        let models = if matrices.is_empty() {
            None
        } else {
            LogicPresentation::from_matrices(format!("{} models", l.name), l.signature.clone(), matrices)
                .ok()
                .map(|m| m.with_budget(l.variable_budget))
        };
        Consequence {
            logic: l,
            models,
            slack: 1,
            notion,
        }
    }

    /// Extra term depth allowed to derivations beyond the query's own depth.
    pub fn with_slack(mut self, slack: usize) -> Self {
        self.slack = slack;
        self
    }

    pub fn logic(&self) -> &LogicPresentation {
        self.logic
    }

    /// True when every answer is exact.
    pub fn is_exact(&self) -> bool {
        !self.logic.is_rules()
    }

    pub fn notion(&self) -> FilterNotion {
        self.notion
    }

    pub fn decide(&self, gamma: &[Term], phi: &Term) -> Result<Tri> {
        match &self.logic.kind {
            LogicKind::Matrices(_) => Ok(if entails(self.logic, gamma, phi)? { Tri::Yes } else { Tri::No }),
            LogicKind::Rules(rules) => {
                if gamma.contains(phi) || derivable(&self.logic.signature, rules, gamma, phi, self.slack) {
                    return Ok(Tri::Yes);
                }
                if let Some(models) = &self.models {
                    if countermodel(models, gamma, phi)?.is_some() && self.notion == FilterNotion::Exact {
                        return Ok(Tri::No);
                    }
                }
                Ok(Tri::Unknown)
            }
        }
    }

    pub fn theorem(&self, phi: &Term) -> Result<Tri> {
        self.decide(&[], phi)
    }
}
