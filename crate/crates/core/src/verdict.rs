use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::algebra::{FiniteAlgebra, Partition, Substitution, Term};
use crate::logic::FilterNotion;
use crate::{Matrix, Subset};

/// The bounds a verdict was obtained under.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub depth: Option<usize>,
    /// Fingerprint of the algebra inventory the check ranged over.
    pub inventory: String,
    pub filter_notion: FilterNotion,
    pub variable_budget: usize,
    pub notes: BTreeSet<String>,
}

impl Bounds {
    pub fn new(inventory: String, filter_notion: FilterNotion, variable_budget: usize) -> Self {
        Bounds {
            depth: None,
            inventory,
            filter_notion,
            variable_budget,
            notes: BTreeSet::new(),
        }
    }

    pub fn with_depth(mut self, depth: usize) -> Self {
        self.depth = Some(depth);
        self
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.insert(text.into());
    }

    fn merge(&self, other: &Bounds) -> Bounds {
        let inventory = if self.inventory == other.inventory {
            self.inventory.clone()
        } else {
            format!("{}+{}", self.inventory, other.inventory)
        };
        Bounds {
            depth: self.depth.max(other.depth),
            inventory,
            filter_notion: self.filter_notion.and(other.filter_notion),
            variable_budget: self.variable_budget.max(other.variable_budget),
            notes: self.notes.union(&other.notes).cloned().collect(),
        }
    }
}

/// A finite, re-checkable reason for a failed check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A single matrix violating the checked property.
    Matrix { matrix: Matrix, reason: String },
    /// Two filters on one algebra.
    FilterPair {
        algebra: FiniteAlgebra,
        f: Subset,
        g: Subset,
        omega_f: Partition,
        omega_g: Partition,
        reason: String,
    },
    /// A family `X` of filters and a filter `F` on one algebra.
    FilterFamily {
        algebra: FiniteAlgebra,
        family: Vec<Subset>,
        filter: Subset,
        reason: String,
    },
    /// Elements `a`, `b` of a matrix breaking an order property.
    OrderPair {
        matrix: Matrix,
        a: usize,
        b: usize,
        reason: String,
    },
    /// A substitution instance of a rule.
    Substitution {
        #[serde(serialize_with = "ser_subst")]
        sigma: Substitution,
        reason: String,
    },
}

fn ser_subst<S: serde::Serializer>(sigma: &Substitution, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(sigma.len()))?;
    for (k, v) in sigma {
        m.serialize_entry(&**k, &v.to_string())?;
    }
    m.end()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "witness")]
pub enum Status {
    Holds,
    Fails(Box<Witness>),
    UnknownWithinBounds,
}

/// Three-valued outcome of a bounded check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    #[serde(flatten)]
    pub status: Status,
    pub bounds: Bounds,
    /// Positive evidence such as a witness term found by a search.
    pub evidence: Vec<String>,
}

impl Verdict {
    pub fn holds(bounds: Bounds) -> Self {
        Verdict {
            status: Status::Holds,
            bounds,
            evidence: Vec::new(),
        }
    }

    pub fn fails(witness: Witness, bounds: Bounds) -> Self {
        Verdict {
            status: Status::Fails(Box::new(witness)),
            bounds,
            evidence: Vec::new(),
        }
    }

    pub fn unknown(bounds: Bounds) -> Self {
        Verdict {
            status: Status::UnknownWithinBounds,
            bounds,
            evidence: Vec::new(),
        }
    }

    pub fn with_evidence(mut self, e: impl Into<String>) -> Self {
        self.evidence.push(e.into());
        self
    }

    pub fn is_holds(&self) -> bool {
        matches!(self.status, Status::Holds)
    }

    pub fn is_fails(&self) -> bool {
        matches!(self.status, Status::Fails(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self.status, Status::UnknownWithinBounds)
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.status {
            Status::Fails(w) => Some(w),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self.status {
            Status::Holds => "Holds",
            Status::Fails(_) => "Fails",
            Status::UnknownWithinBounds => "UnknownWithinBounds",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Fails dominates, then UnknownWithinBounds; bounds are merged either way.
pub fn verdict_merge(v1: &Verdict, v2: &Verdict) -> Verdict {
    let bounds = v1.bounds.merge(&v2.bounds);
    let status = match (&v1.status, &v2.status) {
        (Status::Fails(w), _) | (_, Status::Fails(w)) => Status::Fails(w.clone()),
        (Status::UnknownWithinBounds, _) | (_, Status::UnknownWithinBounds) => Status::UnknownWithinBounds,
        _ => Status::Holds,
    };
    let mut evidence = v1.evidence.clone();
    evidence.extend(v2.evidence.iter().cloned());
    Verdict {
        status,
        bounds,
        evidence,
    }
}

/// Renders a term for evidence strings.
pub fn show(t: &Term) -> String {
    t.to_string()
}
