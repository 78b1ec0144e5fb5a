//! Named constructions with attached, machine-checkable expectations.

pub mod algebras;
pub mod companions;
mod entries;
mod verify;

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::FiniteAlgebra;
use crate::json::{algebra_to_value, logic_to_value, matrix_to_value};
use crate::logic::LogicPresentation;
use crate::{Error, Matrix, Result};

pub use companions::{companions, defining_matrices, product_of_logics, Companion};
pub use entries::{
    assertional_logic, ba_star_logic_presentation, build, build_default, classical_logic, delta_logic, delta_rules,
    nabla_logic, two_valued_pair_logic, ENTRY_NAMES,
};
pub use verify::{verify_entry, Outcome};

#[derive(Clone, Debug)]
pub enum Payload {
    Logic(LogicPresentation),
    Matrices(Vec<Matrix>),
    Algebras(Vec<FiniteAlgebra>),
}

/// A property an entry is expected to have, re-checked by [`verify_entry`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum Expectation {
    /// Blocks of the Leibniz congruence of the `matrix`-th payload matrix.
    Leibniz { matrix: usize, blocks: Vec<Vec<usize>> },
    /// Verdict label of a class check over the entry's inventory.
    Class { class: String, verdict: String },
    /// Verdict of the monotonicity probe, with the expected filter pair on failure.
    Probe {
        verdict: String,
        pair: Option<(Vec<usize>, Vec<usize>)>,
    },
    ProtoWitness { depth: usize, terms: Option<Vec<String>> },
    InjectiveTheorem { depth: usize, term: Option<String> },
    /// Bounded derivations agree with the `ψ → ψ` characterization of theorems.
    NablaOracle { depth: usize },
    /// Reduced filters of the named gallery logic on the `algebra`-th payload algebra.
    ReducedFilters {
        logic: String,
        algebra: usize,
        filters: Vec<Vec<usize>>,
    },
}

#[derive(Clone, Debug)]
pub struct GalleryEntry {
    pub name: String,
    /// Where the construction comes from, in words.
    pub provenance: String,
    pub payload: Payload,
    /// Algebras that inventory-relative checks range over.
    pub inventory: Vec<FiniteAlgebra>,
    pub expectations: Vec<Expectation>,
    pub notes: Vec<String>,
}

impl GalleryEntry {
    pub fn logic(&self) -> Option<&LogicPresentation> {
        match &self.payload {
            Payload::Logic(l) => Some(l),
            _ => None,
        }
    }

    pub fn logic_or_err(&self) -> Result<&LogicPresentation> {
        self.logic()
            .ok_or_else(|| Error::Unsupported(format!("gallery entry `{}` is not a logic", self.name)))
    }

    pub fn manifest(&self) -> Value {
        json!({
            "entry": self.name,
            "provenance": self.provenance,
            "notes": self.notes,
            "expectations": self.expectations,
        })
    }

    /// Payload files (relative path, JSON) followed by the expectations manifest.
    pub fn files(&self) -> Vec<(PathBuf, Value)> {
        let mut out = Vec::new();
        let inventory_dir = if self.name == "basic-assertional" { "pointed" } else { "inventory" };
        match &self.payload {
            Payload::Logic(l) => {
                let file = if self.name == "basic-assertional" {
                    "assertional.json".to_string()
                } else {
                    format!("{}.json", self.name)
                };
                out.push((PathBuf::from(file), logic_to_value(l)));
                if self.name == "two-valued-pair" {
                    for a in &self.inventory {
                        out.push((PathBuf::from(format!("{}.json", slug(a.name()))), algebra_to_value(a)));
                    }
                } else {
                    for a in &self.inventory {
                        out.push((
                            PathBuf::from(inventory_dir).join(format!("{}.json", slug(a.name()))),
                            algebra_to_value(a),
                        ));
                    }
                }
            }
            Payload::Matrices(ms) => {
                let labels = ["F", "G"];
                for (i, m) in ms.iter().enumerate() {
                    let label = labels.get(i).map_or_else(|| i.to_string(), |s| s.to_string());
                    out.push((PathBuf::from(format!("{}-{label}.json", self.name)), matrix_to_value(m)));
                }
                for a in &self.inventory {
                    out.push((PathBuf::from(format!("{}.json", slug(a.name()))), algebra_to_value(a)));
                }
            }
            Payload::Algebras(algs) => {
                for a in algs {
                    out.push((PathBuf::from(format!("{}.json", slug(a.name()))), algebra_to_value(a)));
                }
            }
        }
        out.push((PathBuf::from("expectations.json"), self.manifest()));
        out
    }
}

/// File-name form of an algebra name.
pub fn slug(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '-' })
        .collect()
}

pub type Params = BTreeMap<String, String>;
