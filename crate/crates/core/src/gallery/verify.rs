use serde::Serialize;

use super::entries::build_default;
use super::{Expectation, GalleryEntry, Payload};
use crate::algebra::enumerate::enumerate_terms;
use crate::chaining::bounded_theorems;
use crate::hierarchy::classes::{check_class_on, monotonicity_probe_on, CheckOptions, InventoryModels};
use crate::hierarchy::witness::{find_injective_theorem, find_protoalgebraic_witness_with, nabla_theorem_oracle};
use crate::logic::FilterLattice;
use crate::matrix::leibniz_congruence;
use crate::verdict::{show, Witness};
use crate::{Caps, Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub expectation: Expectation,
    pub passed: bool,
    pub observed: String,
}

fn terms_label(ts: &Option<Vec<String>>) -> String {
    match ts {
        Some(ts) => format!("{{{}}}", ts.join(", ")),
        None => "absent".into(),
    }
}

/// Re-runs every expectation attached to `entry`.
pub fn verify_entry(entry: &GalleryEntry, caps: &Caps) -> Result<Vec<Outcome>> {
    let mut out = Vec::new();
    let mut models: Option<InventoryModels> = None;
    for e in &entry.expectations {
        let observed = match e {
            Expectation::Leibniz { matrix, .. } => {
                let Payload::Matrices(ms) = &entry.payload else {
                    return Err(Error::Unsupported("Leibniz expectation without matrices".into()));
                };
                let m = ms
                    .get(*matrix)
                    .ok_or_else(|| Error::BadParam(format!("no matrix {matrix}")))?;
                format!("{:?}", leibniz_congruence(m).blocks())
            }
            Expectation::ReducedFilters { logic, algebra, .. } => {
                let other = build_default(logic, caps)?;
                let l = other.logic_or_err()?;
                let a = entry
                    .inventory
                    .get(*algebra)
                    .ok_or_else(|| Error::BadParam(format!("no algebra {algebra}")))?;
                let red: Vec<Vec<usize>> = FilterLattice::new(l, a, caps)?
                    .reduced_filters()
                    .iter()
                    .map(|f| f.to_vec())
                    .collect();
                format!("{red:?}")
            }
            _ => {
                let l = entry.logic_or_err()?;
                if models.is_none() {
                    models = Some(InventoryModels::new(l, &entry.inventory, caps)?);
                }
                let inv = models.as_ref().expect("models built");
                match e {
                    Expectation::Class { class, .. } => {
                        let opts = CheckOptions::new(*caps);
                        check_class_on(class.parse()?, l, inv, &opts)?.label().to_string()
                    }
                    Expectation::Probe { pair, .. } => {
                        let v = monotonicity_probe_on(inv, inv.bounds(l));
                        match (v.witness(), pair) {
                            (Some(Witness::FilterPair { f, g, .. }), Some(_)) => {
                                format!("{} {:?} {:?}", v.label(), f.to_vec(), g.to_vec())
                            }
                            _ => v.label().to_string(),
                        }
                    }
                    Expectation::ProtoWitness { depth, .. } => {
                        let c = inv.consequence(l);
                        let w = find_protoalgebraic_witness_with(&c, *depth, 2, caps)?;
                        terms_label(&w.map(|w| w.terms.iter().map(show).collect()))
                    }
                    Expectation::InjectiveTheorem { depth, .. } => {
                        match find_injective_theorem(l, &entry.inventory, *depth, caps)? {
                            Some(t) => show(&t),
                            None => "absent".into(),
                        }
                    }
                    Expectation::NablaOracle { depth } => {
                        let derived = bounded_theorems(&l.signature, l.rules().unwrap_or(&[]), &["x", "y"], *depth);
                        let mismatches = enumerate_terms(&l.signature, &["x", "y"], *depth)
                            .iter()
                            .filter(|t| derived.derived.contains(*t) != nabla_theorem_oracle(t))
                            .count();
                        format!("{mismatches} mismatches")
                    }
                    Expectation::Leibniz { .. } | Expectation::ReducedFilters { .. } => unreachable!(),
                }
            }
        };
        let expected = expected_label(e);
        out.push(Outcome {
            expectation: e.clone(),
            passed: observed == expected,
            observed,
        });
    }
    Ok(out)
}

fn expected_label(e: &Expectation) -> String {
    match e {
        Expectation::Leibniz { blocks, .. } => format!("{blocks:?}"),
        Expectation::ReducedFilters { filters, .. } => format!("{filters:?}"),
        Expectation::Class { verdict, .. } => verdict.clone(),
        Expectation::Probe { verdict, pair } => match pair {
            Some((f, g)) => format!("{verdict} {f:?} {g:?}"),
            None => verdict.clone(),
        },
        Expectation::ProtoWitness { terms, .. } => terms_label(terms),
        Expectation::InjectiveTheorem { term, .. } => term.clone().unwrap_or_else(|| "absent".into()),
        Expectation::NablaOracle { .. } => "0 mismatches".into(),
    }
}
