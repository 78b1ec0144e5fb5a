use std::fmt;
use std::str::FromStr;

use super::consequence::{Consequence, Tri};
use super::witness::{candidate_terms, find_protoalgebraic_witness_with};
use crate::algebra::{FiniteAlgebra, Partition};
use crate::json::inventory_fingerprint;
use crate::logic::{FilterLattice, FilterNotion, LogicPresentation};
use crate::matrix::submatrices;
use crate::verdict::{show, verdict_merge, Bounds, Verdict, Witness};
use crate::{Caps, Error, Matrix, Result, Subset};

/// Note stamped on every inventory-relative verdict.
pub const REDUCED_MODELS_NOTE: &str = "reduced models are the Suszko-reduced models over the inventory";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Class {
    Assertional,
    TruthEquational,
    TruthMinimal,
    ParamTruthEquational,
    Equivalential,
    HasTheorems,
    Protoalgebraic,
    WeaklyAlgebraizable,
    Algebraizable,
}

impl Class {
    pub const ALL: [Class; 9] = [
        Class::Assertional,
        Class::TruthEquational,
        Class::TruthMinimal,
        Class::ParamTruthEquational,
        Class::Equivalential,
        Class::HasTheorems,
        Class::Protoalgebraic,
        Class::WeaklyAlgebraizable,
        Class::Algebraizable,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Class::Assertional => "assertional",
            Class::TruthEquational => "truth_equational",
            Class::TruthMinimal => "truth_minimal",
            Class::ParamTruthEquational => "param_truth_equational",
            Class::Equivalential => "equivalential",
            Class::HasTheorems => "has_theorems",
            Class::Protoalgebraic => "protoalgebraic",
            Class::WeaklyAlgebraizable => "weakly_algebraizable",
            Class::Algebraizable => "algebraizable",
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Class {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Class::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::UnknownClass(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug)]
pub struct CheckOptions {
    /// Term depth for witness and theorem searches.
    pub depth: usize,
    /// Largest witness set tried by the protoalgebraic search.
    pub max_set: usize,
    pub caps: Caps,
}

impl CheckOptions {
    pub fn new(caps: Caps) -> Self {
        CheckOptions {
            depth: caps.depth_default,
            max_set: 2,
            caps,
        }
    }
}

/// Filter lattices of a logic on every inventory algebra.
pub struct InventoryModels {
    pub lattices: Vec<FilterLattice>,
    pub fingerprint: String,
    pub notion: FilterNotion,
}

impl InventoryModels {
    pub fn new(l: &LogicPresentation, inventory: &[FiniteAlgebra], caps: &Caps) -> Result<Self> {
        let lattices = inventory
            .iter()
            .map(|a| FilterLattice::new(l, a, caps))
            .collect::<Result<Vec<_>>>()?;
        let notion = lattices.iter().fold(FilterNotion::Exact, |n, lat| n.and(lat.notion()));
        Ok(InventoryModels {
            lattices,
            fingerprint: inventory_fingerprint(inventory),
            notion,
        })
    }

    pub fn bounds(&self, l: &LogicPresentation) -> Bounds {
        let mut b = Bounds::new(self.fingerprint.clone(), self.notion, l.variable_budget);
        b.note(REDUCED_MODELS_NOTE);
        b
    }

    pub fn consequence<'a>(&self, l: &'a LogicPresentation) -> Consequence<'a> {
        Consequence::from_lattices(l, &self.lattices)
    }

    /// Every reduced model, grouped by algebra in inventory order.
    pub fn reduced(&self) -> impl Iterator<Item = (&FilterLattice, Vec<Subset>)> {
        self.lattices.iter().map(|lat| (lat, lat.reduced_filters()))
    }
}

fn matrix(alg: &FiniteAlgebra, f: &Subset) -> Matrix {
    Matrix::new(alg.clone(), f.clone()).expect("filter in range")
}

fn omega(lat: &FilterLattice, f: &Subset) -> Partition {
    lat.omega(f).cloned().expect("filter of the lattice")
}

fn filter_pair(lat: &FilterLattice, f: &Subset, g: &Subset, reason: &str) -> Witness {
    Witness::FilterPair {
        algebra: lat.algebra().clone(),
        f: f.clone(),
        g: g.clone(),
        omega_f: omega(lat, f),
        omega_g: omega(lat, g),
        reason: reason.into(),
    }
}

pub fn check_class(
    class: &str,
    l: &LogicPresentation,
    inventory: &[FiniteAlgebra],
    opts: &CheckOptions,
) -> Result<Verdict> {
    let class: Class = class.parse()?;
    let models = InventoryModels::new(l, inventory, &opts.caps)?;
    check_class_on(class, l, &models, opts)
}

pub fn check_class_on(class: Class, l: &LogicPresentation, models: &InventoryModels, opts: &CheckOptions) -> Result<Verdict> {
    let bounds = models.bounds(l).with_depth(opts.depth);
    match class {
        Class::Assertional => assertional(l, models, opts, bounds),
        Class::TruthEquational => Ok(truth_equational(models, bounds)),
        Class::TruthMinimal => Ok(truth_minimal(models, bounds)),
        Class::ParamTruthEquational => Ok(param_truth_equational(models, bounds)),
        Class::Equivalential => equivalential(l, models, opts, bounds),
        Class::HasTheorems => has_theorems(l, models, opts, bounds),
        Class::Protoalgebraic => protoalgebraic(l, models, opts, bounds),
        Class::WeaklyAlgebraizable => Ok(verdict_merge(
            &protoalgebraic(l, models, opts, bounds.clone())?,
            &truth_equational(models, bounds),
        )),
        Class::Algebraizable => Ok(verdict_merge(
            &equivalential(l, models, opts, bounds.clone())?,
            &truth_equational(models, bounds),
        )),
    }
}

/// Searches theorems in `x` up to `depth`.
fn theorem_search(c: &Consequence<'_>, l: &LogicPresentation, depth: usize, caps: &Caps) -> Result<(Tri, Option<String>)> {
    let mut all_no = true;
    for t in candidate_terms(&l.signature, &["x"], depth, caps)? {
        match c.theorem(&t)? {
            Tri::Yes => return Ok((Tri::Yes, Some(show(&t)))),
            Tri::Unknown => all_no = false,
            Tri::No => {}
        }
    }
    Ok((if all_no { Tri::No } else { Tri::Unknown }, None))
}

/// An inventory algebra on which the empty set is a filter.
fn empty_filter_model(models: &InventoryModels) -> Option<Matrix> {
    models
        .lattices
        .iter()
        .find(|lat| lat.position(&Subset::empty()).is_some())
        .map(|lat| matrix(lat.algebra(), &Subset::empty()))
}

fn assertional(l: &LogicPresentation, models: &InventoryModels, opts: &CheckOptions, bounds: Bounds) -> Result<Verdict> {
    for (lat, reduced) in models.reduced() {
        if let Some(f) = reduced.iter().find(|f| f.len() != 1) {
            return Ok(Verdict::fails(
                Witness::Matrix {
                    matrix: matrix(lat.algebra(), f),
                    reason: "reduced model whose filter is not a singleton".into(),
                },
                bounds,
            ));
        }
    }
    theorem_verdict(l, models, opts, bounds)
}

fn theorem_verdict(l: &LogicPresentation, models: &InventoryModels, opts: &CheckOptions, bounds: Bounds) -> Result<Verdict> {
    if let Some(m) = empty_filter_model(models) {
        return Ok(Verdict::fails(
            Witness::Matrix {
                matrix: m,
                reason: "the empty set is a filter, so there are no theorems".into(),
            },
            bounds,
        ));
    }
    let c = models.consequence(l);
    Ok(match theorem_search(&c, l, opts.depth, &opts.caps)? {
        (Tri::Yes, Some(t)) => Verdict::holds(bounds).with_evidence(format!("theorem {t}")),
        _ => Verdict::unknown(bounds),
    })
}

fn has_theorems(l: &LogicPresentation, models: &InventoryModels, opts: &CheckOptions, bounds: Bounds) -> Result<Verdict> {
    theorem_verdict(l, models, opts, bounds)
}

fn truth_equational(models: &InventoryModels, bounds: Bounds) -> Verdict {
    for (lat, reduced) in models.reduced() {
        if reduced.len() > 1 {
            let nonempty: Vec<&Subset> = reduced.iter().filter(|f| !f.is_empty()).collect();
            let (f, g) = if nonempty.len() >= 2 {
                (nonempty[0], nonempty[1])
            } else {
                (&reduced[0], &reduced[1])
            };
            return Verdict::fails(filter_pair(lat, f, g, "two reduced filters on one algebra"), bounds);
        }
    }
    Verdict::holds(bounds)
}

fn truth_minimal(models: &InventoryModels, bounds: Bounds) -> Verdict {
    for (lat, reduced) in models.reduced() {
        for f in reduced.iter().filter(|f| !f.is_empty()) {
            if let Some(g) = reduced.iter().find(|g| *g != f && f.is_subset(g)) {
                return Verdict::fails(
                    filter_pair(lat, f, g, "nonempty reduced filter properly inside another reduced filter"),
                    bounds,
                );
            }
        }
    }
    Verdict::holds(bounds)
}

fn meet_omegas(lat: &FilterLattice, family: &[&Subset]) -> Partition {
    family
        .iter()
        .fold(Partition::total(lat.algebra().size()), |acc, g| acc.meet(&omega(lat, g)))
}

/// A family `X` of nonempty filters and a nonempty filter `F` with
/// `⋂Ω[X] ⊆ Ω F` but `⋂X ⊄ F`.
///
/// Such a pair exists iff for some `F` and `a ∉ F` the family of all nonempty
/// filters containing `a` already works, so the search is exact.
pub fn pte_counterexample(lat: &FilterLattice) -> Option<(Vec<Subset>, Subset)> {
    let nonempty: Vec<&Subset> = lat.filters().iter().filter(|f| !f.is_empty()).collect();
    let n = lat.algebra().size();
    for f in &nonempty {
        let of = omega(lat, f);
        for a in (0..n).filter(|&a| !f.contains(a)) {
            let xa: Vec<&Subset> = nonempty.iter().copied().filter(|g| g.contains(a)).collect();
            if xa.is_empty() || !meet_omegas(lat, &xa).refines(&of) {
                continue;
            }
            let mut family = xa;
            let mut i = 0;
            while i < family.len() {
                let mut rest = family.clone();
                rest.remove(i);
                if !rest.is_empty() && meet_omegas(lat, &rest).refines(&of) {
                    family = rest;
                } else {
                    i += 1;
                }
            }
            return Some((family.into_iter().cloned().collect(), (*f).clone()));
        }
    }
    None
}

fn param_truth_equational(models: &InventoryModels, bounds: Bounds) -> Verdict {
    for lat in &models.lattices {
        if let Some((family, filter)) = pte_counterexample(lat) {
            return Verdict::fails(
                Witness::FilterFamily {
                    algebra: lat.algebra().clone(),
                    family,
                    filter,
                    reason: "the Leibniz congruences of the family refine that of the filter, but the family's intersection is not inside it".into(),
                },
                bounds,
            );
        }
    }
    Verdict::holds(bounds)
}

fn protoalgebraic(l: &LogicPresentation, models: &InventoryModels, opts: &CheckOptions, mut bounds: Bounds) -> Result<Verdict> {
    let c = models.consequence(l);
    Ok(match find_protoalgebraic_witness_with(&c, opts.depth, opts.max_set, &opts.caps)? {
        Some(w) => {
            let terms: Vec<String> = w.terms.iter().map(show).collect();
            Verdict::holds(bounds).with_evidence(format!("nabla {{{}}}", terms.join(", ")))
        }
        None => {
            bounds.note("no protoalgebraic witness within the search bounds");
            Verdict::unknown(bounds)
        }
    })
}

fn equivalential(l: &LogicPresentation, models: &InventoryModels, opts: &CheckOptions, bounds: Bounds) -> Result<Verdict> {
    let proto = protoalgebraic(l, models, opts, bounds.clone())?;
    if !proto.is_holds() {
        return Ok(proto);
    }
    for (lat, reduced) in models.reduced() {
        for f in &reduced {
            for sub in submatrices(&matrix(lat.algebra(), f), &opts.caps)? {
                let sub_lat = FilterLattice::new(l, sub.algebra(), &opts.caps)?;
                if !sub_lat.reduced_filters().contains(sub.filter()) {
                    return Ok(Verdict::fails(
                        Witness::Matrix {
                            matrix: sub,
                            reason: "submatrix of a reduced model that is not a reduced model".into(),
                        },
                        bounds,
                    ));
                }
            }
        }
    }
    let mut v = Verdict::holds(bounds);
    v.evidence = proto.evidence;
    Ok(v)
}

/// Looks for filters `F ⊊ G` on an inventory algebra with `Ω F ⊄ Ω G`.
pub fn leibniz_monotonicity_probe(l: &LogicPresentation, inventory: &[FiniteAlgebra], caps: &Caps) -> Result<Verdict> {
    let models = InventoryModels::new(l, inventory, caps)?;
    Ok(monotonicity_probe_on(&models, models.bounds(l)))
}

pub fn monotonicity_probe_on(models: &InventoryModels, bounds: Bounds) -> Verdict {
    for lat in &models.lattices {
        let fs = lat.filters();
        for g in fs.iter().rev() {
            for f in fs {
                if f != g && f.is_subset(g) && !omega(lat, f).refines(&omega(lat, g)) {
                    return Verdict::fails(filter_pair(lat, f, g, "F ⊆ G but Ω F is not contained in Ω G"), bounds);
                }
            }
        }
    }
    Verdict::holds(bounds)
}

/// Re-verifies the factual claim behind a failure witness of `class`.
pub fn recheck_class_witness(class: Class, l: &LogicPresentation, w: &Witness, caps: &Caps) -> Result<bool> {
    let reduced_on = |alg: &FiniteAlgebra, f: &Subset| -> Result<bool> {
        Ok(FilterLattice::new(l, alg, caps)?.reduced_filters().contains(f))
    };
    match (class, w) {
        (Class::Assertional | Class::HasTheorems, Witness::Matrix { matrix, .. }) => {
            let lat = FilterLattice::new(l, matrix.algebra(), caps)?;
            let f = matrix.filter();
            let empty_filter = f.is_empty() && lat.position(f).is_some();
            Ok(empty_filter || (class == Class::Assertional && f.len() != 1 && lat.reduced_filters().contains(f)))
        }
        (Class::Equivalential | Class::Algebraizable, Witness::Matrix { matrix, .. }) => {
            Ok(!reduced_on(matrix.algebra(), matrix.filter())?)
        }
        (_, Witness::FilterPair { algebra, f, g, .. }) => {
            let lat = FilterLattice::new(l, algebra, caps)?;
            let red = lat.reduced_filters();
            Ok(match class {
                Class::TruthEquational | Class::WeaklyAlgebraizable | Class::Algebraizable => {
                    f != g && red.contains(f) && red.contains(g)
                }
                Class::TruthMinimal => {
                    !f.is_empty() && f != g && f.is_subset(g) && red.contains(f) && red.contains(g)
                }
                _ => false,
            })
        }
        (Class::ParamTruthEquational, Witness::FilterFamily { algebra, family, filter, .. }) => {
            let lat = FilterLattice::new(l, algebra, caps)?;
            let all_filters = family.iter().chain([filter]).all(|g| !g.is_empty() && lat.position(g).is_some());
            if !all_filters || family.is_empty() {
                return Ok(false);
            }
            let refs: Vec<&Subset> = family.iter().collect();
            let inter = family.iter().skip(1).fold(family[0].clone(), |acc, g| acc.intersection(g));
            Ok(meet_omegas(&lat, &refs).refines(&omega(&lat, filter)) && !inter.is_subset(filter))
        }
        _ => Ok(false),
    }
}

/// Re-verifies a monotonicity probe witness.
pub fn recheck_probe_witness(l: &LogicPresentation, w: &Witness, caps: &Caps) -> Result<bool> {
    let Witness::FilterPair { algebra, f, g, .. } = w else {
        return Ok(false);
    };
    let lat = FilterLattice::new(l, algebra, caps)?;
    Ok(match (lat.omega(f), lat.omega(g)) {
        (Some(of), Some(og)) => f != g && f.is_subset(g) && !of.refines(og),
        _ => false,
    })
}
