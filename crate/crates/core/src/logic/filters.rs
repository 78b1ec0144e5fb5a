use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use super::canonical::{CanonicalEngine, FilterDecision, Violation};
use super::rule::counter_valuation;
use super::{LogicKind, LogicPresentation, Rule};
use crate::algebra::{FiniteAlgebra, Partition};
use crate::matrix::leibniz_congruence;
use crate::{Caps, Error, Matrix, Result, Subset};

/// How filters were decided: exactly (closure under presenting rules, or a
/// saturated canonical search) or within search bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterNotion {
    Exact,
    Bounded,
}

impl FilterNotion {
    pub fn and(self, other: FilterNotion) -> FilterNotion {
        self.max(other)
    }
}

impl fmt::Display for FilterNotion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FilterNotion::Exact => "exact",
            FilterNotion::Bounded => "bounded",
        })
    }
}

/// Every rule instance of a rule presentation on one algebra, as
/// (premise mask, conclusion) pairs with trivial instances dropped.
pub struct RuleInstances {
    instances: Vec<(u64, usize)>,
}

impl RuleInstances {
    pub fn new(l: &LogicPresentation, alg: &FiniteAlgebra) -> Result<Self> {
        let rules = l
            .rules()
            .ok_or_else(|| Error::Unsupported("rule instances need a rule presentation".into()))?;
        check_signature(l, alg)?;
        if alg.size() > 64 {
            return Err(Error::Unsupported("carriers above 64 elements".into()));
        }
        let mut set = HashSet::new();
        for r in rules {
            let c = r.compile(alg.signature())?;
            c.for_each_instance(alg, |ps, concl| {
                let mask = ps.iter().fold(0u64, |m, &p| m | 1 << p);
                if mask >> concl & 1 == 0 {
                    set.insert((mask, concl));
                }
            });
        }
        let mut instances: Vec<(u64, usize)> = set.into_iter().collect();
        instances.sort_unstable();
        Ok(RuleInstances { instances })
    }

    pub fn is_closed(&self, s: u64) -> bool {
        self.instances.iter().all(|&(m, c)| m & !s != 0 || s >> c & 1 == 1)
    }

    /// Least closed superset.
    pub fn close(&self, mut s: u64) -> u64 {
        loop {
            let before = s;
            for &(m, c) in &self.instances {
                if m & !s == 0 {
                    s |= 1 << c;
                }
            }
            if s == before {
                return s;
            }
        }
    }

    /// An instance whose premises lie in `s` and conclusion outside.
    pub fn violated(&self, s: u64) -> Option<(u64, usize)> {
        self.instances.iter().copied().find(|&(m, c)| m & !s == 0 && s >> c & 1 == 0)
    }
}

fn check_signature(l: &LogicPresentation, alg: &FiniteAlgebra) -> Result<()> {
    if alg.signature() != &l.signature {
        return Err(Error::SignatureMismatch(format!(
            "algebra `{}` has signature {}, logic `{}` has {}",
            alg.name(),
            alg.signature(),
            l.name,
            l.signature
        )));
    }
    Ok(())
}

/// Decides single subsets for either kind of presentation.
pub enum FilterOracle<'a> {
    Rules {
        instances: RuleInstances,
        rules: &'a [Rule],
        alg: &'a FiniteAlgebra,
    },
    Matrices(CanonicalEngine<'a>),
}

impl<'a> FilterOracle<'a> {
    pub fn new(l: &'a LogicPresentation, alg: &'a FiniteAlgebra, caps: &Caps) -> Result<Self> {
        check_signature(l, alg)?;
        Ok(match &l.kind {
            LogicKind::Rules(rules) => FilterOracle::Rules {
                instances: RuleInstances::new(l, alg)?,
                rules,
                alg,
            },
            LogicKind::Matrices(_) => FilterOracle::Matrices(CanonicalEngine::new(l, alg, caps)?),
        })
    }

    pub fn decide(&self, g: &Subset) -> FilterDecision {
        match self {
            FilterOracle::Rules { instances, rules, alg } => {
                if instances.violated(g.mask()).is_none() {
                    return FilterDecision::Filter { exact: true };
                }
                let m = Matrix::new((*alg).clone(), g.clone()).expect("subset in range");
                for r in rules.iter() {
                    if let Ok(Some(values)) = counter_valuation(&m, r) {
                        return FilterDecision::NotFilter(Violation {
                            rule: r.clone(),
                            valuation: r.vars().into_iter().zip(values).collect(),
                        });
                    }
                }
                unreachable!("a violated instance comes from some rule")
            }
            FilterOracle::Matrices(e) => e.decide(g),
        }
    }
}

/// Least filter of a rule presentation containing `seed`.
pub fn filter_generated(l: &LogicPresentation, alg: &FiniteAlgebra, seed: &Subset) -> Result<Subset> {
    let inst = RuleInstances::new(l, alg)?;
    if seed.iter().any(|a| a >= alg.size()) {
        return Err(Error::InvalidAlgebra(format!("seed {seed} outside the carrier")));
    }
    Ok(Subset::from_mask(inst.close(seed.mask())))
}

/// The deductive filters of `l` on one algebra, sorted by size then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterSet {
    pub algebra: FiniteAlgebra,
    pub filters: Vec<Subset>,
    pub notion: FilterNotion,
}

/// Sweeps every subset of the carrier.
pub fn deductive_filters(l: &LogicPresentation, alg: &FiniteAlgebra, caps: &Caps) -> Result<FilterSet> {
    Caps::check("algebra size for the filter sweep", alg.size(), caps.filter_sweep_max)?;
    let oracle = FilterOracle::new(l, alg, caps)?;
    let mut filters = Vec::new();
    let mut notion = FilterNotion::Exact;
    for mask in 0..1u64 << alg.size() {
        let g = Subset::from_mask(mask);
        if let FilterDecision::Filter { exact } = oracle.decide(&g) {
            if !exact {
                notion = FilterNotion::Bounded;
            }
            filters.push(g);
        }
    }
    filters.sort();
    Ok(FilterSet {
        algebra: alg.clone(),
        filters,
        notion,
    })
}

/// Filters of one algebra with their Leibniz congruences, for Suszko queries.
#[derive(Clone, Debug)]
pub struct FilterLattice {
    pub set: FilterSet,
    pub omegas: Vec<Partition>,
}

impl FilterLattice {
    pub fn new(l: &LogicPresentation, alg: &FiniteAlgebra, caps: &Caps) -> Result<Self> {
        let set = deductive_filters(l, alg, caps)?;
        let omegas = set
            .filters
            .iter()
            .map(|f| leibniz_congruence(&Matrix::new(alg.clone(), f.clone()).expect("filter in range")))
            .collect();
        Ok(FilterLattice { set, omegas })
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.set.algebra
    }

    pub fn filters(&self) -> &[Subset] {
        &self.set.filters
    }

    pub fn notion(&self) -> FilterNotion {
        self.set.notion
    }

    pub fn position(&self, f: &Subset) -> Option<usize> {
        self.set.filters.iter().position(|g| g == f)
    }

    pub fn omega(&self, f: &Subset) -> Option<&Partition> {
        self.position(f).map(|i| &self.omegas[i])
    }

    /// Meet of the Leibniz congruences of all filters containing `f`.
    pub fn suszko(&self, f: &Subset) -> Result<Partition> {
        if self.position(f).is_none() {
            return Err(Error::NotAFilter(f.to_vec()));
        }
        let n = self.algebra().size();
        Ok(self
            .set
            .filters
            .iter()
            .zip(&self.omegas)
            .filter(|(g, _)| f.is_subset(g))
            .fold(Partition::total(n), |acc, (_, o)| acc.meet(o)))
    }

    /// Filters whose Suszko congruence is the identity.
    pub fn reduced_filters(&self) -> Vec<Subset> {
        self.set
            .filters
            .iter()
            .filter(|f| self.suszko(f).map(|p| p.is_identity()).unwrap_or(false))
            .cloned()
            .collect()
    }
}

pub fn suszko_congruence(l: &LogicPresentation, alg: &FiniteAlgebra, f: &Subset, caps: &Caps) -> Result<Partition> {
    FilterLattice::new(l, alg, caps)?.suszko(f)
}

/// Suszko-reduced models on one algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedModels {
    pub matrices: Vec<Matrix>,
    pub notion: FilterNotion,
}

pub fn reduced_filters_on(l: &LogicPresentation, alg: &FiniteAlgebra, caps: &Caps) -> Result<ReducedModels> {
    let lattice = FilterLattice::new(l, alg, caps)?;
    Ok(ReducedModels {
        matrices: lattice
            .reduced_filters()
            .into_iter()
            .map(|f| Matrix::new(alg.clone(), f).expect("filter in range"))
            .collect(),
        notion: lattice.notion(),
    })
}
