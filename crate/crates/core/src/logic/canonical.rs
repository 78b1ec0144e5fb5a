//! Deductive filters of matrix-presented logics.
//!
//! A subset `G` of an algebra `A` is a filter of the logic of a matrix family
//! when every rule valid in the family holds in `⟨A, G⟩`. By structurality it
//! is enough to look at the canonical valuation `x_a ↦ a` over one variable
//! per element: `G` fails to be a filter exactly when some term `φ` with
//! `h(φ) ∉ G` follows from the set of all terms that `h` sends into `G`.
//!
//! A valuation `g: x_a ↦ g(a)` into a defining matrix `⟨B, D⟩` satisfies that
//! premise set iff every pair `(a, b)` of the subalgebra of `A × B` generated
//! by the graph of `g` has `b ∈ D` whenever `a ∈ G`. Calling such `(g, D)`
//! good, `G` is not a filter iff some term has `h`-value outside `G` and
//! every good coordinate inside its `D`. The joint values of all terms form a
//! finite subalgebra, searched breadth first.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::{LogicPresentation, Rule};
use crate::algebra::finite::{decode_cell, for_each_tuple};
use crate::algebra::{FiniteAlgebra, Term};
use crate::{Caps, Error, Matrix, Result, Subset};

/// Outcome of deciding whether a subset is a filter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FilterDecision {
    /// A filter; `exact` is false when the search stopped at its depth or state cap.
    Filter { exact: bool },
    NotFilter(Violation),
}

impl FilterDecision {
    pub fn is_filter(&self) -> bool {
        matches!(self, FilterDecision::Filter { .. })
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, FilterDecision::Filter { exact: false })
    }
}

/// A rule of the logic and a valuation into the algebra that breaks it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: Rule,
    pub valuation: Vec<(Arc<str>, usize)>,
}

/// One valuation `g: A → B` into a defining matrix, with the generated pairs.
struct Coordinate {
    matrix: usize,
    map: Vec<usize>,
    /// `reach[a]`: mask of the `b` with `(a, b)` generated.
    reach: Vec<u64>,
    /// A term realizing each generated pair.
    terms: HashMap<(usize, usize), Term>,
}

/// Decides filters of a matrix-presented logic on one algebra.
pub struct CanonicalEngine<'a> {
    matrices: &'a [Matrix],
    alg: &'a FiniteAlgebra,
    vars: Vec<Arc<str>>,
    coords: Vec<Coordinate>,
    /// `(matrix, hom)` pairs, used to certify filters as hom preimages.
    homs: Vec<(usize, Vec<usize>)>,
    depth: usize,
    max_states: usize,
}

/// Variable name standing for element `a` under the canonical valuation.
pub fn canonical_var(a: usize) -> Arc<str> {
    Arc::from(format!("x{a}"))
}

impl<'a> CanonicalEngine<'a> {
    pub fn new(l: &'a LogicPresentation, alg: &'a FiniteAlgebra, caps: &Caps) -> Result<Self> {
        let matrices = l
            .matrices()
            .ok_or_else(|| Error::Unsupported("canonical filters need a matrix presentation".into()))?;
        if alg.signature() != &l.signature {
            return Err(Error::SignatureMismatch(format!(
                "algebra `{}` has signature {}, logic has {}",
                alg.name(),
                alg.signature(),
                l.signature
            )));
        }
        let n = alg.size();
        if n > l.variable_budget {
            return Err(Error::BudgetExceeded {
                needed: n,
                budget: l.variable_budget,
            });
        }
        if n > 64 || matrices.iter().any(|m| m.size() > 64) {
            return Err(Error::Unsupported("carriers above 64 elements".into()));
        }
        let mut maps_total = 0usize;
        for m in matrices {
            let count = m.size().checked_pow(n as u32).unwrap_or(usize::MAX);
            maps_total = maps_total.saturating_add(count);
        }
        Caps::check("valuations into defining matrices", maps_total, caps.canonical_max_maps)?;
        let vars: Vec<Arc<str>> = (0..n).map(canonical_var).collect();
        let mut coords = Vec::new();
        let mut homs = Vec::new();
        for (j, m) in matrices.iter().enumerate() {
            for_each_tuple(m.size(), n, |map| {
                let c = generate_pairs(alg, m.algebra(), map, &vars);
                if alg.is_homomorphism(map, m.algebra()) {
                    homs.push((j, map.to_vec()));
                }
                coords.push(Coordinate {
                    matrix: j,
                    map: map.to_vec(),
                    reach: c.0,
                    terms: c.1,
                });
            });
        }
        Ok(CanonicalEngine {
            matrices,
            alg,
            vars,
            coords,
            homs,
            depth: caps.canonical_depth,
            max_states: caps.canonical_max_states,
        })
    }

    /// Intersection of the hom preimages of defining filters that contain `g`.
    fn certificate(&self, g: &Subset) -> Subset {
        let n = self.alg.size();
        let mut cert = Subset::full(n);
        for (j, h) in &self.homs {
            let d = self.matrices[*j].filter();
            let pre: Subset = (0..n).filter(|&a| d.contains(h[a])).collect();
            if g.is_subset(&pre) {
                cert = cert.intersection(&pre);
            }
        }
        cert
    }

    pub fn decide(&self, g: &Subset) -> FilterDecision {
        let n = self.alg.size();
        if self.certificate(g) == *g {
            return FilterDecision::Filter { exact: true };
        }
        let gmask = g.mask();
        let mut good = Vec::new();
        let mut premises: BTreeSet<Term> = BTreeSet::new();
        for c in &self.coords {
            let dmask = self.matrices[c.matrix].filter().mask();
            let bad = (0..n).find_map(|a| {
                let escaping = c.reach[a] & !dmask;
                (gmask >> a & 1 == 1 && escaping != 0).then(|| (a, escaping.trailing_zeros() as usize))
            });
            match bad {
                None => good.push(c),
                Some(pair) => {
                    premises.insert(c.terms[&pair].clone());
                }
            }
        }
        let inside = |t: &[usize]| {
            good.iter()
                .zip(&t[1..])
                .all(|(c, &b)| self.matrices[c.matrix].filter().contains(b))
        };
        let violation = |phi: Term| {
            FilterDecision::NotFilter(Violation {
                rule: Rule::new(premises.iter().cloned(), phi),
                valuation: self.vars.iter().cloned().zip(0..n).collect(),
            })
        };

        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut states: Vec<(Vec<usize>, Term)> = Vec::new();
        for a in 0..n {
            let mut t = vec![a];
            t.extend(good.iter().map(|c| c.map[a]));
            if index.contains_key(&t) {
                continue;
            }
            if !g.contains(a) && inside(&t) {
                return violation(Term::Var(self.vars[a].clone()));
            }
            index.insert(t.clone(), states.len());
            states.push((t, Term::Var(self.vars[a].clone())));
        }
        let ops: Vec<(usize, Arc<str>, usize)> = self
            .alg
            .signature()
            .symbols()
            .enumerate()
            .map(|(i, (s, k))| (i, s.clone(), k))
            .collect();
        // constants contribute their value tuples once
        for (i, s, k) in &ops {
            if *k == 0 {
                let mut t = vec![self.alg.apply_index(*i, &[])];
                t.extend(good.iter().map(|c| self.matrices[c.matrix].algebra().apply_index(*i, &[])));
                if !index.contains_key(&t) {
                    if !g.contains(t[0]) && inside(&t) {
                        return violation(Term::app_shared(s.clone(), Vec::new()));
                    }
                    index.insert(t.clone(), states.len());
                    states.push((t, Term::app_shared(s.clone(), Vec::new())));
                }
            }
        }
        let mut fresh_from = 0;
        let mut args = Vec::new();
        for _ in 0..self.depth {
            let before = states.len();
            for (i, s, k) in &ops {
                let k = *k;
                if k == 0 {
                    continue;
                }
                args.resize(k, 0);
                let combos = before.checked_pow(k as u32).unwrap_or(usize::MAX);
                for cell in 0..combos {
                    decode_cell(cell, before, &mut args);
                    if args.iter().all(|&x| x < fresh_from) {
                        continue;
                    }
                    let t = self.apply_tuple(*i, &args, &states, &good);
                    if index.contains_key(&t) {
                        continue;
                    }
                    let term = Term::app_shared(s.clone(), args.iter().map(|&x| states[x].1.clone()).collect());
                    if !g.contains(t[0]) && inside(&t) {
                        return violation(term);
                    }
                    if states.len() >= self.max_states {
                        return FilterDecision::Filter { exact: false };
                    }
                    index.insert(t.clone(), states.len());
                    states.push((t, term));
                }
            }
            if states.len() == before {
                return FilterDecision::Filter { exact: true };
            }
            fresh_from = before;
        }
        FilterDecision::Filter { exact: false }
    }

    fn apply_tuple(&self, op: usize, args: &[usize], states: &[(Vec<usize>, Term)], good: &[&Coordinate]) -> Vec<usize> {
        let mut vals: Vec<usize> = args.iter().map(|&x| states[x].0[0]).collect();
        let mut out = Vec::with_capacity(good.len() + 1);
        out.push(self.alg.apply_index(op, &vals));
        for (pos, c) in good.iter().enumerate() {
            for (v, &x) in vals.iter_mut().zip(args) {
                *v = states[x].0[pos + 1];
            }
            out.push(self.matrices[c.matrix].algebra().apply_index(op, &vals));
        }
        out
    }
}

/// Generates the subalgebra of `A × B` from the graph of `map`, recording a
/// term for every pair.
#[allow(clippy::type_complexity)]
fn generate_pairs(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    map: &[usize],
    vars: &[Arc<str>],
) -> (Vec<u64>, HashMap<(usize, usize), Term>) {
    let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
    let mut list: Vec<((usize, usize), Term)> = Vec::new();
    let push = |p: (usize, usize), t: Term, seen: &mut HashMap<(usize, usize), usize>, list: &mut Vec<_>| {
        if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(p) {
            e.insert(list.len());
            list.push((p, t));
        }
    };
    for (x, &y) in map.iter().enumerate() {
        push((x, y), Term::Var(vars[x].clone()), &mut seen, &mut list);
    }
    let ops: Vec<(usize, Arc<str>, usize)> =
        a.signature().symbols().enumerate().map(|(i, (s, k))| (i, s.clone(), k)).collect();
    for (i, s, k) in &ops {
        if *k == 0 {
            let p = (a.apply_index(*i, &[]), b.apply_index(*i, &[]));
            push(p, Term::app_shared(s.clone(), Vec::new()), &mut seen, &mut list);
        }
    }
    let mut fresh_from = 0;
    let mut idx = Vec::new();
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    loop {
        let before = list.len();
        for (i, s, k) in &ops {
            let k = *k;
            if k == 0 {
                continue;
            }
            idx.resize(k, 0);
            xs.resize(k, 0);
            ys.resize(k, 0);
            for cell in 0..before.pow(k as u32) {
                decode_cell(cell, before, &mut idx);
                if idx.iter().all(|&j| j < fresh_from) {
                    continue;
                }
                for ((x, y), &j) in xs.iter_mut().zip(ys.iter_mut()).zip(&idx) {
                    (*x, *y) = list[j].0;
                }
                let p = (a.apply_index(*i, &xs), b.apply_index(*i, &ys));
                if !seen.contains_key(&p) {
                    let t = Term::app_shared(s.clone(), idx.iter().map(|&j| list[j].1.clone()).collect());
                    push(p, t, &mut seen, &mut list);
                }
            }
        }
        if list.len() == before {
            break;
        }
        fresh_from = before;
    }
    let mut reach = vec![0u64; a.size()];
    for &((x, y), _) in &list {
        reach[x] |= 1 << y;
    }
    (reach, list.into_iter().collect())
}
