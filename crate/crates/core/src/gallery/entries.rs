use super::algebras::{
    boolean_algebra, boolean_signature, implication_algebra, implication_signature, pointed_set, pointed_sets,
    pointed_signature, small_algebras,
};
use super::{Expectation, GalleryEntry, Params, Payload};
use crate::algebra::{subalgebra, Signature, Term};
use crate::hierarchy::witness::{congruence_formulas_with_params, WitnessKind, WitnessSet};
use crate::logic::{LogicPresentation, Rule};
use crate::{Caps, Error, Matrix, Result, Subset};

pub const ENTRY_NAMES: [&str; 10] = [
    "basic-assertional",
    "basic-proto",
    "basic-equiv",
    "nabla",
    "delta",
    "ba-star",
    "two-valued-pair",
    "pointed-set",
    "ba-star-logic",
    "classical",
];

pub fn build_default(name: &str, caps: &Caps) -> Result<GalleryEntry> {
    build(name, &Params::new(), caps)
}

struct ParamReader<'a> {
    params: &'a Params,
    allowed: &'static [&'static str],
}

impl ParamReader<'_> {
    fn check(&self) -> Result<()> {
        match self.params.keys().find(|k| !self.allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::BadParam(format!("unknown parameter `{k}`"))),
            None => Ok(()),
        }
    }

    fn usize(&self, key: &str, default: usize, range: std::ops::RangeInclusive<usize>) -> Result<usize> {
        let v = match self.params.get(key) {
            None => default,
            Some(s) => s
                .parse()
                .map_err(|_| Error::BadParam(format!("`{key}` must be a non-negative integer, got `{s}`")))?,
        };
        if !range.contains(&v) {
            return Err(Error::BadParam(format!(
                "`{key}` must lie in {}..={}, got {v}",
                range.start(),
                range.end()
            )));
        }
        Ok(v)
    }

    fn str(&self, key: &str, default: &'static str, options: &[&str]) -> Result<String> {
        let v = self.params.get(key).map_or(default, String::as_str);
        if !options.contains(&v) {
            return Err(Error::BadParam(format!("`{key}` must be one of {options:?}, got `{v}`")));
        }
        Ok(v.to_string())
    }
}

fn reader<'a>(params: &'a Params, allowed: &'static [&'static str]) -> Result<ParamReader<'a>> {
    let r = ParamReader { params, allowed };
    r.check()?;
    Ok(r)
}

fn t(src: &str, sig: &Signature) -> Term {
    Term::parse(src, sig).expect("well-formed gallery term")
}

fn class(name: &str, verdict: &str) -> Expectation {
    Expectation::Class {
        class: name.into(),
        verdict: verdict.into(),
    }
}

fn proto(depth: usize, terms: Option<&[&str]>) -> Expectation {
    Expectation::ProtoWitness {
        depth,
        terms: terms.map(|ts| ts.iter().map(|s| s.to_string()).collect()),
    }
}

pub fn build(name: &str, params: &Params, caps: &Caps) -> Result<GalleryEntry> {
    match name {
        "basic-assertional" => basic_assertional(params),
        "basic-proto" => basic_proto(params, caps),
        "basic-equiv" => basic_equiv(params, caps),
        "nabla" => nabla(params, caps),
        "delta" => delta(params, caps),
        "ba-star" => ba_star(params),
        "two-valued-pair" => two_valued_pair(params),
        "pointed-set" => pointed(params),
        "ba-star-logic" => ba_star_logic(params),
        "classical" => classical(params),
        other => Err(Error::UnknownEntry(other.to_string())),
    }
}

/// `∅ ▷ ⊤(x)`.
pub fn assertional_logic() -> LogicPresentation {
    let sig = pointed_signature();
    LogicPresentation::from_rules("basic-assertional", sig.clone(), vec![Rule::axiom(t("(⊤ x)", &sig))])
        .expect("valid presentation")
}

fn basic_assertional(params: &Params) -> Result<GalleryEntry> {
    let r = reader(params, &["max_size"])?;
    let max = r.usize("max_size", 4, 1..=6)?;
    let mut expectations = vec![
        class("assertional", "Holds"),
        class("truth_equational", "Holds"),
        class("has_theorems", "Holds"),
        proto(3, None),
    ];
    if max >= 2 {
        expectations.push(Expectation::InjectiveTheorem { depth: 2, term: None });
    }
    if max >= 3 {
        expectations.push(Expectation::Probe {
            verdict: "Fails".into(),
            pair: None,
        });
    }
    Ok(GalleryEntry {
        name: "basic-assertional".into(),
        provenance: "basic assertional logic: one unary connective ⊤ axiomatized by ∅ ▷ ⊤(x); its reduced models are the pointed sets with filter {⊤*}".into(),
        payload: Payload::Logic(assertional_logic()),
        inventory: pointed_sets(max)?,
        expectations,
        notes: vec![format!("inventory: pointed sets of size 1..={max}")],
    })
}

fn pointed(params: &Params) -> Result<GalleryEntry> {
    let r = reader(params, &["n", "point"])?;
    let n = r.usize("n", 2, 1..=64)?;
    let point = r.usize("point", 0, 0..=n - 1)?;
    let a = pointed_set(n, point)?;
    let mut expectations = Vec::new();
    if n <= 6 {
        expectations.push(Expectation::ReducedFilters {
            logic: "basic-assertional".into(),
            algebra: 0,
            filters: vec![vec![point]],
        });
    }
    Ok(GalleryEntry {
        name: "pointed-set".into(),
        provenance: "pointed set: a set with a constant unary operation ⊤ whose value is ⊤*".into(),
        payload: Payload::Algebras(vec![a.clone()]),
        inventory: vec![a],
        expectations,
        notes: Vec::new(),
    })
}

fn proto_signature(k: usize, unary: usize) -> Signature {
    let mut sig = Signature::new();
    for a in 0..k {
        sig.add(&format!("⊸{a}"), 2).expect("valid symbol");
    }
    for a in 0..unary {
        sig.add(&format!("∗1{a}"), 1).expect("valid symbol");
    }
    sig
}

/// `∅ ▷ ∇(x, x)` and `x, ∇(x, y) ▷ y` for `∇(x, y) = {x ⊸α y : α < k}`.
fn nabla_rules(sig: &Signature, k: usize) -> Vec<Rule> {
    let mut rules: Vec<Rule> = (0..k).map(|a| Rule::axiom(t(&format!("(⊸{a} x x)"), sig))).collect();
    let mut premises = vec![Term::var("x")];
    premises.extend((0..k).map(|a| t(&format!("(⊸{a} x y)"), sig)));
    rules.push(Rule::new(premises, Term::var("y")));
    rules
}

fn basic_proto(params: &Params, caps: &Caps) -> Result<GalleryEntry> {
    let r = reader(params, &["k", "unary_params"])?;
    let k = r.usize("k", 1, 1..=3)?;
    let unary = r.usize("unary_params", 1, 0..=2)?;
    let sig = proto_signature(k, unary);
    let l = LogicPresentation::from_rules(format!("basic-proto-{k}"), sig.clone(), nabla_rules(&sig, k))?;
    let mut expectations = vec![class("has_theorems", "Holds")];
    if k == 1 {
        expectations.push(proto(2, Some(&["(⊸0 x y)"])));
        expectations.push(Expectation::Probe {
            verdict: "Holds".into(),
            pair: None,
        });
    }
    Ok(GalleryEntry {
        name: "basic-proto".into(),
        provenance: format!(
            "basic protoalgebraic logic at finite rank {k}: binary ⊸α, {unary} unary parameter symbol(s) ∗1α, rules ∅ ▷ ∇(x, x) and x, ∇(x, y) ▷ y"
        ),
        inventory: small_algebras(&sig, 2, caps)?,
        payload: Payload::Logic(l),
        expectations,
        notes: vec![
            "finite-rank analogue of an infinite-rank construction; witnesses are sound, no completeness is claimed".into(),
            "inventory: all algebras with at most 2 elements, up to isomorphism".into(),
        ],
    })
}

fn basic_equiv(params: &Params, caps: &Caps) -> Result<GalleryEntry> {
    let r = reader(params, &["k"])?;
    let k = r.usize("k", 1, 1..=2)?;
    let sig = proto_signature(k, 0);
    let mut rules = nabla_rules(&sig, k);
    let delta = |a: &str, b: &str| -> Vec<Term> {
        (0..k)
            .map(|g| Term::binary(&format!("⊸{g}"), Term::var(a), Term::var(b)))
            .collect()
    };
    for alpha in 0..k {
        let op = format!("⊸{alpha}");
        let mut premises = delta("x1", "y1");
        premises.extend(delta("x2", "y2"));
        let left = Term::binary(&op, Term::var("x1"), Term::var("x2"));
        let right = Term::binary(&op, Term::var("y1"), Term::var("y2"));
        for beta in 0..k {
            let concl = Term::binary(&format!("⊸{beta}"), left.clone(), right.clone());
            rules.push(Rule::new(premises.clone(), concl));
        }
    }
    let l = LogicPresentation::from_rules(format!("basic-equiv-{k}"), sig.clone(), rules)?;
    let mut expectations = vec![class("has_theorems", "Holds")];
    if k == 1 {
        expectations.push(proto(2, Some(&["(⊸0 x y)"])));
    }
    Ok(GalleryEntry {
        name: "basic-equiv".into(),
        provenance: format!(
            "basic equivalential logic at finite rank {k}: the protoalgebraic rules for Δ(x, y) = {{x ⊸α y}} plus Δ(x1, y1) ∪ Δ(x2, y2) ▷ Δ(x1 ⊸α x2, y1 ⊸α y2)"
        ),
        inventory: small_algebras(&sig, 2, caps)?,
        payload: Payload::Logic(l),
        expectations,
        notes: vec!["inventory: all algebras with at most 2 elements, up to isomorphism".into()],
    })
}

pub fn nabla_logic() -> LogicPresentation {
    let sig = implication_signature();
    LogicPresentation::from_rules(
        "nabla",
        sig.clone(),
        vec![
            Rule::axiom(t("(→ x x)", &sig)),
            Rule::new([Term::var("x"), t("(→ x y)", &sig)], Term::var("y")),
        ],
    )
    .expect("valid presentation")
}

fn nabla(params: &Params, caps: &Caps) -> Result<GalleryEntry> {
    reader(params, &[])?;
    let sig = implication_signature();
    Ok(GalleryEntry {
        name: "nabla".into(),
        provenance: "implicational logic axiomatized by ∅ ▷ x → x and x, x → y ▷ y; its theorems are exactly the formulas ψ → ψ".into(),
        payload: Payload::Logic(nabla_logic()),
        inventory: small_algebras(&sig, 2, caps)?,
        expectations: vec![
            proto(2, Some(&["(→ x y)"])),
            Expectation::NablaOracle { depth: 3 },
            Expectation::Probe {
                verdict: "Holds".into(),
                pair: None,
            },
            class("protoalgebraic", "Holds"),
        ],
        notes: vec!["inventory: all {→}-algebras with at most 2 elements, up to isomorphism".into()],
    })
}

/// The rules `∇̂(x → x, y → y, z⃗) ▷ ψ` for every `ψ ∈ ∇̂(x, y, z⃗)` of depth at most `d`.
pub fn delta_rules(d: usize, params: usize) -> Result<Vec<Rule>> {
    let sig = implication_signature();
    let nabla = WitnessSet::new(WitnessKind::Protoalgebraic, vec![t("(→ x y)", &sig)]);
    let hat = congruence_formulas_with_params(&nabla, &sig, d, params)?;
    let mut sigma = crate::algebra::Substitution::new();
    sigma.insert("x".into(), t("(→ x x)", &sig));
    sigma.insert("y".into(), t("(→ y y)", &sig));
    let premises: Vec<Term> = hat.iter().map(|p| p.substitute(&sigma)).collect();
    Ok(hat.into_iter().map(|psi| Rule::new(premises.clone(), psi)).collect())
}

pub fn delta_logic(d: usize, params: usize) -> Result<LogicPresentation> {
    let base = nabla_logic();
    let mut rules = base.rules().expect("rules").to_vec();
    rules.extend(delta_rules(d, params)?);
    LogicPresentation::from_rules(format!("delta-{d}"), implication_signature(), rules)
}

fn delta(params: &Params, caps: &Caps) -> Result<GalleryEntry> {
    let r = reader(params, &["d", "params"])?;
    let d = r.usize("d", 2, 0..=2)?;
    let p = r.usize("params", 1, 0..=2)?;
    let sig = implication_signature();
    Ok(GalleryEntry {
        name: "delta".into(),
        provenance: "extension of the implicational logic by the rules ∇̂(x → x, y → y, z⃗) ▷ ψ for ψ ∈ ∇̂(x, y, z⃗)".into(),
        payload: Payload::Logic(delta_logic(d, p)?),
        inventory: small_algebras(&sig, 2, caps)?,
        expectations: vec![
            proto(1, Some(&["(→ x y)"])),
            Expectation::InjectiveTheorem {
                depth: 2,
                term: Some("(→ x x)".into()),
            },
        ],
        notes: vec![
            format!("capped: ψ restricted to depth ≤ {d} with {p} parameter variable(s); every verdict is relative to this cap"),
            "inventory: all {→}-algebras with at most 2 elements, up to isomorphism".into(),
        ],
    })
}

fn b4_matrices() -> Result<Vec<Matrix>> {
    let b4 = boolean_algebra(2)?;
    Ok(vec![
        Matrix::new(b4.clone(), Subset::from([3, 1]))?,
        Matrix::new(b4, Subset::from([3, 1, 2]))?,
    ])
}

fn ba_star(params: &Params) -> Result<GalleryEntry> {
    reader(params, &[])?;
    Ok(GalleryEntry {
        name: "ba-star".into(),
        provenance: "the four-element Boolean algebra (0 = ⊥, 1 = a, 2 = b, 3 = ⊤) with F = {⊤, a} and G = {⊤, a, b}: F ⊆ G while Ω F has blocks {⊤, a}, {⊥, b} and Ω G is the identity".into(),
        payload: Payload::Matrices(b4_matrices()?),
        inventory: vec![boolean_algebra(2)?],
        expectations: vec![
            Expectation::Leibniz {
                matrix: 0,
                blocks: vec![vec![0, 2], vec![1, 3]],
            },
            Expectation::Leibniz {
                matrix: 1,
                blocks: vec![vec![0], vec![1], vec![2], vec![3]],
            },
        ],
        notes: vec!["partitions are printed with blocks in order of their least element".into()],
    })
}

/// Boolean algebras of size 2 and 4 with every filter containing the top.
pub fn ba_star_logic_presentation() -> Result<LogicPresentation> {
    let mut ms = Vec::new();
    for atoms in 1..=2 {
        let b = boolean_algebra(atoms)?;
        let n = b.size();
        for mask in 0..1u64 << n {
            let f = Subset::from_mask(mask);
            if f.contains(n - 1) {
                ms.push(Matrix::new(b.clone(), f)?);
            }
        }
    }
    LogicPresentation::from_matrices("ba-star-logic", boolean_signature(), ms)
}

fn ba_star_logic(params: &Params) -> Result<GalleryEntry> {
    reader(params, &[])?;
    Ok(GalleryEntry {
        name: "ba-star-logic".into(),
        provenance: "logic of all Boolean algebras with filters containing 1, restricted to Boolean algebras with at most 4 elements; it has theorems but is not protoalgebraic".into(),
        payload: Payload::Logic(ba_star_logic_presentation()?),
        inventory: vec![boolean_algebra(1)?, boolean_algebra(2)?],
        expectations: vec![
            class("has_theorems", "Holds"),
            Expectation::Probe {
                verdict: "Fails".into(),
                pair: Some((vec![1, 3], vec![1, 2, 3])),
            },
        ],
        notes: vec!["defining algebras limited to B2 and B4; the monotonicity failure lives on B4 and is exact".into()],
    })
}

pub fn two_valued_pair_logic() -> Result<LogicPresentation> {
    let b2 = boolean_algebra(1)?;
    LogicPresentation::from_matrices(
        "two-valued-pair",
        boolean_signature(),
        vec![
            Matrix::new(b2.clone(), Subset::singleton(1))?,
            Matrix::new(b2, Subset::singleton(0))?,
        ],
    )
}

fn two_valued_pair(params: &Params) -> Result<GalleryEntry> {
    reader(params, &[])?;
    Ok(GalleryEntry {
        name: "two-valued-pair".into(),
        provenance: "logic induced by ⟨B2, {1}⟩ and ⟨B2, {0}⟩: truth-minimal but not parametrically truth-equational".into(),
        payload: Payload::Logic(two_valued_pair_logic()?),
        inventory: vec![boolean_algebra(1)?],
        expectations: vec![
            class("truth_minimal", "Holds"),
            class("param_truth_equational", "Fails"),
            class("truth_equational", "Fails"),
            class("has_theorems", "Fails"),
        ],
        notes: vec!["the empty set is a filter on B2 and is Suszko-reduced".into()],
    })
}

/// The logic of `⟨B2, {1}⟩` over the chosen connectives.
pub fn classical_logic(connectives: &str) -> Result<LogicPresentation> {
    let (b2, sig) = match connectives {
        "boolean" => (boolean_algebra(1)?, boolean_signature()),
        _ => (implication_algebra(1)?, implication_signature()),
    };
    LogicPresentation::from_matrices(
        format!("classical-{connectives}"),
        sig,
        vec![Matrix::new(b2, Subset::singleton(1))?],
    )
}

fn classical(params: &Params) -> Result<GalleryEntry> {
    let r = reader(params, &["connectives"])?;
    let c = r.str("connectives", "implication", &["implication", "boolean"])?;
    let l = classical_logic(&c)?;
    let b2 = l.matrices().expect("matrices")[0].algebra().clone();
    let mut inventory = vec![b2.clone()];
    if c == "implication" {
        inventory.push(subalgebra(&b2, &Subset::singleton(1))?.0.with_name("B2-imp-top"));
    }
    let mut expectations = vec![class("truth_equational", "Holds"), class("has_theorems", "Holds")];
    if c == "implication" {
        expectations.push(proto(1, Some(&["(→ x y)"])));
    }
    Ok(GalleryEntry {
        name: "classical".into(),
        provenance: format!("logic induced by ⟨B2, {{1}}⟩ over {c} connectives"),
        payload: Payload::Logic(l),
        inventory,
        expectations,
        notes: vec!["not part of the core construction list; used as a target for interpretations and products".into()],
    })
}
