//! Acceptance criteria, run in sequence so the time limits are not skewed by
//! parallel tests. Prints one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use law_core::algebra::construct::product_coords;
use law_core::algebra::enumerate::canonical_form;
use law_core::algebra::{enumerate_algebras, enumerate_terms, AlgebraSpace, FiniteAlgebra, Partition, Signature, Term};
use law_core::chaining::bounded_theorems;
use law_core::gallery::algebras::{
    boolean_signature, implication_signature, pointed_set, pointed_sets, pointed_signature,
};
use law_core::gallery::{
    assertional_logic, build_default, classical_logic, delta_rules, nabla_logic, product_of_logics,
    two_valued_pair_logic, Payload, ENTRY_NAMES,
};
use law_core::hierarchy::admissible::syntactic_bounds;
use law_core::hierarchy::{
    check_admissibility_bounded, check_class, find_injective_theorem, find_protoalgebraic_witness,
    leibniz_monotonicity_probe, nabla_theorem_oracle, recheck_class_witness, recheck_probe_witness, CheckOptions,
    TheoremDecider,
};
use law_core::logic::{deductive_filters, reduced_filters_on, LogicPresentation, Rule};
use law_core::matrix::leibniz_congruence;
use law_core::translation::{check_interpretation_bounded, recheck_interpretation_witness, Translation};
use law_core::verdict::Witness;
use law_core::{Caps, Matrix, Subset};

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn caps() -> Caps {
    Caps::default()
}

fn term(s: &str, sig: &Signature) -> Term {
    Term::parse(s, sig).expect("term parses")
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn c1_ba_star() -> Check {
    let entry = build_default("ba-star", &caps()).map_err(err)?;
    let Payload::Matrices(ms) = &entry.payload else {
        return Err("ba-star payload is not a pair of matrices".into());
    };
    let omega_f = leibniz_congruence(&ms[0]);
    let omega_g = leibniz_congruence(&ms[1]);
    // 3 = ⊤, 1 = a, 0 = ⊥, 2 = b
    let expected = Partition::from_blocks(4, &[vec![3, 1], vec![0, 2]]).map_err(err)?;
    ensure!(omega_f == expected, "Ω F = {:?}", omega_f.blocks());
    ensure!(omega_g.is_identity(), "Ω G = {:?}", omega_g.blocks());

    let logic = build_default("ba-star-logic", &caps()).map_err(err)?;
    let l = logic.logic_or_err().map_err(err)?;
    let v = leibniz_monotonicity_probe(l, &logic.inventory, &caps()).map_err(err)?;
    let Some(w @ Witness::FilterPair { algebra, f, g, omega_f: of, omega_g: og, .. }) = v.witness() else {
        return Err(format!("probe did not fail with a filter pair: {}", v.label()));
    };
    ensure!(algebra.size() == 4, "witness algebra {}", algebra.name());
    ensure!(f == ms[0].filter() && g == ms[1].filter(), "witness pair {f} {g}");
    ensure!(*of == expected && og.is_identity(), "witness congruences differ");
    ensure!(recheck_probe_witness(l, w, &caps()).map_err(err)?, "probe witness does not recheck");
    Ok(format!("Ω{f} = {:?}, Ω{g} = identity", of.blocks()))
}

/// Independent congruence test straight from the operation tables.
fn compatible(alg: &FiniteAlgebra, p: &Partition) -> bool {
    let n = alg.size();
    for (i, (_, arity)) in alg.signature().symbols().enumerate() {
        let cells = n.pow(arity as u32);
        for cell in 0..cells {
            let mut args: Vec<usize> = (0..arity).map(|k| cell / n.pow((arity - 1 - k) as u32) % n).collect();
            let out = alg.apply_index(i, &args);
            for pos in 0..arity {
                let keep = args[pos];
                for b in 0..n {
                    if p.related(keep, b) {
                        args[pos] = b;
                        if !p.related(out, alg.apply_index(i, &args)) {
                            return false;
                        }
                    }
                }
                args[pos] = keep;
            }
        }
    }
    true
}

/// Coarsest congruence refining the `{F, A∖F}` split, by trying every partition.
fn coarsest_oracle(alg: &FiniteAlgebra, f: &Subset) -> Partition {
    let n = alg.size();
    let split = Partition::split(n, f);
    let candidates: Vec<Partition> = Partition::all(n)
        .filter(|p| p.refines(&split) && compatible(alg, p))
        .collect();
    let best = candidates
        .iter()
        .min_by_key(|p| p.num_blocks())
        .expect("the identity is a candidate")
        .clone();
    assert!(candidates.iter().all(|p| p.refines(&best)), "no largest compatible congruence");
    best
}

fn c2_oracle_equivalence() -> Check {
    let caps = Caps {
        table_budget: 1 << 20,
        ..caps()
    };
    let mut algebras = Vec::new();
    for (sig, full_to) in [(pointed_signature(), 4), (implication_signature(), 3), (boolean_signature(), 2)] {
        for n in 1..=full_to {
            algebras.extend(enumerate_algebras(&sig, n, true, &caps).map_err(err)?);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x1e1b);
        for n in full_to + 1..=4 {
            let space = AlgebraSpace::new(&sig, n, &caps).map_err(err)?;
            let count = space.count().ok_or("space too large")?;
            let mut seen = BTreeSet::new();
            while seen.len() < 60 {
                let alg = canonical_form(&space.algebra_at(rng.gen_range(0..count)));
                if seen.insert(alg.tables().to_vec()) {
                    algebras.push(alg);
                }
            }
        }
    }
    ensure!(algebras.len() >= 200, "only {} algebras", algebras.len());
    let mut pairs = 0;
    for alg in &algebras {
        for mask in 0..1u64 << alg.size() {
            let f = Subset::from_mask(mask);
            let m = Matrix::new(alg.clone(), f.clone()).map_err(err)?;
            let got = leibniz_congruence(&m);
            let want = coarsest_oracle(alg, &f);
            ensure!(got == want, "{} with F = {f}: {:?} vs {:?}", alg.name(), got.blocks(), want.blocks());
            pairs += 1;
        }
    }
    Ok(format!("{} algebras, {pairs} matrices, 0 mismatches", algebras.len()))
}

fn c3_nabla_theorems() -> Check {
    let l = nabla_logic();
    let d = bounded_theorems(&l.signature, l.rules().ok_or("no rules")?, &["x", "y"], 4);
    ensure!(d.complete, "chaining hit its term limit");
    let all = enumerate_terms(&l.signature, &["x", "y"], 4);
    let mut theorems = 0;
    for t in &all {
        let oracle = nabla_theorem_oracle(t);
        ensure!(d.derived.contains(t) == oracle, "disagreement on {t}");
        theorems += usize::from(oracle);
    }
    let extra = d.derived.iter().filter(|t| t.depth() <= 4 && !nabla_theorem_oracle(t)).count();
    ensure!(extra == 0, "{extra} derived terms outside the oracle");
    Ok(format!("{} terms, {theorems} theorems", all.len()))
}

fn c4_proto_witnesses() -> Check {
    let names = |w: Option<law_core::hierarchy::WitnessSet>| {
        w.map(|w| w.terms.iter().map(ToString::to_string).collect::<Vec<_>>())
    };
    let nabla = build_default("nabla", &caps()).map_err(err)?;
    let w = find_protoalgebraic_witness(nabla.logic_or_err().map_err(err)?, &nabla.inventory, 2, 2, &caps());
    let w = names(w.map_err(err)?);
    ensure!(w == Some(vec!["(→ x y)".into()]), "nabla: {w:?}");
    let p = build_default("basic-proto", &caps()).map_err(err)?;
    let w = find_protoalgebraic_witness(p.logic_or_err().map_err(err)?, &p.inventory, 2, 2, &caps());
    let w = names(w.map_err(err)?);
    ensure!(w == Some(vec!["(⊸0 x y)".into()]), "basic-proto: {w:?}");
    let w = find_protoalgebraic_witness(&assertional_logic(), &pointed_sets(4).map_err(err)?, 3, 2, &caps());
    ensure!(w.map_err(err)?.is_none(), "assertional logic has a witness");
    Ok("{(→ x y)}, {(⊸0 x y)}, absent".into())
}

fn c5_pointed_sets() -> Check {
    let l = assertional_logic();
    let ps = pointed_sets(4).map_err(err)?;
    for p in &ps {
        let r = reduced_filters_on(&l, p, &caps()).map_err(err)?;
        let filters: Vec<&Subset> = r.matrices.iter().map(Matrix::filter).collect();
        let top = Subset::singleton(p.apply("⊤", &[0]).map_err(err)?);
        ensure!(filters == vec![&top], "{}: reduced filters {filters:?}", p.name());
    }
    let v = check_class("assertional", &l, &ps, &CheckOptions::new(caps())).map_err(err)?;
    ensure!(v.is_holds(), "assertional: {}", v.label());
    Ok(format!("{} pointed sets, assertional Holds", ps.len()))
}

fn b2() -> Vec<FiniteAlgebra> {
    build_default("two-valued-pair", &caps()).expect("entry builds").inventory
}

fn c6_truth_minimal_vs_pte() -> Check {
    let opts = CheckOptions::new(caps());
    let pair = two_valued_pair_logic().map_err(err)?;
    let tm = check_class("truth_minimal", &pair, &b2(), &opts).map_err(err)?;
    ensure!(tm.is_holds(), "truth_minimal: {}", tm.label());
    let pte = check_class("param_truth_equational", &pair, &b2(), &opts).map_err(err)?;
    let Some(w @ Witness::FilterFamily { algebra, .. }) = pte.witness() else {
        return Err(format!("param_truth_equational: {}", pte.label()));
    };
    ensure!(algebra.size() == 2, "witness algebra {}", algebra.name());
    let class = "param_truth_equational".parse().map_err(err)?;
    ensure!(recheck_class_witness(class, &pair, w, &caps()).map_err(err)?, "family witness does not recheck");
    let mut logics = 0;
    for name in ENTRY_NAMES {
        let entry = build_default(name, &caps()).map_err(err)?;
        let Some(l) = entry.logic() else { continue };
        let pte = check_class("param_truth_equational", l, &entry.inventory, &opts).map_err(err)?;
        let tm = check_class("truth_minimal", l, &entry.inventory, &opts).map_err(err)?;
        ensure!(!pte.is_holds() || tm.is_holds(), "{name}: PTE holds, truth_minimal {}", tm.label());
        logics += 1;
    }
    Ok(format!("pair logic TM Holds, PTE Fails; implication on {logics} gallery logics"))
}

fn c7_truth_equational() -> Check {
    let opts = CheckOptions::new(caps());
    let v = check_class("truth_equational", &assertional_logic(), &pointed_sets(4).map_err(err)?, &opts);
    let v = v.map_err(err)?;
    ensure!(v.is_holds(), "assertional logic: {}", v.label());
    let v = check_class("truth_equational", &two_valued_pair_logic().map_err(err)?, &b2(), &opts).map_err(err)?;
    let Some(Witness::FilterPair { f, g, .. }) = v.witness() else {
        return Err(format!("pair logic: {}", v.label()));
    };
    ensure!(*f == Subset::singleton(0) && *g == Subset::singleton(1), "witness pair {f} {g}");
    Ok("⊢_A Holds; pair logic Fails on {0}/{1}".into())
}

/// Every nonempty filter of the product logic on its defining algebra is the
/// product of its projections, each a filter of the factor logic.
fn product_violations(l: &LogicPresentation) -> Result<(usize, usize), String> {
    let p = product_of_logics(l, l, &caps()).map_err(err)?;
    let factor = &l.matrices().ok_or("factor has no matrices")?[0];
    let component = deductive_filters(l, factor.algebra(), &caps()).map_err(err)?;
    let n1 = factor.size();
    let mut checked = 0;
    let mut violations = 0;
    for m in p.matrices().ok_or("product has no matrices")? {
        let filters = deductive_filters(&p, m.algebra(), &caps()).map_err(err)?;
        for g in filters.filters.iter().filter(|g| !g.is_empty()) {
            let coords: Vec<Vec<usize>> = g.iter().map(|c| product_coords(c, &[n1, n1])).collect();
            let g1: Subset = coords.iter().map(|c| c[0]).collect();
            let g2: Subset = coords.iter().map(|c| c[1]).collect();
            let rebuilt: Subset = (0..m.size())
                .filter(|&c| {
                    let xy = product_coords(c, &[n1, n1]);
                    g1.contains(xy[0]) && g2.contains(xy[1])
                })
                .collect();
            let ok = rebuilt == *g && component.filters.contains(&g1) && component.filters.contains(&g2);
            violations += usize::from(!ok);
            checked += 1;
        }
    }
    Ok((checked, violations))
}

fn c8_product_filters() -> Check {
    let mut report = Vec::new();
    for connectives in ["implication", "boolean"] {
        let l = classical_logic(connectives).map_err(err)?;
        let (checked, violations) = product_violations(&l)?;
        ensure!(checked > 0, "{connectives}: no filters checked");
        ensure!(violations == 0, "{connectives}: {violations} of {checked} filters do not decompose");
        report.push(format!("{connectives}: {checked} filters"));
    }
    Ok(format!("{}, 0 violations", report.join(", ")))
}

fn c9_interpretation() -> Check {
    let source = assertional_logic();
    let target = classical_logic("implication").map_err(err)?;
    let inventory = build_default("classical", &caps()).map_err(err)?.inventory;
    ensure!(inventory.len() == 2, "inventory has {} algebras", inventory.len());
    let tau = |image: &str| {
        let images = [("⊤".to_string(), term(image, &implication_signature()))].into();
        Translation::new(pointed_signature(), implication_signature(), images).map_err(err)
    };
    let v = check_interpretation_bounded(&tau("(→ x1 x1)")?, &source, &target, &inventory, &caps()).map_err(err)?;
    ensure!(v.is_holds(), "τ(⊤) = x1 → x1: {}", v.label());
    let v = check_interpretation_bounded(&tau("x1")?, &source, &target, &inventory, &caps()).map_err(err)?;
    let Some(w) = v.witness() else {
        return Err(format!("τ(⊤) = x1: {}", v.label()));
    };
    ensure!(recheck_interpretation_witness(&source, w, &caps()).map_err(err)?, "witness does not recheck");
    Ok("x1 → x1 Holds, x1 Fails with a rechecked witness".into())
}

fn c10_injective_theorem() -> Check {
    let d = build_default("delta", &caps()).map_err(err)?;
    let t = find_injective_theorem(d.logic_or_err().map_err(err)?, &d.inventory, 2, &caps()).map_err(err)?;
    let t = t.map(|t| t.to_string());
    ensure!(t.as_deref() == Some("(→ x x)"), "⊢_Δ: {t:?}");
    let a = assertional_logic();
    for inv in [vec![pointed_set(2, 0).map_err(err)?], pointed_sets(4).map_err(err)?] {
        let t = find_injective_theorem(&a, &inv, 3, &caps()).map_err(err)?;
        ensure!(t.is_none(), "⊢_A with {} algebras: {t:?}", inv.len());
    }
    Ok("⊢_Δ gives (→ x x); ⊢_A absent".into())
}

fn c11_admissibility() -> Check {
    let sig = implication_signature();
    let bounds = || syntactic_bounds(caps().variable_budget);
    let rules = delta_rules(2, 1).map_err(err)?;
    for r in &rules {
        let v = check_admissibility_bounded(&TheoremDecider::NablaSyntactic, r, &sig, 2, bounds()).map_err(err)?;
        ensure!(v.is_holds(), "{r}: {}", v.label());
    }
    let empty_x = Rule::axiom(Term::var("x"));
    let v = check_admissibility_bounded(&TheoremDecider::NablaSyntactic, &empty_x, &sig, 2, bounds()).map_err(err)?;
    let Some(Witness::Substitution { sigma, .. }) = v.witness() else {
        return Err(format!("∅ ▷ x: {}", v.label()));
    };
    ensure!(sigma.len() == 1 && sigma.get("x") == Some(&Term::var("x")), "σ = {sigma:?}");
    Ok(format!("{} rules admissible; ∅ ▷ x Fails with σ = {{x ↦ x}}", rules.len()))
}

fn law(dir: &Path, args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_law"))
        .current_dir(dir)
        .env_remove("LAW_CONFIG")
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code(), out.stdout)
}

fn tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).expect("readable dir") {
            let p = e.expect("dir entry").path();
            if p.is_dir() {
                stack.push(p);
            } else {
                let rel = p.strip_prefix(dir).expect("under dir").display().to_string();
                out.push((rel, std::fs::read(&p).expect("readable file")));
            }
        }
    }
    out.sort();
    out
}

fn c12_determinism() -> Check {
    let runs: Vec<Vec<&str>> = vec![
        vec!["leibniz", "-m", "ba-star/ba-star-F.json"],
        vec!["leibniz", "-m", "ba-star/ba-star-G.json"],
        vec!["reduce", "-m", "ba-star/ba-star-F.json"],
        vec!["--recheck", "check", "monotonicity", "-l", "bsl/ba-star-logic.json", "-i", "bsl/inventory"],
        vec!["check", "truth_minimal", "-l", "pair/two-valued-pair.json", "-i", "pair/b2.json"],
        vec!["--recheck", "check", "param_truth_equational", "-l", "pair/two-valued-pair.json", "-i", "pair/b2.json"],
        vec!["--recheck", "check", "truth_equational", "-l", "pair/two-valued-pair.json", "-i", "pair/b2.json"],
        vec!["check", "protoalgebraic", "-l", "asrt/assertional.json", "--depth", "3", "-i", "asrt/pointed/"],
        vec!["check", "assertional", "-l", "asrt/assertional.json", "-i", "asrt/pointed/"],
        vec!["check", "protoalgebraic", "-l", "nabla/nabla.json", "--depth", "2", "-i", "nabla/inventory"],
        vec!["filters", "-l", "classical/classical.json", "-a", "classical/inventory/b2-imp.json"],
        vec!["product", "-l", "classical/classical.json", "-l", "classical/classical.json"],
        vec!["interpret", "-t", "tau.json", "--from", "asrt/assertional.json", "--to", "classical/classical.json", "-i", "classical/inventory"],
        vec!["--recheck", "interpret", "-t", "tau-x1.json", "--from", "asrt/assertional.json", "--to", "classical/classical.json", "-i", "classical/inventory"],
        vec!["oracle", "congruences", "-a", "ba-star/b4.json"],
    ];
    let gallery = [
        ("ba-star", "ba-star"),
        ("ba-star-logic", "bsl"),
        ("two-valued-pair", "pair"),
        ("basic-assertional", "asrt"),
        ("nabla", "nabla"),
        ("classical", "classical"),
    ];
    let mut first: Option<Vec<(Option<i32>, Vec<u8>)>> = None;
    let mut files: Option<Vec<(String, Vec<u8>)>> = None;
    for _ in 0..2 {
        let dir = tempfile::tempdir().map_err(err)?;
        let mut outputs = Vec::new();
        for (name, out) in gallery {
            outputs.push(law(dir.path(), &["gallery", name, "--out", out]));
        }
        std::fs::write(dir.path().join("tau.json"), r#"{"source":{"⊤":1},"target":{"→":2},"map":{"⊤":"(→ x1 x1)"}}"#)
            .map_err(err)?;
        std::fs::write(dir.path().join("tau-x1.json"), r#"{"source":{"⊤":1},"target":{"→":2},"map":{"⊤":"x1"}}"#)
            .map_err(err)?;
        for args in &runs {
            outputs.push(law(dir.path(), args));
        }
        if let Some(bad) = outputs.iter().position(|(code, _)| *code == Some(2) || code.is_none()) {
            return Err(format!("run {bad} exited with {:?}", outputs[bad].0));
        }
        let written = tree(dir.path());
        match (&first, &files) {
            (Some(prev), Some(prev_files)) => {
                if let Some(i) = (0..outputs.len()).find(|&i| outputs[i] != prev[i]) {
                    return Err(format!("run {i} differs between repetitions"));
                }
                ensure!(written == *prev_files, "written files differ between repetitions");
            }
            _ => {
                first = Some(outputs);
                files = Some(written);
            }
        }
    }
    let n = first.map_or(0, |f| f.len());
    Ok(format!("{n} runs byte-identical, {} files identical", files.map_or(0, |f| f.len())))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("BA* reproduction", 1, c1_ba_star),
        ("oracle equivalence", 60, c2_oracle_equivalence),
        ("⊢_∇ theorem characterization", 30, c3_nabla_theorems),
        ("protoalgebraic witnesses", 30, c4_proto_witnesses),
        ("pointed-set models", 10, c5_pointed_sets),
        ("truth-minimal vs PTE", 10, c6_truth_minimal_vs_pte),
        ("truth-equational uniqueness", 10, c7_truth_equational),
        ("product filter decomposition", 30, c8_product_filters),
        ("interpretation check", 10, c9_interpretation),
        ("injective theorem", 30, c10_injective_theorem),
        ("admissibility", 60, c11_admissibility),
        ("determinism", 120, c12_determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let line = match outcome {
            Ok(_) if elapsed > Duration::from_secs(limit) => Err(format!("took {elapsed:.2?}, limit {limit} s")),
            other => other,
        };
        match line {
            Ok(detail) => println!("PASS {:>2} {name} ({elapsed:.2?}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({elapsed:.2?}): {why}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
