use std::collections::BTreeMap;

use proptest::prelude::*;

use law_core::algebra::{
    coarsest_congruence_below_oracle, congruences_bruteforce, direct_product, enumerate_terms, is_congruence,
    nonindexed_product, product_coords, quotient, FiniteAlgebra, Partition, Signature, Term, Valuation,
};
use law_core::logic::{
    entails, CanonicalEngine, FilterDecision, FilterLattice, LogicPresentation, Rule,
};
use law_core::matrix::{leibniz_congruence, reduce};
use law_core::translation::Translation;
use law_core::{Caps, Matrix, Subset};

fn sig() -> Signature {
    Signature::from_pairs([("f", 2), ("g", 1)]).unwrap()
}

/// Random algebra over `{f:2, g:1}` with 1..=max elements.
fn arb_algebra(max: usize) -> impl Strategy<Value = FiniteAlgebra> {
    (1..=max).prop_flat_map(|n| {
        (
            prop::collection::vec(0..n, n * n),
            prop::collection::vec(0..n, n),
        )
            .prop_map(move |(f, g)| {
                let mut tables = BTreeMap::new();
                tables.insert("f".to_string(), f);
                tables.insert("g".to_string(), g);
                FiniteAlgebra::new("R", sig(), n, tables).unwrap()
            })
    })
}

fn arb_algebra_with_subset(max: usize) -> impl Strategy<Value = (FiniteAlgebra, Subset)> {
    arb_algebra(max).prop_flat_map(|a| {
        let n = a.size();
        (Just(a), 0..1u64 << n).prop_map(|(a, m)| (a, Subset::from_mask(m)))
    })
}

fn arb_term(depth: u32) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(Term::var("x")), Just(Term::var("y"))];
    leaf.prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::binary("f", a, b)),
            inner.prop_map(|a| Term::unary("g", a)),
        ]
    })
}

fn valuation(x: usize, y: usize) -> Valuation {
    [("x", x), ("y", y)].into_iter().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn refinement_matches_bruteforce((a, f) in arb_algebra_with_subset(5)) {
        let caps = Caps::default();
        let split = Partition::split(a.size(), &f);
        let oracle = coarsest_congruence_below_oracle(&a, &split, &caps).unwrap();
        let m = Matrix::new(a, f).unwrap();
        prop_assert_eq!(leibniz_congruence(&m), oracle);
    }

    #[test]
    fn reduction_is_reduced((a, f) in arb_algebra_with_subset(5)) {
        let (r, omega) = reduce(&Matrix::new(a.clone(), f).unwrap());
        prop_assert!(r.is_reduced());
        prop_assert_eq!(r.size(), omega.num_blocks());
    }

    #[test]
    fn quotient_map_is_a_homomorphism(a in arb_algebra(4)) {
        for theta in congruences_bruteforce(&a, &Caps::default()).unwrap() {
            prop_assert!(is_congruence(&a, &theta));
            let q = quotient(&a, &theta).unwrap();
            let proj: Vec<usize> = (0..a.size()).map(|x| theta.block_of(x)).collect();
            prop_assert!(a.is_homomorphism(&proj, &q));
        }
    }

    #[test]
    fn product_projections_and_evaluation(a in arb_algebra(3), b in arb_algebra(3), t in arb_term(3)) {
        let p = direct_product(&[a.clone(), b.clone()], &Caps::default()).unwrap();
        let sizes = [a.size(), b.size()];
        let pi: Vec<Vec<usize>> = (0..2)
            .map(|i| (0..p.size()).map(|e| product_coords(e, &sizes)[i]).collect())
            .collect();
        prop_assert!(p.is_homomorphism(&pi[0], &a));
        prop_assert!(p.is_homomorphism(&pi[1], &b));
        for e1 in 0..p.size() {
            for e2 in 0..p.size() {
                let v = p.eval(&t, &valuation(e1, e2)).unwrap();
                let va = a.eval(&t, &valuation(pi[0][e1], pi[0][e2])).unwrap();
                let vb = b.eval(&t, &valuation(pi[1][e1], pi[1][e2])).unwrap();
                prop_assert_eq!(product_coords(v, &sizes), vec![va, vb]);
            }
        }
    }

    #[test]
    fn nonindexed_product_acts_coordinatewise(a in arb_algebra(3), b in arb_algebra(3)) {
        let p = nonindexed_product(&a, &b, &Caps::default()).unwrap();
        // only same-arity pairs become symbols
        prop_assert!(p.signature().arity("f⊗g").is_none());
        let sizes = [a.size(), b.size()];
        for e1 in 0..p.size() {
            let c1 = product_coords(e1, &sizes);
            let gg = product_coords(p.apply("g⊗g", &[e1]).unwrap(), &sizes);
            prop_assert_eq!(gg, vec![a.apply("g", &[c1[0]]).unwrap(), b.apply("g", &[c1[1]]).unwrap()]);
            for e2 in 0..p.size() {
                let c2 = product_coords(e2, &sizes);
                let ff = product_coords(p.apply("f⊗f", &[e1, e2]).unwrap(), &sizes);
                prop_assert_eq!(ff, vec![a.apply("f", &[c1[0], c2[0]]).unwrap(), b.apply("f", &[c1[1], c2[1]]).unwrap()]);
            }
        }
    }

    #[test]
    fn translation_commutes_with_evaluation(a in arb_algebra(4), t in arb_term(3), img in arb_term(2)) {
        // τ(f) = img(x1, x2), τ(g) = (f x1 x1)
        let rename = |t: &Term| t.replace_var("x", &Term::var("x1")).replace_var("y", &Term::var("x2"));
        let mut images = BTreeMap::new();
        images.insert("f".to_string(), rename(&img));
        images.insert("g".to_string(), Term::binary("f", Term::var("x1"), Term::var("x1")));
        let tau = Translation::new(sig(), sig(), images).unwrap();
        let r = tau.reduct(&a).unwrap();
        let tt = tau.translate_term(&t).unwrap();
        for x in 0..a.size() {
            for y in 0..a.size() {
                prop_assert_eq!(a.eval(&tt, &valuation(x, y)).unwrap(), r.eval(&t, &valuation(x, y)).unwrap());
            }
        }
    }

    #[test]
    fn rule_filters_form_a_closure_system(a in arb_algebra(4), premise in arb_term(2), concl in arb_term(2)) {
        let l = LogicPresentation::from_rules("R", sig(), vec![Rule::new([premise], concl)]).unwrap();
        let lat = FilterLattice::new(&l, &a, &Caps::default()).unwrap();
        let fs = lat.filters();
        prop_assert!(fs.contains(&Subset::full(a.size())));
        for f in fs {
            for g in fs {
                prop_assert!(fs.contains(&f.intersection(g)));
            }
        }
    }

    #[test]
    fn suszko_is_monotone(a in arb_algebra(4), premise in arb_term(2), concl in arb_term(2)) {
        let l = LogicPresentation::from_rules("R", sig(), vec![Rule::new([premise], concl)]).unwrap();
        let lat = FilterLattice::new(&l, &a, &Caps::default()).unwrap();
        for f in lat.filters() {
            let sf = lat.suszko(f).unwrap();
            prop_assert!(sf.refines(lat.omega(f).unwrap()));
            for g in lat.filters().iter().filter(|g| f.is_subset(g)) {
                prop_assert!(sf.refines(&lat.suszko(g).unwrap()));
            }
        }
    }

    #[test]
    fn canonical_violations_recheck(
        (b, bf) in arb_algebra_with_subset(3),
        (a, g) in arb_algebra_with_subset(3),
    ) {
        let l = LogicPresentation::from_matrices("M", sig(), vec![Matrix::new(b, bf).unwrap()]).unwrap();
        let engine = CanonicalEngine::new(&l, &a, &Caps::default()).unwrap();
        if let FilterDecision::NotFilter(v) = engine.decide(&g) {
            prop_assert!(entails(&l, v.rule.premises(), v.rule.conclusion()).unwrap());
            let val: Valuation = v.valuation.iter().map(|(k, x)| (&**k, *x)).collect();
            for p in v.rule.premises() {
                prop_assert!(g.contains(a.eval(p, &val).unwrap()));
            }
            prop_assert!(!g.contains(a.eval(v.rule.conclusion(), &val).unwrap()));
        }
    }
}

#[test]
fn enumerated_terms_are_distinct() {
    let ts = enumerate_terms(&sig(), &["x", "y"], 2);
    let set: std::collections::HashSet<&Term> = ts.iter().collect();
    assert_eq!(set.len(), ts.len());
}
