mod common;

use std::collections::BTreeSet;

use amalgam::structures::{
    aut_check, canonical_form, canonical_form_colored, embeddings, enumerate_structures, join,
    parse_class, ClassDefinition, StructureRecord,
};
use amalgam::Context;
use common::properties::*;
use common::*;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

#[test]
fn counts_match_brute_force() {
    for class in small_classes() {
        for n in 0..=4 {
            let Some(labeled) = labeled_members(&class, n, 20) else {
                continue;
            };
            let keys: BTreeSet<_> = labeled.iter().map(naive_canonical_key).collect();
            let reps = enumerate_structures(&class, n);
            assert_eq!(reps.len(), keys.len(), "{} n={n}", class.name());
            let rep_keys: BTreeSet<_> = reps
                .iter()
                .map(|c| naive_canonical_key(&c.structure))
                .collect();
            assert_eq!(rep_keys, keys, "{} n={n}", class.name());
        }
    }
}

#[test]
fn known_counts() {
    let lo = ClassDefinition::linear_orders();
    let sp2 = ClassDefinition::s_permutations(2).unwrap();
    let clo2 = ClassDefinition::colored_linear_orders(2).unwrap();
    for n in 0..=5 {
        let fact: usize = (1..=n).product();
        assert_eq!(enumerate_structures(&lo, n).len(), 1);
        assert_eq!(enumerate_structures(&sp2, n).len(), fact);
        assert_eq!(enumerate_structures(&clo2, n).len(), 1 << n);
        assert_eq!(
            enumerate_structures(&ClassDefinition::finite_sets(), n).len(),
            1
        );
    }
}

#[test]
fn aut_orders_match_embeddings() {
    for class in small_classes() {
        let ctx = Context::new(class);
        for n in 0..=5 {
            for c in ctx.structures(n).iter() {
                let e = embeddings(&c.structure, &c.structure).unwrap().len() as u64;
                assert_eq!(c.aut_order, e);
                if n <= 4 {
                    assert_eq!(c.aut_order, naive_automorphisms(&c.structure) as u64);
                }
            }
        }
    }
}

#[test]
fn hereditary() {
    for class in small_classes() {
        let ctx = Context::new(class.clone());
        for n in 1..=5 {
            for c in ctx.structures(n).iter() {
                for sub in subsets(&(0..n).collect::<Vec<_>>()) {
                    assert!(class.is_member(&c.structure.induced(&sub)).unwrap());
                }
            }
        }
    }
}

#[test]
fn join_of_orders_is_two_permutations() {
    let lo = ClassDefinition::linear_orders();
    let j = join(&lo, &lo);
    let sp2 = ClassDefinition::s_permutations(2).unwrap();
    for n in 0..=5 {
        let a = enumerate_structures(&j, n);
        let b = enumerate_structures(&sp2, n);
        assert_eq!(a.len(), b.len());
        let ca: Vec<_> = a.iter().map(|c| c.certificate.clone()).collect();
        let cb: Vec<_> = b.iter().map(|c| c.certificate.clone()).collect();
        assert_eq!(ca, cb);
    }
}

#[test]
fn aut_scans() {
    let fs = Context::new(ClassDefinition::finite_sets());
    assert!(!aut_check(&fs, 1, 2).passed);
    assert!(aut_check(&fs, 6, 3).passed);
    assert!(!aut_check(&fs, 6, 5).passed);
    let cs = Context::new(ClassDefinition::colored_sets(2).unwrap());
    assert!(!aut_check(&cs, 1, 3).passed);
    for class in [
        ClassDefinition::colored_linear_orders(3).unwrap(),
        ClassDefinition::s_permutations(3).unwrap(),
    ] {
        assert!(aut_check(&Context::new(class), 1, 4).passed);
    }
}

#[test]
fn records_round_trip() {
    let class = ClassDefinition::colored_linear_orders(2).unwrap();
    let ctx = Context::new(class.clone());
    for c in ctx.structures(3).iter() {
        let r = StructureRecord::new(class.signature(), &c.structure);
        let json = serde_json::to_string(&r).unwrap();
        let back: StructureRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_structure(class.signature()).unwrap(), c.structure);
    }
}

#[test]
fn class_file_with_forbidden_pattern() {
    // graphs without an induced path on three vertices: disjoint cliques
    let text = r#"
name = "cliques"
[[relation]]
name = "e"
arity = 2
[[axiom]]
tag = "irreflexive-symmetric"
relations = ["e"]
[[forbidden]]
size = 3
tuples = { e = [[0, 1], [1, 0], [1, 2], [2, 1]] }
"#;
    let class = parse_class(text).unwrap();
    // partitions of n into parts
    let expected = [1, 1, 2, 3, 5, 7];
    for (n, &p) in expected.iter().enumerate() {
        assert_eq!(enumerate_structures(&class, n).len(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_form_is_invariant(seed in any::<u64>(), n in 0usize..=6, density in 0.1f64..0.9) {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let s = random_structure(&mut rng, &[2, 1, 3], n, density);
        prop_assert_eq!(canonical_form_invariant(&mut rng, &s), Ok(()));
    }

    #[test]
    fn certificates_separate_non_isomorphic(seed in any::<u64>(), n in 0usize..=5) {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let a = random_structure(&mut rng, &[2], n, 0.5);
        let b = random_structure(&mut rng, &[2], n, 0.5);
        let same = canonical_form(&a).certificate == canonical_form(&b).certificate;
        prop_assert_eq!(same, naive_isomorphic(&a, &b));
    }

    #[test]
    fn colored_canonical_form_respects_colors(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let s = random_structure(&mut rng, &[2], n, 0.5);
        let colors: Vec<u32> = (0..n).map(|_| rng.gen_range(0..3)).collect();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let t = relabel(&s, &perm);
        let mut tc = vec![0; n];
        for p in 0..n {
            tc[perm[p]] = colors[p];
        }
        prop_assert_eq!(canonical_form_colored(&s, &colors).certificate, canonical_form_colored(&t, &tc).certificate);
    }

    #[test]
    fn members_stay_members_under_relabeling(seed in any::<u64>(), n in 0usize..=6) {
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let class = ClassDefinition::s_permutations(2).unwrap();
        let reps = enumerate_structures(&class, n);
        let rep = reps.choose(&mut rng).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let t = relabel(&rep.structure, &perm);
        prop_assert!(class.is_member(&t).unwrap());
        prop_assert_eq!(&canonical_form(&t).certificate, &rep.certificate);
    }
}
