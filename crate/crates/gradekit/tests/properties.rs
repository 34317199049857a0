use gradekit::dsl::{parse_structure, structure_to_dsl, RandomSpec};
use gradekit::json::{raw_structure_from_json, structure_to_json};
use gradekit::random::{random_formula, random_structure, rng};
use gradekit_core::extensions::{inflate, is_elementary_ext_noid};
use gradekit_core::formula::types::TypeOracle;
use gradekit_core::formula::{evaluate, parse_formula, Compiled};
use gradekit_core::indisc::{full_indisc, indisc_pair, indisc_pair_by_closure, quotient};
use gradekit_core::lattice::{equivalence_report, grade_matrix, lattice, matrix_violations, Regime};
use gradekit_core::relativity::{
    galois_c, galois_e, is_relativeness_correspondence, quotient_automorphisms, rel_grade, QuotientView,
};
use gradekit_core::symmetry::{is_automorphism, sym_grade};
use gradekit_core::{Formula, GradeId, Language, Signature, Structure, Symbol};
use proptest::prelude::*;

fn signature(k: usize) -> Signature {
    match k % 6 {
        0 => Signature::relational(&[("R", 2)]).unwrap(),
        1 => Signature::relational(&[("P", 1), ("R", 2)]).unwrap(),
        2 => Signature::relational(&[("T", 3)]).unwrap(),
        3 => Signature::new(vec![], vec![Symbol::new("f", 1)]).unwrap(),
        4 => Signature::new(vec![Symbol::new("P", 1)], vec![Symbol::new("f", 1), Symbol::new("c", 0)]).unwrap(),
        _ => Signature::new(vec![Symbol::new("R", 2)], vec![Symbol::new("g", 2)]).unwrap(),
    }
}

fn structure(seed: u64, size: usize, k: usize, density: f64) -> Structure {
    random_structure(seed, size, &RandomSpec::new(signature(k), density)).unwrap()
}

fn arb_structure() -> impl Strategy<Value = Structure> {
    (any::<u64>(), 1usize..=6, 0usize..6, 0.0f64..=1.0).prop_map(|(seed, n, k, d)| structure(seed, n, k, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dsl_round_trip(s in arb_structure()) {
        prop_assert_eq!(parse_structure(&structure_to_dsl(&s)).unwrap(), s);
    }

    #[test]
    fn json_round_trip(s in arb_structure()) {
        let back = raw_structure_from_json(&structure_to_json(&s)).unwrap().build().unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn formula_display_reparses(s in arb_structure(), seed: u64) {
        let mut r = rng(seed);
        for lang in [Language::WithIdentity, Language::WithoutIdentity] {
            let phi = random_formula(&mut r, s.signature(), &["x", "y"], 3, lang);
            let back = parse_formula(&phi.to_string(), s.signature(), lang).unwrap();
            prop_assert!(back.alpha_eq(&phi), "{} vs {}", phi, back);
        }
    }

    #[test]
    fn evaluation_is_compositional(s in arb_structure(), seed: u64) {
        let mut r = rng(seed);
        let phi = random_formula(&mut r, s.signature(), &["x", "y"], 2, Language::WithIdentity);
        let psi = random_formula(&mut r, s.signature(), &["x", "y"], 2, Language::WithIdentity);
        let ev = |f: &Formula, a: usize, b: usize| Compiled::new(s.signature(), f, &["x", "y"]).unwrap().eval(&s, &[a, b]);
        for a in 0..s.size() {
            for b in 0..s.size() {
                let (p, q) = (ev(&phi, a, b), ev(&psi, a, b));
                prop_assert_eq!(ev(&Formula::not(phi.clone()), a, b), !p);
                prop_assert_eq!(ev(&Formula::and(phi.clone(), psi.clone()), a, b), p && q);
                prop_assert_eq!(ev(&Formula::or(phi.clone(), psi.clone()), a, b), p || q);
                prop_assert_eq!(ev(&Formula::implies(phi.clone(), psi.clone()), a, b), !p || q);
                prop_assert_eq!(ev(&Formula::iff(phi.clone(), psi.clone()), a, b), p == q);
                let all = (0..s.size()).all(|c| ev(&phi, a, c));
                let some = (0..s.size()).any(|c| ev(&phi, a, c));
                prop_assert_eq!(ev(&Formula::forall("y", phi.clone()), a, b), all);
                prop_assert_eq!(ev(&Formula::exists("y", phi.clone()), a, b), some);
                let env = [("x".to_string(), a), ("y".to_string(), b)].into_iter().collect();
                prop_assert_eq!(evaluate(&s, &phi, &env).unwrap(), p);
            }
        }
    }

    #[test]
    fn indiscernibles_agree_everywhere(s in arb_structure(), seed: u64) {
        let part = full_indisc(&s).unwrap();
        let mut r = rng(seed);
        for _ in 0..10 {
            let phi = random_formula(&mut r, s.signature(), &["x", "y"], 2, Language::WithoutIdentity);
            let c = Compiled::new(s.signature(), &phi, &["x", "y"]).unwrap();
            for a in 0..s.size() {
                for b in 0..s.size() {
                    if !part.same(a, b) {
                        continue;
                    }
                    for e in 0..s.size() {
                        prop_assert_eq!(c.eval(&s, &[a, e]), c.eval(&s, &[b, e]), "{} at {},{},{}", phi, a, b, e);
                    }
                }
            }
        }
    }

    #[test]
    fn fast_path_matches_closure(seed: u64, n in 1usize..=6, d in 0.0f64..=1.0, k in 0usize..3) {
        let s = structure(seed, n, k, d);
        for a in 0..n {
            for b in 0..n {
                prop_assert_eq!(indisc_pair(&s, a, b).unwrap(), indisc_pair_by_closure(&s, a, b).unwrap());
            }
        }
    }

    #[test]
    fn quotient_is_a_congruence_image(s in arb_structure()) {
        let q = quotient(&s).unwrap();
        for (p, sym) in s.signature().predicates().iter().enumerate() {
            for t in gradekit_core::structure::all_tuples(s.size(), sym.arity) {
                let image: Vec<usize> = t.iter().map(|&e| q.class_of[e]).collect();
                prop_assert_eq!(s.holds(p, &t), q.quotient.holds(p, &image));
            }
        }
        // The quotient has no further indiscernibles.
        prop_assert!(full_indisc(&q.quotient).unwrap().is_discrete());
    }

    #[test]
    fn designated_grades_are_equivalences(s in arb_structure()) {
        let m = grade_matrix(&s, 12).unwrap();
        for st in equivalence_report(&m) {
            if st.grade.is_equivalence() {
                prop_assert!(st.is_equivalence(), "{}", st.grade);
            }
        }
        let regime = if s.signature().is_relational() { Regime::FiniteRelational } else { Regime::FiniteArbitrary };
        prop_assert!(matrix_violations(&m, &lattice(regime)).is_empty());
    }

    #[test]
    fn witnesses_are_valid(s in arb_structure()) {
        for a in 0..s.size() {
            for b in 0..s.size() {
                for g in [GradeId::SymTotal, GradeId::SymPair, GradeId::SymBare] {
                    if let Some(p) = sym_grade(&s, g, a, b) {
                        prop_assert!(is_automorphism(&s, &p));
                        prop_assert_eq!(p.apply(a), b);
                    }
                }
                for g in [GradeId::RelTotal, GradeId::RelPair, GradeId::RelBare] {
                    if let Some(c) = rel_grade(&s, g, a, b).unwrap() {
                        prop_assert!(is_relativeness_correspondence(&s, &s, &c));
                        prop_assert!(c.contains(a, b));
                    }
                }
            }
        }
    }

    #[test]
    fn c_after_e_is_identity(s in arb_structure()) {
        let v = QuotientView::new(&s).unwrap();
        for pi in quotient_automorphisms(&v, 20) {
            let e = galois_e(&v, &v, &pi).unwrap();
            prop_assert_eq!(galois_c(&v, &v, &e).unwrap(), pi);
        }
    }

    #[test]
    fn separators_separate(s in arb_structure()) {
        for lang in [Language::WithIdentity, Language::WithoutIdentity] {
            let o = TypeOracle::new(&s, lang, 2, 2).unwrap();
            for a in 0..s.size() {
                for b in 0..s.size() {
                    if let Some(f) = o.separator(&[a, b], &[b, a]) {
                        prop_assert!(f.in_language(lang));
                        let c = Compiled::new(s.signature(), &f, &["x", "y"]).unwrap();
                        prop_assert!(c.eval(&s, &[a, b]) && !c.eval(&s, &[b, a]), "{}", f);
                    }
                }
            }
        }
    }

    #[test]
    fn inflation_is_elementary(s in arb_structure(), a in 0usize..6, k in 1usize..=3) {
        let a = a % s.size();
        let inf = inflate(&s, a, k).unwrap();
        let part = full_indisc(&inf.extended).unwrap();
        prop_assert!(inf.clones.iter().all(|&d| part.same(a, d)));
        let id: Vec<usize> = (0..s.size()).collect();
        prop_assert!(is_elementary_ext_noid(&s, &inf.extended, &id).unwrap());
    }

    #[test]
    fn random_structures_are_pure(seed: u64, n in 1usize..=12, k in 0usize..6) {
        prop_assert_eq!(structure(seed, n, k, 0.5), structure(seed, n, k, 0.5));
    }
}
