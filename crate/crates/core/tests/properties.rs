mod common;

use mauto::automata::{parse_automaton, print_automaton, TupleWord};
use mauto::logic::{parse_formula, Formula};
use mauto::mso::{compile_mso, mso_holds};
use mauto::structures::{cnf_add, cnf_cmp, skolem_decode, skolem_encode, Cnf};
use mauto::theories::presburger::define_numeral;
use mauto::theories::{registry, Element};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use common::{random_automaton, tuples, two, words, MsoGen};

fn cnf() -> impl Strategy<Value = Cnf> {
    prop::collection::vec(0u64..5, 0..5).prop_map(Cnf::from_word)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn double_complement_is_identity(seed in any::<u64>(), k in 1usize..=2) {
        let a = random_automaton(&mut StdRng::seed_from_u64(seed), k);
        let cc = a.complement().unwrap().complement().unwrap();
        for w in tuples(&common::letters(), k, 2) {
            prop_assert_eq!(cc.accepts(&w).unwrap(), a.accepts(&w).unwrap());
        }
    }

    #[test]
    fn determinize_and_trim_preserve_language(seed in any::<u64>(), k in 1usize..=2) {
        let a = random_automaton(&mut StdRng::seed_from_u64(seed), k);
        let d = a.determinize().unwrap();
        let t = a.trim().unwrap();
        for w in tuples(&common::letters(), k, 2) {
            let x = a.accepts(&w).unwrap();
            prop_assert_eq!(d.accepts(&w).unwrap(), x);
            prop_assert_eq!(t.accepts(&w).unwrap(), x);
        }
    }

    #[test]
    fn text_format_round_trips(seed in any::<u64>(), k in 1usize..=2) {
        let a = random_automaton(&mut StdRng::seed_from_u64(seed), k).renumbered();
        let text = print_automaton(&a);
        let b = parse_automaton(&text, None).unwrap();
        prop_assert_eq!(print_automaton(&b), text);
        for w in tuples(&common::letters(), k, 2) {
            prop_assert_eq!(b.accepts(&w).unwrap(), a.accepts(&w).unwrap());
        }
    }

    #[test]
    fn found_words_are_accepted(seed in any::<u64>(), k in 1usize..=2) {
        let a = random_automaton(&mut StdRng::seed_from_u64(seed), k);
        match a.find_word().unwrap() {
            Some(w) => prop_assert!(a.accepts(&w).unwrap()),
            None => prop_assert!(a.is_empty().unwrap()),
        }
    }

    #[test]
    fn mso_compile_matches_semantics(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let phi = MsoGen::new(&mut rng).sentence(3);
        let a = compile_mso(&phi, 1, two()).unwrap();
        for w in words(&common::letters(), 5) {
            let w = TupleWord(vec![w]);
            prop_assert_eq!(a.accepts(&w).unwrap(), mso_holds(&phi, &w, &two()).unwrap());
        }
    }

    #[test]
    fn cnf_addition_laws(a in cnf(), b in cnf(), c in cnf()) {
        prop_assert_eq!(cnf_add(&cnf_add(&a, &b), &c), cnf_add(&a, &cnf_add(&b, &c)));
        prop_assert_eq!(cnf_add(&a, &Cnf::zero()), a.clone());
        prop_assert_eq!(cnf_add(&Cnf::zero(), &a), a.clone());
        let s = cnf_add(&a, &b);
        prop_assert!(cnf_cmp(&a, &s).is_le());
        prop_assert!(cnf_cmp(&b, &s).is_le());
        if cnf_cmp(&b, &c).is_lt() {
            prop_assert!(cnf_cmp(&cnf_add(&a, &b), &cnf_add(&a, &c)).is_lt());
        }
    }

    #[test]
    fn skolem_codes_round_trip(n in 1u64..1_000_000) {
        let w = skolem_encode(n).unwrap();
        prop_assert_ne!(w.last(), Some(&0));
        prop_assert_eq!(skolem_decode(&w), Some(n));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn presburger_order_matches_numerals(a in 0u64..40, b in 0u64..40) {
        let p = registry::presburger();
        let le = Formula::exists_many(
            &["x", "y"],
            Formula::and([
                define_numeral(a, "x"),
                define_numeral(b, "y"),
                parse_formula("(exists d (rel plus x d y))", p.signature()).unwrap(),
            ]),
        );
        prop_assert_eq!(p.decide(&le).unwrap(), a <= b);
        let env = [("x".to_string(), Element::Nat(a)), ("y".to_string(), Element::Nat(b))]
            .into_iter()
            .collect();
        let sum = parse_formula("(exists z (and (rel plus x y z) (rel plus z z z)))", p.signature()).unwrap();
        prop_assert_eq!(p.eval(&sum, &env).unwrap(), a + b == 0);
    }
}
