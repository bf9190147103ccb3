mod common;

use proptest::prelude::*;

use welded_milnor::action::{action, KReducedAction};
use welded_milnor::arrows::{expand_letters, realize_sorted, surgery, tree_word, ArrowPresentation, CommTree, Slot};
use welded_milnor::gauss::{LinkCode, StringLinkCode};
use welded_milnor::invariants::milnor_table;
use welded_milnor::words::linear_commutator;
use welded_milnor::{expand, Execution, Monomial, TruncationPolicy, Word};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn codes_round_trip_through_text(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = common::rng(seed);
        let code = common::code(&mut rng, n, 8);
        let text = code.to_string();
        prop_assert_eq!(text.parse::<StringLinkCode>().unwrap(), code.clone());
        let inline = text.trim_end().replace('\n', " / ");
        prop_assert_eq!(inline.parse::<StringLinkCode>().unwrap(), code.clone());
        prop_assert_eq!(text.parse::<LinkCode>().unwrap(), code.closure());
    }

    #[test]
    fn preferred_longitudes_have_no_pure_powers(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = common::rng(seed);
        let code = common::code(&mut rng, n, 7);
        let q = 4;
        let lams = code.longitude_series(q).unwrap();
        for (i, l) in lams.iter().enumerate() {
            for s in 1..=q {
                prop_assert!(l.coefficient(&Monomial::new(&vec![i + 1; s])).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn realizer_is_sound(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = common::rng(seed);
        let words: Vec<Word> = (0..n).map(|_| common::word(&mut rng, n, 8)).collect();
        let lams = realize_sorted(&words).unwrap().longitude_series(4).unwrap();
        let policy = TruncationPolicy::total_degree(n, 4);
        for (i, w) in words.iter().enumerate() {
            let framed = Word::power_of(n, i + 1, -w.exponent_sum(i + 1)).unwrap().multiply(w).unwrap();
            prop_assert_eq!(&lams[i], &expand(&framed, &policy).unwrap());
        }
    }

    #[test]
    fn slots_rebuild_from_letters(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = common::rng(seed);
        let w = common::word(&mut rng, n, 10);
        let letters = expand_letters(&Slot::from_word(1, &w), n).unwrap();
        let rebuilt = Slot::from_letters(1, n, letters.clone());
        prop_assert_eq!(expand_letters(&rebuilt, n).unwrap(), letters);
        prop_assert_eq!(rebuilt.word(n).unwrap(), w);
    }

    #[test]
    fn linear_trees_give_linear_commutators(gens in prop::collection::vec(1usize..=3, 1..6)) {
        let t = CommTree::linear(&gens).unwrap();
        let entries: Vec<Word> = gens.iter().map(|&g| Word::generator(3, g).unwrap()).collect();
        prop_assert_eq!(tree_word(&t, 3).unwrap(), linear_commutator(&entries).unwrap());
    }

    #[test]
    fn composition_is_associative(seed in any::<u64>(), n in 1usize..=3, k in 1usize..=2) {
        let mut rng = common::rng(seed);
        let fs: Vec<KReducedAction> = (0..3).map(|_| action(&common::code(&mut rng, n, 5), k).unwrap()).collect();
        let left = fs[0].compose(&fs[1]).unwrap().compose(&fs[2]).unwrap();
        let right = fs[0].compose(&fs[1].compose(&fs[2]).unwrap()).unwrap();
        prop_assert_eq!(left.images(), right.images());
        prop_assert_eq!(left, right);
    }

    #[test]
    fn tables_respect_the_length_bound(seed in any::<u64>(), n in 1usize..=3, k in 1usize..=2) {
        let mut rng = common::rng(seed);
        let t = milnor_table(&common::code(&mut rng, n, 6), k, 100).unwrap();
        for i in t.entries().keys() {
            prop_assert!(i.r() <= k && i.len() <= n * k);
        }
    }

    #[test]
    fn execution_strategies_agree(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = common::rng(seed);
        let code = common::code(&mut rng, n, 8);
        let p = TruncationPolicy::total_degree(n, 4);
        prop_assert_eq!(
            code.longitudes_in(&p, Execution::Sequential).unwrap(),
            code.longitudes_in(&p, Execution::Parallel).unwrap()
        );
    }

    #[test]
    fn cancelling_pairs_do_not_change_longitudes(seed in any::<u64>(), n in 1usize..=3) {
        let mut rng = common::rng(seed);
        let words: Vec<Word> = (0..n).map(|_| common::word(&mut rng, n, 5)).collect();
        let mut p = ArrowPresentation::from_words(&words).unwrap();
        let before = surgery(&p).longitude_series(4).unwrap();
        let i = rand::Rng::gen_range(&mut rng, 1..=n);
        let j = rand::Rng::gen_range(&mut rng, 1..=n);
        p.push_slot(Slot::from_letters(i, n, [(j, welded_milnor::Sign::Plus), (j, welded_milnor::Sign::Minus)])).unwrap();
        prop_assert_eq!(surgery(&p).longitude_series(4).unwrap(), before);
    }
}
