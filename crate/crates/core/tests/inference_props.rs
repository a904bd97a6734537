mod common;

use proptest::prelude::*;
use skill::inference::{brute_force_probability, query_probability, KnowledgeBase, WorldScope};
use skill::logic::Theory;
use skill::rng::seeded_rng;

const DEPTH: usize = 32;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn exact_inference_matches_world_enumeration(seed in any::<u64>()) {
        let case = common::random_case(seed);
        prop_assert!(case.choice_vars <= 13);
        let kb = KnowledgeBase::new(&case.program).unwrap();
        let theory = Theory::from_clauses(&case.theory);
        for q in &case.queries {
            let exact = query_probability(&kb, &theory, q, DEPTH);
            prop_assert!(!exact.truncated);
            prop_assert!((0.0..=1.0).contains(&exact.probability));
            let oracle = brute_force_probability(&kb, &theory, q, DEPTH, WorldScope::ProofVars).unwrap();
            prop_assert!((exact.probability - oracle).abs() <= 1e-9, "{} vs {} for {}\n{}", exact.probability, oracle, q, case.text);
        }
    }

    #[test]
    fn proof_scope_agrees_with_all_worlds(seed in any::<u64>()) {
        let case = common::random_case_with(&mut seeded_rng(seed), 8);
        let kb = KnowledgeBase::new(&case.program).unwrap();
        let theory = Theory::from_clauses(&case.theory);
        for q in &case.queries {
            let a = brute_force_probability(&kb, &theory, q, DEPTH, WorldScope::ProofVars).unwrap();
            let b = brute_force_probability(&kb, &theory, q, DEPTH, WorldScope::AllVars).unwrap();
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }

    #[test]
    fn adding_a_clause_never_lowers_probabilities(seed in any::<u64>(), split in 0usize..3) {
        let case = common::random_case(seed);
        let kb = KnowledgeBase::new(&case.program).unwrap();
        let k = split.min(case.theory.len() - 1);
        let parent = Theory::from_clauses(&case.theory[..k]);
        let child = parent.union(&Theory::single(&case.theory[k]));
        for q in &case.queries {
            let p = query_probability(&kb, &parent, q, DEPTH).probability;
            let c = query_probability(&kb, &child, q, DEPTH).probability;
            prop_assert!(c >= p - 1e-12, "{c} < {p}");
        }
    }

    #[test]
    fn disjunction_lies_within_bounds(seed in any::<u64>()) {
        let case = common::random_case(seed);
        prop_assume!(case.theory.len() >= 2);
        let kb = KnowledgeBase::new(&case.program).unwrap();
        let h1 = Theory::single(&case.theory[0]);
        let h2 = Theory::from_clauses(&case.theory[1..]);
        let both = h1.union(&h2);
        for q in &case.queries {
            let p1 = query_probability(&kb, &h1, q, DEPTH).probability;
            let p2 = query_probability(&kb, &h2, q, DEPTH).probability;
            let p = query_probability(&kb, &both, q, DEPTH).probability;
            let (lo, hi) = skill::search::disjunction_bounds(p1, p2).unwrap();
            prop_assert!(p >= lo - 1e-9 && p <= hi + 1e-9, "{p} outside [{lo}, {hi}]");
        }
    }
}
