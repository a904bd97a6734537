mod common;

use proptest::prelude::*;
use skill::logic::{Atom, Term};
use skill::program::{format_examples, parse_examples, parse_program, ProbExample};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn printed_programs_parse_back(seed in any::<u64>()) {
        let case = common::random_case(seed);
        let printed = case.program.to_string();
        let again = parse_program(&printed).map_err(|e| TestCaseError::fail(format!("{e}\n{printed}")))?;
        prop_assert_eq!(again, case.program);
    }

    #[test]
    fn printed_examples_parse_back(values in prop::collection::vec(0.0f64..=1.0, 1..20)) {
        let examples: Vec<ProbExample> = values
            .iter()
            .enumerate()
            .map(|(i, &v)| ProbExample { atom: Atom::new("t", vec![Term::constant(&format!("c{i}"))]), expected: v })
            .collect();
        prop_assert_eq!(parse_examples(&format_examples(&examples)).unwrap(), examples);
    }
}
