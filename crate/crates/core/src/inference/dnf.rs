use std::collections::{BTreeMap, HashMap};

use super::{Choice, ChoiceSet, ChoiceTable, Dnf};

/// Branching variable: a whole fact, or a whole disjunction.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Split {
    Fact(u32),
    Disjunction(u32),
}

fn split_of(c: &Choice) -> Split {
    match *c {
        Choice::Fact(i) => Split::Fact(i),
        Choice::Alt { ad, .. } => Split::Disjunction(ad),
    }
}

struct Evaluator<'a> {
    table: &'a ChoiceTable,
    memo: HashMap<Vec<ChoiceSet>, f64>,
}

/// Sorts, deduplicates and drops every disjunct that is a superset of
/// another (absorption). Returns `None` when some disjunct is empty, i.e.
/// the formula is already true.
fn simplify(mut ds: Vec<ChoiceSet>) -> Option<Vec<ChoiceSet>> {
    if ds.iter().any(ChoiceSet::is_empty) {
        return None;
    }
    ds.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    ds.dedup();
    let mut kept: Vec<ChoiceSet> = Vec::with_capacity(ds.len());
    for d in ds {
        if !kept.iter().any(|k| k.is_subset(&d)) {
            kept.push(d);
        }
    }
    kept.sort();
    Some(kept)
}

impl Evaluator<'_> {
    fn eval(&mut self, ds: Vec<ChoiceSet>) -> f64 {
        let Some(ds) = simplify(ds) else {
            return 1.0;
        };
        if ds.is_empty() {
            return 0.0;
        }
        if ds.len() == 1 {
            return ds[0].iter().map(|c| self.table.weight(*c)).product();
        }
        if let Some(&p) = self.memo.get(&ds) {
            return p;
        }
        let mut counts: BTreeMap<Split, usize> = BTreeMap::new();
        for d in &ds {
            for c in d.iter() {
                *counts.entry(split_of(c)).or_default() += 1;
            }
        }
        // Most frequent variable; the BTreeMap order breaks ties.
        let (&split, _) = counts.iter().rev().max_by_key(|(_, n)| **n).expect("non-empty DNF has variables");
        let result = match split {
            Split::Fact(i) => {
                let var = Choice::Fact(i);
                let p = self.table.weight(var);
                let mut total = 0.0;
                if p > 0.0 {
                    let pos = ds
                        .iter()
                        .map(|d| {
                            let mut d = d.clone();
                            d.remove(&var);
                            d
                        })
                        .collect();
                    total += p * self.eval(pos);
                }
                if p < 1.0 {
                    let neg = ds.iter().filter(|d| !d.contains(&var)).cloned().collect();
                    total += (1.0 - p) * self.eval(neg);
                }
                total
            }
            Split::Disjunction(ad) => {
                let mut alts: Vec<u32> = ds
                    .iter()
                    .flat_map(|d| d.iter())
                    .filter_map(|c| match *c {
                        Choice::Alt { ad: a, alt } if a == ad => Some(alt),
                        _ => None,
                    })
                    .collect();
                alts.sort_unstable();
                alts.dedup();
                let mut total = 0.0;
                let mut covered = 0.0;
                for &alt in &alts {
                    let var = Choice::Alt { ad, alt };
                    let p = self.table.weight(var);
                    covered += p;
                    if p == 0.0 {
                        continue;
                    }
                    let branch = ds
                        .iter()
                        .filter(|d| {
                            !d.iter().any(|c| matches!(*c, Choice::Alt { ad: a, alt: b } if a == ad && b != alt))
                        })
                        .map(|d| {
                            let mut d = d.clone();
                            d.remove(&var);
                            d
                        })
                        .collect();
                    total += p * self.eval(branch);
                }
                let rest = (1.0 - covered).max(0.0);
                if rest > 0.0 {
                    let none = ds
                        .iter()
                        .filter(|d| !d.iter().any(|c| matches!(*c, Choice::Alt { ad: a, .. } if a == ad)))
                        .cloned()
                        .collect();
                    total += rest * self.eval(none);
                }
                total
            }
        };
        self.memo.insert(ds, result);
        result
    }
}

/// Exact probability of a DNF over independent facts and mutually exclusive
/// disjunction alternatives, by Shannon expansion on the most frequent
/// variable with memoization of residual formulas.
pub fn dnf_probability(d: &Dnf, table: &ChoiceTable) -> f64 {
    let mut ev = Evaluator { table, memo: HashMap::new() };
    ev.eval(d.disjuncts.clone()).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dnf(ds: Vec<Vec<Choice>>) -> Dnf {
        Dnf { disjuncts: ds.into_iter().map(|d| d.into_iter().collect()).collect(), truncated: false }
    }

    fn alt(ad: u32, alt: u32) -> Choice {
        Choice::Alt { ad, alt }
    }

    #[test]
    fn independent_disjunction() {
        let t = ChoiceTable { facts: vec![0.5, 0.5], ads: vec![] };
        let p = dnf_probability(&dnf(vec![vec![Choice::Fact(0)], vec![Choice::Fact(1)]]), &t);
        assert!((p - 0.75).abs() < 1e-15);
    }

    #[test]
    fn single_conjunction_is_a_product() {
        let t = ChoiceTable { facts: vec![0.3, 0.4], ads: vec![] };
        let p = dnf_probability(&dnf(vec![vec![Choice::Fact(0), Choice::Fact(1)]]), &t);
        assert!((p - 0.12).abs() < 1e-15);
    }

    #[test]
    fn rps_profiles_match_outcome_enumeration() {
        let t = ChoiceTable { facts: vec![], ads: vec![vec![0.1, 0.1, 0.8], vec![0.1, 0.3, 0.6]] };
        let d = dnf(vec![vec![alt(0, 0), alt(1, 2)], vec![alt(0, 1), alt(1, 0)], vec![alt(0, 2), alt(1, 1)]]);
        // Oracle: the 9 joint outcomes, summing those where the first player wins.
        let (a, b) = (&t.ads[0], &t.ads[1]);
        let mut oracle = 0.0;
        for (i, pa) in a.iter().enumerate() {
            for (j, pb) in b.iter().enumerate() {
                if (i, j) == (0, 2) || (i, j) == (1, 0) || (i, j) == (2, 1) {
                    oracle += pa * pb;
                }
            }
        }
        assert!((oracle - 0.31).abs() < 1e-12);
        assert!((dnf_probability(&d, &t) - oracle).abs() < 1e-12);
    }

    #[test]
    fn empty_and_trivially_true() {
        let t = ChoiceTable::default();
        assert_eq!(dnf_probability(&Dnf::default(), &t), 0.0);
        assert_eq!(dnf_probability(&dnf(vec![vec![]]), &t), 1.0);
    }

    #[test]
    fn residual_mass_of_partial_disjunction() {
        // 0.2::x; 0.3::y  with a fact 0.5::z: P(x or z) = 1 - 0.8 * 0.5
        let t = ChoiceTable { facts: vec![0.5], ads: vec![vec![0.2, 0.3]] };
        let p = dnf_probability(&dnf(vec![vec![alt(0, 0)], vec![Choice::Fact(0)]]), &t);
        assert!((p - 0.6).abs() < 1e-15);
    }

    #[test]
    fn absorption_keeps_value() {
        let t = ChoiceTable { facts: vec![0.3, 0.6], ads: vec![] };
        let p = dnf_probability(&dnf(vec![vec![Choice::Fact(0)], vec![Choice::Fact(0), Choice::Fact(1)]]), &t);
        assert!((p - 0.3).abs() < 1e-15);
    }
}
