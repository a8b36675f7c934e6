use crate::laws::LawId;

/// Number of constructor-pattern combinations a by-hand proof of `law`
/// must cover for a type with `constructors` constructors: one case per
/// choice of constructor for each quantified variable.
pub fn proof_case_count(law: LawId, constructors: u32) -> u64 {
    u64::from(constructors).pow(law.arity())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Lists every tuple of constructor indices explicitly.
    fn pattern_combinations(arity: u32, constructors: u32) -> Vec<Vec<u32>> {
        let mut out = vec![vec![]];
        for _ in 0..arity {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    (0..constructors).map(move |c| {
                        let mut p = prefix.clone();
                        p.push(c);
                        p
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn reproduces_stated_counts() {
        assert_eq!(proof_case_count(LawId::OrdAnti, 1), 1);
        assert_eq!(proof_case_count(LawId::OrdAnti, 2), 4);
        assert_eq!(proof_case_count(LawId::OrdAnti, 3), 9);
        assert_eq!(proof_case_count(LawId::OrdTrans, 1), 1);
        assert_eq!(proof_case_count(LawId::OrdTrans, 2), 8);
        assert_eq!(proof_case_count(LawId::OrdTrans, 3), 27);
        assert_eq!(proof_case_count(LawId::OrdRefl, 1), 1);
        assert_eq!(proof_case_count(LawId::OrdRefl, 2), 2);
    }

    #[test]
    fn agrees_with_explicit_enumeration() {
        for law in LawId::ALL {
            for n in 1..=10 {
                let listed = pattern_combinations(law.arity(), n);
                let distinct: std::collections::BTreeSet<_> = listed.iter().cloned().collect();
                assert_eq!(distinct.len(), listed.len());
                assert_eq!(proof_case_count(law, n), listed.len() as u64, "{law:?} n={n}");
            }
        }
    }
}
