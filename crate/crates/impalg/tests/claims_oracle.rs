mod common;

use common::{all_tables, eval as naive, from_table, holds as naive_holds, Raw};
use impalg::claims::{
    claim_registry, default_budget, directions, refute, verify_claim, Direction, Refutation,
    Verdict,
};
use impalg::{ClaimStatus, Conclusion};

fn naive_counterexample(t: &Raw, d: &Direction) -> bool {
    if d.bounded_only && t.zero().is_none() {
        return false;
    }
    if !d.hypotheses.iter().all(|p| naive_holds(t, p)) {
        return false;
    }
    if d.any {
        d.goal.iter().all(|p| !naive_holds(t, p))
    } else {
        d.goal.iter().any(|p| !naive_holds(t, p))
    }
}

/// Exhaustive loop over every table with at most three elements, no pruning.
#[test]
fn claims_agree_with_exhaustive_loop() {
    let tables: Vec<Raw> = (1..=3).flat_map(all_tables).collect();
    for claim in claim_registry() {
        let dirs = directions(claim);
        let first = tables
            .iter()
            .find(|t| dirs.iter().any(|d| naive_counterexample(t, d)));
        let found = match claim.status {
            ClaimStatus::Theorem => match verify_claim(claim, 3).unwrap() {
                Verdict::Verified => None,
                Verdict::Counterexample(c) => Some(c),
            },
            ClaimStatus::NonImplication { .. } => match refute(claim, 3).unwrap() {
                Refutation::NotFound => None,
                Refutation::Counterexample(c) => Some(c),
            },
        };
        assert_eq!(
            found.is_some(),
            first.is_some(),
            "claim {} disagrees with the oracle",
            claim.id
        );
        if let (Some(c), Some(first)) = (found, first) {
            assert_eq!(
                c.size(),
                first.n,
                "claim {}: counterexample is not of least size",
                claim.id
            );
            let raw = from_table(&c.table);
            let dir = dirs.iter().find(|d| d.label == c.direction).unwrap();
            assert!(
                naive_counterexample(&raw, dir),
                "claim {}: reported counterexample does not refute",
                claim.id
            );
            for f in &c.failures {
                assert!(!naive(&raw, f.property).holds());
            }
        }
    }
}

#[test]
fn theorems_hold_and_non_implications_refute() {
    for claim in claim_registry() {
        match claim.status {
            ClaimStatus::Theorem => assert!(
                matches!(verify_claim(claim, 3).unwrap(), Verdict::Verified),
                "{}",
                claim.id
            ),
            ClaimStatus::NonImplication { example_size } => {
                let Refutation::Counterexample(c) = refute(claim, default_budget(claim)).unwrap()
                else {
                    panic!("no counterexample for {}", claim.id);
                };
                assert!(c.size() <= example_size);
                let t = from_table(&c.table);
                let dir = directions(claim)
                    .into_iter()
                    .find(|d| d.label == c.direction)
                    .unwrap();
                assert!(naive_counterexample(&t, &dir));
            }
        }
    }
}

#[test]
fn equivalences_split_into_two_directions() {
    for claim in claim_registry() {
        let n = directions(claim).len();
        match claim.conclusion {
            Conclusion::Equivalent(..) => assert_eq!(n, 2, "{}", claim.id),
            _ => assert_eq!(n, 1, "{}", claim.id),
        }
    }
}
