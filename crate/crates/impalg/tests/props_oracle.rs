mod common;

use common::{all_tables, eval as naive, to_table, Raw, Verdict};
use impalg::props::{eval_all, eval_property, holds, violated_at};
use impalg::{PropertyId, Table};
use proptest::prelude::*;

fn library_verdict(t: &Table, p: PropertyId) -> Verdict {
    let r = eval_property(t, p);
    if !r.applicable {
        Verdict::Inapplicable
    } else if r.satisfied {
        Verdict::Holds
    } else {
        Verdict::Fails(r.witness.expect("violation has a witness").vars().to_vec())
    }
}

fn agree(raw: &Raw) {
    let t = to_table(raw);
    let sig = eval_all(&t);
    for p in PropertyId::ALL {
        let want = naive(raw, p);
        assert_eq!(library_verdict(&t, p), want, "{p} on {:?}", raw.cells);
        assert_eq!(
            sig.has(p),
            want.holds(),
            "signature bit {p} on {:?}",
            raw.cells
        );
        if let Verdict::Fails(w) = &want {
            assert!(violated_at(&t, p, w));
        }
    }
}

#[test]
fn exhaustive_agreement_up_to_three() {
    for n in 1..=3 {
        for raw in all_tables(n) {
            agree(&raw);
        }
    }
}

fn raw_table(n: usize) -> impl Strategy<Value = Raw> {
    prop::collection::vec(0..n as u8, n * n).prop_map(move |cells| Raw { n, cells })
}

/// Random table with Re and M forced so conditional properties get exercised.
fn rm_table(n: usize) -> impl Strategy<Value = Raw> {
    raw_table(n).prop_map(|mut t| {
        let n = t.n;
        for x in 0..n {
            t.cells[x * n + x] = (n - 1) as u8;
            t.cells[(n - 1) * n + x] = x as u8;
        }
        t
    })
}

fn sizes() -> impl Strategy<Value = Raw> {
    prop_oneof![
        raw_table(4),
        raw_table(5),
        rm_table(4),
        rm_table(5),
        rm_table(6)
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn witnesses_are_least(raw in sizes()) {
        agree(&raw);
    }

    #[test]
    fn mp_is_n(raw in sizes()) {
        let t = to_table(&raw);
        prop_assert_eq!(eval_property(&t, PropertyId::MP).satisfied, eval_property(&t, PropertyId::N).satisfied);
        prop_assert_eq!(eval_property(&t, PropertyId::MP).witness, eval_property(&t, PropertyId::N).witness);
    }

    #[test]
    fn re_implies_s(raw in sizes()) {
        let t = to_table(&raw);
        prop_assert!(!holds(&t, PropertyId::Re) || holds(&t, PropertyId::S));
    }

    #[test]
    fn m_implies_n(raw in sizes()) {
        let t = to_table(&raw);
        prop_assert!(!holds(&t, PropertyId::M) || holds(&t, PropertyId::N));
    }
}

#[test]
fn re_s_and_m_n_exhaustive_up_to_three() {
    for n in 1..=3 {
        for raw in all_tables(n) {
            let t = to_table(&raw);
            assert!(!holds(&t, PropertyId::Re) || holds(&t, PropertyId::S));
            assert!(!holds(&t, PropertyId::M) || holds(&t, PropertyId::N));
        }
    }
}

#[test]
fn eval_all_is_fast_at_six() {
    let n = 6;
    let mut cells = vec![0u8; n * n];
    for x in 0..n {
        for y in 0..n {
            cells[x * n + y] = if x <= y { (n - 1) as u8 } else { y as u8 };
        }
    }
    let t = Table::from_cells(n, cells).unwrap();
    let start = std::time::Instant::now();
    for _ in 0..1000 {
        std::hint::black_box(eval_all(&t));
    }
    assert!(start.elapsed().as_secs_f64() < 2.0);
}
