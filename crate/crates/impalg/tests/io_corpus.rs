use std::collections::BTreeSet;

use impalg::classes::check_proper;
use impalg::corpus::{load_corpus, run_regression, FindingKind};
use impalg::io::{
    are_isomorphic, emit_table, parse_any, parse_structured, parse_table, read_stream,
    write_record, Format,
};
use impalg::props::holds;
use impalg::{PropertyId, Table};
use proptest::prelude::*;

fn assert_same(a: &Table, b: &Table) {
    assert_eq!(a.size(), b.size());
    assert_eq!(a.names(), b.names());
    assert_eq!(a.cells(), b.cells());
    assert_eq!(a.display_order(), b.display_order());
}

#[test]
fn corpus_round_trips_in_both_formats() {
    let corpus = load_corpus().unwrap();
    let mut stream = Vec::new();
    for e in &corpus.entries {
        let text = emit_table(&e.table, Format::Text);
        assert_same(&e.table, &parse_table(&text).unwrap());
        assert_eq!(emit_table(&parse_table(&text).unwrap(), Format::Text), text);
        let doc = emit_table(&e.table, Format::Structured);
        assert_same(&e.table, &parse_structured(&doc).unwrap());
        assert_same(&e.table, &parse_any(&doc).unwrap().table);
        write_record(&mut stream, &e.table).unwrap();
    }
    let back = read_stream(std::str::from_utf8(&stream).unwrap()).unwrap();
    assert_eq!(back.len(), corpus.entries.len());
    for (a, b) in corpus.entries.iter().zip(&back) {
        assert_same(&a.table, b);
    }
}

fn table(n: usize) -> impl Strategy<Value = Table> {
    prop::collection::vec(0..n as u8, n * n)
        .prop_map(move |cells| Table::from_cells(n, cells).unwrap())
}

/// Relabels the non-1 elements of `t` by `perm`.
fn relabel(t: &Table, perm: &[u8]) -> Table {
    let n = t.size();
    let p = |e: u8| {
        if e as usize == n - 1 {
            e
        } else {
            perm[e as usize]
        }
    };
    let mut cells = vec![0u8; n * n];
    for x in 0..n as u8 {
        for y in 0..n as u8 {
            cells[p(x) as usize * n + p(y) as usize] = p(t.op(x, y));
        }
    }
    Table::from_cells(n, cells).unwrap()
}

fn perm3() -> impl Strategy<Value = Vec<u8>> {
    Just(vec![0u8, 1, 2]).prop_shuffle()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn random_round_trip(t in prop_oneof![table(2), table(4), table(6)]) {
        let text = emit_table(&t, Format::Text);
        let back = parse_table(&text).unwrap();
        prop_assert_eq!(back.cells(), t.cells());
        let doc = emit_table(&t, Format::Structured);
        let back = parse_structured(&doc).unwrap();
        prop_assert_eq!(back.cells(), t.cells());
    }

    #[test]
    fn isomorphism_is_an_equivalence(t in table(4), u in table(4), p in perm3(), q in perm3()) {
        prop_assert!(are_isomorphic(&t, &t).unwrap());
        let tp = relabel(&t, &p);
        prop_assert!(are_isomorphic(&t, &tp).unwrap());
        prop_assert!(are_isomorphic(&tp, &t).unwrap());
        let tpq = relabel(&tp, &q);
        prop_assert!(are_isomorphic(&t, &tpq).unwrap());
        prop_assert_eq!(are_isomorphic(&t, &u).unwrap(), are_isomorphic(&u, &t).unwrap());
        prop_assert_eq!(are_isomorphic(&t, &u).unwrap(), are_isomorphic(&tp, &u).unwrap());
    }
}

#[test]
fn isomorphism_rejects_size_mismatch() {
    let a = Table::from_cells(2, vec![1, 1, 0, 1]).unwrap();
    let b = Table::trivial();
    assert!(are_isomorphic(&a, &b).is_err());
}

#[test]
fn every_proper_class_with_an_example_has_a_proper_entry() {
    let corpus = load_corpus().unwrap();
    let claimed: BTreeSet<&str> = corpus
        .entries
        .iter()
        .filter(|e| e.expected_proper == Some(true))
        .map(|e| e.expected_class.as_str())
        .collect();
    for class in claimed {
        let ok = corpus
            .entries
            .iter()
            .filter(|e| e.expected_class == class)
            .any(|e| check_proper(&e.table, class).unwrap().is_proper);
        assert!(ok, "no entry recomputes as proper {class}");
    }
}

#[test]
fn regression_findings_are_frozen() {
    let corpus = load_corpus().unwrap();
    assert_eq!(corpus.entries.len(), 80);
    let report = run_regression(&corpus);
    assert_eq!(report.implementation_failures(), 0);
    let found: Vec<(&str, Option<PropertyId>)> = report
        .findings
        .iter()
        .filter(|f| f.kind == FindingKind::PaperDiscrepancy)
        .map(|f| (f.entry.as_str(), f.property))
        .collect();
    assert_eq!(found, vec![("pi-tRML-1", Some(PropertyId::D))]);
}

/// Entries stating a D verdict recompute to it, apart from the one frozen discrepancy.
#[test]
fn stated_d_verdicts() {
    use impalg::corpus::Expected;
    let corpus = load_corpus().unwrap();
    let mut checked = 0;
    for e in &corpus.entries {
        let Some(exp) = e.expected_flags.get(&PropertyId::D) else {
            continue;
        };
        let want = matches!(exp, Expected::Satisfied);
        let got = holds(&e.table, PropertyId::D);
        if e.id == "pi-tRML-1" {
            assert!(want && !got);
        } else {
            assert_eq!(got, want, "{}", e.id);
        }
        checked += 1;
    }
    assert!(checked >= 10, "only {checked} entries state D");
}

#[test]
fn kinyon_table_is_proper() {
    let corpus = load_corpus().unwrap();
    let e = corpus
        .entries
        .iter()
        .find(|e| e.id == "pi-*RML**-1")
        .unwrap();
    assert_eq!(e.table.size(), 6);
    assert!(check_proper(&e.table, "pi-*RML**").unwrap().is_proper);
}
