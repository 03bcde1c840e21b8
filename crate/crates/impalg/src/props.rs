//! Property evaluators.
//!
//! Every property is written once as an instance check over a [`Cells`]
//! source. Full tables never block; the search module plugs in partially
//! filled tables, where a read of an unassigned cell aborts the instance
//! with that cell's index.

use crate::core::{Element, EvalResult, PropSet, PropertyId, PropertySignature, Table, Witness};

/// Read access to `x → y`, failing with the flat cell index when unknown.
pub(crate) trait Cells {
    fn get(&self, x: Element, y: Element) -> Result<Element, usize>;
}

impl Cells for Table {
    #[inline(always)]
    fn get(&self, x: Element, y: Element) -> Result<Element, usize> {
        Ok(self.op(x, y))
    }
}

/// Checks one instance of a property that does not need a zero.
#[inline]
pub(crate) fn instance<C: Cells>(
    p: PropertyId,
    c: &C,
    one: Element,
    v: [Element; 3],
) -> Result<bool, usize> {
    use PropertyId::*;
    let [x, y, z] = v;
    Ok(match p {
        An => {
            if x == y || c.get(x, y)? != one {
                true
            } else {
                c.get(y, x)? != one
            }
        }
        B => {
            let a = c.get(y, z)?;
            let b = c.get(x, y)?;
            let d = c.get(x, z)?;
            let e = c.get(b, d)?;
            c.get(a, e)? == one
        }
        BB => {
            let a = c.get(y, z)?;
            let b = c.get(z, x)?;
            let d = c.get(y, x)?;
            let e = c.get(b, d)?;
            c.get(a, e)? == one
        }
        Star => {
            if c.get(y, z)? != one {
                true
            } else {
                let b = c.get(x, y)?;
                let d = c.get(x, z)?;
                c.get(b, d)? == one
            }
        }
        StarStar => {
            if c.get(y, z)? != one {
                true
            } else {
                let b = c.get(z, x)?;
                let d = c.get(y, x)?;
                c.get(b, d)? == one
            }
        }
        C => {
            let a = c.get(y, z)?;
            let b = c.get(x, a)?;
            let d = c.get(x, z)?;
            let e = c.get(y, d)?;
            c.get(b, e)? == one
        }
        D => {
            let a = c.get(y, x)?;
            let b = c.get(a, x)?;
            c.get(y, b)? == one
        }
        Ex => {
            let a = c.get(y, z)?;
            let b = c.get(x, a)?;
            let d = c.get(x, z)?;
            c.get(y, d)? == b
        }
        K => {
            let a = c.get(y, x)?;
            c.get(x, a)? == one
        }
        L => c.get(x, one)? == one,
        M => c.get(one, x)? == x,
        N | MP => x == one || c.get(one, x)? != one,
        Re => c.get(x, x)? == one,
        S => x != y || c.get(x, y)? == one,
        Tr => {
            if c.get(x, y)? != one || c.get(y, z)? != one {
                true
            } else {
                c.get(x, z)? == one
            }
        }
        U => {
            let a = c.get(y, x)?;
            let b = c.get(a, x)?;
            c.get(b, x)? == a
        }
        Pi => {
            let a = c.get(y, x)?;
            c.get(y, a)? == a
        }
        Pimpl | P1 | P2 => {
            let a = c.get(y, z)?;
            let b = c.get(x, a)?;
            let d = c.get(x, y)?;
            let e = c.get(x, z)?;
            let f = c.get(d, e)?;
            match p {
                Pimpl => b == f,
                P1 => c.get(b, f)? == one,
                _ => c.get(f, b)? == one,
            }
        }
        DN | G1 | G2 | G3 | G4 | G5 | G6 | G7 | G8 => {
            unreachable!("bounded property {p} needs a zero")
        }
    })
}

/// Checks one instance of DN or G1–G8 with negation `x⁻ = x → zero`.
pub(crate) fn bounded_instance(p: PropertyId, t: &Table, zero: Element, v: [Element; 3]) -> bool {
    use PropertyId::*;
    let one = t.one();
    let neg = |a: Element| t.op(a, zero);
    let [x, y, _] = v;
    match p {
        DN => neg(neg(x)) == x,
        G1 => t.op(x, neg(y)) == t.op(y, neg(x)),
        G2 => t.op(x, y) == t.op(neg(y), neg(x)),
        G3 => t.op(neg(y), x) == t.op(neg(x), y),
        G4 => t.op(x, neg(neg(x))) == one,
        G5 => t.op(t.op(x, y), t.op(neg(y), neg(x))) == one,
        G6 => t.op(x, y) != one || t.op(neg(y), neg(x)) == one,
        G7 => (t.op(x, y) == one) == (t.op(neg(y), neg(x)) == one),
        G8 => neg(neg(neg(x))) == neg(x),
        _ => unreachable!("{p} is not a bounded property"),
    }
}

/// Calls `f` on every assignment of `arity` variables over `n` elements,
/// x outermost, until it returns `false`. Returns the stopping assignment.
#[inline]
fn first_failure(
    n: usize,
    arity: usize,
    mut f: impl FnMut([Element; 3]) -> bool,
) -> Option<[Element; 3]> {
    let n = n as Element;
    match arity {
        1 => (0..n).map(|x| [x, 0, 0]).find(|&v| !f(v)),
        2 => {
            for x in 0..n {
                for y in 0..n {
                    if !f([x, y, 0]) {
                        return Some([x, y, 0]);
                    }
                }
            }
            None
        }
        _ => {
            for x in 0..n {
                for y in 0..n {
                    for z in 0..n {
                        if !f([x, y, z]) {
                            return Some([x, y, z]);
                        }
                    }
                }
            }
            None
        }
    }
}

/// Evaluates a property, reporting the lexicographically least violation.
/// DN and G1–G8 are routed through [`eval_bounded_property`].
pub fn eval_property(table: &Table, prop: PropertyId) -> EvalResult {
    if prop.needs_zero() {
        return eval_bounded_property(table, prop);
    }
    let one = table.one();
    let arity = prop.arity();
    match first_failure(table.size(), arity, |v| {
        instance(prop, table, one, v).unwrap_or(true)
    }) {
        None => EvalResult::holds(prop),
        Some(v) => EvalResult::fails(prop, Witness::new(&v[..arity])),
    }
}

/// Quick verdict without a witness.
pub fn holds(table: &Table, prop: PropertyId) -> bool {
    if prop.needs_zero() {
        let r = eval_bounded_property(table, prop);
        return r.applicable && r.satisfied;
    }
    let one = table.one();
    first_failure(table.size(), prop.arity(), |v| {
        instance(prop, table, one, v).unwrap_or(true)
    })
    .is_none()
}

/// The unique `z` with `z → x = 1` for all `x`, and whether the table is bounded (zero plus L).
pub fn find_zero(table: &Table) -> Option<(Element, bool)> {
    let n = table.size() as Element;
    let mut found = None;
    for z in 0..n {
        if (0..n).all(|x| table.le(z, x)) {
            if found.is_some() {
                return None;
            }
            found = Some(z);
        }
    }
    found.map(|z| (z, holds(table, PropertyId::L)))
}

/// Evaluates DN or G1–G8; `applicable` is false on unbounded tables.
pub fn eval_bounded_property(table: &Table, prop: PropertyId) -> EvalResult {
    assert!(prop.needs_zero(), "{prop} is not a bounded property");
    let zero = match find_zero(table) {
        Some((z, true)) => z,
        _ => return EvalResult::inapplicable(prop),
    };
    let arity = prop.arity();
    match first_failure(table.size(), arity, |v| {
        bounded_instance(prop, table, zero, v)
    }) {
        None => EvalResult::holds(prop),
        Some(v) => EvalResult::fails(prop, Witness::new(&v[..arity])),
    }
}

/// All verdicts in one pass.
pub fn eval_all(table: &Table) -> PropertySignature {
    let one = table.one();
    let n = table.size();
    let mut bits = PropSet::EMPTY;
    for p in PropertyId::PLAIN {
        if first_failure(n, p.arity(), |v| instance(p, table, one, v).unwrap_or(true)).is_none() {
            bits.insert(p);
        }
    }
    let zero = find_zero(table);
    let bounded = zero.is_some_and(|(_, b)| b);
    if let Some((z, true)) = zero {
        for p in PropertyId::BOUNDED {
            if first_failure(n, p.arity(), |v| bounded_instance(p, table, z, v)).is_none() {
                bits.insert(p);
            }
        }
    }
    PropertySignature {
        bits,
        bounded,
        zero: zero.map(|(z, _)| z),
    }
}

/// True if the given assignment (x, y, z order) violates the property.
/// Bounded properties use the table's zero; returns false when there is none.
pub fn violated_at(table: &Table, prop: PropertyId, vars: &[Element]) -> bool {
    if vars.len() != prop.arity() || vars.iter().any(|&e| e as usize >= table.size()) {
        return false;
    }
    let mut v = [0; 3];
    v[..vars.len()].copy_from_slice(vars);
    if prop.needs_zero() {
        match find_zero(table) {
            Some((z, true)) => !bounded_instance(prop, table, z, v),
            _ => false,
        }
    } else {
        !instance(prop, table, table.one(), v).unwrap_or(true)
    }
}

/// Positions of x, y, z in the order the variables first appear in the formula text.
/// `textual_order(B) = [1, 2, 0]` because (B) reads `(y→z)→((x→y)→(x→z))`.
pub fn textual_order(prop: PropertyId) -> &'static [usize] {
    use PropertyId::*;
    match prop {
        B | BB | Star | StarStar => &[1, 2, 0],
        D | U | Pi | G3 => &[1, 0],
        p => match p.arity() {
            1 => &[0],
            2 => &[0, 1],
            _ => &[0, 1, 2],
        },
    }
}

/// Reorders a tuple written in textual variable order into (x, y, z) order.
pub fn from_textual(prop: PropertyId, stated: &[Element]) -> Vec<Element> {
    let order = textual_order(prop);
    let mut out = vec![0; stated.len()];
    for (i, &pos) in order.iter().enumerate().take(stated.len()) {
        out[pos] = stated[i];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use PropertyId::*;

    fn e1() -> Table {
        Table::from_named_rows(&["a", "b", "1"], &["1 1 a", "1 1 1", "a b 1"]).unwrap()
    }

    fn boolean2() -> Table {
        Table::from_rows(&[&[1, 1], &[0, 1]]).unwrap()
    }

    #[test]
    fn e1_witnesses() {
        let t = e1();
        let r = eval_property(&t, Ex);
        assert!(!r.satisfied);
        assert_eq!(r.witness.unwrap().vars(), &[0, 1, 0]);
        assert_eq!(eval_property(&t, BB).witness.unwrap().vars(), &[0, 1, 2]);
        assert!(eval_property(&t, Re).satisfied);
        assert!(eval_property(&t, M).satisfied);
        assert!(eval_property(&t, D).satisfied);
    }

    #[test]
    fn e1_zero_unbounded() {
        assert_eq!(find_zero(&e1()), Some((1, false)));
        assert!(!eval_bounded_property(&e1(), DN).applicable);
    }

    #[test]
    fn trivial_table_satisfies_everything() {
        let t = Table::trivial();
        let sig = eval_all(&t);
        assert!(sig.bounded);
        assert_eq!(sig.zero, Some(0));
        for p in PropertyId::ALL {
            assert!(sig.has(p), "{p}");
        }
    }

    #[test]
    fn boolean_two_element() {
        let sig = eval_all(&boolean2());
        for p in PropertyId::ALL {
            assert!(sig.has(p), "{p}");
        }
    }

    #[test]
    fn mp_matches_n() {
        let t = e1();
        assert_eq!(
            eval_property(&t, MP).satisfied,
            eval_property(&t, N).satisfied
        );
    }

    #[test]
    fn textual_reorder() {
        assert_eq!(from_textual(B, &[5, 6, 7]), vec![7, 5, 6]);
        assert_eq!(from_textual(Pi, &[1, 0]), vec![0, 1]);
        assert_eq!(from_textual(Ex, &[1, 2, 3]), vec![1, 2, 3]);
    }

    #[test]
    fn violated_at_agrees_with_witness() {
        let t = e1();
        for p in PropertyId::PLAIN {
            let r = eval_property(&t, p);
            if let Some(w) = r.witness {
                assert!(violated_at(&t, p, w.vars()), "{p}");
            }
        }
    }
}
