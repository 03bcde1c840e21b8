//! Brute-force reference evaluator, written directly from the formulas and
//! sharing no code with the library's evaluators.

#![allow(dead_code)]

use impalg::{PropertyId, Table};

/// Plain row-major table; the last index is 1.
#[derive(Clone, Debug)]
pub struct Raw {
    pub n: usize,
    pub cells: Vec<u8>,
}

impl Raw {
    pub fn f(&self, x: u8, y: u8) -> u8 {
        self.cells[x as usize * self.n + y as usize]
    }

    pub fn one(&self) -> u8 {
        (self.n - 1) as u8
    }

    /// Unique z with z→x = 1 for all x, provided x→1 = 1 for all x.
    pub fn zero(&self) -> Option<u8> {
        let n = self.n as u8;
        let one = self.one();
        let zs: Vec<u8> = (0..n)
            .filter(|&z| (0..n).all(|x| self.f(z, x) == one))
            .collect();
        let l = (0..n).all(|x| self.f(x, one) == one);
        (zs.len() == 1 && l).then(|| zs[0])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(Vec<u8>),
    Inapplicable,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        *self == Verdict::Holds
    }
}

fn arity(p: PropertyId) -> usize {
    use PropertyId::*;
    match p {
        L | M | N | MP | Re | DN | G4 | G8 => 1,
        An | D | K | S | U | Pi | G1 | G2 | G3 | G5 | G6 | G7 => 2,
        _ => 3,
    }
}

fn check(t: &Raw, p: PropertyId, x: u8, y: u8, z: u8, zero: u8) -> bool {
    use PropertyId::*;
    let i = |a: u8, b: u8| t.f(a, b);
    let one = t.one();
    let neg = |a: u8| i(a, zero);
    match p {
        An => !(i(x, y) == one && i(y, x) == one) || x == y,
        B => i(i(y, z), i(i(x, y), i(x, z))) == one,
        BB => i(i(y, z), i(i(z, x), i(y, x))) == one,
        Star => i(y, z) != one || i(i(x, y), i(x, z)) == one,
        StarStar => i(y, z) != one || i(i(z, x), i(y, x)) == one,
        C => i(i(x, i(y, z)), i(y, i(x, z))) == one,
        D => i(y, i(i(y, x), x)) == one,
        Ex => i(x, i(y, z)) == i(y, i(x, z)),
        K => i(x, i(y, x)) == one,
        L => i(x, one) == one,
        M => i(one, x) == x,
        N | MP => i(one, x) != one || x == one,
        Re => i(x, x) == one,
        S => x != y || i(x, y) == one,
        Tr => !(i(x, y) == one && i(y, z) == one) || i(x, z) == one,
        U => i(i(i(y, x), x), x) == i(y, x),
        Pi => i(y, i(y, x)) == i(y, x),
        Pimpl => i(x, i(y, z)) == i(i(x, y), i(x, z)),
        P1 => i(i(x, i(y, z)), i(i(x, y), i(x, z))) == one,
        P2 => i(i(i(x, y), i(x, z)), i(x, i(y, z))) == one,
        DN => neg(neg(x)) == x,
        G1 => i(x, neg(y)) == i(y, neg(x)),
        G2 => i(x, y) == i(neg(y), neg(x)),
        G3 => i(neg(y), x) == i(neg(x), y),
        G4 => i(x, neg(neg(x))) == one,
        G5 => i(i(x, y), i(neg(y), neg(x))) == one,
        G6 => i(x, y) != one || i(neg(y), neg(x)) == one,
        G7 => (i(x, y) == one) == (i(neg(y), neg(x)) == one),
        G8 => neg(neg(neg(x))) == neg(x),
    }
}

/// Verdict with the lexicographically least violating (x, y, z) prefix.
pub fn eval(t: &Raw, p: PropertyId) -> Verdict {
    let zero = if p.needs_zero() {
        match t.zero() {
            Some(z) => z,
            None => return Verdict::Inapplicable,
        }
    } else {
        0
    };
    let a = arity(p);
    let n = t.n as u8;
    let range = |k: usize| if k < a { n } else { 1 };
    for x in 0..range(0) {
        for y in 0..range(1) {
            for z in 0..range(2) {
                if !check(t, p, x, y, z, zero) {
                    return Verdict::Fails([x, y, z][..a].to_vec());
                }
            }
        }
    }
    Verdict::Holds
}

pub fn holds(t: &Raw, p: PropertyId) -> bool {
    eval(t, p).holds()
}

/// Every table of size `n` (n^(n*n) of them) in row-major counting order.
pub fn all_tables(n: usize) -> impl Iterator<Item = Raw> {
    let cells = n * n;
    let total = (n as u64).pow(cells as u32);
    (0..total).map(move |mut k| {
        let mut v = vec![0u8; cells];
        for c in (0..cells).rev() {
            v[c] = (k % n as u64) as u8;
            k /= n as u64;
        }
        Raw { n, cells: v }
    })
}

pub fn to_table(t: &Raw) -> Table {
    Table::from_cells(t.n, t.cells.clone()).unwrap()
}

pub fn from_table(t: &Table) -> Raw {
    Raw {
        n: t.size(),
        cells: t.cells().to_vec(),
    }
}
