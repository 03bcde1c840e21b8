//! Shared domain types: tables, property identifiers, verdicts, signatures,
//! class definitions and claims.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Dense element index. The last index of a table is always the constant 1.
pub type Element = u8;

/// Errors raised when a table is built from raw parts.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("table must have at least one element")]
    Empty,
    #[error("table of size {0} exceeds the supported maximum of {max}", max = MAX_TABLE_SIZE)]
    TooLarge(usize),
    #[error("expected {expected} cells, got {got}")]
    CellCount { expected: usize, got: usize },
    #[error("cell {index} holds {value}, outside 0..{n}")]
    CellRange { index: usize, value: u8, n: usize },
    #[error("duplicate element name `{0}`")]
    DuplicateName(String),
    #[error("last element must be named `1`, found `{0}`")]
    LastNotOne(String),
    #[error("expected {expected} names, got {got}")]
    NameCount { expected: usize, got: usize },
}

/// Largest table accepted by [`Table::new`].
pub const MAX_TABLE_SIZE: usize = 64;

/// A finite Cayley table for `→` on `{0, .., n-1}` with `n-1` playing the role of 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Table {
    n: usize,
    cells: Vec<Element>,
    names: Arc<[String]>,
    display: Option<Arc<[Element]>>,
}

/// Default display names: `a, b, c, …` followed by `1`.
pub fn default_names(n: usize) -> Vec<String> {
    let mut names: Vec<String> = (0..n.saturating_sub(1))
        .map(|i| {
            if i < 26 {
                ((b'a' + i as u8) as char).to_string()
            } else {
                format!("e{i}")
            }
        })
        .collect();
    names.push("1".to_string());
    names
}

impl Table {
    /// Builds a table from names (last must be `1`) and row-major cells.
    pub fn new(names: Vec<String>, cells: Vec<Element>) -> Result<Table, TableError> {
        let n = names.len();
        if n == 0 {
            return Err(TableError::Empty);
        }
        if n > MAX_TABLE_SIZE {
            return Err(TableError::TooLarge(n));
        }
        if cells.len() != n * n {
            return Err(TableError::CellCount {
                expected: n * n,
                got: cells.len(),
            });
        }
        if let Some((index, &value)) = cells.iter().enumerate().find(|(_, &v)| v as usize >= n) {
            return Err(TableError::CellRange { index, value, n });
        }
        for (i, a) in names.iter().enumerate() {
            if names[..i].contains(a) {
                return Err(TableError::DuplicateName(a.clone()));
            }
        }
        if names[n - 1] != "1" {
            return Err(TableError::LastNotOne(names[n - 1].clone()));
        }
        Ok(Table {
            n,
            cells,
            names: names.into(),
            display: None,
        })
    }

    /// Builds a table with default names.
    pub fn from_cells(n: usize, cells: Vec<Element>) -> Result<Table, TableError> {
        if n == 0 {
            return Err(TableError::Empty);
        }
        Table::new(default_names(n), cells)
    }

    /// Builds a table from rows of indices.
    pub fn from_rows(rows: &[&[Element]]) -> Result<Table, TableError> {
        let n = rows.len();
        let cells: Vec<Element> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Table::from_cells(n, cells)
    }

    /// Parses rows written with element names, e.g. `&["1 1 a", "1 1 1", "a b 1"]`.
    pub fn from_named_rows(names: &[&str], rows: &[&str]) -> Result<Table, TableError> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let mut cells = Vec::with_capacity(names.len() * names.len());
        for row in rows {
            for tok in row.split_whitespace() {
                let v = names.iter().position(|m| m == tok).unwrap_or(usize::MAX);
                cells.push(v.min(255) as u8);
            }
        }
        Table::new(names, cells)
    }

    /// The 1-element table.
    pub fn trivial() -> Table {
        Table::from_cells(1, vec![0]).expect("trivial table")
    }

    pub(crate) fn with_names(n: usize, names: Arc<[String]>) -> Table {
        Table {
            n,
            cells: vec![0; n * n],
            names,
            display: None,
        }
    }

    pub(crate) fn cells_mut(&mut self) -> &mut [Element] {
        &mut self.cells
    }

    pub(crate) fn set_display(&mut self, order: Vec<Element>) {
        self.display = Some(order.into());
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.n
    }

    /// Index of the constant 1.
    #[inline]
    pub fn one(&self) -> Element {
        (self.n - 1) as Element
    }

    /// `x → y`.
    #[inline]
    pub fn op(&self, x: Element, y: Element) -> Element {
        self.cells[x as usize * self.n + y as usize]
    }

    #[inline]
    pub fn le(&self, x: Element, y: Element) -> bool {
        self.op(x, y) == self.one()
    }

    pub fn cells(&self) -> &[Element] {
        &self.cells
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, e: Element) -> &str {
        &self.names[e as usize]
    }

    pub fn element(&self, name: &str) -> Option<Element> {
        self.names
            .iter()
            .position(|m| m == name)
            .map(|i| i as Element)
    }

    /// Element order used when printing; declaration order when it differed from the internal one.
    pub fn display_order(&self) -> Vec<Element> {
        match &self.display {
            Some(d) => d.to_vec(),
            None => (0..self.n as Element).collect(),
        }
    }

    /// Same cells and size, ignoring names and display order.
    pub fn same_cells(&self, other: &Table) -> bool {
        self.n == other.n && self.cells == other.cells
    }
}

impl fmt::Debug for Table {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Table({})", self.names.join(" "))?;
        for x in 0..self.n {
            let row: Vec<&str> = (0..self.n)
                .map(|y| self.name(self.op(x as u8, y as u8)))
                .collect();
            writeln!(f, "  {}: {}", self.names[x], row.join(" "))?;
        }
        Ok(())
    }
}

/// Every property the workbench can evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PropertyId {
    An,
    B,
    BB,
    Star,
    StarStar,
    C,
    D,
    Ex,
    K,
    L,
    M,
    N,
    Re,
    S,
    Tr,
    U,
    MP,
    Pi,
    Pimpl,
    P1,
    P2,
    DN,
    G1,
    G2,
    G3,
    G4,
    G5,
    G6,
    G7,
    G8,
}

impl PropertyId {
    pub const ALL: [PropertyId; 30] = [
        PropertyId::An,
        PropertyId::B,
        PropertyId::BB,
        PropertyId::Star,
        PropertyId::StarStar,
        PropertyId::C,
        PropertyId::D,
        PropertyId::Ex,
        PropertyId::K,
        PropertyId::L,
        PropertyId::M,
        PropertyId::N,
        PropertyId::Re,
        PropertyId::S,
        PropertyId::Tr,
        PropertyId::U,
        PropertyId::MP,
        PropertyId::Pi,
        PropertyId::Pimpl,
        PropertyId::P1,
        PropertyId::P2,
        PropertyId::DN,
        PropertyId::G1,
        PropertyId::G2,
        PropertyId::G3,
        PropertyId::G4,
        PropertyId::G5,
        PropertyId::G6,
        PropertyId::G7,
        PropertyId::G8,
    ];

    /// Properties evaluated on every table (no zero needed), MP excluded as an alias.
    pub const PLAIN: [PropertyId; 20] = [
        PropertyId::An,
        PropertyId::B,
        PropertyId::BB,
        PropertyId::Star,
        PropertyId::StarStar,
        PropertyId::C,
        PropertyId::D,
        PropertyId::Ex,
        PropertyId::K,
        PropertyId::L,
        PropertyId::M,
        PropertyId::N,
        PropertyId::Re,
        PropertyId::S,
        PropertyId::Tr,
        PropertyId::U,
        PropertyId::Pi,
        PropertyId::Pimpl,
        PropertyId::P1,
        PropertyId::P2,
    ];

    pub const BOUNDED: [PropertyId; 9] = [
        PropertyId::DN,
        PropertyId::G1,
        PropertyId::G2,
        PropertyId::G3,
        PropertyId::G4,
        PropertyId::G5,
        PropertyId::G6,
        PropertyId::G7,
        PropertyId::G8,
    ];

    /// ASCII key used on the command line and in data files.
    pub fn key(self) -> &'static str {
        use PropertyId::*;
        match self {
            An => "An",
            B => "B",
            BB => "BB",
            Star => "Star",
            StarStar => "StarStar",
            C => "C",
            D => "D",
            Ex => "Ex",
            K => "K",
            L => "L",
            M => "M",
            N => "N",
            Re => "Re",
            S => "S",
            Tr => "Tr",
            U => "U",
            MP => "MP",
            Pi => "Pi",
            Pimpl => "Pimpl",
            P1 => "P1",
            P2 => "P2",
            DN => "DN",
            G1 => "G1",
            G2 => "G2",
            G3 => "G3",
            G4 => "G4",
            G5 => "G5",
            G6 => "G6",
            G7 => "G7",
            G8 => "G8",
        }
    }

    /// Number of quantified variables.
    pub fn arity(self) -> usize {
        use PropertyId::*;
        match self {
            L | M | N | MP | Re | DN | G4 | G8 => 1,
            An | D | K | S | U | Pi | G1 | G2 | G3 | G5 | G6 | G7 => 2,
            B | BB | Star | StarStar | C | Ex | Tr | Pimpl | P1 | P2 => 3,
        }
    }

    /// True for DN and G1–G8, which need a zero.
    pub fn needs_zero(self) -> bool {
        matches!(
            self,
            PropertyId::DN
                | PropertyId::G1
                | PropertyId::G2
                | PropertyId::G3
                | PropertyId::G4
                | PropertyId::G5
                | PropertyId::G6
                | PropertyId::G7
                | PropertyId::G8
        )
    }

    /// Bit position in a [`PropertySignature`]; MP shares N's bit.
    pub fn bit(self) -> u32 {
        match self {
            PropertyId::MP => PropertyId::N as u32,
            p => p as u32,
        }
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown property `{0}`")]
pub struct UnknownProperty(pub String);

impl FromStr for PropertyId {
    type Err = UnknownProperty;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let alias = match t {
            "*" => Some(PropertyId::Star),
            "**" => Some(PropertyId::StarStar),
            "p-1" => Some(PropertyId::P1),
            "p-2" => Some(PropertyId::P2),
            _ => None,
        };
        if let Some(p) = alias {
            return Ok(p);
        }
        PropertyId::ALL
            .iter()
            .copied()
            .find(|p| p.key().eq_ignore_ascii_case(t))
            .ok_or_else(|| UnknownProperty(s.to_string()))
    }
}

/// A small set of properties stored as a bitmask over [`PropertyId::bit`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PropSet(pub u32);

impl PropSet {
    pub const EMPTY: PropSet = PropSet(0);

    pub fn of(props: &[PropertyId]) -> PropSet {
        PropSet(props.iter().fold(0, |m, p| m | (1 << p.bit())))
    }

    pub fn contains(self, p: PropertyId) -> bool {
        self.0 & (1 << p.bit()) != 0
    }

    pub fn insert(&mut self, p: PropertyId) {
        self.0 |= 1 << p.bit();
    }

    pub fn union(self, other: PropSet) -> PropSet {
        PropSet(self.0 | other.0)
    }

    pub fn is_subset(self, other: PropSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Members in [`PropertyId::ALL`] order, MP omitted.
    pub fn iter(self) -> impl Iterator<Item = PropertyId> {
        PropertyId::ALL
            .into_iter()
            .filter(move |&p| p != PropertyId::MP && self.contains(p))
    }

    pub fn to_vec(self) -> Vec<PropertyId> {
        self.iter().collect()
    }
}

impl fmt::Display for PropSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let keys: Vec<&str> = self.iter().map(PropertyId::key).collect();
        write!(f, "{{{}}}", keys.join(","))
    }
}

impl FromIterator<PropertyId> for PropSet {
    fn from_iter<I: IntoIterator<Item = PropertyId>>(iter: I) -> Self {
        let mut s = PropSet::EMPTY;
        for p in iter {
            s.insert(p);
        }
        s
    }
}

/// A violating assignment, variables in (x, y, z) order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Witness {
    vars: [Element; 3],
    arity: u8,
}

impl Witness {
    pub fn new(vars: &[Element]) -> Witness {
        assert!((1..=3).contains(&vars.len()), "witness arity must be 1..=3");
        let mut v = [0; 3];
        v[..vars.len()].copy_from_slice(vars);
        Witness {
            vars: v,
            arity: vars.len() as u8,
        }
    }

    pub fn vars(&self) -> &[Element] {
        &self.vars[..self.arity as usize]
    }

    pub fn display(&self, table: &Table) -> String {
        let names: Vec<&str> = self.vars().iter().map(|&e| table.name(e)).collect();
        format!("({})", names.join(","))
    }
}

/// Verdict of one property on one table.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalResult {
    pub property: PropertyId,
    pub satisfied: bool,
    pub witness: Option<Witness>,
    pub applicable: bool,
}

impl EvalResult {
    pub fn holds(property: PropertyId) -> EvalResult {
        EvalResult {
            property,
            satisfied: true,
            witness: None,
            applicable: true,
        }
    }

    pub fn fails(property: PropertyId, w: Witness) -> EvalResult {
        EvalResult {
            property,
            satisfied: false,
            witness: Some(w),
            applicable: true,
        }
    }

    pub fn inapplicable(property: PropertyId) -> EvalResult {
        EvalResult {
            property,
            satisfied: false,
            witness: None,
            applicable: false,
        }
    }

    /// Human-readable verdict such as `Ex: violated at (a,b,a)`.
    pub fn describe(&self, table: &Table) -> String {
        if !self.applicable {
            format!("{}: not applicable (unbounded)", self.property)
        } else if self.satisfied {
            format!("{}: satisfied", self.property)
        } else {
            let w = self.witness.map(|w| w.display(table)).unwrap_or_default();
            format!("{}: violated at {}", self.property, w)
        }
    }
}

/// All verdicts of a table packed as bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PropertySignature {
    pub bits: PropSet,
    pub bounded: bool,
    pub zero: Option<Element>,
}

impl PropertySignature {
    pub fn has(&self, p: PropertyId) -> bool {
        self.bits.contains(p)
    }

    /// Whether `p` carries a meaningful verdict on this table.
    pub fn applicable(&self, p: PropertyId) -> bool {
        !p.needs_zero() || self.bounded
    }
}

/// A named class: members satisfy every required property; proper members
/// additionally violate every forbidden property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDef {
    pub id: &'static str,
    pub required: PropSet,
    pub proper_forbidden: Option<PropSet>,
    pub doc: &'static str,
}

/// What a claim asserts about tables satisfying its hypotheses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conclusion {
    /// Every listed property holds.
    AllOf(PropSet),
    /// At least one listed property holds (emptiness of "hypotheses ∧ all fail").
    AnyOf(PropSet),
    /// The two properties agree.
    Equivalent(PropertyId, PropertyId),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimStatus {
    /// Must admit no counterexample.
    Theorem,
    /// A counterexample must exist at or below `example_size`.
    NonImplication { example_size: usize },
}

/// A quasi-implication over properties, optionally restricted to bounded tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claim {
    pub id: &'static str,
    pub hypotheses: PropSet,
    pub bounded_only: bool,
    pub conclusion: Conclusion,
    pub status: ClaimStatus,
    pub citation: &'static str,
}
