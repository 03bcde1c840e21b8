//! Exhaustive enumeration of labeled tables with incremental pruning,
//! work partitioning and census aggregation.
//!
//! Free cells are assigned row-major. Each filter instance waits on the
//! first unassigned cell its evaluation reads; assigning that cell re-runs
//! exactly those instances, which then either settle or move on to a later
//! cell. Moves are recorded on a trail and undone on backtrack.

use std::fmt;
use std::ops::ControlFlow;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classes::{is_member, is_proper_sig, registry, ClassId};
use crate::core::{default_names, Element, PropSet, PropertyId, PropertySignature, Table};
use crate::props::{eval_all, instance, Cells};

/// Largest size the enumerator accepts.
pub const MAX_SEARCH_SIZE: usize = 6;

const UNSET: Element = Element::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("size {0} is outside the supported range 1..={max}", max = MAX_SEARCH_SIZE)]
    SizeTooLarge(usize),
    #[error("size 6 needs a filter containing B, Star and StarStar, or Pimpl")]
    NeedsPruning,
    #[error("property {0} cannot be used as an enumeration filter")]
    UnsupportedFilter(PropertyId),
    #[error("visitor stopped the enumeration after {visited} tables")]
    CallbackAbort { visited: u64 },
}

/// Cells fixed before the search starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BaseConstraint {
    /// Nothing fixed.
    #[serde(rename = "ANY")]
    Any,
    /// `x → x = 1` and `1 → y = y`.
    #[serde(rename = "RM")]
    Rm,
    /// RM plus `x → 1 = 1`.
    #[serde(rename = "RML")]
    Rml,
}

impl BaseConstraint {
    /// Properties every table of this base satisfies by construction.
    pub fn implied(self) -> PropSet {
        match self {
            BaseConstraint::Any => PropSet::EMPTY,
            BaseConstraint::Rm => PropSet::of(&[PropertyId::Re, PropertyId::M]),
            BaseConstraint::Rml => PropSet::of(&[PropertyId::Re, PropertyId::M, PropertyId::L]),
        }
    }

    /// Strongest base whose fixed cells are forced by `props`.
    pub fn strongest_for(props: PropSet) -> BaseConstraint {
        if BaseConstraint::Rml.implied().is_subset(props) {
            BaseConstraint::Rml
        } else if BaseConstraint::Rm.implied().is_subset(props) {
            BaseConstraint::Rm
        } else {
            BaseConstraint::Any
        }
    }

    /// Number of free cells at size `n`.
    pub fn free_cells(self, n: usize) -> usize {
        match self {
            BaseConstraint::Any => n * n,
            BaseConstraint::Rm => n * n - n - (n - 1),
            BaseConstraint::Rml => n * n - n - 2 * (n - 1),
        }
    }

    /// Template with fixed cells set and the rest `UNSET`.
    fn template(self, n: usize) -> Vec<Element> {
        let one = (n - 1) as Element;
        let mut t = vec![UNSET; n * n];
        if self != BaseConstraint::Any {
            for x in 0..n {
                t[x * n + x] = one;
                t[(n - 1) * n + x] = x as Element;
                if self == BaseConstraint::Rml {
                    t[x * n + n - 1] = one;
                }
            }
        }
        t
    }
}

impl fmt::Display for BaseConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaseConstraint::Any => "ANY",
            BaseConstraint::Rm => "RM",
            BaseConstraint::Rml => "RML",
        })
    }
}

impl FromStr for BaseConstraint {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "ANY" => Ok(BaseConstraint::Any),
            "RM" => Ok(BaseConstraint::Rm),
            "RML" => Ok(BaseConstraint::Rml),
            _ => Err(format!("unknown base `{s}` (expected ANY, RM or RML)")),
        }
    }
}

/// A subtree of the search space: values for the first free cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WorkUnit {
    pub prefix: Vec<Element>,
}

/// Splits the space into at least `shards` disjoint prefix units (fewer only when the space is smaller).
pub fn partition_work(n: usize, base: BaseConstraint, shards: usize) -> Vec<WorkUnit> {
    partition_free(n, base.free_cells(n), shards)
}

/// Like [`partition_work`], but over the cells left free once the filter's
/// Re, M and L members have fixed their cells. Units for [`enumerate_unit`]
/// must come from here when the filter contains any of those three.
pub fn partition_filtered(
    n: usize,
    base: BaseConstraint,
    filter: PropSet,
    shards: usize,
) -> Vec<WorkUnit> {
    let free = template_for(n, base, filter)
        .iter()
        .filter(|&&c| c == UNSET)
        .count();
    partition_free(n, free, shards)
}

fn partition_free(n: usize, free: usize, shards: usize) -> Vec<WorkUnit> {
    let mut len = 0;
    let mut count = 1usize;
    while count < shards.max(1) && len < free {
        len += 1;
        count *= n;
    }
    (0..count)
        .map(|mut i| {
            let mut prefix = vec![0; len];
            for slot in prefix.iter_mut().rev() {
                *slot = (i % n) as Element;
                i /= n;
            }
            WorkUnit { prefix }
        })
        .collect()
}

/// Base template plus the cells forced by Re, M or L in the filter.
fn template_for(n: usize, base: BaseConstraint, filter: PropSet) -> Vec<Element> {
    let mut t = base.template(n);
    let one = (n - 1) as Element;
    for x in 0..n {
        if filter.contains(PropertyId::Re) {
            t[x * n + x] = one;
        }
        if filter.contains(PropertyId::M) {
            t[(n - 1) * n + x] = x as Element;
        }
        if filter.contains(PropertyId::L) {
            t[x * n + n - 1] = one;
        }
    }
    t
}

fn check_request(n: usize, filter: PropSet) -> Result<(), SearchError> {
    if n == 0 || n > MAX_SEARCH_SIZE {
        return Err(SearchError::SizeTooLarge(n));
    }
    if let Some(p) = filter.iter().find(|p| p.needs_zero()) {
        return Err(SearchError::UnsupportedFilter(p));
    }
    if n == MAX_SEARCH_SIZE {
        let b = filter.contains(PropertyId::B);
        let stars = filter.contains(PropertyId::Star) && filter.contains(PropertyId::StarStar);
        if !(b || stars || filter.contains(PropertyId::Pimpl)) {
            return Err(SearchError::NeedsPruning);
        }
    }
    Ok(())
}

#[derive(Clone, Copy)]
struct Inst {
    prop: PropertyId,
    v: [Element; 3],
}

struct Partial<'a> {
    n: usize,
    cells: &'a [Element],
}

impl Cells for Partial<'_> {
    #[inline(always)]
    fn get(&self, x: Element, y: Element) -> Result<Element, usize> {
        let i = x as usize * self.n + y as usize;
        let v = self.cells[i];
        if v == UNSET {
            Err(i)
        } else {
            Ok(v)
        }
    }
}

struct Engine<'v, V: FnMut(&Table) -> ControlFlow<()>> {
    n: usize,
    one: Element,
    free: Vec<usize>,
    cells: Vec<Element>,
    watch: Vec<Vec<Inst>>,
    trail: Vec<usize>,
    table: Table,
    visited: u64,
    visitor: &'v mut V,
}

impl<V: FnMut(&Table) -> ControlFlow<()>> Engine<'_, V> {
    /// Re-runs the instances waiting on `cell`; false on a violated instance.
    fn propagate(&mut self, cell: usize) -> bool {
        let mut i = 0;
        while i < self.watch[cell].len() {
            let inst = self.watch[cell][i];
            let part = Partial {
                n: self.n,
                cells: &self.cells,
            };
            match instance(inst.prop, &part, self.one, inst.v) {
                Ok(true) => {}
                Ok(false) => return false,
                Err(next) => {
                    self.watch[next].push(inst);
                    self.trail.push(next);
                }
            }
            i += 1;
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let c = self.trail.pop().unwrap();
            self.watch[c].pop();
        }
    }

    fn dfs(&mut self, depth: usize, prefix: &[Element]) -> ControlFlow<()> {
        if depth == self.free.len() {
            self.table.cells_mut().copy_from_slice(&self.cells);
            self.visited += 1;
            return (self.visitor)(&self.table);
        }
        let cell = self.free[depth];
        let (lo, hi) = match prefix.get(depth) {
            Some(&v) => (v, v + 1),
            None => (0, self.n as Element),
        };
        for val in lo..hi {
            self.cells[cell] = val;
            let mark = self.trail.len();
            let ok = self.propagate(cell);
            let flow = if ok {
                self.dfs(depth + 1, prefix)
            } else {
                ControlFlow::Continue(())
            };
            self.undo(mark);
            if flow.is_break() {
                self.cells[cell] = UNSET;
                return flow;
            }
        }
        self.cells[cell] = UNSET;
        ControlFlow::Continue(())
    }
}

fn run_unit<V: FnMut(&Table) -> ControlFlow<()>>(
    n: usize,
    base: BaseConstraint,
    filter: PropSet,
    prefix: &[Element],
    visitor: &mut V,
) -> Result<u64, SearchError> {
    let cells = template_for(n, base, filter);
    let free: Vec<usize> = (0..n * n).filter(|&i| cells[i] == UNSET).collect();
    let one = (n - 1) as Element;
    let mut watch: Vec<Vec<Inst>> = vec![Vec::new(); n * n];
    let names: std::sync::Arc<[String]> = default_names(n).into();
    let mut feasible = true;
    {
        let part = Partial { n, cells: &cells };
        for prop in filter.iter().filter(|p| !base.implied().contains(*p)) {
            let arity = prop.arity();
            let ne = n as Element;
            let zs = if arity == 3 { ne } else { 1 };
            let ys = if arity >= 2 { ne } else { 1 };
            for x in 0..ne {
                for y in 0..ys {
                    for z in 0..zs {
                        let inst = Inst { prop, v: [x, y, z] };
                        match instance(prop, &part, one, inst.v) {
                            Ok(true) => {}
                            Ok(false) => feasible = false,
                            Err(c) => watch[c].push(inst),
                        }
                    }
                }
            }
        }
    }
    if !feasible {
        return Ok(0);
    }
    let mut engine = Engine {
        n,
        one,
        free,
        cells,
        watch,
        trail: Vec::new(),
        table: Table::with_names(n, names),
        visited: 0,
        visitor,
    };
    match engine.dfs(0, prefix) {
        ControlFlow::Continue(()) => Ok(engine.visited),
        ControlFlow::Break(()) => Err(SearchError::CallbackAbort {
            visited: engine.visited,
        }),
    }
}

/// Visits every table of size `n` satisfying `base` and `filter`, in lexicographic
/// order of the free cells. Returns the number of visited tables.
pub fn enumerate<V: FnMut(&Table) -> ControlFlow<()>>(
    n: usize,
    base: BaseConstraint,
    filter: PropSet,
    mut visitor: V,
) -> Result<u64, SearchError> {
    check_request(n, filter)?;
    run_unit(n, base, filter, &[], &mut visitor)
}

/// Enumerates one work unit.
pub fn enumerate_unit<V: FnMut(&Table) -> ControlFlow<()>>(
    n: usize,
    base: BaseConstraint,
    filter: PropSet,
    unit: &WorkUnit,
    mut visitor: V,
) -> Result<u64, SearchError> {
    check_request(n, filter)?;
    run_unit(n, base, filter, &unit.prefix, &mut visitor)
}

fn pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool")
}

/// Folds every unit in parallel with `jobs` workers; results come back in unit order.
pub fn map_units<R: Send, F>(
    n: usize,
    base: BaseConstraint,
    filter: PropSet,
    jobs: usize,
    f: F,
) -> Result<Vec<R>, SearchError>
where
    F: Fn(&WorkUnit) -> Result<R, SearchError> + Sync,
{
    check_request(n, filter)?;
    if jobs <= 1 {
        return f(&WorkUnit { prefix: Vec::new() }).map(|r| vec![r]);
    }
    let units = partition_filtered(n, base, filter, jobs * 16);
    pool(jobs).install(|| units.par_iter().map(&f).collect())
}

/// Per-class counts over a set of enumerated tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub size: usize,
    pub base: BaseConstraint,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filter: Option<Vec<PropertyId>>,
    pub total: u64,
    pub per_class: Vec<(String, u64)>,
    pub per_proper: Vec<(String, u64)>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CensusReport {
    pub fn class(&self, id: &str) -> Option<u64> {
        self.per_class
            .iter()
            .find(|(c, _)| c == id)
            .map(|&(_, k)| k)
    }

    pub fn proper(&self, id: &str) -> Option<u64> {
        self.per_proper
            .iter()
            .find(|(c, _)| c == id)
            .map(|&(_, k)| k)
    }
}

#[derive(Clone)]
struct Tally {
    total: u64,
    member: Vec<u64>,
    proper: Vec<u64>,
}

impl Tally {
    fn new() -> Tally {
        let k = registry().len();
        Tally {
            total: 0,
            member: vec![0; k],
            proper: vec![0; k],
        }
    }

    fn add(&mut self, sig: &PropertySignature) {
        self.total += 1;
        for (i, d) in registry().defs().iter().enumerate() {
            if is_member(sig, d) {
                self.member[i] += 1;
                if is_proper_sig(sig, d) {
                    self.proper[i] += 1;
                }
            }
        }
    }

    fn merge(mut self, o: &Tally) -> Tally {
        self.total += o.total;
        for (a, b) in self.member.iter_mut().zip(&o.member) {
            *a += b;
        }
        for (a, b) in self.proper.iter_mut().zip(&o.proper) {
            *a += b;
        }
        self
    }
}

/// Classifies every table of size `n` under `base` (and an optional filter).
pub fn census_filtered(
    n: usize,
    base: BaseConstraint,
    filter: PropSet,
    jobs: usize,
) -> Result<CensusReport, SearchError> {
    let start = Instant::now();
    let parts = map_units(n, base, filter, jobs, |unit| {
        let mut t = Tally::new();
        run_unit(n, base, filter, &unit.prefix, &mut |tab: &Table| {
            t.add(&eval_all(tab));
            ControlFlow::Continue(())
        })?;
        Ok(t)
    })?;
    let tally = parts.iter().fold(Tally::new(), |acc, t| acc.merge(t));
    let defs = registry().defs();
    Ok(CensusReport {
        size: n,
        base,
        filter: if filter.is_empty() {
            None
        } else {
            Some(filter.to_vec())
        },
        total: tally.total,
        per_class: defs
            .iter()
            .zip(&tally.member)
            .map(|(d, &k)| (d.id.to_string(), k))
            .collect(),
        per_proper: defs
            .iter()
            .zip(&tally.proper)
            .filter(|(d, _)| d.proper_forbidden.is_some())
            .map(|(d, &k)| (d.id.to_string(), k))
            .collect(),
        elapsed: start.elapsed(),
    })
}

/// Classifies every table of size `n` under `base`.
pub fn census(n: usize, base: BaseConstraint, jobs: usize) -> Result<CensusReport, SearchError> {
    census_filtered(n, base, PropSet::EMPTY, jobs)
}

/// Least table (in free-cell order) of size `n` under `base` and `filter` accepted by `pred`.
pub fn find_first<P>(
    n: usize,
    base: BaseConstraint,
    filter: PropSet,
    jobs: usize,
    pred: P,
) -> Result<Option<Table>, SearchError>
where
    P: Fn(&Table) -> bool + Sync,
{
    let hits = map_units(n, base, filter, jobs, |unit| {
        let mut hit = None;
        let r = run_unit(n, base, filter, &unit.prefix, &mut |t: &Table| {
            if pred(t) {
                hit = Some(t.clone());
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        match r {
            Ok(_) | Err(SearchError::CallbackAbort { .. }) => Ok(hit),
            Err(e) => Err(e),
        }
    })?;
    Ok(hits.into_iter().flatten().next())
}

/// A membership or proper-membership query.
#[derive(Debug, Clone, Copy)]
pub struct ModelQuery {
    pub class: ClassId,
    pub proper: bool,
    pub extra: PropSet,
}

/// Smallest (then lexicographically least) table answering the query, up to `max_size`.
pub fn find_minimal_model(
    query: &ModelQuery,
    max_size: usize,
    jobs: usize,
) -> Result<Option<Table>, SearchError> {
    if max_size > MAX_SEARCH_SIZE {
        return Err(SearchError::SizeTooLarge(max_size));
    }
    let def = registry()
        .get(query.class)
        .expect("query names a registered class");
    let required = def.required.union(query.extra);
    let base = BaseConstraint::strongest_for(required);
    for n in 1..=max_size {
        let found = find_first(n, base, required, jobs, |t| {
            let sig = eval_all(t);
            required.is_subset(sig.bits) && (!query.proper || is_proper_sig(&sig, def))
        })?;
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}
