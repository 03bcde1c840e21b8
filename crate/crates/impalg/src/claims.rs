//! Implication lemmas, equivalences and independence remarks, checked by
//! exhaustive search for counterexamples over small tables.
//!
//! A `Verified` verdict only says that no table up to the searched size
//! refutes the claim; it is evidence, not proof.

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::classes::registry;
use crate::core::{Claim, ClaimStatus, Conclusion, EvalResult, PropSet, PropertyId, Table};
use crate::props::{eval_property, find_zero, holds};
use crate::search::{find_first, BaseConstraint, SearchError};

#[derive(Debug, Error)]
pub enum ClaimError {
    #[error("unknown claim `{0}`")]
    UnknownClaim(String),
    #[error("size {size} exceeds the limit {limit} for claim `{id}`")]
    SizeTooLarge {
        id: String,
        size: usize,
        limit: usize,
    },
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// A table satisfying the hypotheses on which the conclusion fails.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub table: Table,
    /// Which direction of the claim failed (the claim id for one-way claims).
    pub direction: String,
    /// Failing conclusion properties, each with its least witness.
    pub failures: Vec<EvalResult>,
}

impl Counterexample {
    pub fn size(&self) -> usize {
        self.table.size()
    }
}

#[derive(Debug, Clone)]
pub enum Verdict {
    Verified,
    Counterexample(Counterexample),
}

#[derive(Debug, Clone)]
pub enum Refutation {
    Counterexample(Counterexample),
    NotFound,
}

/// One searchable implication: hypotheses against a conclusion that is either
/// a conjunction or a disjunction of properties.
#[derive(Debug, Clone)]
pub struct Direction {
    pub label: String,
    pub hypotheses: PropSet,
    pub bounded_only: bool,
    pub goal: PropSet,
    pub any: bool,
}

impl Direction {
    fn conclusion_fails(&self, t: &Table) -> bool {
        if self.any {
            self.goal.iter().all(|p| !holds(t, p))
        } else {
            self.goal.iter().any(|p| !holds(t, p))
        }
    }

    fn failures(&self, t: &Table) -> Vec<EvalResult> {
        self.goal
            .iter()
            .map(|p| eval_property(t, p))
            .filter(|r| !(r.applicable && r.satisfied))
            .collect()
    }
}

/// Splits a claim into one-way implications; equivalences give two.
pub fn directions(claim: &Claim) -> Vec<Direction> {
    let one = |label: String, hypotheses, goal, any| Direction {
        label,
        hypotheses,
        bounded_only: claim.bounded_only,
        goal,
        any,
    };
    match claim.conclusion {
        Conclusion::AllOf(g) => vec![one(claim.id.to_string(), claim.hypotheses, g, false)],
        Conclusion::AnyOf(g) => vec![one(claim.id.to_string(), claim.hypotheses, g, true)],
        Conclusion::Equivalent(p, q) => vec![
            one(
                format!("{}[{p}=>{q}]", claim.id),
                claim.hypotheses.union(PropSet::of(&[p])),
                PropSet::of(&[q]),
                false,
            ),
            one(
                format!("{}[{q}=>{p}]", claim.id),
                claim.hypotheses.union(PropSet::of(&[q])),
                PropSet::of(&[p]),
                false,
            ),
        ],
    }
}

/// Largest size `verify_claim` and `refute` accept: 4 when M is a hypothesis, 3 otherwise.
pub fn size_limit(claim: &Claim) -> usize {
    if claim.hypotheses.contains(PropertyId::M) {
        4
    } else {
        3
    }
}

fn plain(set: PropSet) -> PropSet {
    set.iter().filter(|p| !p.needs_zero()).collect()
}

fn bounded(set: PropSet) -> PropSet {
    set.iter().filter(|p| p.needs_zero()).collect()
}

/// Least counterexample of size `n` to `dir` whose hypotheses are widened by `extra`.
fn search_size(
    dir: &Direction,
    n: usize,
    base: BaseConstraint,
    extra: PropSet,
    jobs: usize,
) -> Result<Option<Table>, SearchError> {
    let hyps = dir.hypotheses.union(extra);
    let filter = plain(hyps);
    let side = bounded(hyps);
    let base = if base == BaseConstraint::Any {
        BaseConstraint::strongest_for(filter)
    } else {
        base
    };
    find_first(n, base, filter, jobs, |t| {
        if dir.bounded_only && !matches!(find_zero(t), Some((_, true))) {
            return false;
        }
        side.iter().all(|p| holds(t, p)) && dir.conclusion_fails(t)
    })
}

fn search(
    dirs: &[Direction],
    max_size: usize,
    jobs: usize,
) -> Result<Option<Counterexample>, SearchError> {
    for n in 1..=max_size {
        for d in dirs {
            if let Some(table) = search_size(d, n, BaseConstraint::Any, PropSet::EMPTY, jobs)? {
                let failures = d.failures(&table);
                return Ok(Some(Counterexample {
                    table,
                    direction: d.label.clone(),
                    failures,
                }));
            }
        }
    }
    Ok(None)
}

fn check_size(claim: &Claim, max_size: usize) -> Result<(), ClaimError> {
    let limit = size_limit(claim);
    if max_size > limit {
        return Err(ClaimError::SizeTooLarge {
            id: claim.id.to_string(),
            size: max_size,
            limit,
        });
    }
    Ok(())
}

/// Searches sizes `1..=max_size` for the least counterexample (smallest size, then least table).
pub fn verify_claim(claim: &Claim, max_size: usize) -> Result<Verdict, ClaimError> {
    verify_claim_with(claim, max_size, 1)
}

/// [`verify_claim`] with `jobs` worker threads.
pub fn verify_claim_with(
    claim: &Claim,
    max_size: usize,
    jobs: usize,
) -> Result<Verdict, ClaimError> {
    check_size(claim, max_size)?;
    Ok(match search(&directions(claim), max_size, jobs)? {
        None => Verdict::Verified,
        Some(c) => Verdict::Counterexample(c),
    })
}

/// Looks for a table satisfying the hypotheses and violating the conclusion.
pub fn refute(claim: &Claim, max_size: usize) -> Result<Refutation, ClaimError> {
    refute_with(claim, max_size, 1)
}

/// [`refute`] with `jobs` worker threads.
pub fn refute_with(claim: &Claim, max_size: usize, jobs: usize) -> Result<Refutation, ClaimError> {
    check_size(claim, max_size)?;
    Ok(match search(&directions(claim), max_size, jobs)? {
        None => Refutation::NotFound,
        Some(c) => Refutation::Counterexample(c),
    })
}

/// Every direction re-checked on all size-4 tables with Re and M added to the hypotheses.
fn rm_sweep(claim: &Claim, jobs: usize) -> Result<Option<Counterexample>, SearchError> {
    let extra = BaseConstraint::Rm.implied();
    for d in directions(claim) {
        if let Some(table) = search_size(&d, 4, BaseConstraint::Rm, extra, jobs)? {
            let failures = d.failures(&table);
            return Ok(Some(Counterexample {
                table,
                direction: d.label.clone(),
                failures,
            }));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Registry

macro_rules! ps {
    ($($p:ident),* $(,)?) => { PropSet::of(&[$(PropertyId::$p),*]) };
}

fn thm(
    id: &'static str,
    hypotheses: PropSet,
    conclusion: Conclusion,
    citation: &'static str,
) -> Claim {
    Claim {
        id,
        hypotheses,
        bounded_only: false,
        conclusion,
        status: ClaimStatus::Theorem,
        citation,
    }
}

fn imp(
    id: &'static str,
    hypotheses: PropSet,
    conclusion: PropSet,
    citation: &'static str,
) -> Claim {
    thm(id, hypotheses, Conclusion::AllOf(conclusion), citation)
}

fn leak(s: String) -> &'static str {
    Box::leak(s.into_boxed_str())
}

fn req(class: &str) -> PropSet {
    registry()
        .get(class)
        .unwrap_or_else(|| panic!("class {class} is registered"))
        .required
}

/// `X + P = Y` as two membership implications between required sets.
fn identity(out: &mut Vec<Claim>, x: &str, added: PropSet, y: &str) {
    let lhs = req(x).union(added);
    let names = added.iter().map(|p| p.key()).collect::<Vec<_>>().join("+");
    let name = if names.is_empty() {
        format!("{x}={y}")
    } else {
        format!("{x}+{names}={y}")
    };
    let cite = leak(format!("class identity {name}"));
    out.push(imp(leak(format!("{name}:fwd")), lhs, req(y), cite));
    out.push(imp(leak(format!("{name}:bwd")), req(y), lhs, cite));
}

/// Two property sets define the same class.
fn same_class(out: &mut Vec<Claim>, id: &str, a: PropSet, b: PropSet, cite: &'static str) {
    out.push(imp(leak(format!("{id}:fwd")), a, b, cite));
    out.push(imp(leak(format!("{id}:bwd")), b, a, cite));
}

fn build() -> Vec<Claim> {
    use PropertyId::*;
    let eq = Conclusion::Equivalent;
    let list = "implication list";
    let mut c = vec![
        imp("Re=>S", ps![Re], ps![S], list),
        imp("M=>N", ps![M], ps![N], list),
        imp("L+An=>N", ps![L, An], ps![N], list),
        imp("K+An=>N", ps![K, An], ps![N], list),
        imp("C+An=>Ex", ps![C, An], ps![Ex], list),
        imp("Ex+Re=>C", ps![Ex, Re], ps![C], list),
        imp("Re+Ex=>D", ps![Re, Ex], ps![D], list),
        imp("Re+Ex+An=>M", ps![Re, Ex, An], ps![M], list),
        imp("Re+Ex+An=>N", ps![Re, Ex, An], ps![N], list),
        imp("Re+K=>L", ps![Re, K], ps![L], list),
        imp("N+K=>L", ps![N, K], ps![L], list),
        imp("M+K=>L", ps![M, K], ps![L], list),
        imp("Re+L+Ex=>K", ps![Re, L, Ex], ps![K], list),
        imp("M+L+B=>K", ps![M, L, B], ps![K], list),
        imp("M+L+StarStar=>K", ps![M, L, StarStar], ps![K], list),
        thm("Ex|-B<=>BB", ps![Ex], eq(B, BB), list),
        imp("Ex+B=>BB", ps![Ex, B], ps![BB], list),
        imp("Ex+BB=>B", ps![Ex, BB], ps![B], list),
        imp("Re+Ex+Star=>BB", ps![Re, Ex, Star], ps![BB], list),
        imp("N+B=>Star", ps![N, B], ps![Star], list),
        imp("M+B=>Star", ps![M, B], ps![Star], list),
        imp("N+Star=>Tr", ps![N, Star], ps![Tr], list),
        imp("M+Star=>Tr", ps![M, Star], ps![Tr], list),
        imp("N+B=>Tr", ps![N, B], ps![Tr], list),
        imp("M+B=>Tr", ps![M, B], ps![Tr], list),
        imp("N+BB=>StarStar", ps![N, BB], ps![StarStar], list),
        imp("M+BB=>StarStar", ps![M, BB], ps![StarStar], list),
        imp("N+StarStar=>Tr", ps![N, StarStar], ps![Tr], list),
        imp("M+StarStar=>Tr", ps![M, StarStar], ps![Tr], list),
        imp("N+BB=>Tr", ps![N, BB], ps![Tr], list),
        imp("M+BB=>Tr", ps![M, BB], ps![Tr], list),
        imp("M+BB=>Re", ps![M, BB], ps![Re], list),
        imp("M+BB=>D", ps![M, BB], ps![D], list),
        imp("M+B=>Re", ps![M, B], ps![Re], list),
        imp("BB+D+N=>C", ps![BB, D, N], ps![C], list),
        imp("M+BB=>C", ps![M, BB], ps![C], list),
        imp("BB+D+N+An=>Ex", ps![BB, D, N, An], ps![Ex], list),
        imp("BB+D+L+An=>Ex", ps![BB, D, L, An], ps![Ex], list),
        imp("M+BB+An=>Ex", ps![M, BB, An], ps![Ex], list),
        imp("B+C+K+An=>Re", ps![B, C, K, An], ps![Re], list),
        imp("BB+D+Re+An=>N", ps![BB, D, Re, An], ps![N], list),
        imp("Re+Ex+Tr=>StarStar", ps![Re, Ex, Tr], ps![StarStar], list),
        // Theorems on RME-type algebras and the M + BB result.
        thm(
            "Re+M+Ex|-B<=>BB",
            ps![Re, M, Ex],
            eq(B, BB),
            "theorem: B, BB and * agree under Re, M, Ex",
        ),
        thm(
            "Re+M+Ex|-BB<=>Star",
            ps![Re, M, Ex],
            eq(BB, Star),
            "theorem: B, BB and * agree under Re, M, Ex",
        ),
        thm(
            "Re+M+Ex|-StarStar<=>Tr",
            ps![Re, M, Ex],
            eq(StarStar, Tr),
            "theorem: ** and Tr agree under Re, M, Ex",
        ),
        thm(
            "Re+M+B+An|-Ex<=>BB",
            ps![Re, M, B, An],
            eq(Ex, BB),
            "theorem: Ex and BB agree under Re, M, B, An",
        ),
        imp("M+BB=>B", ps![M, BB], ps![B], "theorem: M and BB give B"),
        imp(
            "M+B=>StarStar",
            ps![M, B],
            ps![StarStar],
            "theorem: M and B give **",
        ),
    ];

    // Equivalent definitions of BCI and BCK.
    let defs = "equivalent class definitions";
    same_class(
        &mut c,
        "BCI=B+C+Re+An",
        ps![BB, M, An],
        ps![B, C, Re, An],
        defs,
    );
    same_class(
        &mut c,
        "BCK=B+C+K+An",
        ps![BB, M, L, An],
        ps![B, C, K, An],
        defs,
    );
    same_class(
        &mut c,
        "BCI=BB+D+Re+N+An",
        ps![BB, D, Re, N, An],
        ps![BB, M, An],
        defs,
    );
    same_class(
        &mut c,
        "BCI=BB+D+Re+An",
        ps![BB, D, Re, An],
        ps![BB, M, An],
        defs,
    );
    same_class(
        &mut c,
        "BCK=BB+D+Re+L+An",
        ps![BB, D, Re, L, An],
        ps![BB, M, L, An],
        defs,
    );

    // Facts about BCH and BCI.
    c.push(imp(
        "BCH=>D+M+N",
        req("BCH"),
        ps![D, M, N],
        "BCH properties",
    ));
    c.push(imp(
        "BCI=>Ex+U+B+M+Star+StarStar",
        req("BCI"),
        ps![Ex, U, B, M, Star, StarStar],
        "BCI properties",
    ));
    c.push(imp("BCI<=BCH", req("BCI"), req("BCH"), "BCI inside BCH"));

    // Class identities.
    for (x, added, y) in [
        ("BCI", ps![L], "BCK"),
        ("BCC", ps![Ex], "BCK"),
        ("BZ", ps![Ex], "BCI"),
        ("BZ", ps![L], "BCC"),
        ("BE", ps![Star], "pre-BCK"),
        ("pre-BCK", ps![An], "BCK"),
        ("pre-BZ", ps![An], "BZ"),
        ("pre-BCI", ps![An], "BCI"),
        ("RME", ps![An], "BCH"),
        ("aRM", ps![B], "BZ"),
        ("aRM", ps![Ex], "BCH"),
        ("pre-BBBZ", ps![An], "BCI"),
        ("pre-BBBCC", ps![An], "BCK"),
        ("pre-BBBZ", ps![L], "pre-BBBCC"),
        ("BZ", ps![BB], "BCI"),
        ("BCC", ps![BB], "BCK"),
        ("tRM", ps![Star], "*RM"),
        ("*RM", ps![B], "pre-BZ"),
        ("RM**", ps![B], "pre-BZ"),
        ("*RM**", ps![B], "pre-BZ"),
        ("oRM", ps![Star], "*aRM"),
        ("*aRM", ps![B], "BZ"),
        ("aRM**", ps![B], "BZ"),
        ("*aRM**", ps![B], "BZ"),
        ("tRML", ps![Star], "*RML"),
        ("*RML", ps![B], "pre-BCC"),
        ("RML**", ps![B], "pre-BCC"),
        ("*RML**", ps![B], "pre-BCC"),
        ("oRML", ps![Star], "*aRML"),
        ("*aRML", ps![B], "BCC"),
        ("aRML**", ps![B], "BCC"),
        ("*aRML**", ps![B], "BCC"),
        ("RME**", ps![B], "pre-BCI"),
        ("BCH**", ps![B], "BCI"),
        ("BE**", ps![B], "pre-BCK"),
        ("aBE**", ps![B], "BCK"),
    ] {
        identity(&mut c, x, added, y);
    }

    // (pi), (pimpl), (p-1), (p-2).
    let pi = "pi and pimpl implications";
    c.extend([
        imp("Re+Pimpl=>L", ps![Re, Pimpl], ps![L], pi),
        imp("Re+Pi=>L", ps![Re, Pi], ps![L], pi),
        imp("Re+M+Pimpl=>Pi", ps![Re, M, Pimpl], ps![Pi], pi),
        imp(
            "Re+L+Ex+StarStar=>P2",
            ps![Re, L, Ex, StarStar],
            ps![P2],
            pi,
        ),
        imp("Ex+B+Star+Pi=>P1", ps![Ex, B, Star, Pi], ps![P1], pi),
        imp("P1+P2+An=>Pimpl", ps![P1, P2, An], ps![Pimpl], pi),
        imp(
            "Re+Ex+B+StarStar+Star+L+An+Pi=>Pimpl",
            ps![Re, Ex, B, StarStar, Star, L, An, Pi],
            ps![Pimpl],
            pi,
        ),
        imp("Pimpl+K=>B", ps![Pimpl, K], ps![B], pi),
        imp("BE**=>P2", req("BE**"), ps![P2], pi),
        imp("aBE**=>P2", req("aBE**"), ps![P2], pi),
        imp("pre-BCK=>P2", req("pre-BCK"), ps![P2], pi),
        imp("BCK=>P2", req("BCK"), ps![P2], pi),
        imp("pre-BCK+Pi=>P1", req("pre-BCK").union(ps![Pi]), ps![P1], pi),
        imp("BCK+Pi=>P1", req("BCK").union(ps![Pi]), ps![P1], pi),
        imp("BCK+Pi=>Pimpl", req("BCK").union(ps![Pi]), ps![Pimpl], pi),
        thm("BCK|-Pimpl<=>Pi", req("BCK"), eq(Pimpl, Pi), pi),
    ]);
    // Proper members of these classes never satisfy (pimpl): with (pimpl) added,
    // one of the class's non-pi forbidden properties must hold.
    for x in [
        "BE", "aBE", "BE**", "aBE**", "RML**", "*RML**", "aRML**", "*aRML**",
    ] {
        let def = registry().get(x).expect("registered");
        let forbidden = def.proper_forbidden.expect("proper variant");
        let goal: PropSet = forbidden.iter().filter(|&p| p != Pi).collect();
        c.push(thm(
            leak(format!("proper-{x}+Pimpl=empty")),
            def.required.union(ps![Pimpl]),
            Conclusion::AnyOf(goal),
            leak(format!("no proper {x} algebra verifies pimpl")),
        ));
    }

    // Negation lemmas on bounded tables.
    let neg = "bounded negation lemma";
    for (id, h, g) in [
        ("Ex=>G1", ps![Ex], ps![G1]),
        ("Ex+DN=>G2", ps![Ex, DN], ps![G2]),
        ("Ex+DN=>G3", ps![Ex, DN], ps![G3]),
        ("D=>G4", ps![D], ps![G4]),
        ("BB=>G5", ps![BB], ps![G5]),
        ("StarStar=>G6", ps![StarStar], ps![G6]),
        ("StarStar+DN=>G7", ps![StarStar, DN], ps![G7]),
        ("U=>G8", ps![U], ps![G8]),
    ] {
        c.push(Claim {
            bounded_only: true,
            ..imp(id, h, g, neg)
        });
    }

    // Independence remarks.
    let non = |id, hypotheses, goal, example_size, citation| Claim {
        id,
        hypotheses,
        bounded_only: false,
        conclusion: Conclusion::AllOf(goal),
        status: ClaimStatus::NonImplication { example_size },
        citation,
    };
    c.extend([
        non(
            "Tr=/=>BB",
            ps![Re, M, L, Ex, An, StarStar, Tr],
            ps![BB],
            4,
            "transitive aBE** table without BB",
        ),
        non(
            "Pi=/=>Pimpl",
            ps![Re, M, L, Ex, An, Pi],
            ps![Pimpl],
            4,
            "aBE table with pi but not pimpl",
        ),
        non(
            "Star=/=>StarStar",
            ps![Re, M, Star],
            ps![StarStar],
            3,
            "proper *RM tables",
        ),
        non(
            "StarStar=/=>Star",
            ps![Re, M, StarStar],
            ps![Star],
            3,
            "proper RM** tables",
        ),
        non("B=/=>BB", ps![Re, M, B], ps![BB], 5, "proper pre-BZ tables"),
        non(
            "StarStar=/=>B",
            ps![Re, M, StarStar],
            ps![B],
            4,
            "proper RM** tables",
        ),
    ]);
    c
}

/// All registered claims in a fixed order.
pub fn claim_registry() -> &'static [Claim] {
    static REG: OnceLock<Vec<Claim>> = OnceLock::new();
    REG.get_or_init(build)
}

pub fn get_claim(id: &str) -> Result<&'static Claim, ClaimError> {
    claim_registry()
        .iter()
        .find(|c| c.id == id)
        .ok_or_else(|| ClaimError::UnknownClaim(id.to_string()))
}

/// Default search size: the size limit for theorems, the published example size
/// (capped at the limit) for non-implications.
pub fn default_budget(claim: &Claim) -> usize {
    match claim.status {
        ClaimStatus::Theorem => size_limit(claim),
        ClaimStatus::NonImplication { example_size } => example_size.min(size_limit(claim)),
    }
}

// ---------------------------------------------------------------------------
// Report

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    /// Theorem with no counterexample.
    Verified,
    /// Theorem with a counterexample.
    Failed,
    /// Non-implication with a counterexample at or below the published example size.
    Refuted,
    /// Non-implication without a counterexample in budget.
    NotFound,
    /// The claim could not be searched.
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct ReportEntry {
    pub id: String,
    pub status: String,
    pub max_size: usize,
    /// Whether the size-4 sweep with Re and M added was run.
    pub rm_sweep: bool,
    pub outcome: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl ReportEntry {
    pub fn ok(&self) -> bool {
        matches!(self.outcome, Outcome::Verified | Outcome::Refuted)
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ClaimsReport {
    pub entries: Vec<ReportEntry>,
}

impl ClaimsReport {
    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| !e.ok())
    }

    pub fn all_ok(&self) -> bool {
        self.failures().next().is_none()
    }

    /// One line per claim.
    pub fn summary(&self) -> String {
        let width = self.entries.iter().map(|e| e.id.len()).max().unwrap_or(0);
        let mut s = String::new();
        for e in &self.entries {
            let outcome = match e.outcome {
                Outcome::Verified => format!(
                    "verified n<={}{}",
                    e.max_size,
                    if e.rm_sweep { " (+RM n=4)" } else { "" }
                ),
                Outcome::Refuted => format!("refuted at n={}", e.counterexample_size.unwrap_or(0)),
                Outcome::Failed => format!("FAILED at n={}", e.counterexample_size.unwrap_or(0)),
                Outcome::NotFound => format!("NOT FOUND up to n={}", e.max_size),
                Outcome::Error => "ERROR".to_string(),
            };
            s.push_str(&format!("{:<width$}  {outcome}", e.id));
            if let Some(d) = &e.detail {
                s.push_str("  ");
                s.push_str(d);
            }
            s.push('\n');
        }
        let bad = self.failures().count();
        s.push_str(&format!(
            "{} claims, {} ok, {} failing\n",
            self.entries.len(),
            self.entries.len() - bad,
            bad
        ));
        s
    }
}

fn describe(c: &Counterexample) -> String {
    let parts: Vec<String> = c.failures.iter().map(|r| r.describe(&c.table)).collect();
    format!("{}: {}", c.direction, parts.join("; "))
}

/// Checks one claim with its budget: theorems are searched up to the budget and
/// then swept at size 4 with Re and M added; non-implications need a counterexample.
pub fn check_claim(claim: &Claim, max_size: usize, jobs: usize) -> ReportEntry {
    let start = Instant::now();
    let mut entry = ReportEntry {
        id: claim.id.to_string(),
        status: match claim.status {
            ClaimStatus::Theorem => "theorem".to_string(),
            ClaimStatus::NonImplication { example_size } => {
                format!("non-implication (example size {example_size})")
            }
        },
        max_size,
        rm_sweep: false,
        outcome: Outcome::Error,
        counterexample_size: None,
        detail: None,
        elapsed: Duration::ZERO,
    };
    match claim.status {
        ClaimStatus::Theorem => {
            let mut verdict = verify_claim_with(claim, max_size, jobs);
            if matches!(verdict, Ok(Verdict::Verified)) && max_size < 4 {
                entry.rm_sweep = true;
                verdict = rm_sweep(claim, jobs)
                    .map(|c| c.map_or(Verdict::Verified, Verdict::Counterexample))
                    .map_err(ClaimError::from);
            }
            match verdict {
                Ok(Verdict::Verified) => entry.outcome = Outcome::Verified,
                Ok(Verdict::Counterexample(c)) => {
                    entry.outcome = Outcome::Failed;
                    entry.counterexample_size = Some(c.size());
                    entry.detail = Some(describe(&c));
                }
                Err(e) => entry.detail = Some(e.to_string()),
            }
        }
        ClaimStatus::NonImplication { example_size } => match refute_with(claim, max_size, jobs) {
            Ok(Refutation::Counterexample(c)) => {
                entry.outcome = if c.size() <= example_size {
                    Outcome::Refuted
                } else {
                    Outcome::NotFound
                };
                entry.counterexample_size = Some(c.size());
                entry.detail = Some(describe(&c));
            }
            Ok(Refutation::NotFound) => entry.outcome = Outcome::NotFound,
            Err(e) => entry.detail = Some(e.to_string()),
        },
    }
    entry.elapsed = start.elapsed();
    entry
}

/// Checks every registered claim. `budgets` overrides the default size per claim id.
pub fn verify_all(budgets: &BTreeMap<String, usize>, jobs: usize) -> ClaimsReport {
    let entries = claim_registry()
        .iter()
        .map(|c| {
            check_claim(
                c,
                budgets
                    .get(c.id)
                    .copied()
                    .unwrap_or_else(|| default_budget(c)),
                jobs,
            )
        })
        .collect();
    ClaimsReport { entries }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::props::eval_property;
    use PropertyId::*;

    fn adhoc(h: PropSet, goal: PropSet) -> Claim {
        imp("adhoc", h, goal, "test")
    }

    #[test]
    fn ids_unique() {
        let mut ids: Vec<_> = claim_registry().iter().map(|c| c.id).collect();
        let n = ids.len();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), n);
    }

    #[test]
    fn m_implies_n_at_three() {
        assert!(matches!(
            verify_claim(get_claim("M=>N").unwrap(), 3).unwrap(),
            Verdict::Verified
        ));
    }

    #[test]
    fn arm_does_not_force_ex() {
        let claim = adhoc(ps![Re, M, An], ps![Ex]);
        let Verdict::Counterexample(c) = verify_claim(&claim, 3).unwrap() else {
            panic!("expected a counterexample")
        };
        assert_eq!(c.size(), 3);
        for p in [Re, M, An] {
            assert!(eval_property(&c.table, p).satisfied);
        }
        assert!(!eval_property(&c.table, Ex).satisfied);
    }

    #[test]
    fn self_refutation_not_found() {
        let claim = adhoc(ps![Re], ps![Re]);
        assert!(matches!(refute(&claim, 3).unwrap(), Refutation::NotFound));
    }

    #[test]
    fn size_limits() {
        let claim = adhoc(ps![Re], ps![S]);
        assert!(matches!(
            verify_claim(&claim, 4),
            Err(ClaimError::SizeTooLarge { .. })
        ));
        let claim = adhoc(ps![M], ps![N]);
        assert!(verify_claim(&claim, 5).is_err());
    }

    #[test]
    fn equivalence_splits() {
        let d = directions(get_claim("Ex|-B<=>BB").unwrap());
        assert_eq!(d.len(), 2);
        assert_eq!(d[0].hypotheses, ps![Ex, B]);
        assert_eq!(d[1].goal, ps![B]);
    }

    #[test]
    fn star_independence_at_three() {
        for id in ["Star=/=>StarStar", "StarStar=/=>Star"] {
            match refute(get_claim(id).unwrap(), 3).unwrap() {
                Refutation::Counterexample(c) => assert_eq!(c.size(), 3),
                Refutation::NotFound => panic!("{id}"),
            }
        }
    }
}
