//! Worked example tables with their stated classifications and property
//! verdicts, and a regression runner that recomputes all of it.
//!
//! The data is a transcription. Where a recomputed verdict disagrees with the
//! stated one, the runner reports a `PaperDiscrepancy`; `ImplementationFailure`
//! is reserved for internal inconsistencies of this crate.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classes::{hierarchy_edges, is_member, is_proper_sig, registry};
use crate::core::{Element, PropSet, PropertyId, Table};
use crate::io::{parse_table, IoError};
use crate::props::{eval_all, eval_property, from_textual, violated_at};

include!(concat!(env!("OUT_DIR"), "/corpus_files.rs"));

static MANIFEST: &str = include_str!("../corpus/manifest.toml");

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("{file}: {source}")]
    Parse { file: String, source: IoError },
    #[error("manifest: {0}")]
    Manifest(String),
    #[error("entry `{id}`: table file `{file}` not found")]
    MissingFile { id: String, file: String },
    #[error("entry `{id}`: unknown class `{class}`")]
    UnknownClass { id: String, class: String },
    #[error("entry `{id}`: unknown property `{token}`")]
    UnknownProperty { id: String, token: String },
    #[error("entry `{id}`: witness `{witness}` for {prop} is malformed: {reason}")]
    WitnessMismatch {
        id: String,
        prop: PropertyId,
        witness: String,
        reason: String,
    },
    #[error("duplicate entry id `{0}`")]
    DuplicateId(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

/// Stated verdict for one property.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expected {
    Satisfied,
    /// Violated, optionally at the stated element names.
    Violated(Option<Vec<String>>),
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub id: String,
    pub file: String,
    pub table: Table,
    pub expected_class: String,
    /// `None` for classes without a proper variant.
    pub expected_proper: Option<bool>,
    pub expected_flags: BTreeMap<PropertyId, Expected>,
    pub notes: String,
}

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub entries: Vec<CorpusEntry>,
    /// Pairs of entry ids whose tables have identical cells.
    pub duplicates: Vec<(String, String)>,
}

#[derive(Debug, Deserialize)]
struct Manifest {
    #[serde(default)]
    entry: Vec<ManifestEntry>,
}

#[derive(Debug, Deserialize)]
struct ManifestEntry {
    id: String,
    file: String,
    class: String,
    #[serde(default)]
    proper: Option<bool>,
    #[serde(default)]
    notes: String,
    #[serde(default)]
    satisfied: Vec<String>,
    #[serde(default)]
    violated: Vec<String>,
}

/// Loads the corpus compiled into the crate.
pub fn load_corpus() -> Result<Corpus, CorpusError> {
    build_corpus(MANIFEST, |name| {
        CORPUS_FILES
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, s)| s.to_string())
    })
}

/// Loads a corpus from `dir/manifest.toml` and the table files next to it.
pub fn load_corpus_from(dir: &Path) -> Result<Corpus, CorpusError> {
    let manifest = std::fs::read_to_string(dir.join("manifest.toml"))?;
    build_corpus(&manifest, |name| {
        std::fs::read_to_string(dir.join(name)).ok()
    })
}

fn parse_prop(id: &str, token: &str) -> Result<PropertyId, CorpusError> {
    token
        .trim()
        .parse()
        .map_err(|_| CorpusError::UnknownProperty {
            id: id.to_string(),
            token: token.to_string(),
        })
}

fn build_corpus(
    manifest: &str,
    read: impl Fn(&str) -> Option<String>,
) -> Result<Corpus, CorpusError> {
    let m: Manifest = toml::from_str(manifest).map_err(|e| CorpusError::Manifest(e.to_string()))?;
    let mut entries: Vec<CorpusEntry> = Vec::with_capacity(m.entry.len());
    for e in m.entry {
        if entries.iter().any(|x| x.id == e.id) {
            return Err(CorpusError::DuplicateId(e.id));
        }
        let text = read(&e.file).ok_or_else(|| CorpusError::MissingFile {
            id: e.id.clone(),
            file: e.file.clone(),
        })?;
        let table = parse_table(&text).map_err(|source| CorpusError::Parse {
            file: e.file.clone(),
            source,
        })?;
        let def = registry()
            .get(&e.class)
            .ok_or_else(|| CorpusError::UnknownClass {
                id: e.id.clone(),
                class: e.class.clone(),
            })?;
        let expected_proper = match (e.proper, def.proper_forbidden) {
            (Some(p), _) => Some(p),
            (None, Some(_)) => Some(false),
            (None, None) => None,
        };
        let mut flags = BTreeMap::new();
        for s in &e.satisfied {
            flags.insert(parse_prop(&e.id, s)?, Expected::Satisfied);
        }
        for v in &e.violated {
            let (name, witness) = match v.split_once(':') {
                Some((p, w)) => (p, Some(w)),
                None => (v.as_str(), None),
            };
            let prop = parse_prop(&e.id, name)?;
            let witness = match witness {
                None => None,
                Some(w) => {
                    let names: Vec<String> = w.split(',').map(|s| s.trim().to_string()).collect();
                    let bad = |reason: String| CorpusError::WitnessMismatch {
                        id: e.id.clone(),
                        prop,
                        witness: w.to_string(),
                        reason,
                    };
                    if names.len() != prop.arity() {
                        return Err(bad(format!("{} needs {} elements", prop, prop.arity())));
                    }
                    if let Some(n) = names.iter().find(|n| table.element(n).is_none()) {
                        return Err(bad(format!("no element named `{n}`")));
                    }
                    Some(names)
                }
            };
            flags.insert(prop, Expected::Violated(witness));
        }
        entries.push(CorpusEntry {
            id: e.id,
            file: e.file,
            table,
            expected_class: def.id.to_string(),
            expected_proper,
            expected_flags: flags,
            notes: e.notes,
        });
    }
    let mut duplicates = Vec::new();
    for (i, a) in entries.iter().enumerate() {
        for b in &entries[i + 1..] {
            if a.table.same_cells(&b.table) {
                duplicates.push((a.id.clone(), b.id.clone()));
            }
        }
    }
    Ok(Corpus {
        entries,
        duplicates,
    })
}

// ---------------------------------------------------------------------------
// Regression

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FindingKind {
    /// The recomputation contradicts what the source states.
    PaperDiscrepancy,
    /// This crate disagrees with itself.
    ImplementationFailure,
}

impl fmt::Display for FindingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FindingKind::PaperDiscrepancy => "PAPER-DISCREPANCY",
            FindingKind::ImplementationFailure => "IMPLEMENTATION-FAILURE",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Finding {
    pub entry: String,
    pub kind: FindingKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub property: Option<PropertyId>,
    pub message: String,
}

/// How a stated witness was matched against the formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reading {
    /// Violates with the elements read as (x, y, z).
    Xyz,
    /// Violates only with the elements read in the formula's variable order.
    Textual,
}

#[derive(Debug, Clone, Serialize)]
pub struct EntryReport {
    pub id: String,
    pub size: usize,
    pub expected_class: String,
    pub member: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proper: Option<bool>,
    pub proper_classes: Vec<String>,
    pub flags_checked: usize,
    pub flags_agreeing: usize,
    /// Witnesses that matched only under the textual reading.
    pub textual_witnesses: Vec<PropertyId>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct RegressionReport {
    pub entries: Vec<EntryReport>,
    pub findings: Vec<Finding>,
    pub duplicates: Vec<(String, String)>,
}

impl RegressionReport {
    pub fn implementation_failures(&self) -> usize {
        self.findings
            .iter()
            .filter(|f| f.kind == FindingKind::ImplementationFailure)
            .count()
    }

    pub fn published_discrepancies(&self) -> usize {
        self.findings
            .iter()
            .filter(|f| f.kind == FindingKind::PaperDiscrepancy)
            .count()
    }

    /// True when there are no implementation failures.
    pub fn success(&self) -> bool {
        self.implementation_failures() == 0
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let proper = match e.proper {
                Some(true) => "proper",
                Some(false) => "NOT proper",
                None => "-",
            };
            s.push_str(&format!(
                "{:<18} n={} {:<14} member={} {:<10} flags {}/{}\n",
                e.id,
                e.size,
                e.expected_class,
                if e.member { "yes" } else { "NO" },
                proper,
                e.flags_agreeing,
                e.flags_checked
            ));
        }
        for f in &self.findings {
            let p = f.property.map(|p| format!(" {p}")).unwrap_or_default();
            s.push_str(&format!("{} {}{}: {}\n", f.kind, f.entry, p, f.message));
        }
        for (a, b) in &self.duplicates {
            s.push_str(&format!("duplicate tables: {a} and {b}\n"));
        }
        s.push_str(&format!(
            "{} entries, {} PAPER-DISCREPANCY findings, {} implementation failures\n",
            self.entries.len(),
            self.published_discrepancies(),
            self.implementation_failures()
        ));
        s
    }
}

fn check_entry(
    e: &CorpusEntry,
    edges: &[(&str, &str)],
    findings: &mut Vec<Finding>,
) -> EntryReport {
    let t = &e.table;
    let sig = eval_all(t);
    let mut find = |kind, property, message: String| {
        findings.push(Finding {
            entry: e.id.clone(),
            kind,
            property,
            message,
        });
    };

    // Internal consistency: one-pass bits versus individual verdicts, and witnesses.
    for p in PropertyId::ALL {
        let r = eval_property(t, p);
        let single = r.applicable && r.satisfied;
        if single != sig.has(p) {
            find(
                FindingKind::ImplementationFailure,
                Some(p),
                "signature bit disagrees with single evaluation".into(),
            );
        }
        if let Some(w) = r.witness {
            if !violated_at(t, p, w.vars()) {
                find(
                    FindingKind::ImplementationFailure,
                    Some(p),
                    format!("reported witness {} does not violate", w.display(t)),
                );
            }
        }
    }
    let reg = registry();
    for (sub, sup) in edges {
        let (a, b) = (reg.get(sub).unwrap(), reg.get(sup).unwrap());
        if is_member(&sig, a) && !is_member(&sig, b) {
            find(
                FindingKind::ImplementationFailure,
                None,
                format!("member of {sub} but not of {sup}"),
            );
        }
    }

    let def = reg.get(&e.expected_class).expect("validated at load");
    let member = is_member(&sig, def);
    if !member {
        let missing: Vec<String> = def
            .required
            .iter()
            .filter(|&p| !sig.has(p))
            .map(|p| p.to_string())
            .collect();
        find(
            FindingKind::PaperDiscrepancy,
            None,
            format!("not a {} algebra: fails {}", def.id, missing.join(", ")),
        );
    }
    let proper = def
        .proper_forbidden
        .map(|_| member && is_proper_sig(&sig, def));
    if let (Some(want), Some(got)) = (e.expected_proper, proper) {
        if want != got && member {
            let held: PropSet = def
                .proper_forbidden
                .unwrap()
                .iter()
                .filter(|&p| sig.has(p))
                .collect();
            find(
                FindingKind::PaperDiscrepancy,
                None,
                format!(
                    "stated proper={want}, recomputed {got} (forbidden properties holding: {held})"
                ),
            );
        }
    }

    let mut agreeing = 0;
    let mut textual = Vec::new();
    for (&p, want) in &e.expected_flags {
        let r = eval_property(t, p);
        let holds = r.applicable && r.satisfied;
        match want {
            Expected::Satisfied => {
                if holds {
                    agreeing += 1;
                } else {
                    find(
                        FindingKind::PaperDiscrepancy,
                        Some(p),
                        format!("stated satisfied, recomputed {}", r.describe(t)),
                    );
                }
            }
            Expected::Violated(w) => {
                if holds {
                    find(
                        FindingKind::PaperDiscrepancy,
                        Some(p),
                        "stated violated, recomputed satisfied".into(),
                    );
                    continue;
                }
                let Some(names) = w else {
                    agreeing += 1;
                    continue;
                };
                let stated: Vec<Element> = names
                    .iter()
                    .map(|n| t.element(n).expect("validated at load"))
                    .collect();
                if violated_at(t, p, &stated) {
                    agreeing += 1;
                } else if violated_at(t, p, &from_textual(p, &stated)) {
                    agreeing += 1;
                    textual.push(p);
                } else {
                    find(
                        FindingKind::PaperDiscrepancy,
                        Some(p),
                        format!(
                            "stated witness ({}) does not violate in either reading; {}",
                            names.join(","),
                            r.describe(t)
                        ),
                    );
                }
            }
        }
    }

    EntryReport {
        id: e.id.clone(),
        size: t.size(),
        expected_class: e.expected_class.clone(),
        member,
        proper,
        proper_classes: crate::classes::classify_proper(&sig)
            .into_iter()
            .map(str::to_string)
            .collect(),
        flags_checked: e.expected_flags.len(),
        flags_agreeing: agreeing,
        textual_witnesses: textual,
    }
}

/// Recomputes every entry. Findings never abort the run.
pub fn run_regression(corpus: &Corpus) -> RegressionReport {
    let edges = hierarchy_edges();
    let mut findings = Vec::new();
    let entries = corpus
        .entries
        .iter()
        .map(|e| check_entry(e, &edges, &mut findings))
        .collect();
    RegressionReport {
        entries,
        findings,
        duplicates: corpus.duplicates.clone(),
    }
}
