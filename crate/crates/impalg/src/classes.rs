//! Class registry: required property sets, proper variants and containment edges.

use std::sync::OnceLock;

use serde::Serialize;
use thiserror::Error;

use crate::core::{ClassDef, EvalResult, PropSet, PropertyId, PropertySignature, Table};
use crate::props::{eval_all, eval_property};

pub type ClassId = &'static str;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassError {
    #[error("unknown class `{0}`")]
    UnknownClass(String),
    #[error("class `{0}` has no proper variant")]
    NoProperVariant(String),
}

/// Ordered, immutable collection of class definitions.
#[derive(Debug)]
pub struct ClassRegistry {
    defs: Vec<ClassDef>,
}

/// One exported registry record.
#[derive(Debug, Clone, Serialize)]
pub struct ClassRecord {
    pub id: String,
    pub required: Vec<String>,
    pub proper_forbidden: Option<Vec<String>>,
    pub citation: String,
}

macro_rules! props {
    ($($p:ident),* $(,)?) => { PropSet::of(&[$(PropertyId::$p),*]) };
}

const PI_BASES: [&str; 18] = [
    "BCC",
    "BE",
    "pre-BCK",
    "pre-BCC",
    "aBE",
    "RML",
    "aRML",
    "tRML",
    "*RML",
    "RML**",
    "*RML**",
    "pre-BBBCC",
    "oRML",
    "*aRML",
    "aRML**",
    "*aRML**",
    "BE**",
    "aBE**",
];

const PIMPL_BASES: [&str; 2] = ["pre-BCK", "pre-BBBCC"];

fn pi_forbidden(base: &str) -> PropSet {
    match base {
        "BCC" => props![Ex, Pimpl],
        "BE" => props![An, B, BB, Star, StarStar, Tr, Pimpl],
        "pre-BCK" => props![An, Pimpl],
        "pre-BCC" => props![An, Ex, BB, Pimpl],
        "aBE" => props![B, BB, Star, StarStar, Tr, Pimpl],
        "RML" => props![Ex, An, B, Star, BB, StarStar, Tr, Pimpl],
        "aRML" => props![Ex, B, Star, BB, StarStar, Tr, Pimpl],
        "tRML" => props![An, Ex, Star, StarStar, Pimpl],
        "*RML" => props![An, Ex, B, StarStar, BB, Pimpl],
        "RML**" => props![An, Ex, BB, Star, B, Pimpl],
        "*RML**" => props![An, Ex, B, BB, Pimpl],
        "pre-BBBCC" => props![An, Ex, Pimpl],
        "oRML" => props![Ex, Star, StarStar, Pimpl],
        "*aRML" => props![B, StarStar, Pimpl],
        "aRML**" => props![Ex, BB, Star, Pimpl],
        "*aRML**" => props![Ex, B, BB, Pimpl],
        "BE**" => props![An, BB, Star, Pimpl],
        "aBE**" => props![BB, Star, Pimpl],
        _ => unreachable!("no pi variant for {base}"),
    }
}

fn pimpl_forbidden(base: &str) -> PropSet {
    match base {
        "pre-BCK" => props![An],
        "pre-BBBCC" => props![An, Ex],
        _ => unreachable!("no pimpl variant for {base}"),
    }
}

fn leak(s: String) -> &'static str {
    Box::leak(s.into_boxed_str())
}

fn build() -> Vec<ClassDef> {
    let def = |id, required, forbidden: Option<PropSet>, doc| ClassDef {
        id,
        required,
        proper_forbidden: forbidden,
        doc,
    };
    let mut defs = vec![
        def(
            "RM",
            props![Re, M],
            Some(props![Ex, An, L, B, BB, Star, StarStar, Tr]),
            "RM algebra: (Re), (M)",
        ),
        def(
            "RML",
            props![Re, M, L],
            Some(props![Ex, An, B, Star, BB, StarStar, Tr, Pi]),
            "RML algebra: (Re), (M), (L)",
        ),
        def(
            "BCI",
            props![BB, M, An],
            Some(props![L]),
            "BCI algebra: (BB), (M), (An)",
        ),
        def(
            "BCK",
            props![BB, M, L, An],
            Some(props![Pi]),
            "BCK algebra: (BB), (M), (L), (An)",
        ),
        def(
            "BCH",
            props![Re, Ex, An],
            Some(props![B, BB, Star, StarStar, Tr, L]),
            "BCH algebra: (Re), (Ex), (An)",
        ),
        def(
            "BCC",
            props![Re, M, L, B, An],
            Some(props![Ex, BB, Pi]),
            "BCC algebra: (Re), (M), (L), (B), (An)",
        ),
        def(
            "BZ",
            props![Re, M, B, An],
            Some(props![L, Ex, BB]),
            "BZ algebra: (Re), (M), (B), (An)",
        ),
        def(
            "BE",
            props![Re, M, L, Ex],
            Some(props![An, Tr, Star, StarStar, Pi]),
            "BE algebra: (Re), (M), (L), (Ex)",
        ),
        def(
            "pre-BCK",
            props![Re, M, L, Ex, Star],
            Some(props![An, Pi]),
            "pre-BCK algebra: (Re), (M), (L), (Ex), (*)",
        ),
        def(
            "pre-BCC",
            props![Re, M, L, B],
            Some(props![An, Ex, BB, Pi]),
            "pre-BCC algebra: (Re), (M), (L), (B)",
        ),
        def(
            "aBE",
            props![Re, M, L, Ex, An],
            Some(props![B, BB, Star, StarStar, Tr, Pi]),
            "aBE algebra: BE plus (An)",
        ),
        def(
            "pre-BZ",
            props![Re, M, B],
            Some(props![Ex, An, L, BB]),
            "pre-BZ algebra: (Re), (M), (B)",
        ),
        def(
            "aRM",
            props![Re, M, An],
            Some(props![L, Ex, B, Star, BB, StarStar, Tr]),
            "aRM algebra: RM plus (An)",
        ),
        def(
            "RME",
            props![Re, M, Ex],
            Some(props![An, L, B, BB, Star, StarStar, Tr]),
            "RME algebra: RM plus (Ex)",
        ),
        def(
            "pre-BCI",
            props![Re, M, Ex, B],
            Some(props![An, L]),
            "pre-BCI algebra: (Re), (M), (Ex), (B)",
        ),
        def(
            "aRML",
            props![Re, M, L, An],
            Some(props![Ex, B, Star, BB, StarStar, Tr, Pi]),
            "aRML algebra: RML plus (An)",
        ),
        def(
            "tRM",
            props![Re, M, Tr],
            Some(props![Ex, An, L, Star, StarStar]),
            "tRM algebra: RM plus (Tr)",
        ),
        def(
            "*RM",
            props![Re, M, Star],
            Some(props![Ex, An, L, B, StarStar]),
            "*RM algebra: RM plus (*)",
        ),
        def(
            "RM**",
            props![Re, M, StarStar],
            Some(props![Ex, An, L, BB, Star]),
            "RM** algebra: RM plus (**)",
        ),
        def(
            "*RM**",
            props![Re, M, Star, StarStar],
            Some(props![Ex, An, L, B, BB]),
            "*RM** algebra: RM plus (*), (**)",
        ),
        def(
            "pre-BBBZ",
            props![Re, M, B, BB],
            Some(props![Ex, An, L]),
            "pre-BBBZ algebra: RM plus (B), (BB)",
        ),
        def(
            "oRM",
            props![Re, M, An, Tr],
            Some(props![Star, StarStar, L]),
            "oRM algebra: aRM plus (Tr)",
        ),
        def(
            "*aRM",
            props![Re, M, An, Star],
            Some(props![Ex, L, B, StarStar]),
            "*aRM algebra: aRM plus (*)",
        ),
        def(
            "aRM**",
            props![Re, M, An, StarStar],
            Some(props![Ex, L, BB, Star]),
            "aRM** algebra: aRM plus (**)",
        ),
        def(
            "*aRM**",
            props![Re, M, An, Star, StarStar],
            Some(props![Ex, L, B, BB]),
            "*aRM** algebra: aRM plus (*), (**)",
        ),
        def(
            "tRML",
            props![Re, M, L, Tr],
            Some(props![An, Ex, Star, StarStar, Pi]),
            "tRML algebra: RML plus (Tr)",
        ),
        def(
            "*RML",
            props![Re, M, L, Star],
            Some(props![An, Ex, B, StarStar, Pi]),
            "*RML algebra: RML plus (*)",
        ),
        def(
            "RML**",
            props![Re, M, L, StarStar],
            Some(props![An, Ex, BB, Star, Pi]),
            "RML** algebra: RML plus (**)",
        ),
        def(
            "*RML**",
            props![Re, M, L, Star, StarStar],
            Some(props![An, Ex, B, BB, Pi]),
            "*RML** algebra: RML plus (*), (**)",
        ),
        def(
            "pre-BBBCC",
            props![Re, M, L, B, BB],
            Some(props![An, Ex, Pi]),
            "pre-BBBCC algebra: RML plus (B), (BB)",
        ),
        def(
            "oRML",
            props![Re, M, L, An, Tr],
            Some(props![Ex, Star, StarStar, Pi]),
            "oRML algebra: aRML plus (Tr)",
        ),
        def(
            "*aRML",
            props![Re, M, L, An, Star],
            Some(props![B, StarStar, Pi]),
            "*aRML algebra: aRML plus (*)",
        ),
        def(
            "aRML**",
            props![Re, M, L, An, StarStar],
            Some(props![Ex, BB, Star, Pi]),
            "aRML** algebra: aRML plus (**)",
        ),
        def(
            "*aRML**",
            props![Re, M, L, An, Star, StarStar],
            Some(props![Ex, B, BB, Pi]),
            "*aRML** algebra: aRML plus (*), (**)",
        ),
        def(
            "RME**",
            props![Re, M, Ex, StarStar],
            Some(props![An, BB, Star]),
            "RME** algebra: RME plus (**)",
        ),
        def(
            "BCH**",
            props![Re, M, Ex, StarStar, An],
            Some(props![BB, Star]),
            "BCH** algebra: RME** plus (An)",
        ),
        def(
            "BE**",
            props![Re, M, L, Ex, StarStar],
            Some(props![An, BB, Star, Pi]),
            "BE** algebra: BE plus (**)",
        ),
        def(
            "aBE**",
            props![Re, M, L, Ex, StarStar, An],
            Some(props![BB, Star, Pi]),
            "aBE** algebra: aBE plus (**)",
        ),
    ];
    let base_required = |defs: &[ClassDef], id: &str| {
        defs.iter()
            .find(|d| d.id == id)
            .map(|d| d.required)
            .unwrap()
    };
    for b in PI_BASES {
        let req = base_required(&defs, b).union(props![Pi]);
        defs.push(def(
            leak(format!("pi-{b}")),
            req,
            Some(pi_forbidden(b)),
            leak(format!("{b} algebra verifying (pi)")),
        ));
    }
    for b in PIMPL_BASES {
        let req = base_required(&defs, b).union(props![Pimpl]);
        defs.push(def(
            leak(format!("pimpl-{b}")),
            req,
            Some(pimpl_forbidden(b)),
            leak(format!("{b} algebra verifying (pimpl)")),
        ));
    }
    defs.push(def(
        "Hilbert",
        props![BB, M, L, An, Pimpl],
        None,
        "Hilbert algebra: BCK verifying (pimpl)",
    ));
    defs
}

impl ClassRegistry {
    pub fn defs(&self) -> &[ClassDef] {
        &self.defs
    }

    pub fn get(&self, id: &str) -> Option<&ClassDef> {
        self.defs.iter().find(|d| d.id == id)
    }

    pub fn lookup(&self, id: &str) -> Result<&ClassDef, ClassError> {
        self.get(id)
            .ok_or_else(|| ClassError::UnknownClass(id.to_string()))
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.defs.iter().position(|d| d.id == id)
    }

    pub fn len(&self) -> usize {
        self.defs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }

    /// Structured export, one record per class.
    pub fn records(&self) -> Vec<ClassRecord> {
        let keys = |s: PropSet| s.iter().map(|p| p.key().to_string()).collect::<Vec<_>>();
        self.defs
            .iter()
            .map(|d| ClassRecord {
                id: d.id.to_string(),
                required: keys(d.required),
                proper_forbidden: d.proper_forbidden.map(keys),
                citation: d.doc.to_string(),
            })
            .collect()
    }
}

/// The process-wide registry.
pub fn registry() -> &'static ClassRegistry {
    static REG: OnceLock<ClassRegistry> = OnceLock::new();
    REG.get_or_init(|| ClassRegistry { defs: build() })
}

/// Membership test from a signature.
pub fn is_member(sig: &PropertySignature, def: &ClassDef) -> bool {
    def.required.is_subset(sig.bits)
}

/// Proper membership from a signature alone.
pub fn is_proper_sig(sig: &PropertySignature, def: &ClassDef) -> bool {
    match def.proper_forbidden {
        Some(f) => is_member(sig, def) && (f.0 & sig.bits.0) == 0,
        None => false,
    }
}

/// Every class whose required set the signature satisfies, in registry order.
pub fn classify(sig: &PropertySignature) -> Vec<ClassId> {
    registry()
        .defs
        .iter()
        .filter(|d| is_member(sig, d))
        .map(|d| d.id)
        .collect()
}

/// Every class the signature is a proper member of.
pub fn classify_proper(sig: &PropertySignature) -> Vec<ClassId> {
    registry()
        .defs
        .iter()
        .filter(|d| is_proper_sig(sig, d))
        .map(|d| d.id)
        .collect()
}

/// Outcome of a proper-membership check.
#[derive(Debug, Clone)]
pub struct ProperReport {
    pub class: ClassId,
    pub member: bool,
    pub is_proper: bool,
    /// Failing required properties, with witnesses.
    pub missing: Vec<EvalResult>,
    /// One verdict per forbidden property.
    pub forbidden: Vec<EvalResult>,
}

/// Checks `table` against the proper variant of `cls`.
pub fn check_proper(table: &Table, cls: &str) -> Result<ProperReport, ClassError> {
    let def = registry().lookup(cls)?;
    let forbidden = def
        .proper_forbidden
        .ok_or_else(|| ClassError::NoProperVariant(cls.to_string()))?;
    let missing: Vec<EvalResult> = def
        .required
        .iter()
        .map(|p| eval_property(table, p))
        .filter(|r| !r.satisfied)
        .collect();
    let forbidden: Vec<EvalResult> = forbidden.iter().map(|p| eval_property(table, p)).collect();
    let member = missing.is_empty();
    let is_proper = member && forbidden.iter().all(|r| !r.satisfied);
    Ok(ProperReport {
        class: def.id,
        member,
        is_proper,
        missing,
        forbidden,
    })
}

/// Convenience: classification of a table.
pub fn classify_table(table: &Table) -> Vec<ClassId> {
    classify(&eval_all(table))
}

const BASE_EDGES: &[(&str, &str)] = &[
    ("BCK", "BCI"),
    ("BCI", "BCH"),
    ("BCK", "BCC"),
    ("BCC", "BZ"),
    ("BCI", "BZ"),
    ("BCK", "pre-BCK"),
    ("pre-BCK", "BE"),
    ("BCH", "aRM"),
    ("BZ", "aRM"),
    ("aRML", "aRM"),
    ("BCC", "aRML"),
    ("aBE", "aRML"),
    ("BCK", "aBE"),
    ("aBE", "BCH"),
    ("BCC", "pre-BCC"),
    ("aBE", "BE"),
    ("aRML", "RML"),
    ("pre-BCC", "RML"),
    ("BE", "RML"),
    ("pre-BCK", "pre-BCC"),
    ("aRM", "RM"),
    ("pre-BZ", "RM"),
    ("RME", "RM"),
    ("BZ", "pre-BZ"),
    ("BCH", "RME"),
    ("BCI", "pre-BCI"),
    ("pre-BCI", "pre-BZ"),
    ("pre-BCI", "RME"),
    ("RML", "RM"),
    ("pre-BCC", "pre-BZ"),
    ("BE", "RME"),
    ("pre-BCK", "pre-BCI"),
    ("tRM", "RM"),
    ("*RM", "tRM"),
    ("RM**", "tRM"),
    ("*RM**", "*RM"),
    ("*RM**", "RM**"),
    ("pre-BBBZ", "*RM**"),
    ("pre-BBBZ", "pre-BZ"),
    ("pre-BZ", "*RM**"),
    ("BCI", "pre-BBBZ"),
    ("pre-BCI", "pre-BBBZ"),
    ("oRM", "tRM"),
    ("oRM", "aRM"),
    ("*aRM", "oRM"),
    ("aRM**", "oRM"),
    ("*aRM**", "*aRM"),
    ("*aRM**", "aRM**"),
    ("*aRM", "*RM"),
    ("aRM**", "RM**"),
    ("*aRM**", "*RM**"),
    ("BZ", "*aRM**"),
    ("tRML", "RML"),
    ("*RML", "tRML"),
    ("RML**", "tRML"),
    ("*RML**", "*RML"),
    ("*RML**", "RML**"),
    ("pre-BBBCC", "*RML**"),
    ("pre-BBBCC", "pre-BCC"),
    ("pre-BCC", "*RML**"),
    ("BCK", "pre-BBBCC"),
    ("pre-BCK", "pre-BBBCC"),
    ("oRML", "tRML"),
    ("oRML", "aRML"),
    ("*aRML", "oRML"),
    ("aRML**", "oRML"),
    ("*aRML**", "*aRML"),
    ("*aRML**", "aRML**"),
    ("*aRML", "*RML"),
    ("aRML**", "RML**"),
    ("*aRML**", "*RML**"),
    ("BCC", "*aRML**"),
    ("tRML", "tRM"),
    ("*RML", "*RM"),
    ("RML**", "RM**"),
    ("*RML**", "*RM**"),
    ("pre-BBBCC", "pre-BBBZ"),
    ("oRML", "oRM"),
    ("*aRML", "*aRM"),
    ("aRML**", "aRM**"),
    ("*aRML**", "*aRM**"),
    ("RME**", "RME"),
    ("RME**", "RM**"),
    ("BCH**", "RME**"),
    ("BCH**", "BCH"),
    ("BE**", "RME**"),
    ("BE**", "BE"),
    ("aBE**", "BE**"),
    ("aBE**", "BCH**"),
    ("aBE**", "aBE"),
    ("pre-BCI", "RME**"),
    ("BCI", "BCH**"),
    ("pre-BCK", "BE**"),
    ("BCK", "aBE**"),
];

/// Containment edges `(sub, super)` between registered classes.
pub fn hierarchy_edges() -> Vec<(ClassId, ClassId)> {
    let reg = registry();
    let id = |s: &str| reg.get(s).map(|d| d.id);
    let mut edges: Vec<(ClassId, ClassId)> = BASE_EDGES
        .iter()
        .map(|&(a, b)| (id(a).unwrap(), id(b).unwrap()))
        .collect();
    for prefix in ["pi-", "pimpl-"] {
        for &(a, b) in BASE_EDGES {
            if let (Some(x), Some(y)) = (id(&format!("{prefix}{a}")), id(&format!("{prefix}{b}"))) {
                edges.push((x, y));
            }
        }
    }
    for b in PI_BASES {
        edges.push((id(&format!("pi-{b}")).unwrap(), id(b).unwrap()));
    }
    for b in PIMPL_BASES {
        edges.push((
            id(&format!("pimpl-{b}")).unwrap(),
            id(&format!("pi-{b}")).unwrap(),
        ));
    }
    for sup in [
        "BCK",
        "pimpl-pre-BCK",
        "pi-BCC",
        "pi-aBE",
        "pimpl-pre-BBBCC",
    ] {
        edges.push(("Hilbert", id(sup).unwrap()));
    }
    edges
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_size_and_uniqueness() {
        let reg = registry();
        assert_eq!(reg.len(), 59);
        for (i, d) in reg.defs().iter().enumerate() {
            assert!(
                reg.defs()[..i].iter().all(|e| e.id != d.id),
                "duplicate {}",
                d.id
            );
            assert!(!d.required.is_empty());
            if let Some(f) = d.proper_forbidden {
                assert!(
                    (f.0 & d.required.0) == 0,
                    "{} forbids a required property",
                    d.id
                );
            }
        }
    }

    #[test]
    fn proper_bch_transcription() {
        let f = registry().get("BCH").unwrap().proper_forbidden.unwrap();
        assert_eq!(f, props![B, BB, Star, StarStar, Tr, L]);
    }

    #[test]
    fn every_edge_names_known_classes() {
        let edges = hierarchy_edges();
        assert!(edges.contains(&("BCI", "BCH")));
        assert!(edges.contains(&("BCK", "pre-BCK")));
        assert!(!edges.contains(&("RM", "RML")));
        for (a, b) in edges {
            assert_ne!(a, b);
        }
    }

    #[test]
    fn all_true_signature_is_in_every_class() {
        let sig = PropertySignature {
            bits: PropSet(u32::MAX),
            bounded: true,
            zero: Some(0),
        };
        assert_eq!(classify(&sig).len(), registry().len());
        assert!(classify_proper(&sig).is_empty());
    }

    #[test]
    fn unknown_class_is_rejected() {
        let t = Table::trivial();
        assert!(matches!(
            check_proper(&t, "XYZ"),
            Err(ClassError::UnknownClass(_))
        ));
        assert!(matches!(
            check_proper(&t, "Hilbert"),
            Err(ClassError::NoProperVariant(_))
        ));
    }
}
