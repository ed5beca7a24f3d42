//! Hiding-pattern knowledge base.
//!
//! A [`Taxonomy`] is loaded from a JSON document (`version` plus a `patterns`
//! array) and checked on load: codes are unique, every parent exists, and
//! every parent is a strict hierarchical prefix of its child. The bundled
//! seed file is available through [`Taxonomy::seed`].

mod code;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use code::{CodeError, Media, PatternCode, PatternKind};

/// Media domain letters shipped in the seed taxonomy.
pub const SEED_MEDIA_DOMAINS: [char; 5] = ['n', 't', 'd', 'c', 'f'];

const SEED_JSON: &str = include_str!("../../data/taxonomy.json");

#[derive(Debug, Error)]
pub enum TaxonomyError {
    #[error("taxonomy parse error: {0}")]
    ParseError(String),
    #[error("duplicate pattern code {0}")]
    DuplicateCode(PatternCode),
    #[error("pattern {code} references missing parent {parent}")]
    DanglingParent {
        code: PatternCode,
        parent: PatternCode,
    },
    #[error("pattern {code} has parent {parent}, which is not a strict hierarchical prefix")]
    InvalidParent {
        code: PatternCode,
        parent: PatternCode,
    },
    #[error("pattern {0} not found")]
    NotFound(PatternCode),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternRecord {
    pub code: PatternCode,
    pub name: String,
    pub description: String,
    pub parent: Option<PatternCode>,
    #[serde(rename = "domain")]
    pub domain_label: String,
}

#[derive(Debug, Deserialize)]
struct TaxonomyFile {
    version: String,
    patterns: Vec<PatternRecord>,
}

#[derive(Debug, Clone)]
pub struct Taxonomy {
    version: String,
    records: BTreeMap<String, PatternRecord>,
}

impl Taxonomy {
    /// The seed taxonomy bundled with the crate.
    pub fn seed() -> Taxonomy {
        Taxonomy::load(SEED_JSON).expect("bundled seed taxonomy is valid")
    }

    pub fn seed_source() -> &'static str {
        SEED_JSON
    }

    pub fn load(content: &str) -> Result<Taxonomy, TaxonomyError> {
        if content.trim().is_empty() {
            return Err(TaxonomyError::ParseError("empty taxonomy document".into()));
        }
        let file: TaxonomyFile =
            serde_json::from_str(content).map_err(|e| TaxonomyError::ParseError(e.to_string()))?;
        Taxonomy::from_records(file.version, file.patterns)
    }

    pub fn from_records(
        version: String,
        patterns: Vec<PatternRecord>,
    ) -> Result<Taxonomy, TaxonomyError> {
        if patterns.is_empty() {
            return Err(TaxonomyError::ParseError(
                "taxonomy contains no patterns".into(),
            ));
        }
        let mut records = BTreeMap::new();
        for record in patterns {
            if record.name.trim().is_empty() {
                return Err(TaxonomyError::ParseError(format!(
                    "pattern {} has an empty name",
                    record.code
                )));
            }
            let key = record.code.to_string();
            if records.contains_key(&key) {
                return Err(TaxonomyError::DuplicateCode(record.code));
            }
            records.insert(key, record);
        }
        for record in records.values() {
            let Some(parent) = &record.parent else {
                continue;
            };
            if !records.contains_key(&parent.to_string()) {
                return Err(TaxonomyError::DanglingParent {
                    code: record.code.clone(),
                    parent: parent.clone(),
                });
            }
            if !parent.is_strict_prefix_of(&record.code) {
                return Err(TaxonomyError::InvalidParent {
                    code: record.code.clone(),
                    parent: parent.clone(),
                });
            }
        }
        Ok(Taxonomy { version, records })
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Records in canonical code order.
    pub fn iter(&self) -> impl Iterator<Item = &PatternRecord> {
        self.records.values()
    }

    pub fn get(&self, code: &PatternCode) -> Option<&PatternRecord> {
        self.records.get(&code.to_string())
    }

    pub fn contains(&self, code: &PatternCode) -> bool {
        self.get(code).is_some()
    }

    pub fn lookup(&self, code: &PatternCode) -> Result<&PatternRecord, TaxonomyError> {
        self.get(code)
            .ok_or_else(|| TaxonomyError::NotFound(code.clone()))
    }

    /// Every record the argument strictly prefixes, sorted by canonical code.
    pub fn children(&self, code: &PatternCode) -> Vec<&PatternRecord> {
        self.records
            .values()
            .filter(|r| code.is_strict_prefix_of(&r.code))
            .collect()
    }

    /// Records whose code strictly prefixes the argument.
    pub fn ancestors(&self, code: &PatternCode) -> Vec<&PatternRecord> {
        self.records
            .values()
            .filter(|r| r.code.is_strict_prefix_of(code))
            .collect()
    }

    pub fn direct_children(&self, code: &PatternCode) -> Vec<&PatternRecord> {
        self.records
            .values()
            .filter(|r| r.parent.as_ref() == Some(code))
            .collect()
    }

    pub fn roots(&self) -> Vec<&PatternRecord> {
        self.records
            .values()
            .filter(|r| r.parent.is_none())
            .collect()
    }

    /// Seed codes that this taxonomy lacks.
    pub fn missing_seed_codes(&self) -> Vec<&'static str> {
        REQUIRED_SEED_CODES
            .iter()
            .copied()
            .filter(|c| {
                !self.contains(&PatternCode::parse(c).expect("seed code list is well formed"))
            })
            .collect()
    }
}

/// Codes the shipped seed file must contain.
pub const REQUIRED_SEED_CODES: &[&str] = &[
    "E1", "E1.1", "E1.2", "E1.3", "E1.4", "E1.5", "E2", "E2.1", "E2.2", "R1", "R1.1", "R1.2",
    "R1.3", "R1.4", "R1.5", "R2", "R2.1", "R2.2", "E1n1", "E1.1n1", "E1.2f1", "E1.3n1", "E1.3t1",
    "E1.3d1", "E1.3c1", "E1.3f1", "E1.1f1", "E2.1t1", "R1n1", "R1.1n1", "R2.2n1",
];

/// Comparison key for pattern display names: case-folded, `/` and `-`
/// read as spaces, whitespace collapsed, and `Mod.` read as `Modulation`.
pub fn name_key(name: &str) -> String {
    let lowered = name.trim().to_lowercase().replace(['/', '-'], " ");
    let lowered = lowered.trim_end_matches('.');
    lowered
        .split_whitespace()
        .map(|w| match w {
            "mod" | "mod." => "modulation",
            other => other,
        })
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn names_match(written: &str, canonical: &str) -> bool {
    name_key(written) == name_key(canonical)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(s: &str) -> PatternCode {
        PatternCode::parse(s).unwrap()
    }

    fn codes(records: &[&PatternRecord]) -> Vec<String> {
        records.iter().map(|r| r.code.to_string()).collect()
    }

    #[test]
    fn seed_loads_and_is_complete() {
        let tax = Taxonomy::seed();
        assert!(tax.missing_seed_codes().is_empty());
        assert!(tax.len() >= REQUIRED_SEED_CODES.len());
    }

    #[test]
    fn lookup_table_entries() {
        let tax = Taxonomy::seed();
        let e13 = tax.lookup(&code("E1.3")).unwrap();
        assert_eq!(e13.name, "LSB State/Value Mod.");
        assert!(e13.description.contains("all forms of LSB steganography"));
        let e22 = tax.lookup(&code("E2.2")).unwrap();
        assert_eq!(e22.name, "Element Positioning");
        assert!(e22
            .description
            .contains("location of an element in a cover object"));
        assert!(matches!(
            tax.lookup(&code("E9")),
            Err(TaxonomyError::NotFound(_))
        ));
        assert_eq!(
            tax.lookup(&code("E1.3n1")).unwrap().name,
            "Network LSB State/Value Modulation"
        );
    }

    #[test]
    fn children_of_e1_cover_subvariants_and_media() {
        let tax = Taxonomy::seed();
        let kids = codes(&tax.children(&code("E1")));
        for c in [
            "E1.1.", "E1.2.", "E1.3.", "E1.4.", "E1.5.", "E1.3n1.", "E1.1f1.", "E1n1.",
        ] {
            assert!(kids.contains(&c.to_string()), "{c} missing from {kids:?}");
        }
        assert!(!kids
            .iter()
            .any(|c| c.starts_with("E2") || c.starts_with('R') || c == "E1."));
        let mut sorted = kids.clone();
        sorted.sort();
        assert_eq!(kids, sorted);
    }

    #[test]
    fn children_of_leaf_is_empty() {
        assert!(Taxonomy::seed().children(&code("E1.3n1")).is_empty());
    }

    #[test]
    fn empty_document_is_parse_error() {
        assert!(matches!(
            Taxonomy::load(""),
            Err(TaxonomyError::ParseError(_))
        ));
        assert!(matches!(
            Taxonomy::load("{\"version\":\"x\",\"patterns\":[]}"),
            Err(TaxonomyError::ParseError(_))
        ));
        assert!(matches!(
            Taxonomy::load("{"),
            Err(TaxonomyError::ParseError(_))
        ));
    }

    #[test]
    fn dangling_parent_rejected() {
        let doc = r#"{"version":"t","patterns":[
            {"code":"E1.3.","name":"LSB","description":"","parent":"E7.","domain":"generic"}]}"#;
        assert!(matches!(
            Taxonomy::load(doc),
            Err(TaxonomyError::DanglingParent { .. })
        ));
        let doc = r#"{"version":"t","patterns":[
            {"code":"E1.3.","name":"LSB","description":"","parent":"E1.","domain":"generic"}]}"#;
        assert!(matches!(
            Taxonomy::load(doc),
            Err(TaxonomyError::DanglingParent { .. })
        ));
    }

    #[test]
    fn non_prefix_parent_rejected() {
        let doc = r#"{"version":"t","patterns":[
            {"code":"E7.","name":"Seven","description":"","parent":null,"domain":"generic"},
            {"code":"E1.3.","name":"LSB","description":"","parent":"E7.","domain":"generic"}]}"#;
        assert!(matches!(
            Taxonomy::load(doc),
            Err(TaxonomyError::InvalidParent { .. })
        ));
    }

    #[test]
    fn duplicate_code_rejected() {
        let doc = r#"{"version":"t","patterns":[
            {"code":"E1.","name":"A","description":"","parent":null,"domain":"generic"},
            {"code":"e1","name":"B","description":"","parent":null,"domain":"generic"}]}"#;
        assert!(matches!(
            Taxonomy::load(doc),
            Err(TaxonomyError::DuplicateCode(_))
        ));
    }

    #[test]
    fn name_keys() {
        assert!(names_match(
            "network reserved/unused state value modulation",
            "Network Reserved/Unused State/Value Modulation"
        ));
        assert!(names_match(
            "LSB State/Value Modulation",
            "LSB State/Value Mod."
        ));
        assert!(!names_match(
            "Network State/Value Modulation",
            "Network Reserved/Unused State/Value Modulation"
        ));
    }
}
