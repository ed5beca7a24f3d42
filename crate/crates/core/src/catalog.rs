//! File-backed registry of UDM documents.
//!
//! A store is a directory:
//!
//! ```text
//! <store>/
//!   index.json           derived summary, rebuilt on every persist
//!   entries/<id>.json    one stored entry per file
//! ```
//!
//! Entry files are the source of truth. `index.json` lists id, signature and
//! embedding codes per entry and is ignored when it disagrees with them.

use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::descriptor;
use crate::diagnostic::Diagnostic;
use crate::taxonomy::{PatternCode, Taxonomy};
use crate::udm::{self, UdmDocument, UdmError};

pub const INDEX_FILE: &str = "index.json";
pub const ENTRIES_DIR: &str = "entries";
const STORE_FORMAT: u32 = 1;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("document failed validation")]
    ValidationFailed(Vec<Diagnostic>),
    #[error("no catalog entry with id {0}")]
    NotFound(String),
    #[error("storage error at {path}: {source}")]
    StorageError {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("corrupt store file {path}: {reason}")]
    CorruptStore { path: PathBuf, reason: String },
}

impl CatalogError {
    pub fn diagnostics(&self) -> &[Diagnostic] {
        match self {
            CatalogError::ValidationFailed(d) => d,
            _ => &[],
        }
    }
}

impl From<UdmError> for CatalogError {
    fn from(e: UdmError) -> CatalogError {
        match e {
            UdmError::ValidationFailed(d) => CatalogError::ValidationFailed(d),
            other => CatalogError::ValidationFailed(vec![Diagnostic::error(
                crate::diagnostic::DiagnosticCode::MissingRequiredField,
                other.to_string(),
            )]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub document: UdmDocument,
    pub signature: String,
    pub created_at: DateTime<Utc>,
    pub updated_at: DateTime<Utc>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AddOutcome {
    pub entry: CatalogEntry,
    /// Ids of entries that already carried the same signature.
    pub duplicates: Vec<String>,
}

/// What an entry file holds. The signature is recomputed on open.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StoredEntry {
    id: String,
    created_at: DateTime<Utc>,
    updated_at: DateTime<Utc>,
    document: UdmDocument,
}

#[derive(Serialize, Deserialize)]
struct Index {
    format: u32,
    taxonomy_version: String,
    entries: Vec<IndexEntry>,
}

#[derive(Serialize, Deserialize)]
struct IndexEntry {
    id: String,
    signature: String,
    codes: Vec<PatternCode>,
}

#[derive(Debug, Clone)]
pub struct Catalog {
    taxonomy: Arc<Taxonomy>,
    entries: BTreeMap<String, CatalogEntry>,
}

impl PartialEq for Catalog {
    fn eq(&self, other: &Catalog) -> bool {
        self.entries == other.entries
    }
}

impl Catalog {
    pub fn new(taxonomy: Arc<Taxonomy>) -> Catalog {
        Catalog {
            taxonomy,
            entries: BTreeMap::new(),
        }
    }

    pub fn taxonomy(&self) -> &Taxonomy {
        &self.taxonomy
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&CatalogEntry> {
        self.entries.get(id)
    }

    /// Validates and normalizes `doc`, stores it under a fresh id and reports
    /// existing entries with the same signature.
    pub fn add(&mut self, doc: UdmDocument) -> Result<AddOutcome, CatalogError> {
        let document = udm::normalize_udm(&doc, &self.taxonomy)?;
        let signature = udm::signature(&document, &self.taxonomy)?;
        let duplicates = self
            .list_entries()
            .into_iter()
            .filter(|e| e.signature == signature)
            .map(|e| e.id.clone())
            .collect();
        let now = Utc::now();
        let entry = CatalogEntry {
            id: uuid::Uuid::new_v4().to_string(),
            document,
            signature,
            created_at: now,
            updated_at: now,
        };
        self.entries.insert(entry.id.clone(), entry.clone());
        Ok(AddOutcome { entry, duplicates })
    }

    pub fn remove(&mut self, id: &str) -> Result<CatalogEntry, CatalogError> {
        self.entries
            .remove(id)
            .ok_or_else(|| CatalogError::NotFound(id.to_string()))
    }

    /// All entries, oldest first.
    pub fn list_entries(&self) -> Vec<&CatalogEntry> {
        let mut all: Vec<_> = self.entries.values().collect();
        all.sort_by(|a, b| (a.created_at, &a.id).cmp(&(b.created_at, &b.id)));
        all
    }

    /// Entries with an embedding clause whose code equals `prefix` or lies
    /// below it in the hierarchy.
    pub fn find_by_prefix(&self, prefix: &PatternCode) -> Vec<&CatalogEntry> {
        self.list_entries()
            .into_iter()
            .filter(|e| {
                embedding_codes(e, &self.taxonomy)
                    .iter()
                    .any(|c| prefix.is_prefix_of(c))
            })
            .collect()
    }

    /// Groups of two or more entry ids sharing a signature, each group and
    /// the group list in insertion order.
    pub fn find_duplicates(&self) -> Vec<Vec<String>> {
        let mut groups: Vec<(String, Vec<String>)> = Vec::new();
        for entry in self.list_entries() {
            match groups.iter_mut().find(|(sig, _)| *sig == entry.signature) {
                Some((_, ids)) => ids.push(entry.id.clone()),
                None => groups.push((entry.signature.clone(), vec![entry.id.clone()])),
            }
        }
        groups
            .into_iter()
            .map(|(_, ids)| ids)
            .filter(|ids| ids.len() >= 2)
            .collect()
    }

    /// Writes every entry file and the index, and deletes entry files of
    /// removed entries.
    pub fn persist(&self, dir: &Path) -> Result<(), CatalogError> {
        let entries_dir = dir.join(ENTRIES_DIR);
        fs::create_dir_all(&entries_dir).map_err(storage(&entries_dir))?;

        for entry in self.entries.values() {
            let stored = StoredEntry {
                id: entry.id.clone(),
                created_at: entry.created_at,
                updated_at: entry.updated_at,
                document: entry.document.clone(),
            };
            let text = serde_json::to_string_pretty(&stored).expect("entries always serialize");
            write_atomic(&entries_dir.join(format!("{}.json", entry.id)), &text)?;
        }

        let keep: HashSet<String> = self.entries.keys().map(|id| format!("{id}.json")).collect();
        for file in fs::read_dir(&entries_dir).map_err(storage(&entries_dir))? {
            let path = file.map_err(storage(&entries_dir))?.path();
            let name = path
                .file_name()
                .and_then(|n| n.to_str())
                .unwrap_or_default();
            if name.ends_with(".json") && !keep.contains(name) {
                fs::remove_file(&path).map_err(storage(&path))?;
            }
        }

        let index = Index {
            format: STORE_FORMAT,
            taxonomy_version: self.taxonomy.version().to_string(),
            entries: self
                .list_entries()
                .into_iter()
                .map(|e| IndexEntry {
                    id: e.id.clone(),
                    signature: e.signature.clone(),
                    codes: embedding_codes(e, &self.taxonomy),
                })
                .collect(),
        };
        let text = serde_json::to_string_pretty(&index).expect("index always serializes");
        write_atomic(&dir.join(INDEX_FILE), &text)
    }

    /// Loads a store. A missing or empty directory yields an empty catalog.
    pub fn open(dir: &Path, taxonomy: Arc<Taxonomy>) -> Result<Catalog, CatalogError> {
        let mut catalog = Catalog::new(taxonomy);
        let index_path = dir.join(INDEX_FILE);
        if index_path.exists() {
            let text = fs::read_to_string(&index_path).map_err(storage(&index_path))?;
            serde_json::from_str::<Index>(&text).map_err(|e| corrupt(&index_path, e))?;
        }

        let entries_dir = dir.join(ENTRIES_DIR);
        if !entries_dir.exists() {
            return Ok(catalog);
        }
        for file in fs::read_dir(&entries_dir).map_err(storage(&entries_dir))? {
            let path = file.map_err(storage(&entries_dir))?.path();
            if path.extension().and_then(|e| e.to_str()) != Some("json") {
                continue;
            }
            let text = fs::read_to_string(&path).map_err(storage(&path))?;
            let stored: StoredEntry = serde_json::from_str(&text).map_err(|e| corrupt(&path, e))?;
            if path.file_stem().and_then(|s| s.to_str()) != Some(stored.id.as_str()) {
                return Err(corrupt(
                    &path,
                    format!("file name does not match entry id {}", stored.id),
                ));
            }
            let signature = udm::signature(&stored.document, &catalog.taxonomy)
                .map_err(|e| corrupt(&path, format!("stored document no longer validates: {e}")))?;
            catalog.entries.insert(
                stored.id.clone(),
                CatalogEntry {
                    id: stored.id,
                    document: stored.document,
                    signature,
                    created_at: stored.created_at,
                    updated_at: stored.updated_at,
                },
            );
        }
        Ok(catalog)
    }
}

fn embedding_codes(entry: &CatalogEntry, taxonomy: &Taxonomy) -> Vec<PatternCode> {
    let mut codes: Vec<PatternCode> = entry
        .document
        .embedding_patterns
        .iter()
        .filter_map(|text| descriptor::parse_descriptor(text, taxonomy).ok())
        .flat_map(|d| d.codes().cloned().collect::<Vec<_>>())
        .collect();
    codes.sort();
    codes.dedup();
    codes
}

fn storage(path: &Path) -> impl Fn(io::Error) -> CatalogError + '_ {
    move |source| CatalogError::StorageError {
        path: path.to_path_buf(),
        source,
    }
}

fn corrupt(path: &Path, reason: impl ToString) -> CatalogError {
    CatalogError::CorruptStore {
        path: path.to_path_buf(),
        reason: reason.to_string(),
    }
}

fn write_atomic(path: &Path, text: &str) -> Result<(), CatalogError> {
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, text).map_err(storage(&tmp))?;
    fs::rename(&tmp, path).map_err(storage(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalog() -> Catalog {
        Catalog::new(Arc::new(Taxonomy::seed()))
    }

    fn doc(name: &str, embedding: &str) -> UdmDocument {
        UdmDocument::new(name, vec![embedding.to_string()])
    }

    #[test]
    fn duplicates_are_flagged_not_rejected() {
        let mut c = catalog();
        let first = c.add(doc("one", "E1.1n1.")).unwrap();
        assert!(first.duplicates.is_empty());
        let second = c
            .add(doc(
                "two",
                "e1.1N1. network reserved/unused state/value mod.",
            ))
            .unwrap();
        assert_eq!(second.duplicates, vec![first.entry.id.clone()]);
        assert_eq!(c.len(), 2);
        assert_eq!(
            c.find_duplicates(),
            vec![vec![first.entry.id, second.entry.id]]
        );
    }

    #[test]
    fn alias_spellings_collide() {
        let mut c = catalog();
        c.add(doc(
            "a",
            "Indirect (Dead Drop) E2.1t1. Text Element Enumeration",
        ))
        .unwrap();
        let out = c.add(doc("b", "indirect (dead-drop) E2.1t1.")).unwrap();
        assert_eq!(out.duplicates.len(), 1);
    }

    #[test]
    fn add_stores_normalized_documents() {
        let mut c = catalog();
        let out = c.add(doc("a", "(Distributed) e1.3c1.")).unwrap();
        assert_eq!(
            out.entry.document.embedding_patterns,
            vec!["Distributed E1.3c1. CPS LSB State/Value Modulation"]
        );
        assert_eq!(
            out.entry.signature,
            "Distributed E1.3c1. CPS LSB State/Value Modulation"
        );
    }

    #[test]
    fn add_rejects_invalid_documents() {
        let mut c = catalog();
        let err = c.add(doc("bad", "E7.")).unwrap_err();
        assert!(matches!(err, CatalogError::ValidationFailed(_)));
        assert!(c.is_empty());
    }

    #[test]
    fn remove_and_not_found() {
        let mut c = catalog();
        let id = c.add(doc("a", "E1.")).unwrap().entry.id;
        c.remove(&id).unwrap();
        assert!(c.list_entries().is_empty());
        assert!(matches!(c.remove(&id), Err(CatalogError::NotFound(_))));
    }

    #[test]
    fn prefix_queries() {
        let mut c = catalog();
        let lsb = c.add(doc("lsb", "E1.3n1.")).unwrap().entry.id;
        let reserved = c.add(doc("reserved", "E1.1n1.")).unwrap().entry.id;
        let multi = c
            .add(doc("multi", "Multi-level (a) E2.1t1., (b) E1.3f1."))
            .unwrap()
            .entry
            .id;
        let ids = |p: &str| -> Vec<String> {
            c.find_by_prefix(&p.parse().unwrap())
                .into_iter()
                .map(|e| e.id.clone())
                .collect()
        };
        assert_eq!(ids("E1.3"), vec![lsb.clone(), multi.clone()]);
        assert_eq!(ids("E1"), vec![lsb.clone(), reserved, multi.clone()]);
        assert_eq!(ids("E1.3n1"), vec![lsb]);
        assert_eq!(ids("E2"), vec![multi]);
        assert!(ids("E9").is_empty());
        assert!(ids("R1").is_empty());
    }

    #[test]
    fn empty_catalog_has_no_duplicate_groups() {
        assert!(catalog().find_duplicates().is_empty());
    }

    #[test]
    fn persist_and_open() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = catalog();
        let gone = c.add(doc("a", "E1.")).unwrap().entry.id;
        c.add(doc("b", "Indirect (Proxy) E1n1.")).unwrap();
        c.persist(dir.path()).unwrap();
        c.remove(&gone).unwrap();
        c.add(doc("c", "History-focused E1.3d1.")).unwrap();
        c.persist(dir.path()).unwrap();

        let reopened = Catalog::open(dir.path(), Arc::new(Taxonomy::seed())).unwrap();
        assert_eq!(reopened, c);
        assert!(!dir
            .path()
            .join(ENTRIES_DIR)
            .join(format!("{gone}.json"))
            .exists());
        let index: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join(INDEX_FILE)).unwrap())
                .unwrap();
        assert_eq!(index["entries"].as_array().unwrap().len(), 2);
    }

    #[test]
    fn open_empty_or_missing_directory() {
        let dir = tempfile::tempdir().unwrap();
        assert!(Catalog::open(dir.path(), Arc::new(Taxonomy::seed()))
            .unwrap()
            .is_empty());
        let missing = dir.path().join("nope");
        assert!(Catalog::open(&missing, Arc::new(Taxonomy::seed()))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn truncated_files_are_corrupt() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = catalog();
        let id = c.add(doc("a", "E1.")).unwrap().entry.id;
        c.persist(dir.path()).unwrap();

        let entry_path = dir.path().join(ENTRIES_DIR).join(format!("{id}.json"));
        let text = fs::read_to_string(&entry_path).unwrap();
        fs::write(&entry_path, &text[..text.len() / 2]).unwrap();
        let err = Catalog::open(dir.path(), Arc::new(Taxonomy::seed())).unwrap_err();
        assert!(matches!(err, CatalogError::CorruptStore { .. }), "{err}");

        fs::write(&entry_path, text).unwrap();
        let index_path = dir.path().join(INDEX_FILE);
        fs::write(&index_path, "{\"format\": 1, \"entr").unwrap();
        let err = Catalog::open(dir.path(), Arc::new(Taxonomy::seed())).unwrap_err();
        assert!(matches!(err, CatalogError::CorruptStore { .. }), "{err}");
    }

    #[test]
    fn stale_index_is_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = catalog();
        c.add(doc("a", "E1.")).unwrap();
        c.persist(dir.path()).unwrap();
        fs::write(
            dir.path().join(INDEX_FILE),
            r#"{"format":1,"taxonomy_version":"old","entries":[]}"#,
        )
        .unwrap();
        assert_eq!(
            Catalog::open(dir.path(), Arc::new(Taxonomy::seed())).unwrap(),
            c
        );
    }
}
