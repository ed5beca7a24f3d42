#![allow(dead_code)]

use serde::Deserialize;
use stegotax::udm::UdmDocument;

#[derive(Deserialize)]
pub struct Corpus {
    pub table: Vec<TableRow>,
    pub composites: Vec<Composite>,
    pub canonical: Vec<CanonicalCase>,
}

#[derive(Deserialize)]
pub struct TableRow {
    pub id: String,
    pub document: UdmDocument,
}

#[derive(Deserialize)]
pub struct Composite {
    pub id: String,
    pub descriptor: String,
}

#[derive(Deserialize)]
pub struct CanonicalCase {
    pub note: String,
    pub input: String,
    pub expected: String,
}

pub fn corpus() -> Corpus {
    serde_json::from_str(include_str!("../fixtures/corpus.json")).expect("corpus fixture parses")
}

impl Corpus {
    /// Every descriptor string of the table rows, embedding and explicit
    /// representation alike, followed by the composites.
    pub fn descriptor_strings(&self) -> Vec<String> {
        let mut out = Vec::new();
        for row in &self.table {
            out.extend(row.document.embedding_patterns.iter().cloned());
            if let stegotax::udm::RepresentationPatterns::Explicit(list) =
                &row.document.representation_patterns
            {
                out.extend(list.iter().cloned());
            }
        }
        out.extend(self.composites.iter().map(|c| c.descriptor.clone()));
        out
    }

    pub fn composite_documents(&self) -> Vec<UdmDocument> {
        self.composites
            .iter()
            .map(|c| UdmDocument::new(c.id.clone(), vec![c.descriptor.clone()]))
            .collect()
    }
}
