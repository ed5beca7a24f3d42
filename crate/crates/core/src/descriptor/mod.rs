//! Naming-convention descriptors.
//!
//! A descriptor string lists, in order, the optional non-default attributes
//! (locality, directness, activeness, level, temporality), any bracketed
//! star properties, and one or more pattern clauses:
//!
//! ```text
//! Distributed (Host-based Scattering) Indirect (Dead Drop) E1.3n1. Network LSB State/Value Modulation
//! Multi-level (a) E1.1n1. Network Reserved/Unused State/Value Modulation, (b) E1.3d1. Digital Media LSB State/Value Modulation
//! ```
//!
//! Default attributes are omitted from the canonical rendering.

mod explain;
mod lexer;
mod model;
mod parser;
mod render;
mod validate;

use thiserror::Error;

use crate::diagnostic::{has_errors, Diagnostic, DiagnosticCode};
use crate::taxonomy::Taxonomy;

pub use explain::{diff, Component, ComponentDifference, ExplanationEntry};
pub use model::{
    label_for, Activeness, Descriptor, Directness, DistributionPattern, IndirectPattern,
    LevelCharacteristic, Locality, PatternClause, ReferenceTemporality, StarKind, StarProperty,
};
pub use validate::validate;

#[derive(Debug, Clone, Error)]
pub enum DescriptorError {
    #[error("{0}")]
    Invalid(Diagnostic),
    #[error("descriptor failed validation: {}", first_error(.0))]
    ValidationFailed(Vec<Diagnostic>),
}

fn first_error(diagnostics: &[Diagnostic]) -> String {
    diagnostics
        .iter()
        .find(|d| d.is_error())
        .map_or_else(|| "unknown error".to_string(), ToString::to_string)
}

impl DescriptorError {
    /// The diagnostic code of the (first) error.
    pub fn code(&self) -> DiagnosticCode {
        match self {
            DescriptorError::Invalid(d) => d.code,
            DescriptorError::ValidationFailed(ds) => ds
                .iter()
                .find(|d| d.is_error())
                .map_or(DiagnosticCode::SyntaxError, |d| d.code),
        }
    }

    pub fn diagnostics(&self) -> Vec<Diagnostic> {
        match self {
            DescriptorError::Invalid(d) => vec![d.clone()],
            DescriptorError::ValidationFailed(ds) => ds.clone(),
        }
    }
}

/// A successfully parsed descriptor plus any warnings raised on the way.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Parsed {
    pub descriptor: Descriptor,
    pub warnings: Vec<Diagnostic>,
}

pub fn parse_with_diagnostics(text: &str, taxonomy: &Taxonomy) -> Result<Parsed, DescriptorError> {
    parser::parse(text, taxonomy)
        .map(|(descriptor, warnings)| Parsed {
            descriptor,
            warnings,
        })
        .map_err(DescriptorError::Invalid)
}

pub fn parse_descriptor(text: &str, taxonomy: &Taxonomy) -> Result<Descriptor, DescriptorError> {
    parse_with_diagnostics(text, taxonomy).map(|p| p.descriptor)
}

/// Every diagnostic for a descriptor string: the parse error if parsing
/// fails, the warnings otherwise.
pub fn check(text: &str, taxonomy: &Taxonomy) -> Vec<Diagnostic> {
    match parse_with_diagnostics(text, taxonomy) {
        Ok(parsed) => parsed.warnings,
        Err(e) => e.diagnostics(),
    }
}

fn ensure_valid(descriptor: &Descriptor, taxonomy: &Taxonomy) -> Result<(), DescriptorError> {
    let diagnostics = validate(descriptor, taxonomy);
    if has_errors(&diagnostics) {
        Err(DescriptorError::ValidationFailed(diagnostics))
    } else {
        Ok(())
    }
}

pub fn render_canonical(
    descriptor: &Descriptor,
    taxonomy: &Taxonomy,
) -> Result<String, DescriptorError> {
    ensure_valid(descriptor, taxonomy)?;
    Ok(render::write_canonical(descriptor, taxonomy))
}

pub fn normalize(text: &str, taxonomy: &Taxonomy) -> Result<String, DescriptorError> {
    render_canonical(&parse_descriptor(text, taxonomy)?, taxonomy)
}

pub fn explain(
    descriptor: &Descriptor,
    taxonomy: &Taxonomy,
) -> Result<Vec<ExplanationEntry>, DescriptorError> {
    ensure_valid(descriptor, taxonomy)?;
    Ok(explain::build(descriptor, taxonomy))
}

/// Maps every clause to its representation counterpart, keeping attributes
/// and labels. Fails if a clause already holds a representation code or the
/// derived code is not in the taxonomy.
pub fn derive_representation(
    descriptor: &Descriptor,
    taxonomy: &Taxonomy,
) -> Result<Descriptor, DescriptorError> {
    let mut derived = descriptor.clone();
    for (i, clause) in derived.patterns.iter_mut().enumerate() {
        let field = format!("patterns[{i}]");
        let code = clause.code.derive_representation().map_err(|e| {
            DescriptorError::Invalid(
                Diagnostic::error(DiagnosticCode::RepresentationInEmbeddingSlot, e.to_string())
                    .with_field(field.clone()),
            )
        })?;
        let record = taxonomy.get(&code).ok_or_else(|| {
            DescriptorError::Invalid(
                Diagnostic::error(
                    DiagnosticCode::UnknownPatternCode,
                    format!("derived representation pattern {code} is not in the taxonomy"),
                )
                .with_field(field),
            )
        })?;
        clause.name = record.name.clone();
        clause.code = code;
    }
    Ok(derived)
}
