//! Naming-convention descriptors for steganographic methods.
//!
//! The crate covers the hiding-pattern taxonomy, the descriptor grammar
//! (parse, validate, render, explain), Unified Description Method documents
//! and a file-backed catalog of described methods.

pub mod catalog;
pub mod descriptor;
pub mod diagnostic;
#[cfg(feature = "strategies")]
pub mod strategies;
pub mod taxonomy;
pub mod udm;

pub use descriptor::{Descriptor, DescriptorError};
pub use diagnostic::{Diagnostic, DiagnosticCode, Severity, Span};
pub use taxonomy::{PatternCode, Taxonomy};
pub use udm::UdmDocument;
