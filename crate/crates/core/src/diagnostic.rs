use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// Stable diagnostic identifiers. The serialized form is the variant name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DiagnosticCode {
    EmptyDescriptor,
    SyntaxError,
    MalformedCode,
    UnknownPatternCode,
    NameCodeMismatch,
    AncestorPatternName,
    MissingIndirectSubPattern,
    LabelError,
    MultiLevelArity,
    EmptyPatternList,
    InvalidStarProperty,
    UnbalancedParenthesis,
    RepresentationInEmbeddingSlot,
    EmbeddingInRepresentationSlot,
    IndirectnessMismatch,
    MissingRequiredField,
}

impl DiagnosticCode {
    pub const ALL: [DiagnosticCode; 16] = [
        DiagnosticCode::EmptyDescriptor,
        DiagnosticCode::SyntaxError,
        DiagnosticCode::MalformedCode,
        DiagnosticCode::UnknownPatternCode,
        DiagnosticCode::NameCodeMismatch,
        DiagnosticCode::AncestorPatternName,
        DiagnosticCode::MissingIndirectSubPattern,
        DiagnosticCode::LabelError,
        DiagnosticCode::MultiLevelArity,
        DiagnosticCode::EmptyPatternList,
        DiagnosticCode::InvalidStarProperty,
        DiagnosticCode::UnbalancedParenthesis,
        DiagnosticCode::RepresentationInEmbeddingSlot,
        DiagnosticCode::EmbeddingInRepresentationSlot,
        DiagnosticCode::IndirectnessMismatch,
        DiagnosticCode::MissingRequiredField,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticCode::EmptyDescriptor => "EmptyDescriptor",
            DiagnosticCode::SyntaxError => "SyntaxError",
            DiagnosticCode::MalformedCode => "MalformedCode",
            DiagnosticCode::UnknownPatternCode => "UnknownPatternCode",
            DiagnosticCode::NameCodeMismatch => "NameCodeMismatch",
            DiagnosticCode::AncestorPatternName => "AncestorPatternName",
            DiagnosticCode::MissingIndirectSubPattern => "MissingIndirectSubPattern",
            DiagnosticCode::LabelError => "LabelError",
            DiagnosticCode::MultiLevelArity => "MultiLevelArity",
            DiagnosticCode::EmptyPatternList => "EmptyPatternList",
            DiagnosticCode::InvalidStarProperty => "InvalidStarProperty",
            DiagnosticCode::UnbalancedParenthesis => "UnbalancedParenthesis",
            DiagnosticCode::RepresentationInEmbeddingSlot => "RepresentationInEmbeddingSlot",
            DiagnosticCode::EmbeddingInRepresentationSlot => "EmbeddingInRepresentationSlot",
            DiagnosticCode::IndirectnessMismatch => "IndirectnessMismatch",
            DiagnosticCode::MissingRequiredField => "MissingRequiredField",
        }
    }
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Byte range into the source text a diagnostic refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Span {
        Span { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: DiagnosticCode,
    pub message: String,
    /// Location in the descriptor text, when the diagnostic came from text.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub span: Option<Span>,
    /// Structural location, e.g. `patterns[1]` or `embedding_patterns[0]`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub field: Option<String>,
}

impl Diagnostic {
    pub fn error(code: DiagnosticCode, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            severity: Severity::Error,
            code,
            message: message.into(),
            span: None,
            field: None,
        }
    }

    pub fn warning(code: DiagnosticCode, message: impl Into<String>) -> Diagnostic {
        Diagnostic {
            severity: Severity::Warning,
            ..Diagnostic::error(code, message)
        }
    }

    pub fn with_span(mut self, span: Span) -> Diagnostic {
        self.span = Some(span);
        self
    }

    pub fn with_field(mut self, field: impl Into<String>) -> Diagnostic {
        self.field = Some(field.into());
        self
    }

    /// Prefix the structural location, e.g. `patterns[0]` becomes
    /// `embedding_patterns[2].patterns[0]`.
    pub fn nested_in(mut self, outer: &str) -> Diagnostic {
        self.field = Some(match self.field.take() {
            Some(inner) => format!("{outer}.{inner}"),
            None => outer.to_string(),
        });
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{level}[{}]", self.code)?;
        if let Some(field) = &self.field {
            write!(f, " {field}")?;
        }
        if let Some(span) = self.span {
            write!(f, " at {}..{}", span.start, span.end)?;
        }
        write!(f, ": {}", self.message)
    }
}

pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(Diagnostic::is_error)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_serialize_as_variant_names() {
        for code in DiagnosticCode::ALL {
            let json = serde_json::to_string(&code).unwrap();
            assert_eq!(json, format!("\"{}\"", code.as_str()));
        }
    }

    #[test]
    fn display_includes_location() {
        let d = Diagnostic::error(DiagnosticCode::LabelError, "labels must start at (a)")
            .with_span(Span::new(3, 6))
            .with_field("patterns[0]")
            .nested_in("embedding_patterns[1]");
        assert_eq!(
            d.to_string(),
            "error[LabelError] embedding_patterns[1].patterns[0] at 3..6: labels must start at (a)"
        );
    }
}
