//! Unified Description Method documents.
//!
//! A [`UdmDocument`] carries the structured attributes of a described hiding
//! method. Its pattern attributes hold descriptor strings; the representation
//! attribute may instead hold the marker
//! [`REPRESENTATION_VARIANT_MARKER`], meaning every embedding clause is
//! mirrored into its representation counterpart.

use std::fmt::{self, Write as _};

use serde::de::{self, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::descriptor::{self, Descriptor, DescriptorError, Directness};
use crate::diagnostic::{has_errors, Diagnostic, DiagnosticCode, Severity};
use crate::taxonomy::{PatternKind, Taxonomy};

pub const REPRESENTATION_VARIANT_MARKER: &str = "representation variant of embedding pattern";

#[derive(Debug, Error)]
pub enum UdmError {
    #[error("UDM parse error: {0}")]
    ParseError(String),
    #[error("UDM document is missing required field `{0}`")]
    MissingRequiredField(&'static str),
    #[error("UDM document failed validation: {}", .0.iter().find(|d| d.is_error()).map(ToString::to_string).unwrap_or_default())]
    ValidationFailed(Vec<Diagnostic>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RepresentationPatterns {
    VariantOfEmbedding,
    Explicit(Vec<String>),
}

impl Serialize for RepresentationPatterns {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            RepresentationPatterns::VariantOfEmbedding => {
                serializer.serialize_str(REPRESENTATION_VARIANT_MARKER)
            }
            RepresentationPatterns::Explicit(list) => list.serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for RepresentationPatterns {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct RepresentationVisitor;

        impl<'de> Visitor<'de> for RepresentationVisitor {
            type Value = RepresentationPatterns;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(
                    f,
                    "the string {REPRESENTATION_VARIANT_MARKER:?} or a list of descriptor strings"
                )
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                if v.trim().eq_ignore_ascii_case(REPRESENTATION_VARIANT_MARKER) {
                    Ok(RepresentationPatterns::VariantOfEmbedding)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                let mut list = Vec::new();
                while let Some(item) = seq.next_element::<String>()? {
                    list.push(item);
                }
                Ok(RepresentationPatterns::Explicit(list))
            }
        }

        deserializer.deserialize_any(RepresentationVisitor)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelProperties {
    pub robustness: String,
    pub countermeasures: Vec<String>,
    pub capacity: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct UdmDocument {
    pub method_name: String,
    pub application_scenario: String,
    pub embedding_patterns: Vec<String>,
    pub representation_patterns: RepresentationPatterns,
    pub required_cover_properties: Vec<String>,
    pub channel_properties: ChannelProperties,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub channel_internal_protocol: Option<String>,
    pub references: Vec<String>,
}

impl UdmDocument {
    /// A minimal document; the representation defaults to the marker.
    pub fn new(method_name: impl Into<String>, embedding_patterns: Vec<String>) -> UdmDocument {
        UdmDocument {
            method_name: method_name.into(),
            application_scenario: String::new(),
            embedding_patterns,
            representation_patterns: RepresentationPatterns::VariantOfEmbedding,
            required_cover_properties: Vec::new(),
            channel_properties: ChannelProperties::default(),
            channel_internal_protocol: None,
            references: Vec::new(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    method_name: Option<String>,
    #[serde(default)]
    application_scenario: String,
    embedding_patterns: Option<Vec<String>>,
    representation_patterns: Option<RepresentationPatterns>,
    #[serde(default)]
    required_cover_properties: Vec<String>,
    #[serde(default)]
    channel_properties: ChannelProperties,
    #[serde(default)]
    channel_internal_protocol: Option<String>,
    #[serde(default)]
    references: Vec<String>,
}

impl<'de> Deserialize<'de> for UdmDocument {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = RawDocument::deserialize(deserializer)?;
        from_raw(raw).map_err(de::Error::custom)
    }
}

fn from_raw(raw: RawDocument) -> Result<UdmDocument, UdmError> {
    let method_name = raw
        .method_name
        .filter(|n| !n.trim().is_empty())
        .ok_or(UdmError::MissingRequiredField("method_name"))?;
    let embedding_patterns = raw
        .embedding_patterns
        .filter(|p| !p.is_empty())
        .ok_or(UdmError::MissingRequiredField("embedding_patterns"))?;
    let representation_patterns = match raw.representation_patterns {
        None => return Err(UdmError::MissingRequiredField("representation_patterns")),
        Some(RepresentationPatterns::Explicit(list)) if list.is_empty() => {
            return Err(UdmError::MissingRequiredField("representation_patterns"))
        }
        Some(r) => r,
    };
    Ok(UdmDocument {
        method_name,
        application_scenario: raw.application_scenario,
        embedding_patterns,
        representation_patterns,
        required_cover_properties: raw.required_cover_properties,
        channel_properties: raw.channel_properties,
        channel_internal_protocol: raw.channel_internal_protocol,
        references: raw.references,
    })
}

pub fn serialize_udm(doc: &UdmDocument) -> String {
    serde_json::to_string_pretty(doc).expect("UDM documents always serialize")
}

pub fn deserialize_udm(text: &str) -> Result<UdmDocument, UdmError> {
    let raw: RawDocument =
        serde_json::from_str(text).map_err(|e| UdmError::ParseError(e.to_string()))?;
    from_raw(raw)
}

/// Parse every descriptor of one pattern attribute, collecting diagnostics.
fn parse_field(
    field: &str,
    texts: &[String],
    taxonomy: &Taxonomy,
    out: &mut Vec<Diagnostic>,
) -> Vec<Option<Descriptor>> {
    texts
        .iter()
        .enumerate()
        .map(|(i, text)| {
            let location = format!("{field}[{i}]");
            match descriptor::parse_with_diagnostics(text, taxonomy) {
                Ok(parsed) => {
                    out.extend(parsed.warnings.into_iter().map(|d| d.nested_in(&location)));
                    Some(parsed.descriptor)
                }
                Err(e) => {
                    out.extend(e.diagnostics().into_iter().map(|d| d.nested_in(&location)));
                    None
                }
            }
        })
        .collect()
}

pub fn validate_udm(doc: &UdmDocument, taxonomy: &Taxonomy) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    if doc.method_name.trim().is_empty() {
        out.push(
            Diagnostic::error(DiagnosticCode::MissingRequiredField, "method_name is empty")
                .with_field("method_name"),
        );
    }
    if doc.embedding_patterns.is_empty() {
        out.push(
            Diagnostic::error(
                DiagnosticCode::MissingRequiredField,
                "at least one embedding pattern is required",
            )
            .with_field("embedding_patterns"),
        );
    }

    let mut embedding_diags = Vec::new();
    let embedding = parse_field(
        "embedding_patterns",
        &doc.embedding_patterns,
        taxonomy,
        &mut embedding_diags,
    );
    // Inside a UDM the embedding attribute must hold embedding codes only.
    for d in &mut embedding_diags {
        if d.code == DiagnosticCode::RepresentationInEmbeddingSlot {
            d.severity = Severity::Error;
        }
    }
    out.extend(embedding_diags);

    let indirect: Vec<Directness> = embedding
        .iter()
        .flatten()
        .map(|d| d.directness)
        .filter(|d| matches!(d, Directness::Indirect(_)))
        .collect();

    match &doc.representation_patterns {
        RepresentationPatterns::VariantOfEmbedding => {
            for (i, parsed) in embedding.iter().enumerate() {
                let Some(parsed) = parsed else { continue };
                if parsed.codes().any(|c| c.kind() != PatternKind::Embedding) {
                    continue;
                }
                if let Err(e) = descriptor::derive_representation(parsed, taxonomy) {
                    out.extend(
                        e.diagnostics()
                            .into_iter()
                            .map(|d| d.nested_in(&format!("embedding_patterns[{i}]"))),
                    );
                }
            }
        }
        RepresentationPatterns::Explicit(list) => {
            if list.is_empty() {
                out.push(
                    Diagnostic::error(
                        DiagnosticCode::MissingRequiredField,
                        "representation_patterns must be the marker or a non-empty list",
                    )
                    .with_field("representation_patterns"),
                );
            }
            let mut repr_diags = Vec::new();
            let representation =
                parse_field("representation_patterns", list, taxonomy, &mut repr_diags);
            repr_diags.retain(|d| d.code != DiagnosticCode::RepresentationInEmbeddingSlot);
            out.extend(repr_diags);

            for (i, parsed) in representation.iter().enumerate() {
                let Some(parsed) = parsed else { continue };
                let location = format!("representation_patterns[{i}]");
                for code in parsed
                    .codes()
                    .filter(|c| c.kind() == PatternKind::Embedding)
                {
                    out.push(
                        Diagnostic::error(
                            DiagnosticCode::EmbeddingInRepresentationSlot,
                            format!("{code} is an embedding pattern; the representation attribute needs R codes"),
                        )
                        .with_field(location.clone()),
                    );
                }
                if !indirect.is_empty() && !indirect.contains(&parsed.directness) {
                    out.push(
                        Diagnostic::error(
                            DiagnosticCode::IndirectnessMismatch,
                            format!(
                                "the embedding pattern is {} but this representation pattern is {}",
                                indirect[0].canonical(),
                                parsed.directness.canonical()
                            ),
                        )
                        .with_field(location),
                    );
                }
            }
        }
    }
    out
}

fn ensure_valid(doc: &UdmDocument, taxonomy: &Taxonomy) -> Result<(), UdmError> {
    let diagnostics = validate_udm(doc, taxonomy);
    if has_errors(&diagnostics) {
        Err(UdmError::ValidationFailed(diagnostics))
    } else {
        Ok(())
    }
}

fn normalize_all(texts: &[String], taxonomy: &Taxonomy) -> Result<Vec<String>, UdmError> {
    texts
        .iter()
        .map(|t| descriptor::normalize(t, taxonomy))
        .collect::<Result<_, DescriptorError>>()
        .map_err(|e| UdmError::ValidationFailed(e.diagnostics()))
}

/// Validates and rewrites every descriptor string in canonical form.
pub fn normalize_udm(doc: &UdmDocument, taxonomy: &Taxonomy) -> Result<UdmDocument, UdmError> {
    ensure_valid(doc, taxonomy)?;
    let mut normalized = doc.clone();
    normalized.embedding_patterns = normalize_all(&doc.embedding_patterns, taxonomy)?;
    if let RepresentationPatterns::Explicit(list) = &doc.representation_patterns {
        normalized.representation_patterns =
            RepresentationPatterns::Explicit(normalize_all(list, taxonomy)?);
    }
    Ok(normalized)
}

/// The representation descriptors of a document, derived clause-wise from
/// the embedding descriptors when the marker is used.
pub fn resolve_representation(
    doc: &UdmDocument,
    taxonomy: &Taxonomy,
) -> Result<Vec<String>, UdmError> {
    ensure_valid(doc, taxonomy)?;
    let failed = |e: DescriptorError| UdmError::ValidationFailed(e.diagnostics());
    match &doc.representation_patterns {
        RepresentationPatterns::Explicit(list) => normalize_all(list, taxonomy),
        RepresentationPatterns::VariantOfEmbedding => doc
            .embedding_patterns
            .iter()
            .map(|text| {
                let embedding = descriptor::parse_descriptor(text, taxonomy).map_err(failed)?;
                let derived =
                    descriptor::derive_representation(&embedding, taxonomy).map_err(failed)?;
                descriptor::render_canonical(&derived, taxonomy).map_err(failed)
            })
            .collect(),
    }
}

/// Duplicate-detection key: the sorted, newline-joined canonical embedding
/// descriptors.
pub fn signature(doc: &UdmDocument, taxonomy: &Taxonomy) -> Result<String, UdmError> {
    ensure_valid(doc, taxonomy)?;
    let mut normalized = normalize_all(&doc.embedding_patterns, taxonomy)?;
    normalized.sort();
    Ok(normalized.join("\n"))
}

/// Plain-text rendering with one labeled section per attribute.
pub fn render_text(doc: &UdmDocument) -> String {
    fn list(out: &mut String, indent: &str, items: &[String]) {
        if items.is_empty() {
            let _ = writeln!(out, "{indent}(none)");
        }
        for item in items {
            let _ = writeln!(out, "{indent}- {item}");
        }
    }
    fn text(value: &str) -> &str {
        if value.trim().is_empty() {
            "(not specified)"
        } else {
            value
        }
    }

    let mut out = String::new();
    let _ = writeln!(out, "Method: {}", doc.method_name);
    let _ = writeln!(
        out,
        "Application scenario:\n  {}",
        text(&doc.application_scenario)
    );
    out.push_str("Embedding hiding pattern(s):\n");
    list(&mut out, "  ", &doc.embedding_patterns);
    out.push_str("Representation hiding pattern(s):\n");
    match &doc.representation_patterns {
        RepresentationPatterns::VariantOfEmbedding => {
            let _ = writeln!(out, "  {REPRESENTATION_VARIANT_MARKER}");
        }
        RepresentationPatterns::Explicit(items) => list(&mut out, "  ", items),
    }
    out.push_str("Required cover properties:\n");
    list(&mut out, "  ", &doc.required_cover_properties);
    out.push_str("Channel properties:\n");
    let _ = writeln!(
        out,
        "  Robustness: {}",
        text(&doc.channel_properties.robustness)
    );
    out.push_str("  Countermeasures:\n");
    list(&mut out, "    ", &doc.channel_properties.countermeasures);
    let _ = writeln!(
        out,
        "  Capacity: {}",
        text(&doc.channel_properties.capacity)
    );
    let _ = writeln!(
        out,
        "Channel-internal protocol: {}",
        doc.channel_internal_protocol.as_deref().unwrap_or("(none)")
    );
    out.push_str("References:\n");
    list(&mut out, "  ", &doc.references);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tax() -> Taxonomy {
        Taxonomy::seed()
    }

    fn migration_doc() -> UdmDocument {
        UdmDocument {
            method_name: "VM migration covert channel".into(),
            application_scenario:
                "Covert sender triggers a VM migration; the receiver measures the RTT change."
                    .into(),
            embedding_patterns: vec!["Indirect (Proxy) E1n1. Network State/Value Modulation".into()],
            representation_patterns: RepresentationPatterns::Explicit(vec![
                "Indirect (Proxy) R2.2n1. Network Element Positioning".into(),
            ]),
            required_cover_properties: vec!["migratable virtual machine".into()],
            channel_properties: ChannelProperties {
                robustness: "depends on RTT jitter".into(),
                countermeasures: vec![],
                capacity: "1 bit per migration".into(),
            },
            channel_internal_protocol: None,
            references: vec![],
        }
    }

    fn mqtt_doc() -> UdmDocument {
        UdmDocument {
            method_name: "MQTT topic dead drop".into(),
            application_scenario:
                "Sender and receiver agree on a first-level topic; the broker stores the subtopic."
                    .into(),
            embedding_patterns: vec![
                "Indirect (Dead Drop) E1.1n1. Network State/Value Modulation".into(),
            ],
            representation_patterns: RepresentationPatterns::VariantOfEmbedding,
            required_cover_properties: vec!["MQTT server storing subtopics".into()],
            channel_properties: ChannelProperties {
                robustness: "reliable while the server retains topics".into(),
                countermeasures: vec!["topic normalization".into(), "traffic monitoring".into()],
                capacity: "bits/packet".into(),
            },
            channel_internal_protocol: Some("manipulation, storing and extraction phases".into()),
            references: vec!["ICC.1".into(), "MQTT.1".into()],
        }
    }

    #[test]
    fn migration_channel_is_valid() {
        assert_eq!(validate_udm(&migration_doc(), &tax()), vec![]);
    }

    #[test]
    fn marker_is_valid_for_any_family() {
        let t = tax();
        for e in ["E1.1n1.", "E2.1t1.", "E1.3d1.", "E2.2."] {
            let doc = UdmDocument::new("m", vec![e.into()]);
            assert_eq!(validate_udm(&doc, &t), vec![], "{e}");
        }
    }

    #[test]
    fn representation_code_in_embedding_field() {
        let doc = UdmDocument::new("m", vec!["R1n1. Network State/Value Modulation".into()]);
        let diags = validate_udm(&doc, &tax());
        let codes: Vec<_> = diags.iter().map(|d| d.code).collect();
        assert_eq!(codes, vec![DiagnosticCode::RepresentationInEmbeddingSlot]);
        assert!(diags[0].is_error());
        assert_eq!(diags[0].field.as_deref(), Some("embedding_patterns[0]"));
    }

    #[test]
    fn explicit_representation_rules() {
        let t = tax();
        let mut doc = migration_doc();
        doc.representation_patterns = RepresentationPatterns::Explicit(vec!["R2.2n1.".into()]);
        let codes: Vec<_> = validate_udm(&doc, &t).into_iter().map(|d| d.code).collect();
        assert_eq!(codes, vec![DiagnosticCode::IndirectnessMismatch]);

        doc.representation_patterns =
            RepresentationPatterns::Explicit(vec!["Indirect (Proxy) E2.2n1.".into()]);
        let codes: Vec<_> = validate_udm(&doc, &t).into_iter().map(|d| d.code).collect();
        assert_eq!(codes, vec![DiagnosticCode::EmbeddingInRepresentationSlot]);

        doc.representation_patterns =
            RepresentationPatterns::Explicit(vec!["Indirect (Broker) R2.2n1.".into()]);
        let codes: Vec<_> = validate_udm(&doc, &t).into_iter().map(|d| d.code).collect();
        assert_eq!(codes, vec![DiagnosticCode::IndirectnessMismatch]);
    }

    #[test]
    fn resolves_marker_clause_wise() {
        let t = tax();
        let doc = UdmDocument::new(
            "m",
            vec!["E1.1n1. Network Reserved/Unused State/Value Modulation".into()],
        );
        assert_eq!(
            resolve_representation(&doc, &t).unwrap(),
            vec!["R1.1n1. Network Reserved/Unused State/Value Modulation".to_string()]
        );
        let mqtt = resolve_representation(&mqtt_doc(), &t).unwrap();
        assert_eq!(
            mqtt,
            vec!["Indirect (Dead Drop) R1.1n1. Network Reserved/Unused State/Value Modulation"]
        );

        let two = UdmDocument::new("m", vec!["Multi-level (a) E1.3f1., (b) E1.1f1.".into()]);
        assert_eq!(
            resolve_representation(&two, &t).unwrap(),
            vec!["Multi-level (a) R1.3f1. Filesystem LSB State/Value Modulation, (b) R1.1f1. Filesystem Reserved/Unused State/Value Modulation"]
        );
    }

    #[test]
    fn resolves_explicit_list_normalized() {
        assert_eq!(
            resolve_representation(&migration_doc(), &tax()).unwrap(),
            vec!["Indirect (Proxy) R2.2n1. Network Element Positioning".to_string()]
        );
    }

    #[test]
    fn serialization_round_trip() {
        for doc in [mqtt_doc(), migration_doc()] {
            let text = serialize_udm(&doc);
            assert_eq!(deserialize_udm(&text).unwrap(), doc);
        }
        let text = serialize_udm(&migration_doc());
        assert!(!text.contains("channel_internal_protocol"));
        assert!(
            serialize_udm(&mqtt_doc()).contains(&format!("\"{REPRESENTATION_VARIANT_MARKER}\""))
        );
    }

    #[test]
    fn deserialize_errors() {
        let mut doc = mqtt_doc();
        doc.method_name = String::new();
        assert!(matches!(
            deserialize_udm(&serialize_udm(&doc)),
            Err(UdmError::MissingRequiredField("method_name"))
        ));
        assert!(matches!(
            deserialize_udm(r#"{"method_name":"m","representation_patterns":[]}"#),
            Err(UdmError::MissingRequiredField("embedding_patterns"))
        ));
        assert!(matches!(
            deserialize_udm(r#"{"method_name":"m","embedding_patterns":["E1."]}"#),
            Err(UdmError::MissingRequiredField("representation_patterns"))
        ));
        assert!(matches!(
            deserialize_udm(
                r#"{"method_name":"m","embedding_patterns":["E1."],"representation_patterns":[]}"#
            ),
            Err(UdmError::MissingRequiredField("representation_patterns"))
        ));
        assert!(matches!(
            deserialize_udm(
                r#"{"method_name":"m","embedding_patterns":["E1."],"representation_patterns":"something"}"#
            ),
            Err(UdmError::ParseError(_))
        ));
        assert!(matches!(
            deserialize_udm("{\"method_name\": "),
            Err(UdmError::ParseError(_))
        ));
    }

    #[test]
    fn signatures() {
        let t = tax();
        let a = UdmDocument::new(
            "first",
            vec!["E1.1n1. Network Reserved/Unused State/Value Modulation".into()],
        );
        let mut b = UdmDocument::new("second", vec!["e1.1n1.".into()]);
        b.application_scenario = "different prose".into();
        assert_eq!(signature(&a, &t).unwrap(), signature(&b, &t).unwrap());

        let semi = UdmDocument::new(
            "s",
            vec!["(Semi-active) E2.1t1. Text Element Enumeration".into()],
        );
        let dead = UdmDocument::new(
            "d",
            vec!["Indirect (Dead-drop) E2.1t1. Text Element Enumeration".into()],
        );
        assert_ne!(signature(&semi, &t).unwrap(), signature(&dead, &t).unwrap());

        let dead2 = UdmDocument::new(
            "d2",
            vec!["Indirect (Dead Drop) E2.1t1. Text Element Enumeration".into()],
        );
        assert_eq!(
            signature(&dead, &t).unwrap(),
            signature(&dead2, &t).unwrap()
        );

        let ab = UdmDocument::new("ab", vec!["E1.".into(), "E2.".into()]);
        let ba = UdmDocument::new("ba", vec!["E2.".into(), "E1.".into()]);
        assert_eq!(signature(&ab, &t).unwrap(), signature(&ba, &t).unwrap());
        assert_eq!(
            signature(&ab, &t).unwrap(),
            "E1. State/Value Modulation\nE2. Element Occurrence"
        );
    }

    #[test]
    fn normalize_rewrites_descriptors() {
        let t = tax();
        let doc = normalize_udm(&mqtt_doc(), &t).unwrap();
        assert_eq!(
            doc.embedding_patterns,
            vec!["Indirect (Dead Drop) E1.1n1. Network Reserved/Unused State/Value Modulation"]
        );
        let bad = UdmDocument::new("b", vec!["E9.".into()]);
        assert!(matches!(
            normalize_udm(&bad, &t),
            Err(UdmError::ValidationFailed(_))
        ));
    }

    #[test]
    fn text_rendering_has_sections() {
        let text = render_text(&mqtt_doc());
        for heading in [
            "Method: MQTT topic dead drop",
            "Application scenario:",
            "Embedding hiding pattern(s):",
            "Representation hiding pattern(s):\n  representation variant of embedding pattern",
            "Required cover properties:",
            "Channel properties:",
            "  Capacity: bits/packet",
            "Channel-internal protocol: manipulation",
            "References:\n  - ICC.1",
        ] {
            assert!(text.contains(heading), "missing {heading:?} in\n{text}");
        }
    }
}
