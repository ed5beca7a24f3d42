use super::model::{label_for, Descriptor, LevelCharacteristic, StarKind};
use crate::diagnostic::{Diagnostic, DiagnosticCode};
use crate::taxonomy::{name_key, PatternCode, PatternKind, Taxonomy};

/// Checks a written pattern name against the taxonomy name for `code`.
///
/// An exact (normalized) match is fine. A name belonging to a hierarchical
/// ancestor of the code is accepted with a warning; anything else is a
/// `NameCodeMismatch`.
pub(crate) fn check_name(
    taxonomy: &Taxonomy,
    code: &PatternCode,
    written: &str,
) -> Result<Option<Diagnostic>, Diagnostic> {
    let Some(record) = taxonomy.get(code) else {
        return Err(unknown_code(code));
    };
    let key = name_key(written);
    if key == name_key(&record.name) {
        return Ok(None);
    }
    if let Some(ancestor) = taxonomy
        .ancestors(code)
        .into_iter()
        .find(|a| name_key(&a.name) == key)
    {
        return Ok(Some(Diagnostic::warning(
            DiagnosticCode::AncestorPatternName,
            format!(
                "'{written}' is the name of {}; {code} is named '{}'",
                ancestor.code, record.name
            ),
        )));
    }
    Err(Diagnostic::error(
        DiagnosticCode::NameCodeMismatch,
        format!(
            "'{written}' does not name {code}, which is '{}'",
            record.name
        ),
    ))
}

pub(crate) fn check_star_text(text: &str) -> Result<(), Diagnostic> {
    if text.trim().is_empty() {
        return Err(Diagnostic::error(
            DiagnosticCode::InvalidStarProperty,
            "star property is empty",
        ));
    }
    if text.contains(['[', ']']) {
        return Err(Diagnostic::error(
            DiagnosticCode::InvalidStarProperty,
            "star property text cannot contain square brackets",
        ));
    }
    Ok(())
}

fn unknown_code(code: &PatternCode) -> Diagnostic {
    Diagnostic::error(
        DiagnosticCode::UnknownPatternCode,
        format!("pattern {code} is not in the taxonomy"),
    )
}

/// Structural and taxonomy checks for a descriptor value.
pub fn validate(descriptor: &Descriptor, taxonomy: &Taxonomy) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let count = descriptor.patterns.len();

    if count == 0 {
        out.push(Diagnostic::error(
            DiagnosticCode::EmptyPatternList,
            "descriptor has no pattern clause",
        ));
    }
    if descriptor.level == LevelCharacteristic::MultiLevel && count < 2 {
        out.push(
            Diagnostic::error(
                DiagnosticCode::MultiLevelArity,
                "a multi-level descriptor needs at least two pattern clauses",
            )
            .with_field("level"),
        );
    }

    for (i, star) in descriptor.star_properties.iter().enumerate() {
        let field = format!("star_properties[{i}]");
        if let Err(d) = check_star_text(&star.text) {
            out.push(d.with_field(field));
        } else if star.text.trim() != star.text {
            out.push(
                Diagnostic::error(
                    DiagnosticCode::InvalidStarProperty,
                    "star property has surrounding whitespace",
                )
                .with_field(field),
            );
        } else if StarKind::classify(&star.text) != star.known_kind {
            out.push(
                Diagnostic::error(
                    DiagnosticCode::InvalidStarProperty,
                    format!(
                        "star property '{}' is not of kind {:?}",
                        star.text, star.known_kind
                    ),
                )
                .with_field(field),
            );
        }
    }

    for (i, clause) in descriptor.patterns.iter().enumerate() {
        let field = format!("patterns[{i}]");
        let expected = if count >= 2 { label_for(i) } else { None };
        if clause.label != expected {
            let message = match expected {
                Some(l) => format!("clause {} must be labeled ({l})", i + 1),
                None => "a single pattern clause must not be labeled".to_string(),
            };
            out.push(
                Diagnostic::error(DiagnosticCode::LabelError, message).with_field(field.clone()),
            );
        }
        match check_name(taxonomy, &clause.code, &clause.name) {
            Ok(None) => {}
            Ok(Some(d)) | Err(d) => out.push(d.with_field(field.clone())),
        }
        if clause.code.kind() == PatternKind::Representation {
            out.push(
                Diagnostic::warning(
                    DiagnosticCode::RepresentationInEmbeddingSlot,
                    format!("{} is a representation pattern; the pattern slot normally holds embedding patterns", clause.code),
                )
                .with_field(field),
            );
        }
    }
    out
}
