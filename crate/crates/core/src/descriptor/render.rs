use super::model::{Activeness, Descriptor, LevelCharacteristic, ReferenceTemporality};
use crate::taxonomy::Taxonomy;

/// Writes the canonical form. The caller has already validated `descriptor`.
pub(crate) fn write_canonical(descriptor: &Descriptor, taxonomy: &Taxonomy) -> String {
    let mut parts: Vec<String> = Vec::new();
    if !descriptor.locality.is_default() {
        parts.push(descriptor.locality.canonical());
    }
    if !descriptor.directness.is_default() {
        parts.push(descriptor.directness.canonical());
    }
    if descriptor.activeness != Activeness::Active {
        parts.push(descriptor.activeness.canonical().to_string());
    }
    if descriptor.level != LevelCharacteristic::SingleLevel {
        parts.push(descriptor.level.canonical().to_string());
    }
    if descriptor.temporality != ReferenceTemporality::Present {
        parts.push(descriptor.temporality.canonical().to_string());
    }
    for star in &descriptor.star_properties {
        parts.push(format!("[{}]", star.text));
    }

    let clause = |c: &super::model::PatternClause| {
        let name = taxonomy
            .get(&c.code)
            .map_or(c.name.as_str(), |r| r.name.as_str());
        format!("{} {}", c.code, name)
    };
    let clauses = match descriptor.patterns.as_slice() {
        [single] => clause(single),
        many => many
            .iter()
            .map(|c| format!("({}) {}", c.label.unwrap_or('?'), clause(c)))
            .collect::<Vec<_>>()
            .join(", "),
    };
    parts.push(clauses);
    parts.join(" ")
}
