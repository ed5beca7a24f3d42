use serde::{Deserialize, Serialize};

use super::model::{
    Activeness, Descriptor, Directness, LevelCharacteristic, Locality, ReferenceTemporality,
};
use crate::taxonomy::Taxonomy;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplanationEntry {
    pub attribute: String,
    pub value: String,
    pub description: String,
}

fn entry(
    attribute: impl Into<String>,
    value: impl Into<String>,
    description: impl Into<String>,
) -> ExplanationEntry {
    ExplanationEntry {
        attribute: attribute.into(),
        value: value.into(),
        description: description.into(),
    }
}

const DISTRIBUTED: &str =
    "The secret message is spread over several cover objects, or several hiding methods are applied to one cover object.";

pub(crate) fn build(descriptor: &Descriptor, taxonomy: &Taxonomy) -> Vec<ExplanationEntry> {
    let mut out = Vec::new();

    if let Locality::Distributed(pattern) = descriptor.locality {
        let description = match pattern {
            Some(p) => format!("{DISTRIBUTED} {}", p.description()),
            None => DISTRIBUTED.to_string(),
        };
        out.push(entry(
            "locality",
            descriptor.locality.canonical(),
            description,
        ));
    }
    if let Directness::Indirect(pattern) = descriptor.directness {
        let description = match pattern.parent() {
            Some(parent) => format!(
                "Sub-variant of the {} pattern. {}",
                parent.canonical(),
                pattern.description()
            ),
            None => pattern.description().to_string(),
        };
        out.push(entry(
            "directness",
            descriptor.directness.canonical(),
            description,
        ));
    }
    if descriptor.activeness != Activeness::Active {
        out.push(entry(
            "activeness",
            descriptor.activeness.canonical(),
            descriptor.activeness.description(),
        ));
    }
    if descriptor.level != LevelCharacteristic::SingleLevel {
        out.push(entry(
            "level",
            descriptor.level.canonical(),
            descriptor.level.description(),
        ));
    }
    if descriptor.temporality != ReferenceTemporality::Present {
        out.push(entry(
            "temporality",
            descriptor.temporality.canonical(),
            descriptor.temporality.description(),
        ));
    }
    for star in &descriptor.star_properties {
        out.push(entry(
            "star-property",
            star.text.clone(),
            star.known_kind.description(),
        ));
    }

    let multi = descriptor.patterns.len() > 1;
    for (i, clause) in descriptor.patterns.iter().enumerate() {
        let record = taxonomy.get(&clause.code);
        let attribute = match clause.label {
            Some(l) => format!("pattern ({l})"),
            None => "pattern".to_string(),
        };
        let mut description = record.map(|r| r.description.clone()).unwrap_or_default();
        if multi && descriptor.level == LevelCharacteristic::MultiLevel {
            let layer = match i {
                0 => "Outermost layer.".to_string(),
                i if i + 1 == descriptor.patterns.len() => "Innermost layer.".to_string(),
                i => format!("Layer {}.", i + 1),
            };
            description = format!("{layer} {description}");
        }
        let name = record.map_or(clause.name.as_str(), |r| r.name.as_str());
        out.push(entry(
            attribute,
            format!("{} {}", clause.code, name),
            description,
        ));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Component {
    Locality,
    Directness,
    Activeness,
    Level,
    Temporality,
    StarProperties,
    Patterns,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentDifference {
    pub component: Component,
    pub left: String,
    pub right: String,
}

fn stars(d: &Descriptor) -> String {
    if d.star_properties.is_empty() {
        "(none)".into()
    } else {
        d.star_properties
            .iter()
            .map(|s| format!("[{}]", s.text))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn clauses(d: &Descriptor) -> String {
    d.patterns
        .iter()
        .map(|c| match c.label {
            Some(l) => format!("({l}) {}", c.code),
            None => c.code.to_string(),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

/// Component-wise differences. Pattern clauses compare by code, since their
/// rendered names come from the taxonomy.
pub fn diff(a: &Descriptor, b: &Descriptor) -> Vec<ComponentDifference> {
    let mut out = Vec::new();
    let mut push = |component, left: String, right: String| {
        if left != right {
            out.push(ComponentDifference {
                component,
                left,
                right,
            });
        }
    };
    push(
        Component::Locality,
        a.locality.canonical(),
        b.locality.canonical(),
    );
    push(
        Component::Directness,
        a.directness.canonical(),
        b.directness.canonical(),
    );
    push(
        Component::Activeness,
        a.activeness.canonical().into(),
        b.activeness.canonical().into(),
    );
    push(
        Component::Level,
        a.level.canonical().into(),
        b.level.canonical().into(),
    );
    push(
        Component::Temporality,
        a.temporality.canonical().into(),
        b.temporality.canonical().into(),
    );
    push(Component::StarProperties, stars(a), stars(b));
    push(Component::Patterns, clauses(a), clauses(b));
    out
}
