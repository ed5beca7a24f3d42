//! Proptest strategies for valid descriptors, their textual spellings and
//! UDM documents. Enabled by the `strategies` feature.

use proptest::collection::vec;
use proptest::option;
use proptest::prelude::*;
use proptest::sample::select;

use crate::descriptor::{
    self, label_for, Activeness, Descriptor, Directness, DistributionPattern, IndirectPattern,
    LevelCharacteristic, Locality, PatternClause, ReferenceTemporality, StarProperty,
};
use crate::taxonomy::{PatternCode, PatternKind, Taxonomy};
use crate::udm::{ChannelProperties, RepresentationPatterns, UdmDocument};

const STAR_TEXTS: &[&str] = &[
    "cover selection",
    "coverless",
    "unidirectional",
    "bidirectional",
    "broadcast",
    "noisy",
    "noise-free",
    "predictable cover",
    "variable cover",
    "randomized cover",
    "reversible",
    "key-based symbol, embedding position and cover data permutation",
    "2 bits/packet (measured)",
];

pub fn locality() -> impl Strategy<Value = Locality> {
    prop_oneof![
        Just(Locality::Local),
        option::of(select(DistributionPattern::ALL.to_vec())).prop_map(Locality::Distributed),
    ]
}

pub fn directness() -> impl Strategy<Value = Directness> {
    prop_oneof![
        Just(Directness::Direct),
        select(IndirectPattern::ALL.to_vec()).prop_map(Directness::Indirect),
    ]
}

pub fn star_property() -> impl Strategy<Value = StarProperty> {
    prop_oneof![
        select(STAR_TEXTS).prop_map(StarProperty::new),
        "[a-zA-Z0-9][a-zA-Z0-9 ,.:/()-]{0,30}[a-zA-Z0-9)]".prop_map(StarProperty::new),
    ]
}

/// `(code, name)` of every embedding record in `taxonomy`.
fn embedding_records(taxonomy: &Taxonomy) -> Vec<(PatternCode, String)> {
    taxonomy
        .iter()
        .filter(|r| r.code.kind() == PatternKind::Embedding)
        .map(|r| (r.code.clone(), r.name.clone()))
        .collect()
}

/// Descriptors that validate cleanly against `taxonomy`: every attribute
/// enumeration, 1 to 4 embedding clauses, 0 to 3 star properties.
pub fn descriptor(taxonomy: &Taxonomy) -> BoxedStrategy<Descriptor> {
    let records = embedding_records(taxonomy);
    assert!(!records.is_empty(), "taxonomy has no embedding patterns");
    let level = select(vec![
        LevelCharacteristic::SingleLevel,
        LevelCharacteristic::MultiLevel,
    ]);
    let clauses = level.prop_flat_map(move |level| {
        let min = if level == LevelCharacteristic::MultiLevel {
            2
        } else {
            1
        };
        (Just(level), vec(select(records.clone()), min..=4))
    });
    (
        locality(),
        directness(),
        select(Activeness::ALL.to_vec()),
        select(ReferenceTemporality::ALL.to_vec()),
        vec(star_property(), 0..=3),
        clauses,
    )
        .prop_map(
            |(locality, directness, activeness, temporality, star_properties, (level, picked))| {
                let count = picked.len();
                let patterns = picked
                    .into_iter()
                    .enumerate()
                    .map(|(i, (code, name))| PatternClause {
                        label: if count > 1 { label_for(i) } else { None },
                        code,
                        name,
                    })
                    .collect();
                Descriptor {
                    locality,
                    directness,
                    activeness,
                    level,
                    temporality,
                    star_properties,
                    patterns,
                }
            },
        )
        .boxed()
}

/// Picks alternatives from a fixed byte pool.
struct Choices {
    bytes: Vec<u8>,
    next: usize,
}

impl Choices {
    fn pick<'a>(&mut self, options: &[&'a str]) -> &'a str {
        let byte = self.bytes[self.next % self.bytes.len()];
        self.next += 1;
        options[usize::from(byte) % options.len()]
    }

    fn recase(&mut self, text: &str) -> String {
        match self.pick(&["keep", "lower", "upper"]) {
            "lower" => text.to_lowercase(),
            "upper" => text.to_uppercase(),
            _ => text.to_string(),
        }
    }
}

fn distribution_spellings(p: DistributionPattern) -> &'static [&'static str] {
    match p {
        DistributionPattern::PatternVariation => &["pattern variation", "Pattern Variation"],
        DistributionPattern::HostBasedScattering => &[
            "host-based scattered",
            "Host-based Scattering",
            "host based scattering",
        ],
        DistributionPattern::FlowBasedScattering => {
            &["flow-based scattered", "Flow-based Scattering"]
        }
        DistributionPattern::ProtocolBasedScattering => {
            &["protocol-based scattering", "Protocol-based Scattered"]
        }
        DistributionPattern::PatternCombination => &["pattern combination", "Pattern Combination"],
        DistributionPattern::PatternHopping => &["pattern hopping", "Pattern-Hopping"],
    }
}

fn indirect_spellings(p: IndirectPattern) -> &'static [&'static str] {
    match p {
        IndirectPattern::Redirector => &["redirector", "Redirector"],
        IndirectPattern::Broker => &["broker", "Broker"],
        IndirectPattern::Proxy => &["proxy", "Proxy"],
        IndirectPattern::DeadDrop => &["dead drop", "Dead-drop", "Dead Drop", "deaddrop"],
    }
}

/// A non-canonical spelling of `d`: random keyword case, explicit default
/// tokens, parenthesized standalone attributes, alias spellings, omitted or
/// re-cased pattern names and an optional "and" before the last clause.
pub fn spell(d: &Descriptor, bytes: Vec<u8>) -> String {
    let mut c = Choices { bytes, next: 0 };
    let mut parts: Vec<String> = Vec::new();

    match d.locality {
        Locality::Local => parts.push(
            c.pick(&["", "", "non-distributed", "Local", "(Non-Distributed)"])
                .into(),
        ),
        Locality::Distributed(None) => parts.push(
            c.pick(&["distributed", "Distributed", "(Distributed)"])
                .into(),
        ),
        Locality::Distributed(Some(p)) => {
            let inner = c.pick(distribution_spellings(p));
            parts.push(format!(
                "{} ({inner})",
                c.pick(&["distributed", "Distributed", "DISTRIBUTED"])
            ));
        }
    }
    match d.directness {
        Directness::Direct => parts.push(c.pick(&["", "", "direct", "Direct"]).into()),
        Directness::Indirect(p) => {
            let inner = c.pick(indirect_spellings(p));
            parts.push(format!("{} ({inner})", c.pick(&["indirect", "Indirect"])));
        }
    }
    let activeness = match d.activeness {
        Activeness::Active => c.pick(&["", "", "active", "(Active)"]).to_string(),
        Activeness::SemiActive => c
            .pick(&[
                "semi-active",
                "(Semi-active)",
                "passive (semi-active)",
                "semiactive",
            ])
            .into(),
        Activeness::SemiPassive => c
            .pick(&["semi-passive", "(Semi-passive)", "passive (semi passive)"])
            .into(),
        Activeness::FullyPassive => c
            .pick(&["fully-passive", "Fully passive", "passive (fully-passive)"])
            .into(),
        Activeness::Passive => c.pick(&["passive", "(Passive)"]).into(),
    };
    parts.push(c.recase(&activeness));
    let level = match d.level {
        LevelCharacteristic::SingleLevel => c.pick(&["", "", "single-level", "Single level"]),
        LevelCharacteristic::MultiLevel => {
            c.pick(&["multi-level", "Multi-level", "multilevel", "(Multi-level)"])
        }
    };
    parts.push(c.recase(level));
    let temporality = match d.temporality {
        ReferenceTemporality::Present => c.pick(&["", "", "present-focused", "(Present-focused)"]),
        ReferenceTemporality::HistoryFocused => {
            c.pick(&["history-focused", "(History-focused)", "History focused"])
        }
        ReferenceTemporality::FutureFocused => {
            c.pick(&["future-focused", "(Future-focused)", "Future focused"])
        }
    };
    parts.push(c.recase(temporality));
    for star in &d.star_properties {
        parts.push(format!("[{}{}]", c.pick(&["", " "]), star.text));
    }

    let count = d.patterns.len();
    let mut clauses = String::new();
    for (i, clause) in d.patterns.iter().enumerate() {
        if i > 0 {
            let last = i + 1 == count;
            clauses.push_str(if last {
                c.pick(&[", ", ", and ", " and "])
            } else {
                ", "
            });
        }
        if let Some(label) = clause.label {
            clauses.push_str(&format!("({label}) "));
        }
        let code = clause.code.to_string();
        clauses.push_str(&c.recase(&code));
        match c.pick(&["canonical", "none", "lower", "abbreviated"]) {
            "canonical" => clauses.push_str(&format!(" {}", clause.name)),
            "lower" => clauses.push_str(&format!(" {}", clause.name.to_lowercase())),
            "abbreviated" => {
                clauses.push_str(&format!(" {}", clause.name.replace("Modulation", "Mod.")))
            }
            _ => {}
        }
    }
    parts.push(clauses);
    parts.retain(|p| !p.is_empty());
    parts.join(" ")
}

/// A valid descriptor together with one of its non-canonical spellings.
pub fn spelled_descriptor(taxonomy: &Taxonomy) -> BoxedStrategy<(Descriptor, String)> {
    (descriptor(taxonomy), vec(any::<u8>(), 24))
        .prop_map(|(d, bytes)| {
            let text = spell(&d, bytes);
            (d, text)
        })
        .boxed()
}

fn prose() -> impl Strategy<Value = String> {
    "[A-Za-z0-9][A-Za-z0-9 ,.;:/()-]{0,40}"
}

/// Documents that pass `validate_udm` against `taxonomy`. Explicit
/// representation lists are derived from the embedding descriptors so the
/// indirectness rule holds.
pub fn udm_document(taxonomy: &Taxonomy) -> BoxedStrategy<UdmDocument> {
    let tax = taxonomy.clone();
    (
        prose(),
        prose(),
        vec(spelled_descriptor(taxonomy), 1..=3),
        any::<bool>(),
        vec(prose(), 0..3),
        (prose(), vec(prose(), 0..3), prose()),
        option::of(prose()),
        vec(prose(), 0..3),
    )
        .prop_map(
            move |(
                method_name,
                scenario,
                embedding,
                explicit,
                cover,
                (robustness, countermeasures, capacity),
                protocol,
                references,
            )| {
                let representation_patterns = if explicit {
                    let indirect = embedding
                        .iter()
                        .map(|(d, _)| d.directness)
                        .find(|d| matches!(d, Directness::Indirect(_)));
                    RepresentationPatterns::Explicit(
                        embedding
                            .iter()
                            .map(|(d, _)| {
                                let mut r = descriptor::derive_representation(d, &tax)
                                    .expect("seed has R mirrors");
                                r.directness = indirect.unwrap_or(r.directness);
                                descriptor::render_canonical(&r, &tax)
                                    .expect("derived descriptor renders")
                            })
                            .collect(),
                    )
                } else {
                    RepresentationPatterns::VariantOfEmbedding
                };
                UdmDocument {
                    method_name,
                    application_scenario: scenario,
                    embedding_patterns: embedding.into_iter().map(|(_, text)| text).collect(),
                    representation_patterns,
                    required_cover_properties: cover,
                    channel_properties: ChannelProperties {
                        robustness,
                        countermeasures,
                        capacity,
                    },
                    channel_internal_protocol: protocol,
                    references,
                }
            },
        )
        .boxed()
}
