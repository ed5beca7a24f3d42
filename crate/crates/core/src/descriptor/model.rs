use serde::{Deserialize, Serialize};

use crate::taxonomy::PatternCode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistributionPattern {
    PatternVariation,
    HostBasedScattering,
    FlowBasedScattering,
    ProtocolBasedScattering,
    PatternCombination,
    PatternHopping,
}

impl DistributionPattern {
    pub const ALL: [DistributionPattern; 6] = [
        DistributionPattern::PatternVariation,
        DistributionPattern::HostBasedScattering,
        DistributionPattern::FlowBasedScattering,
        DistributionPattern::ProtocolBasedScattering,
        DistributionPattern::PatternCombination,
        DistributionPattern::PatternHopping,
    ];

    pub fn canonical(self) -> &'static str {
        match self {
            DistributionPattern::PatternVariation => "Pattern Variation",
            DistributionPattern::HostBasedScattering => "Host-based Scattering",
            DistributionPattern::FlowBasedScattering => "Flow-based Scattering",
            DistributionPattern::ProtocolBasedScattering => "Protocol-based Scattering",
            DistributionPattern::PatternCombination => "Pattern Combination",
            DistributionPattern::PatternHopping => "Pattern Hopping",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            DistributionPattern::PatternVariation => {
                "The same hiding pattern is applied to different carrier objects without a new implementation."
            }
            DistributionPattern::HostBasedScattering => {
                "Pattern variation for networks: secret message bits are scattered over different hosts."
            }
            DistributionPattern::FlowBasedScattering => {
                "Pattern variation for networks: secret message bits are scattered over multiple flows."
            }
            DistributionPattern::ProtocolBasedScattering => {
                "Pattern variation for networks: secret message bits are scattered over multiple protocols."
            }
            DistributionPattern::PatternCombination => {
                "Several hiding patterns are applied to the same carrier object."
            }
            DistributionPattern::PatternHopping => {
                "The hiding methods in use alternate in a (pseudo-)random sequence."
            }
        }
    }

    pub(crate) fn from_key(key: &str) -> Option<DistributionPattern> {
        let key = key.replace("scattered", "scattering");
        Some(match key.as_str() {
            "pattern variation" => DistributionPattern::PatternVariation,
            "host based scattering" => DistributionPattern::HostBasedScattering,
            "flow based scattering" => DistributionPattern::FlowBasedScattering,
            "protocol based scattering" => DistributionPattern::ProtocolBasedScattering,
            "pattern combination" => DistributionPattern::PatternCombination,
            "pattern hopping" => DistributionPattern::PatternHopping,
            _ => return None,
        })
    }
}

/// Whether the secret message is confined to one cover or spread out.
/// A distributed channel may leave its distribution pattern unspecified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(tag = "variant", content = "distribution", rename_all = "kebab-case")]
pub enum Locality {
    #[default]
    Local,
    Distributed(Option<DistributionPattern>),
}

impl Locality {
    pub fn canonical(self) -> String {
        match self {
            Locality::Local => "Local".into(),
            Locality::Distributed(None) => "Distributed".into(),
            Locality::Distributed(Some(p)) => format!("Distributed ({})", p.canonical()),
        }
    }

    pub fn is_default(self) -> bool {
        self == Locality::Local
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndirectPattern {
    Redirector,
    Broker,
    Proxy,
    DeadDrop,
}

impl IndirectPattern {
    pub const ALL: [IndirectPattern; 4] = [
        IndirectPattern::Redirector,
        IndirectPattern::Broker,
        IndirectPattern::Proxy,
        IndirectPattern::DeadDrop,
    ];

    pub fn canonical(self) -> &'static str {
        match self {
            IndirectPattern::Redirector => "Redirector",
            IndirectPattern::Broker => "Broker",
            IndirectPattern::Proxy => "Proxy",
            IndirectPattern::DeadDrop => "Dead Drop",
        }
    }

    /// Proxy and dead drop refine the broker pattern.
    pub fn parent(self) -> Option<IndirectPattern> {
        match self {
            IndirectPattern::Proxy | IndirectPattern::DeadDrop => Some(IndirectPattern::Broker),
            _ => None,
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            IndirectPattern::Redirector => {
                "The covert sender forces a third-party node to unintentionally redirect steganography objects to the covert receiver, e.g. by sending it a request with a spoofed source address."
            }
            IndirectPattern::Broker => {
                "Instead of redirecting steganography objects, the third-party node is manipulated so that the covert receiver can extract them from it. A broker is either a proxy or a dead drop."
            }
            IndirectPattern::Proxy => {
                "The covert sender influences a third-party node in a way the covert receiver can recognize, e.g. by loading a shared process so its measurable performance changes."
            }
            IndirectPattern::DeadDrop => {
                "The steganography object is stored on a third-party node, e.g. in a protocol cache, from which the covert receiver later reads it."
            }
        }
    }

    pub(crate) fn from_key(key: &str) -> Option<IndirectPattern> {
        Some(match key {
            "redirector" => IndirectPattern::Redirector,
            "broker" => IndirectPattern::Broker,
            "proxy" => IndirectPattern::Proxy,
            "dead drop" | "deaddrop" => IndirectPattern::DeadDrop,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(tag = "variant", content = "pattern", rename_all = "kebab-case")]
pub enum Directness {
    #[default]
    Direct,
    Indirect(IndirectPattern),
}

impl Directness {
    pub fn canonical(self) -> String {
        match self {
            Directness::Direct => "Direct".into(),
            Directness::Indirect(p) => format!("Indirect ({})", p.canonical()),
        }
    }

    pub fn is_default(self) -> bool {
        self == Directness::Direct
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Activeness {
    #[default]
    Active,
    Passive,
    SemiActive,
    SemiPassive,
    FullyPassive,
}

impl Activeness {
    pub const ALL: [Activeness; 5] = [
        Activeness::Active,
        Activeness::Passive,
        Activeness::SemiActive,
        Activeness::SemiPassive,
        Activeness::FullyPassive,
    ];

    pub fn canonical(self) -> &'static str {
        match self {
            Activeness::Active => "Active",
            Activeness::Passive => "Passive",
            Activeness::SemiActive => "Semi-active",
            Activeness::SemiPassive => "Semi-passive",
            Activeness::FullyPassive => "Fully-passive",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Activeness::Active => {
                "The covert sender creates the cover object and the covert receiver is its overt recipient."
            }
            Activeness::Passive => {
                "The covert sender modifies a third-party cover object and the covert receiver recognizes the embedded message, e.g. as an on-path observer."
            }
            Activeness::SemiActive => {
                "Mixed form: the covert sender is the overt sender of the cover object, while the covert receiver is not its overt recipient and observes it in transit."
            }
            Activeness::SemiPassive => {
                "Mixed form: the covert sender modifies a cover object it did not create, while the covert receiver is the overt recipient."
            }
            Activeness::FullyPassive => {
                "The cover object is untouched by both sides: the sender only points to it and the receiver observes it by eavesdropping or as a broadcast receiver."
            }
        }
    }

    pub(crate) fn from_key(key: &str) -> Option<Activeness> {
        Some(match key {
            "active" => Activeness::Active,
            "passive" => Activeness::Passive,
            "semi active" | "semiactive" => Activeness::SemiActive,
            "semi passive" | "semipassive" => Activeness::SemiPassive,
            "fully passive" => Activeness::FullyPassive,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelCharacteristic {
    #[default]
    SingleLevel,
    MultiLevel,
}

impl LevelCharacteristic {
    pub fn canonical(self) -> &'static str {
        match self {
            LevelCharacteristic::SingleLevel => "Single-level",
            LevelCharacteristic::MultiLevel => "Multi-level",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            LevelCharacteristic::SingleLevel => "A single level of embedding.",
            LevelCharacteristic::MultiLevel => {
                "Steganography objects are nested inside other steganography objects; clauses list the layers from the outermost inward."
            }
        }
    }

    pub(crate) fn from_key(key: &str) -> Option<LevelCharacteristic> {
        Some(match key {
            "single level" | "singlelevel" => LevelCharacteristic::SingleLevel,
            "multi level" | "multilevel" => LevelCharacteristic::MultiLevel,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceTemporality {
    #[default]
    Present,
    HistoryFocused,
    FutureFocused,
}

impl ReferenceTemporality {
    pub const ALL: [ReferenceTemporality; 3] = [
        ReferenceTemporality::Present,
        ReferenceTemporality::HistoryFocused,
        ReferenceTemporality::FutureFocused,
    ];

    pub fn canonical(self) -> &'static str {
        match self {
            ReferenceTemporality::Present => "Present-focused",
            ReferenceTemporality::HistoryFocused => "History-focused",
            ReferenceTemporality::FutureFocused => "Future-focused",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ReferenceTemporality::Present => "The secret message itself is embedded into the cover object.",
            ReferenceTemporality::HistoryFocused => {
                "The channel transfers pointers to already existing (historic) data instead of the secret message itself."
            }
            ReferenceTemporality::FutureFocused => {
                "The channel transfers pointers to anticipated future data instead of the secret message itself."
            }
        }
    }

    pub(crate) fn from_key(key: &str) -> Option<ReferenceTemporality> {
        Some(match key {
            "present focused" | "present" => ReferenceTemporality::Present,
            "history focused" | "historic" => ReferenceTemporality::HistoryFocused,
            "future focused" => ReferenceTemporality::FutureFocused,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StarKind {
    CoverSelection,
    Coverless,
    Unidirectional,
    Bidirectional,
    Broadcast,
    Noisy,
    NoiseFree,
    PredictableCover,
    VariableCover,
    RandomizedCover,
    Reversible,
    Other,
}

impl StarKind {
    /// Classify a star-property text against the controlled qualifiers.
    pub fn classify(text: &str) -> StarKind {
        match keyword_key(text).as_str() {
            "cover selection" => StarKind::CoverSelection,
            "coverless" | "coverless steganography" => StarKind::Coverless,
            "unidirectional" => StarKind::Unidirectional,
            "bidirectional" => StarKind::Bidirectional,
            "broadcast" => StarKind::Broadcast,
            "noisy" => StarKind::Noisy,
            "noise free" | "noiseless" => StarKind::NoiseFree,
            "predictable" | "predictable cover" => StarKind::PredictableCover,
            "variable" | "variable cover" => StarKind::VariableCover,
            "randomized" | "randomised" | "randomized cover" | "randomised cover" => {
                StarKind::RandomizedCover
            }
            "reversible" => StarKind::Reversible,
            _ => StarKind::Other,
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            StarKind::CoverSelection => "The cover object is selected (not modified) so that it already represents the secret.",
            StarKind::Coverless => "Coverless steganography: no cover object is modified.",
            StarKind::Unidirectional => "Secret data flows in one direction only.",
            StarKind::Bidirectional => "Secret data flows in both directions.",
            StarKind::Broadcast => "One covert sender reaches many covert receivers.",
            StarKind::Noisy => "The channel is subject to noise.",
            StarKind::NoiseFree => "The channel is free of noise.",
            StarKind::PredictableCover => "The cover is predictable.",
            StarKind::VariableCover => "The cover is variable.",
            StarKind::RandomizedCover => "The cover is randomized.",
            StarKind::Reversible => "An (intermediate) covert receiver can restore the cover object to its state before embedding.",
            StarKind::Other => "Free-form qualifier.",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StarProperty {
    pub text: String,
    pub known_kind: StarKind,
}

impl StarProperty {
    pub fn new(text: impl Into<String>) -> StarProperty {
        let text = text.into();
        let known_kind = StarKind::classify(&text);
        StarProperty { text, known_kind }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PatternClause {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub label: Option<char>,
    pub code: PatternCode,
    pub name: String,
}

/// A parsed naming-convention descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Descriptor {
    pub locality: Locality,
    pub directness: Directness,
    pub activeness: Activeness,
    pub level: LevelCharacteristic,
    pub temporality: ReferenceTemporality,
    pub star_properties: Vec<StarProperty>,
    pub patterns: Vec<PatternClause>,
}

impl Descriptor {
    /// All-defaults descriptor around the given clauses.
    pub fn with_patterns(patterns: Vec<PatternClause>) -> Descriptor {
        Descriptor {
            locality: Locality::default(),
            directness: Directness::default(),
            activeness: Activeness::default(),
            level: LevelCharacteristic::default(),
            temporality: ReferenceTemporality::default(),
            star_properties: Vec::new(),
            patterns,
        }
    }

    pub fn codes(&self) -> impl Iterator<Item = &PatternCode> {
        self.patterns.iter().map(|c| &c.code)
    }
}

/// Label for the clause at `index` in a multi-clause descriptor.
pub fn label_for(index: usize) -> Option<char> {
    u8::try_from(index)
        .ok()
        .filter(|i| *i < 26)
        .map(|i| (b'a' + i) as char)
}

/// Keyword comparison form: lowercase, hyphens and underscores as spaces,
/// whitespace collapsed.
pub(crate) fn keyword_key(text: &str) -> String {
    text.to_lowercase()
        .replace(['-', '_'], " ")
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alias_keys_converge() {
        for spelling in [
            "dead drop",
            "Dead-drop",
            "Dead Drop",
            "DEAD_DROP",
            "deaddrop",
        ] {
            assert_eq!(
                IndirectPattern::from_key(&keyword_key(spelling)),
                Some(IndirectPattern::DeadDrop)
            );
        }
        for spelling in ["host-based scattered", "Host based scattering"] {
            assert_eq!(
                DistributionPattern::from_key(&keyword_key(spelling)),
                Some(DistributionPattern::HostBasedScattering)
            );
        }
    }

    #[test]
    fn star_classification() {
        assert_eq!(
            StarProperty::new("Noise-free").known_kind,
            StarKind::NoiseFree
        );
        assert_eq!(
            StarProperty::new("reversible").known_kind,
            StarKind::Reversible
        );
        assert_eq!(
            StarProperty::new("key-based symbol, embedding position and cover data permutation")
                .known_kind,
            StarKind::Other
        );
    }

    #[test]
    fn serde_shapes() {
        let json = serde_json::to_value(Locality::Distributed(Some(
            DistributionPattern::HostBasedScattering,
        )))
        .unwrap();
        assert_eq!(
            json,
            serde_json::json!({"variant": "distributed", "distribution": "host-based-scattering"})
        );
        let json = serde_json::to_value(Directness::Indirect(IndirectPattern::DeadDrop)).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"variant": "indirect", "pattern": "dead-drop"})
        );
        assert_eq!(
            serde_json::to_value(Directness::Direct).unwrap(),
            serde_json::json!({"variant": "direct"})
        );
    }

    #[test]
    fn broker_subvariants() {
        assert_eq!(
            IndirectPattern::DeadDrop.parent(),
            Some(IndirectPattern::Broker)
        );
        assert_eq!(
            IndirectPattern::Proxy.parent(),
            Some(IndirectPattern::Broker)
        );
        assert_eq!(IndirectPattern::Redirector.parent(), None);
    }
}
