use std::sync::{Arc, OnceLock};

use proptest::prelude::*;
use stegotax::catalog::Catalog;
use stegotax::descriptor::{self, label_for, Descriptor};
use stegotax::strategies;
use stegotax::taxonomy::{Media, PatternCode, PatternKind, Taxonomy};
use stegotax::udm::{self, RepresentationPatterns};

fn tax() -> &'static Taxonomy {
    static TAX: OnceLock<Taxonomy> = OnceLock::new();
    TAX.get_or_init(Taxonomy::seed)
}

fn any_code() -> impl Strategy<Value = PatternCode> {
    (
        prop_oneof![
            Just(PatternKind::Embedding),
            Just(PatternKind::Representation)
        ],
        proptest::collection::vec(1u32..20, 1..4),
        proptest::option::of(("[ntdcfxyz]", 1u32..9)),
    )
        .prop_map(|(kind, path, media)| {
            let media = media.map(|(letter, variant)| {
                Media::new(letter.chars().next().unwrap(), variant).unwrap()
            });
            PatternCode::new(kind, path, media).unwrap()
        })
}

fn attributes(d: &Descriptor) -> Descriptor {
    Descriptor {
        patterns: Vec::new(),
        ..d.clone()
    }
}

const DEFAULT_TOKENS: &[&str] = &[
    "local",
    "direct",
    "active",
    "single-level",
    "present-focused",
    "non-distributed",
];

/// Attribute part of a canonical string: everything before the clause list
/// and outside star brackets.
fn attribute_words(canonical: &str, d: &Descriptor) -> String {
    let first_clause = d.patterns[0].code.to_string();
    let head = match canonical.find(&format!("(a) {first_clause}")) {
        Some(i) if d.patterns.len() > 1 => &canonical[..i],
        _ => &canonical[..canonical.find(&first_clause).unwrap()],
    };
    let mut out = String::new();
    let mut depth = 0;
    for ch in head.chars() {
        match ch {
            '[' => depth += 1,
            ']' => depth -= 1,
            _ if depth == 0 => out.push(ch),
            _ => {}
        }
    }
    out.to_lowercase()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn render_then_parse_is_identity(d in strategies::descriptor(tax())) {
        prop_assert!(descriptor::validate(&d, tax()).iter().all(|x| !x.is_error()));
        let text = descriptor::render_canonical(&d, tax()).unwrap();
        prop_assert_eq!(descriptor::parse_descriptor(&text, tax()).unwrap(), d);
    }

    #[test]
    fn spellings_parse_to_the_same_descriptor((d, text) in strategies::spelled_descriptor(tax())) {
        let parsed = descriptor::parse_descriptor(&text, tax());
        prop_assert!(parsed.is_ok(), "{text}: {:?}", parsed.err());
        prop_assert_eq!(parsed.unwrap(), d.clone());
        let once = descriptor::normalize(&text, tax()).unwrap();
        prop_assert_eq!(descriptor::normalize(&once, tax()).unwrap(), once.clone());
        prop_assert_eq!(once, descriptor::render_canonical(&d, tax()).unwrap());
    }

    #[test]
    fn defaults_are_never_rendered(d in strategies::descriptor(tax())) {
        let text = descriptor::render_canonical(&d, tax()).unwrap();
        let words = attribute_words(&text, &d);
        for token in DEFAULT_TOKENS {
            prop_assert!(!words.split_whitespace().any(|w| w == *token), "{token} in {text}");
        }
    }

    #[test]
    fn labels_are_consecutive((_, text) in strategies::spelled_descriptor(tax())) {
        let d = descriptor::parse_descriptor(&text, tax()).unwrap();
        if d.patterns.len() > 1 {
            for (i, clause) in d.patterns.iter().enumerate() {
                prop_assert_eq!(clause.label, label_for(i));
            }
        } else {
            prop_assert_eq!(d.patterns[0].label, None);
        }
    }

    #[test]
    fn diff_is_empty_iff_canonical_forms_match(a in strategies::descriptor(tax()), b in strategies::descriptor(tax())) {
        let same = descriptor::render_canonical(&a, tax()).unwrap() == descriptor::render_canonical(&b, tax()).unwrap();
        prop_assert_eq!(descriptor::diff(&a, &b).is_empty(), same);
        prop_assert!(descriptor::diff(&a, &a).is_empty());
    }

    #[test]
    fn derived_representation_only_changes_kind(d in strategies::descriptor(tax())) {
        let r = descriptor::derive_representation(&d, tax()).unwrap();
        prop_assert!(r.codes().all(|c| c.kind() == PatternKind::Representation));
        prop_assert_eq!(r.locality, d.locality);
        prop_assert_eq!(r.directness, d.directness);
        prop_assert_eq!(r.activeness, d.activeness);
        prop_assert_eq!(r.level, d.level);
        prop_assert_eq!(r.temporality, d.temporality);
        prop_assert_eq!(&r.star_properties, &d.star_properties);
        for (e, rc) in d.patterns.iter().zip(&r.patterns) {
            prop_assert_eq!(e.label, rc.label);
            prop_assert_eq!(e.code.path(), rc.code.path());
            prop_assert_eq!(e.code.media(), rc.code.media());
        }
    }

    #[test]
    fn code_text_round_trips(code in any_code()) {
        let text = code.to_string();
        prop_assert_eq!(text.parse::<PatternCode>().unwrap(), code.clone());
        prop_assert_eq!(text.to_lowercase().trim_end_matches('.').parse::<PatternCode>().unwrap(), code.clone());
        let derived = code.derive_representation();
        if code.is_embedding() {
            let derived = derived.unwrap();
            prop_assert_eq!(derived.path(), code.path());
            prop_assert_eq!(derived.media(), code.media());
        } else {
            prop_assert!(derived.is_err());
        }
    }

    #[test]
    fn udm_json_round_trips(doc in strategies::udm_document(tax())) {
        prop_assert_eq!(udm::deserialize_udm(&udm::serialize_udm(&doc)).unwrap(), doc);
    }

    #[test]
    fn generated_documents_validate_and_resolve(doc in strategies::udm_document(tax())) {
        let diagnostics = udm::validate_udm(&doc, tax());
        prop_assert!(diagnostics.iter().all(|d| !d.is_error()), "{diagnostics:?}");
        let resolved = udm::resolve_representation(&doc, tax()).unwrap();
        prop_assert_eq!(resolved.len(), match &doc.representation_patterns {
            RepresentationPatterns::Explicit(list) => list.len(),
            RepresentationPatterns::VariantOfEmbedding => doc.embedding_patterns.len(),
        });
        if doc.representation_patterns == RepresentationPatterns::VariantOfEmbedding {
            for (e, r) in doc.embedding_patterns.iter().zip(&resolved) {
                let e = descriptor::parse_descriptor(e, tax()).unwrap();
                let r = descriptor::parse_descriptor(r, tax()).unwrap();
                prop_assert!(r.codes().all(|c| c.kind() == PatternKind::Representation));
                prop_assert_eq!(attributes(&r), attributes(&e));
            }
        }
    }

    #[test]
    fn signature_ignores_embedding_order(mut doc in strategies::udm_document(tax())) {
        let before = udm::signature(&doc, tax()).unwrap();
        doc.embedding_patterns.reverse();
        prop_assert_eq!(udm::signature(&doc, tax()).unwrap(), before);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn catalog_persistence_round_trips(docs in proptest::collection::vec(strategies::udm_document(tax()), 0..8), drop in any::<usize>()) {
        let tax = Arc::new(tax().clone());
        let mut catalog = Catalog::new(tax.clone());
        for doc in docs {
            catalog.add(doc).unwrap();
        }
        let dir = tempfile::tempdir().unwrap();
        catalog.persist(dir.path()).unwrap();
        if !catalog.is_empty() {
            let id = catalog.list_entries()[drop % catalog.len()].id.clone();
            catalog.remove(&id).unwrap();
            catalog.persist(dir.path()).unwrap();
        }
        let reopened = Catalog::open(dir.path(), tax.clone()).unwrap();
        prop_assert_eq!(&reopened, &catalog);
        for entry in reopened.list_entries() {
            prop_assert_eq!(&udm::signature(&entry.document, &tax).unwrap(), &entry.signature);
        }
    }

    #[test]
    fn prefix_queries_are_monotone(docs in proptest::collection::vec(strategies::udm_document(tax()), 1..10)) {
        let mut catalog = Catalog::new(Arc::new(tax().clone()));
        for doc in docs {
            catalog.add(doc).unwrap();
        }
        let ids = |p: &str| -> Vec<String> {
            catalog.find_by_prefix(&p.parse().unwrap()).into_iter().map(|e| e.id.clone()).collect()
        };
        for chain in [["E1", "E1.3", "E1.3n1"], ["E1", "E1.1", "E1.1f1"], ["E2", "E2.1", "E2.1t1"]] {
            let (wide, mid, narrow) = (ids(chain[0]), ids(chain[1]), ids(chain[2]));
            prop_assert!(mid.iter().all(|id| wide.contains(id)));
            prop_assert!(narrow.iter().all(|id| mid.contains(id)));
        }
        let groups = catalog.find_duplicates();
        prop_assert!(groups.iter().all(|g| g.len() >= 2));
    }
}
