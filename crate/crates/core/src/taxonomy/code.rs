//! Pattern codes such as `E1.3n1.` and their hierarchy relation.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error("malformed pattern code {input:?}: {reason}")]
    MalformedCode { input: String, reason: &'static str },
    #[error("{0} is already a representation pattern")]
    NotAnEmbeddingCode(PatternCode),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternKind {
    Embedding,
    Representation,
}

impl PatternKind {
    pub fn letter(self) -> char {
        match self {
            PatternKind::Embedding => 'E',
            PatternKind::Representation => 'R',
        }
    }
}

/// Domain suffix of a media-specific pattern: the domain letter (`n`, `t`,
/// `d`, `c`, `f`, ...) and an opaque variant index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Media {
    domain: char,
    variant: u32,
}

impl Media {
    pub fn new(domain: char, variant: u32) -> Result<Self, CodeError> {
        if !domain.is_ascii_alphabetic() {
            return Err(CodeError::MalformedCode {
                input: format!("{domain}{variant}"),
                reason: "media domain must be an ASCII letter",
            });
        }
        if variant == 0 {
            return Err(CodeError::MalformedCode {
                input: format!("{domain}{variant}"),
                reason: "media variant index must be at least 1",
            });
        }
        Ok(Media {
            domain: domain.to_ascii_lowercase(),
            variant,
        })
    }

    pub fn domain(&self) -> char {
        self.domain
    }

    pub fn variant(&self) -> u32 {
        self.variant
    }
}

/// A structured hiding-pattern identifier.
///
/// The canonical text form is the kind letter, the dot-joined path, the
/// optional media suffix and a trailing period: `E1.3n1.`, `R2.2n1.`, `E1.`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PatternCode {
    kind: PatternKind,
    path: Vec<u32>,
    media: Option<Media>,
}

impl PatternCode {
    pub fn new(kind: PatternKind, path: Vec<u32>, media: Option<Media>) -> Result<Self, CodeError> {
        if path.is_empty() {
            return Err(CodeError::MalformedCode {
                input: String::new(),
                reason: "pattern path is empty",
            });
        }
        if path.contains(&0) {
            return Err(CodeError::MalformedCode {
                input: path
                    .iter()
                    .map(u32::to_string)
                    .collect::<Vec<_>>()
                    .join("."),
                reason: "pattern path elements must be at least 1",
            });
        }
        Ok(PatternCode { kind, path, media })
    }

    /// Parses a code token. The trailing period is optional, letters are
    /// case-insensitive and a media letter without an index means index 1.
    pub fn parse(text: &str) -> Result<Self, CodeError> {
        let input = text.trim();
        let malformed = |reason| CodeError::MalformedCode {
            input: input.to_string(),
            reason,
        };
        let body = input.strip_suffix('.').unwrap_or(input);
        let mut chars = body.char_indices().peekable();

        let kind = match chars.next() {
            Some((_, 'E' | 'e')) => PatternKind::Embedding,
            Some((_, 'R' | 'r')) => PatternKind::Representation,
            Some(_) => return Err(malformed("expected kind letter E or R")),
            None => return Err(malformed("empty code")),
        };

        let mut path = Vec::new();
        loop {
            let segment = take_digits(body, &mut chars);
            if segment.is_empty() {
                return Err(malformed("empty path segment"));
            }
            path.push(parse_number(segment).ok_or_else(|| malformed("path segment out of range"))?);
            match chars.peek() {
                Some((_, '.')) => {
                    chars.next();
                }
                _ => break,
            }
        }

        let media = match chars.next() {
            None => None,
            Some((_, letter)) if letter.is_ascii_alphabetic() => {
                let digits = take_digits(body, &mut chars);
                let variant = if digits.is_empty() {
                    1
                } else {
                    parse_number(digits).ok_or_else(|| malformed("media variant out of range"))?
                };
                Some(
                    Media::new(letter, variant)
                        .map_err(|_| malformed("media variant index must be at least 1"))?,
                )
            }
            Some(_) => return Err(malformed("unexpected character after path")),
        };
        if chars.next().is_some() {
            return Err(malformed("trailing characters after media suffix"));
        }

        PatternCode::new(kind, path, media)
            .map_err(|_| malformed("pattern path elements must be at least 1"))
    }

    pub fn kind(&self) -> PatternKind {
        self.kind
    }

    pub fn path(&self) -> &[u32] {
        &self.path
    }

    pub fn media(&self) -> Option<Media> {
        self.media
    }

    pub fn is_embedding(&self) -> bool {
        self.kind == PatternKind::Embedding
    }

    /// Mirror an embedding code into its representation counterpart.
    pub fn derive_representation(&self) -> Result<PatternCode, CodeError> {
        match self.kind {
            PatternKind::Embedding => Ok(PatternCode {
                kind: PatternKind::Representation,
                ..self.clone()
            }),
            PatternKind::Representation => Err(CodeError::NotAnEmbeddingCode(self.clone())),
        }
    }

    /// Hierarchical prefix test (reflexive). `E1` covers `E1.3` and `E1.3n1`;
    /// `E1n1` covers `E1.1n1` but not `E1.1f1`; `E1.3` covers `E1.3c1`.
    pub fn is_prefix_of(&self, other: &PatternCode) -> bool {
        self.kind == other.kind
            && other.path.starts_with(&self.path)
            && (self.media.is_none() || self.media == other.media)
    }

    pub fn is_strict_prefix_of(&self, other: &PatternCode) -> bool {
        self != other && self.is_prefix_of(other)
    }
}

fn take_digits<'a>(
    body: &'a str,
    chars: &mut std::iter::Peekable<std::str::CharIndices<'a>>,
) -> &'a str {
    let start = match chars.peek() {
        Some(&(i, _)) => i,
        None => return "",
    };
    let mut end = start;
    while let Some(&(i, c)) = chars.peek() {
        if !c.is_ascii_digit() {
            break;
        }
        end = i + c.len_utf8();
        chars.next();
    }
    &body[start..end]
}

fn parse_number(digits: &str) -> Option<u32> {
    digits.parse().ok()
}

impl fmt::Display for PatternCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.letter())?;
        for (i, segment) in self.path.iter().enumerate() {
            if i > 0 {
                f.write_str(".")?;
            }
            write!(f, "{segment}")?;
        }
        if let Some(media) = self.media {
            write!(f, "{}{}", media.domain, media.variant)?;
        }
        f.write_str(".")
    }
}

impl FromStr for PatternCode {
    type Err = CodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PatternCode::parse(s)
    }
}

/// Orders codes by their canonical text.
impl Ord for PatternCode {
    fn cmp(&self, other: &Self) -> Ordering {
        self.to_string().cmp(&other.to_string())
    }
}

impl PartialOrd for PatternCode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for PatternCode {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PatternCode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        PatternCode::parse(&text).map_err(serde::de::Error::custom)
    }
}
