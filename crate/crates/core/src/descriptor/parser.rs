//! Recursive-descent parser for descriptor strings.
//!
//! Components must appear in the fixed order locality, directness,
//! activeness, level, temporality, star properties, pattern clauses. Keywords
//! are matched case-insensitively with hyphens, underscores and spaces
//! treated alike.

use super::lexer::{tokenize, Token, TokenKind};
use super::model::{
    keyword_key, label_for, Activeness, Descriptor, Directness, DistributionPattern,
    IndirectPattern, LevelCharacteristic, Locality, PatternClause, ReferenceTemporality,
    StarProperty,
};
use super::validate::{check_name, check_star_text};
use crate::diagnostic::{Diagnostic, DiagnosticCode, Span};
use crate::taxonomy::{PatternCode, PatternKind, Taxonomy};

const ORDER_HINT: &str =
    "components follow the order locality, directness, activeness, level, temporality, star properties, pattern clauses";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Keyword {
    Distributed,
    Local,
    Direct,
    Indirect,
    Activeness(Activeness),
    Level(LevelCharacteristic),
    Temporality(ReferenceTemporality),
}

impl Keyword {
    fn from_key(key: &str) -> Option<Keyword> {
        match key {
            "distributed" => Some(Keyword::Distributed),
            "non distributed" | "nondistributed" | "local" => Some(Keyword::Local),
            "direct" => Some(Keyword::Direct),
            "indirect" => Some(Keyword::Indirect),
            _ => Activeness::from_key(key)
                .map(Keyword::Activeness)
                .or_else(|| LevelCharacteristic::from_key(key).map(Keyword::Level))
                .or_else(|| ReferenceTemporality::from_key(key).map(Keyword::Temporality)),
        }
    }

    fn slot(self) -> usize {
        match self {
            Keyword::Distributed | Keyword::Local => 0,
            Keyword::Direct | Keyword::Indirect => 1,
            Keyword::Activeness(_) => 2,
            Keyword::Level(_) => 3,
            Keyword::Temporality(_) => 4,
        }
    }
}

/// A parenthesized run of words, e.g. `(Dead Drop)`.
struct Group {
    key: String,
    span: Span,
    /// Index of the token after the closing parenthesis.
    next: usize,
}

struct Parser<'a, 't> {
    source: &'a str,
    tokens: Vec<Token<'a>>,
    pos: usize,
    taxonomy: &'t Taxonomy,
    warnings: Vec<Diagnostic>,
}

pub(crate) fn parse(
    source: &str,
    taxonomy: &Taxonomy,
) -> Result<(Descriptor, Vec<Diagnostic>), Diagnostic> {
    if source.trim().is_empty() {
        return Err(Diagnostic::error(
            DiagnosticCode::EmptyDescriptor,
            "descriptor is empty",
        ));
    }
    let tokens = tokenize(source)?;
    let mut parser = Parser {
        source,
        tokens,
        pos: 0,
        taxonomy,
        warnings: Vec::new(),
    };
    let descriptor = parser.descriptor()?;
    Ok((descriptor, parser.warnings))
}

fn syntax(message: impl Into<String>, span: Span) -> Diagnostic {
    Diagnostic::error(DiagnosticCode::SyntaxError, message).with_span(span)
}

fn looks_like_code(word: &str) -> bool {
    let mut chars = word.chars();
    matches!(chars.next(), Some('E' | 'e' | 'R' | 'r'))
        && matches!(chars.next(), Some(c) if c.is_ascii_digit() || c == '.')
}

impl<'a> Parser<'a, '_> {
    fn peek(&self) -> Option<&Token<'a>> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self, index: usize) -> Option<&TokenKind<'a>> {
        self.tokens.get(index).map(|t| &t.kind)
    }

    fn bump(&mut self) -> Option<Token<'a>> {
        let token = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        token
    }

    fn end_span(&self) -> Span {
        Span::new(self.source.len(), self.source.len())
    }

    fn is_label_at(&self, index: usize) -> bool {
        matches!(self.peek_kind(index), Some(TokenKind::LParen))
            && matches!(self.peek_kind(index + 1), Some(TokenKind::Word(w)) if w.len() == 1 && w.chars().all(|c| c.is_ascii_alphabetic()))
            && matches!(self.peek_kind(index + 2), Some(TokenKind::RParen))
    }

    fn is_word_at(&self, index: usize, expected: &str) -> bool {
        matches!(self.peek_kind(index), Some(TokenKind::Word(w)) if w.eq_ignore_ascii_case(expected))
    }

    /// A `( word word ... )` group starting at `index`, if there is one.
    fn group_at(&self, index: usize) -> Option<Group> {
        let open = self.tokens.get(index)?;
        if open.kind != TokenKind::LParen {
            return None;
        }
        let mut words = Vec::new();
        let mut i = index + 1;
        loop {
            let token = self.tokens.get(i)?;
            match token.kind {
                TokenKind::Word(w) => words.push(w),
                TokenKind::RParen if !words.is_empty() => {
                    return Some(Group {
                        key: keyword_key(&words.join(" ")),
                        span: open.span.join(token.span),
                        next: i + 1,
                    })
                }
                _ => return None,
            }
            i += 1;
        }
    }

    fn descriptor(&mut self) -> Result<Descriptor, Diagnostic> {
        let mut descriptor = Descriptor::with_patterns(Vec::new());
        let mut next_slot = 0;
        let mut level_span = None;
        let mut seen_star = false;

        loop {
            let Some(token) = self.peek() else {
                return Err(syntax("expected a pattern clause", self.end_span()));
            };
            match token.kind {
                TokenKind::Star(text) => {
                    let span = token.span;
                    self.bump();
                    check_star_text(text).map_err(|d| d.with_span(span))?;
                    descriptor
                        .star_properties
                        .push(StarProperty::new(text.trim()));
                    seen_star = true;
                    continue;
                }
                TokenKind::Word(w) if looks_like_code(w) => break,
                _ if self.is_label_at(self.pos) => break,
                _ => {}
            }

            let (keyword, span) = self.keyword()?;
            let slot = keyword.slot();
            if seen_star || slot < next_slot {
                return Err(syntax(
                    format!(
                        "'{}' is out of order: {ORDER_HINT}",
                        &self.source[span.start..span.end]
                    ),
                    span,
                ));
            }
            next_slot = slot + 1;

            match keyword {
                Keyword::Local => descriptor.locality = Locality::Local,
                Keyword::Distributed => {
                    let pattern = match self.group_at(self.pos) {
                        Some(group) if !self.is_label_at(self.pos) => {
                            match DistributionPattern::from_key(&group.key) {
                                Some(p) => {
                                    self.pos = group.next;
                                    Some(p)
                                }
                                None if Keyword::from_key(&group.key).is_none() => {
                                    return Err(syntax(
                                        format!("unknown distribution pattern '{}'", group.key),
                                        group.span,
                                    ))
                                }
                                None => None,
                            }
                        }
                        _ => None,
                    };
                    descriptor.locality = Locality::Distributed(pattern);
                }
                Keyword::Direct => descriptor.directness = Directness::Direct,
                Keyword::Indirect => {
                    let missing = || {
                        Diagnostic::error(
                            DiagnosticCode::MissingIndirectSubPattern,
                            "'indirect' must name its pattern in parentheses: redirector, broker, proxy or dead drop",
                        )
                        .with_span(span)
                    };
                    let group = match self.group_at(self.pos) {
                        Some(group) if !self.is_label_at(self.pos) => group,
                        _ => return Err(missing()),
                    };
                    match IndirectPattern::from_key(&group.key) {
                        Some(p) => {
                            self.pos = group.next;
                            descriptor.directness = Directness::Indirect(p);
                        }
                        None if Keyword::from_key(&group.key).is_some() => return Err(missing()),
                        None => {
                            return Err(syntax(
                                format!("unknown indirect pattern '{}'", group.key),
                                group.span,
                            ))
                        }
                    }
                }
                Keyword::Activeness(Activeness::Passive) => {
                    let refined = self
                        .group_at(self.pos)
                        .and_then(|g| Activeness::from_key(&g.key).map(|a| (a, g.next)))
                        .filter(|(a, _)| {
                            matches!(
                                a,
                                Activeness::SemiActive
                                    | Activeness::SemiPassive
                                    | Activeness::FullyPassive
                            )
                        });
                    descriptor.activeness = match refined {
                        Some((a, next)) => {
                            self.pos = next;
                            a
                        }
                        None => Activeness::Passive,
                    };
                }
                Keyword::Activeness(a) => descriptor.activeness = a,
                Keyword::Level(l) => {
                    descriptor.level = l;
                    level_span = Some(span);
                }
                Keyword::Temporality(t) => descriptor.temporality = t,
            }
        }

        descriptor.patterns = self.pattern_list()?;

        if let Some(token) = self.peek() {
            if token.kind == TokenKind::RParen && self.pos + 1 == self.tokens.len() {
                self.warnings.push(
                    Diagnostic::warning(
                        DiagnosticCode::UnbalancedParenthesis,
                        "ignored unbalanced ')' at end of descriptor",
                    )
                    .with_span(token.span),
                );
                self.bump();
            }
        }
        if let Some(token) = self.peek() {
            let span = token.span;
            let unlabeled_continuation = descriptor.patterns.len() == 1
                && descriptor.patterns[0].label.is_none()
                && (token.kind == TokenKind::Comma || self.is_word_at(self.pos, "and"));
            if unlabeled_continuation {
                return Err(Diagnostic::error(
                    DiagnosticCode::LabelError,
                    "multiple pattern clauses must be labeled (a), (b), ...",
                )
                .with_span(span));
            }
            return Err(syntax("unexpected input after the pattern clauses", span));
        }

        if descriptor.level == LevelCharacteristic::MultiLevel && descriptor.patterns.len() < 2 {
            return Err(Diagnostic::error(
                DiagnosticCode::MultiLevelArity,
                "a multi-level descriptor needs at least two pattern clauses, outermost layer first",
            )
            .with_span(level_span.unwrap_or_else(|| self.end_span())));
        }
        Ok(descriptor)
    }

    /// Reads one attribute keyword, either bare (longest multi-word match)
    /// or as a standalone parenthesized form such as `(Semi-active)`.
    fn keyword(&mut self) -> Result<(Keyword, Span), Diagnostic> {
        let token = self.peek().cloned().expect("caller checked for a token");
        match token.kind {
            TokenKind::LParen => {
                let Some(group) = self.group_at(self.pos) else {
                    return Err(syntax(
                        "expected an attribute keyword in parentheses",
                        token.span,
                    ));
                };
                let Some(keyword) = Keyword::from_key(&group.key) else {
                    return Err(syntax(
                        format!("unrecognized attribute '({})'", group.key),
                        group.span,
                    ));
                };
                self.pos = group.next;
                Ok((keyword, group.span))
            }
            TokenKind::Word(first) => {
                for len in (1..=3).rev() {
                    let words: Option<Vec<&str>> = (0..len)
                        .map(|i| match self.peek_kind(self.pos + i) {
                            Some(TokenKind::Word(w)) => Some(*w),
                            _ => None,
                        })
                        .collect();
                    let Some(words) = words else { continue };
                    if let Some(keyword) = Keyword::from_key(&keyword_key(&words.join(" "))) {
                        let span = token.span.join(self.tokens[self.pos + len - 1].span);
                        self.pos += len;
                        return Ok((keyword, span));
                    }
                }
                Err(syntax(format!("unrecognized token '{first}'"), token.span))
            }
            TokenKind::RParen => Err(syntax("unexpected ')'", token.span)),
            TokenKind::Comma => Err(syntax("unexpected ','", token.span)),
            TokenKind::Star(_) => unreachable!("star properties are handled by the caller"),
        }
    }

    fn pattern_list(&mut self) -> Result<Vec<PatternClause>, Diagnostic> {
        if !self.is_label_at(self.pos) {
            return Ok(vec![self.clause(None, false)?]);
        }

        let mut clauses = Vec::new();
        loop {
            let open = self.bump().expect("label checked");
            let letter = match self.bump().map(|t| t.kind) {
                Some(TokenKind::Word(w)) => w
                    .to_ascii_lowercase()
                    .chars()
                    .next()
                    .expect("label is one letter"),
                _ => unreachable!("label checked"),
            };
            let close = self.bump().expect("label checked");
            let label_span = open.span.join(close.span);
            if Some(letter) != label_for(clauses.len()) {
                let expected =
                    label_for(clauses.len()).map_or_else(|| "?".to_string(), |c| c.to_string());
                return Err(Diagnostic::error(
                    DiagnosticCode::LabelError,
                    format!("expected label ({expected}), found ({letter})"),
                )
                .with_span(label_span));
            }
            clauses.push(self.clause(Some(letter), true)?);

            match self.peek_kind(self.pos) {
                Some(TokenKind::Comma) => {
                    self.bump();
                    if self.is_word_at(self.pos, "and") {
                        self.bump();
                    }
                }
                Some(TokenKind::Word(w))
                    if w.eq_ignore_ascii_case("and") && self.is_label_at(self.pos + 1) =>
                {
                    self.bump();
                }
                _ => break,
            }
            if !self.is_label_at(self.pos) {
                let span = self.peek().map_or_else(|| self.end_span(), |t| t.span);
                return Err(Diagnostic::error(
                    DiagnosticCode::LabelError,
                    "every pattern clause in a multi-clause descriptor needs a label",
                )
                .with_span(span));
            }
        }

        if clauses.len() == 1 {
            return Err(Diagnostic::error(
                DiagnosticCode::LabelError,
                "a single pattern clause must not be labeled",
            )
            .with_span(
                self.tokens[0]
                    .span
                    .join(self.tokens[self.pos.saturating_sub(1)].span),
            ));
        }
        Ok(clauses)
    }

    fn clause(&mut self, label: Option<char>, labeled: bool) -> Result<PatternClause, Diagnostic> {
        let token = match self.bump() {
            Some(t) => t,
            None => return Err(syntax("expected a pattern code", self.end_span())),
        };
        let TokenKind::Word(word) = token.kind else {
            return Err(syntax("expected a pattern code", token.span));
        };
        if !looks_like_code(word) {
            return Err(syntax(
                format!("expected a pattern code, found '{word}'"),
                token.span,
            ));
        }
        let code = PatternCode::parse(word).map_err(|e| {
            Diagnostic::error(DiagnosticCode::MalformedCode, e.to_string()).with_span(token.span)
        })?;

        let mut name_span: Option<Span> = None;
        while let Some(TokenKind::Word(w)) = self.peek_kind(self.pos) {
            if labeled && w.eq_ignore_ascii_case("and") && self.is_label_at(self.pos + 1) {
                break;
            }
            let span = self.tokens[self.pos].span;
            name_span = Some(name_span.map_or(span, |s| s.join(span)));
            self.pos += 1;
        }

        let record = self.taxonomy.get(&code).ok_or_else(|| {
            Diagnostic::error(
                DiagnosticCode::UnknownPatternCode,
                format!("pattern {code} is not in the taxonomy"),
            )
            .with_span(token.span)
        })?;
        if let Some(span) = name_span {
            let written = &self.source[span.start..span.end];
            if let Some(warning) =
                check_name(self.taxonomy, &code, written).map_err(|d| d.with_span(span))?
            {
                self.warnings.push(warning.with_span(span));
            }
        }
        if code.kind() == PatternKind::Representation {
            self.warnings.push(
                Diagnostic::warning(
                    DiagnosticCode::RepresentationInEmbeddingSlot,
                    format!("{code} is a representation pattern; the pattern slot normally holds embedding patterns"),
                )
                .with_span(token.span),
            );
        }
        Ok(PatternClause {
            label,
            code,
            name: record.name.clone(),
        })
    }
}
