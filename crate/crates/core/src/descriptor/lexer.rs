use crate::diagnostic::{Diagnostic, DiagnosticCode, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum TokenKind<'a> {
    /// A run of characters other than whitespace, parentheses, brackets and commas.
    Word(&'a str),
    LParen,
    RParen,
    Comma,
    /// Contents of a `[...]` star property, untrimmed.
    Star(&'a str),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token<'a> {
    pub kind: TokenKind<'a>,
    pub span: Span,
}

fn is_delimiter(c: char) -> bool {
    c.is_whitespace() || matches!(c, '(' | ')' | '[' | ']' | ',')
}

pub(crate) fn tokenize(source: &str) -> Result<Vec<Token<'_>>, Diagnostic> {
    let mut tokens = Vec::new();
    let mut chars = source.char_indices().peekable();
    while let Some((start, c)) = chars.next() {
        let single = |kind| Token {
            kind,
            span: Span::new(start, start + 1),
        };
        match c {
            c if c.is_whitespace() => {}
            '(' => tokens.push(single(TokenKind::LParen)),
            ')' => tokens.push(single(TokenKind::RParen)),
            ',' => tokens.push(single(TokenKind::Comma)),
            ']' => {
                return Err(
                    Diagnostic::error(DiagnosticCode::SyntaxError, "unmatched ']'")
                        .with_span(Span::new(start, start + 1)),
                )
            }
            '[' => {
                let body_start = start + 1;
                let mut end = None;
                for (i, c) in chars.by_ref() {
                    match c {
                        ']' => {
                            end = Some(i);
                            break;
                        }
                        '[' => {
                            return Err(Diagnostic::error(
                                DiagnosticCode::SyntaxError,
                                "star properties cannot be nested",
                            )
                            .with_span(Span::new(i, i + 1)))
                        }
                        _ => {}
                    }
                }
                let Some(end) = end else {
                    return Err(
                        Diagnostic::error(DiagnosticCode::SyntaxError, "unterminated '['")
                            .with_span(Span::new(start, source.len())),
                    );
                };
                tokens.push(Token {
                    kind: TokenKind::Star(&source[body_start..end]),
                    span: Span::new(start, end + 1),
                });
            }
            _ => {
                let mut end = start + c.len_utf8();
                while let Some(&(i, c)) = chars.peek() {
                    if is_delimiter(c) {
                        break;
                    }
                    end = i + c.len_utf8();
                    chars.next();
                }
                tokens.push(Token {
                    kind: TokenKind::Word(&source[start..end]),
                    span: Span::new(start, end),
                });
            }
        }
    }
    Ok(tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(s: &str) -> Vec<TokenKind<'_>> {
        tokenize(s).unwrap().into_iter().map(|t| t.kind).collect()
    }

    #[test]
    fn splits_words_and_punctuation() {
        assert_eq!(
            kinds("Indirect (Dead Drop) E1.1n1. Network State/Value"),
            vec![
                TokenKind::Word("Indirect"),
                TokenKind::LParen,
                TokenKind::Word("Dead"),
                TokenKind::Word("Drop"),
                TokenKind::RParen,
                TokenKind::Word("E1.1n1."),
                TokenKind::Word("Network"),
                TokenKind::Word("State/Value"),
            ]
        );
    }

    #[test]
    fn star_keeps_inner_text() {
        let toks = tokenize("[key-based symbol, embedding (x)] E1.").unwrap();
        assert_eq!(
            toks[0].kind,
            TokenKind::Star("key-based symbol, embedding (x)")
        );
        assert_eq!(toks[0].span, Span::new(0, 33));
        assert_eq!(toks[1].kind, TokenKind::Word("E1."));
    }

    #[test]
    fn bracket_errors() {
        assert!(tokenize("[open E1.").is_err());
        assert!(tokenize("close] E1.").is_err());
        assert!(tokenize("[a [b]] E1.").is_err());
    }

    #[test]
    fn spans_are_byte_offsets() {
        let toks = tokenize("ä (b)").unwrap();
        assert_eq!(toks[0].span, Span::new(0, 2));
        assert_eq!(toks[1].span, Span::new(3, 4));
    }
}
