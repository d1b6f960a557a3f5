//! Lexer for the protocol spec language.
//!
//! Handles backslash-word operators (`\in`, `\cup`, `\A`, ...), `\*` line
//! comments, primed identifiers (`x'`), and tracks 1-based line/column
//! positions for every token.

use crate::diag::{Diagnostic, Span};

use super::token::{SpannedTok, Tok};

pub struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: u32,
    col: u32,
}

impl<'a> Lexer<'a> {
    pub fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn peek2(&self) -> Option<u8> {
        self.src.get(self.pos + 1).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(b)
    }

    fn span(&self) -> Span {
        Span::new(self.line, self.col)
    }

    fn skip_ws_and_comments(&mut self) {
        loop {
            match self.peek() {
                Some(b' ') | Some(b'\t') | Some(b'\r') | Some(b'\n') => {
                    self.bump();
                }
                // `\*` starts a line comment.
                Some(b'\\') if self.peek2() == Some(b'*') => {
                    while let Some(b) = self.peek() {
                        if b == b'\n' {
                            break;
                        }
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    fn ident_or_keyword(&mut self, span: Span) -> SpannedTok {
        let start = self.pos;
        while let Some(b) = self.peek() {
            if b.is_ascii_alphanumeric() || b == b'_' {
                self.bump();
            } else {
                break;
            }
        }
        let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string();
        let tok = match word.as_str() {
            "SORT" => Tok::Sort,
            "CONST" => Tok::Const,
            "VAR" => Tok::Var,
            "INIT" => Tok::Init,
            "ACTION" => Tok::Action,
            "SAFETY" => Tok::Safety,
            "REQUIRE" => Tok::Require,
            "UNCHANGED" => Tok::Unchanged,
            "SET" => Tok::SetKw,
            "MAP" => Tok::MapKw,
            "BOOL" => Tok::BoolKw,
            "TRUE" => Tok::TrueKw,
            "FALSE" => Tok::FalseKw,
            "EXCEPT" => Tok::Except,
            _ => {
                // Primed identifier: `name'`.
                if self.peek() == Some(b'\'') {
                    self.bump();
                    return SpannedTok { tok: Tok::PrimedIdent(word), span };
                }
                Tok::Ident(word)
            }
        };
        SpannedTok { tok, span }
    }

    /// Lex a backslash form: operator word, quantifier, or bare set-difference.
    fn backslash(&mut self, span: Span) -> Result<SpannedTok, Diagnostic> {
        self.bump(); // consume '\'
        // Quantifiers are single capital letters.
        match self.peek() {
            Some(b'A') if !is_ident_cont(self.peek2()) => {
                self.bump();
                return Ok(SpannedTok { tok: Tok::Forall, span });
            }
            Some(b'E') if !is_ident_cont(self.peek2()) => {
                self.bump();
                return Ok(SpannedTok { tok: Tok::Exists, span });
            }
            _ => {}
        }
        let start = self.pos;
        while let Some(b) = self.peek() {
            if b.is_ascii_alphabetic() {
                self.bump();
            } else {
                break;
            }
        }
        let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let tok = match word {
            "" => Tok::SetMinus,
            "in" => Tok::In,
            "notin" => Tok::NotIn,
            "subseteq" => Tok::Subseteq,
            "cup" => Tok::Union,
            "cap" => Tok::Inter,
            other => {
                return Err(Diagnostic::syntax(span, format!("unknown operator '\\{other}'")));
            }
        };
        Ok(SpannedTok { tok, span })
    }

    pub fn next_token(&mut self) -> Result<SpannedTok, Diagnostic> {
        self.skip_ws_and_comments();
        let span = self.span();
        let Some(b) = self.peek() else {
            return Ok(SpannedTok { tok: Tok::Eof, span });
        };
        match b {
            b'(' => {
                self.bump();
                Ok(SpannedTok { tok: Tok::LParen, span })
            }
            b')' => {
                self.bump();
                Ok(SpannedTok { tok: Tok::RParen, span })
            }
            b'{' => {
                self.bump();
                Ok(SpannedTok { tok: Tok::LBrace, span })
            }
            b'}' => {
                self.bump();
                Ok(SpannedTok { tok: Tok::RBrace, span })
            }
            b'[' => {
                self.bump();
                Ok(SpannedTok { tok: Tok::LBracket, span })
            }
            b']' => {
                self.bump();
                Ok(SpannedTok { tok: Tok::RBracket, span })
            }
            b',' => {
                self.bump();
                Ok(SpannedTok { tok: Tok::Comma, span })
            }
            b':' => {
                self.bump();
                Ok(SpannedTok { tok: Tok::Colon, span })
            }
            b';' => {
                self.bump();
                Ok(SpannedTok { tok: Tok::Semi, span })
            }
            b'!' => {
                self.bump();
                Ok(SpannedTok { tok: Tok::Bang, span })
            }
            b'~' => {
                self.bump();
                Ok(SpannedTok { tok: Tok::Not, span })
            }
            b'#' => {
                self.bump();
                Ok(SpannedTok { tok: Tok::Neq, span })
            }
            b'/' => {
                self.bump();
                if self.peek() == Some(b'\\') {
                    self.bump();
                    Ok(SpannedTok { tok: Tok::And, span })
                } else {
                    Err(Diagnostic::syntax(span, "expected '\\' after '/'"))
                }
            }
            b'\\' => {
                if self.peek2() == Some(b'/') {
                    self.bump();
                    self.bump();
                    Ok(SpannedTok { tok: Tok::Or, span })
                } else {
                    self.backslash(span)
                }
            }
            b'=' => {
                self.bump();
                if self.peek() == Some(b'>') {
                    self.bump();
                    Ok(SpannedTok { tok: Tok::Implies, span })
                } else {
                    Ok(SpannedTok { tok: Tok::Eq, span })
                }
            }
            b'<' => {
                self.bump();
                if self.peek() == Some(b'=') && self.peek2() == Some(b'>') {
                    self.bump();
                    self.bump();
                    Ok(SpannedTok { tok: Tok::Iff, span })
                } else {
                    Err(Diagnostic::syntax(span, "expected '<=>'"))
                }
            }
            b'-' => {
                self.bump();
                if self.peek() == Some(b'>') {
                    self.bump();
                    Ok(SpannedTok { tok: Tok::Arrow, span })
                } else {
                    Err(Diagnostic::syntax(span, "expected '->'"))
                }
            }
            b'\'' => {
                self.bump();
                Err(Diagnostic::syntax(span, "stray prime: a prime must directly follow an identifier"))
            }
            c if c.is_ascii_alphabetic() || c == b'_' => Ok(self.ident_or_keyword(span)),
            c => {
                self.bump();
                Err(Diagnostic::syntax(
                    span,
                    format!("unexpected character '{}' (0x{c:02x})", char::from(c)),
                ))
            }
        }
    }

    /// Lex the whole input into a token vector ending with `Eof`.
    pub fn tokenize(src: &'a str) -> Result<Vec<SpannedTok>, Diagnostic> {
        let mut lx = Lexer::new(src);
        let mut out = Vec::new();
        loop {
            let t = lx.next_token()?;
            let done = t.tok == Tok::Eof;
            out.push(t);
            if done {
                return Ok(out);
            }
        }
    }
}

fn is_ident_cont(b: Option<u8>) -> bool {
    matches!(b, Some(c) if c.is_ascii_alphanumeric() || c == b'_')
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toks(src: &str) -> Vec<Tok> {
        Lexer::tokenize(src).unwrap().into_iter().map(|s| s.tok).collect()
    }

    #[test]
    fn lexes_operators_and_keywords() {
        assert_eq!(
            toks(r"x /\ y \/ ~z => w <=> v"),
            vec![
                Tok::Ident("x".into()),
                Tok::And,
                Tok::Ident("y".into()),
                Tok::Or,
                Tok::Not,
                Tok::Ident("z".into()),
                Tok::Implies,
                Tok::Ident("w".into()),
                Tok::Iff,
                Tok::Ident("v".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn lexes_set_forms() {
        assert_eq!(
            toks(r"a \in S \cup T \cap U \ V \subseteq W"),
            vec![
                Tok::Ident("a".into()),
                Tok::In,
                Tok::Ident("S".into()),
                Tok::Union,
                Tok::Ident("T".into()),
                Tok::Inter,
                Tok::Ident("U".into()),
                Tok::SetMinus,
                Tok::Ident("V".into()),
                Tok::Subseteq,
                Tok::Ident("W".into()),
                Tok::Eof
            ]
        );
    }

    #[test]
    fn lexes_quantifiers_and_primes() {
        assert_eq!(
            toks(r"\A n : x' = y"),
            vec![
                Tok::Forall,
                Tok::Ident("n".into()),
                Tok::Colon,
                Tok::PrimedIdent("x".into()),
                Tok::Eq,
                Tok::Ident("y".into()),
                Tok::Eof
            ]
        );
        // \Abc is not a quantifier; it is an unknown operator.
        assert!(Lexer::tokenize(r"\Abc").is_err());
    }

    #[test]
    fn skips_comments_and_tracks_position() {
        let ts = Lexer::tokenize("x \\* trailing words /\\ ignored\ny").unwrap();
        assert_eq!(ts[0].tok, Tok::Ident("x".into()));
        assert_eq!(ts[1].tok, Tok::Ident("y".into()));
        assert_eq!(ts[1].span, Span::new(2, 1));
    }

    #[test]
    fn rejects_stray_prime_and_garbage() {
        assert!(Lexer::tokenize("' x").is_err());
        assert!(Lexer::tokenize("x @ y").is_err());
        assert!(Lexer::tokenize("x / y").is_err());
    }
}
