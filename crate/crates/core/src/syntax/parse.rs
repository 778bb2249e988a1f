use thiserror::Error;

use super::signature::{is_derived, is_reserved, Signature};
use super::term::{Node, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxError {
    #[error("at {pos}: expected {expected}, found {found}")]
    Unexpected {
        pos: usize,
        expected: &'static str,
        found: String,
    },
    #[error("at {pos}: `{name}` is a reserved or derived name")]
    Reserved { pos: usize, name: String },
    #[error("at {pos}: `^-` applies only to test terms")]
    ComplementOutsideTests { pos: usize },
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    One,
    Zero,
    Top,
    Semi,
    Plus,
    Amp,
    Star,
    Tilde,
    Compl,
    LParen,
    RParen,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::One => "`1`".into(),
        Tok::Zero => "`0`".into(),
        Tok::Top => "`T`".into(),
        Tok::Semi => "`;`".into(),
        Tok::Plus => "`+`".into(),
        Tok::Amp => "`&`".into(),
        Tok::Star => "`*`".into(),
        Tok::Tilde => "`~`".into(),
        Tok::Compl => "`^-`".into(),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::End => "end of input".into(),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            ';' => Tok::Semi,
            '+' => Tok::Plus,
            '&' => Tok::Amp,
            '*' => Tok::Star,
            '~' => Tok::Tilde,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '^' => {
                if bytes.get(i + 1) == Some(&b'-') {
                    i += 1;
                    Tok::Compl
                } else {
                    return Err(SyntaxError::Unexpected {
                        pos: i,
                        expected: "`^-`",
                        found: "`^`".into(),
                    });
                }
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let mut j = i;
                while j < bytes.len()
                    && ((bytes[j] as char).is_ascii_alphanumeric() || bytes[j] == b'_')
                {
                    j += 1;
                }
                let word = &text[i..j];
                i = j - 1;
                match word {
                    "0" => Tok::Zero,
                    "1" => Tok::One,
                    "T" => Tok::Top,
                    w if w.as_bytes()[0].is_ascii_digit() => {
                        return Err(SyntaxError::Unexpected {
                            pos: start,
                            expected: "a name or constant",
                            found: format!("`{w}`"),
                        })
                    }
                    w => Tok::Ident(w.to_string()),
                }
            }
            other => {
                return Err(SyntaxError::Unexpected {
                    pos: i,
                    expected: "a term",
                    found: format!("`{other}`"),
                })
            }
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    sig: &'a Signature,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }
    fn pos(&self) -> usize {
        self.toks[self.at].0
    }
    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn sum(&mut self) -> Result<Term, SyntaxError> {
        let mut t = self.meet()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            let r = self.meet()?;
            t = Term::sum(t, r);
        }
        Ok(t)
    }

    fn meet(&mut self) -> Result<Term, SyntaxError> {
        let mut t = self.seq()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let r = self.seq()?;
            t = Term::meet(t, r);
        }
        Ok(t)
    }

    fn starts_atom(t: &Tok) -> bool {
        matches!(
            t,
            Tok::Ident(_) | Tok::One | Tok::Zero | Tok::Top | Tok::LParen
        )
    }

    fn seq(&mut self) -> Result<Term, SyntaxError> {
        let mut t = self.postfix()?;
        loop {
            if *self.peek() == Tok::Semi {
                self.bump();
            } else if !Self::starts_atom(self.peek()) {
                break;
            }
            let r = self.postfix()?;
            t = Term::seq(t, r);
        }
        Ok(t)
    }

    fn postfix(&mut self) -> Result<Term, SyntaxError> {
        let mut t = self.atom()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    t = Term::star(t);
                }
                Tok::Tilde => {
                    self.bump();
                    t = Term::conv(t);
                }
                Tok::Compl => {
                    let pos = self.pos();
                    self.bump();
                    if !is_test_term(t, self.sig) {
                        return Err(SyntaxError::ComplementOutsideTests { pos });
                    }
                    t = Term::compl(t);
                }
                _ => break,
            }
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, SyntaxError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Ident(name) => {
                if !self.sig.allow_internal && (is_reserved(&name) || is_derived(&name)) {
                    return Err(SyntaxError::Reserved { pos, name });
                }
                Ok(Term::var(&name))
            }
            Tok::One => Ok(Term::one()),
            Tok::Zero => Ok(Term::zero()),
            Tok::Top => Ok(Term::top()),
            Tok::LParen => {
                let t = self.sum()?;
                let pos = self.pos();
                match self.bump() {
                    Tok::RParen => Ok(t),
                    other => Err(SyntaxError::Unexpected {
                        pos,
                        expected: "`)`",
                        found: describe(&other),
                    }),
                }
            }
            other => Err(SyntaxError::Unexpected {
                pos,
                expected: "a term",
                found: describe(&other),
            }),
        }
    }
}

/// Membership in the test sub-grammar `p ::= b | 1 | 0 | p;p | p+p | p^-`.
pub fn is_test_term(t: Term, sig: &Signature) -> bool {
    match t.node() {
        Node::Var(n) => sig.is_test(n.as_str()),
        Node::One | Node::Zero => true,
        Node::Seq(a, b) | Node::Sum(a, b) => is_test_term(a, sig) && is_test_term(b, sig),
        Node::Compl(a) => is_test_term(a, sig),
        _ => false,
    }
}

/// Parses the ASCII surface syntax. Precedence from tightest: postfix
/// `*`, `~`, `^-`; then `;` (or juxtaposition); then `&`; then `+`. All binary
/// operators associate to the left.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, SyntaxError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, sig };
    let t = p.sum()?;
    let pos = p.pos();
    match p.peek() {
        Tok::End => Ok(t),
        other => Err(SyntaxError::Unexpected {
            pos,
            expected: "end of input",
            found: describe(other),
        }),
    }
}

/// Parses with an empty signature (no tests), accepting internal names.
pub fn parse(text: &str) -> Result<Term, SyntaxError> {
    parse_term(text, &Signature::internal())
}
