//! Boolean attribute-policy expressions.
//!
//! Grammar (AND binds tighter than OR, keywords case-insensitive):
//!
//! ```text
//! expr   := term (OR term)*
//! term   := factor (AND factor)*
//! factor := ATTR | '(' expr ')'
//! ```
//!
//! Attributes are single name components drawn from `[A-Za-z0-9_-]`.
//! The canonical rendering uses uppercase gates and parenthesizes every
//! compound child, e.g. `(Soldier AND SquadA) OR General`.

use std::collections::BTreeSet;
use std::fmt;

use super::CryptoError;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PolicyExpr {
    Attr(String),
    And(Vec<PolicyExpr>),
    Or(Vec<PolicyExpr>),
}

impl PolicyExpr {
    pub fn parse(text: &str) -> Result<PolicyExpr, CryptoError> {
        let tokens = tokenize(text)?;
        let mut parser = Parser { tokens, pos: 0 };
        let expr = parser.expr()?;
        match parser.peek() {
            None => Ok(expr),
            Some(token) => Err(syntax(token.pos, "unexpected trailing input")),
        }
    }

    /// Canonical text form; `parse(canonical(p)) == p`.
    pub fn canonical(&self) -> String {
        fn child(expr: &PolicyExpr, out: &mut String) {
            match expr {
                PolicyExpr::Attr(a) => out.push_str(a),
                compound => {
                    out.push('(');
                    render(compound, out);
                    out.push(')');
                }
            }
        }
        fn render(expr: &PolicyExpr, out: &mut String) {
            match expr {
                PolicyExpr::Attr(a) => out.push_str(a),
                PolicyExpr::And(children) => {
                    for (i, c) in children.iter().enumerate() {
                        if i > 0 {
                            out.push_str(" AND ");
                        }
                        child(c, out);
                    }
                }
                PolicyExpr::Or(children) => {
                    for (i, c) in children.iter().enumerate() {
                        if i > 0 {
                            out.push_str(" OR ");
                        }
                        child(c, out);
                    }
                }
            }
        }
        let mut out = String::new();
        render(self, &mut out);
        out
    }

    /// All attribute leaves, left to right.
    pub fn leaves(&self) -> Vec<&str> {
        let mut out = Vec::new();
        fn walk<'a>(expr: &'a PolicyExpr, out: &mut Vec<&'a str>) {
            match expr {
                PolicyExpr::Attr(a) => out.push(a),
                PolicyExpr::And(cs) | PolicyExpr::Or(cs) => {
                    for c in cs {
                        walk(c, out);
                    }
                }
            }
        }
        walk(self, &mut out);
        out
    }
}

impl fmt::Display for PolicyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.canonical())
    }
}

/// True iff the attribute set satisfies the policy: leaves evaluate to
/// whether that attribute is present.
pub fn satisfies(attrs: &BTreeSet<String>, policy: &PolicyExpr) -> bool {
    match policy {
        PolicyExpr::Attr(a) => attrs.contains(a),
        PolicyExpr::And(children) => children.iter().all(|c| satisfies(attrs, c)),
        PolicyExpr::Or(children) => children.iter().any(|c| satisfies(attrs, c)),
    }
}

pub fn parse_policy(text: &str) -> Result<PolicyExpr, CryptoError> {
    PolicyExpr::parse(text)
}

fn syntax(pos: usize, msg: &str) -> CryptoError {
    CryptoError::PolicySyntax {
        pos,
        msg: msg.to_string(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum TokenKind {
    Attr(String),
    And,
    Or,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
struct Token {
    kind: TokenKind,
    pos: usize,
}

fn is_attr_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_' || b == b'-'
}

fn tokenize(text: &str) -> Result<Vec<Token>, CryptoError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b' ' | b'\t' | b'\r' | b'\n' => i += 1,
            b'(' => {
                tokens.push(Token { kind: TokenKind::LParen, pos: i });
                i += 1;
            }
            b')' => {
                tokens.push(Token { kind: TokenKind::RParen, pos: i });
                i += 1;
            }
            b if is_attr_byte(b) => {
                let start = i;
                while i < bytes.len() && is_attr_byte(bytes[i]) {
                    i += 1;
                }
                let word = &text[start..i];
                let kind = if word.eq_ignore_ascii_case("and") {
                    TokenKind::And
                } else if word.eq_ignore_ascii_case("or") {
                    TokenKind::Or
                } else {
                    TokenKind::Attr(word.to_string())
                };
                tokens.push(Token { kind, pos: start });
            }
            _ => return Err(syntax(i, "unexpected character")),
        }
    }
    if tokens.is_empty() {
        return Err(syntax(0, "empty policy"));
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn end_pos(&self) -> usize {
        self.tokens.last().map(|t| t.pos + 1).unwrap_or(0)
    }

    fn expr(&mut self) -> Result<PolicyExpr, CryptoError> {
        let mut terms = vec![self.term()?];
        while matches!(self.peek().map(|t| &t.kind), Some(TokenKind::Or)) {
            self.pos += 1;
            terms.push(self.term()?);
        }
        Ok(if terms.len() == 1 {
            terms.pop().unwrap()
        } else {
            PolicyExpr::Or(terms)
        })
    }

    fn term(&mut self) -> Result<PolicyExpr, CryptoError> {
        let mut factors = vec![self.factor()?];
        while matches!(self.peek().map(|t| &t.kind), Some(TokenKind::And)) {
            self.pos += 1;
            factors.push(self.factor()?);
        }
        Ok(if factors.len() == 1 {
            factors.pop().unwrap()
        } else {
            PolicyExpr::And(factors)
        })
    }

    fn factor(&mut self) -> Result<PolicyExpr, CryptoError> {
        let Some(token) = self.peek().cloned() else {
            return Err(syntax(self.end_pos(), "expected attribute or '('"));
        };
        match token.kind {
            TokenKind::Attr(name) => {
                self.pos += 1;
                Ok(PolicyExpr::Attr(name))
            }
            TokenKind::LParen => {
                self.pos += 1;
                let inner = self.expr()?;
                match self.peek().map(|t| t.kind.clone()) {
                    Some(TokenKind::RParen) => {
                        self.pos += 1;
                        Ok(inner)
                    }
                    _ => Err(syntax(token.pos, "unbalanced '('")),
                }
            }
            TokenKind::And | TokenKind::Or => {
                Err(syntax(token.pos, "reserved word in attribute position"))
            }
            TokenKind::RParen => Err(syntax(token.pos, "unexpected ')'")),
        }
    }
}
