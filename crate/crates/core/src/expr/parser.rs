use std::fmt;

use thiserror::Error;

use super::lexer::{tokenize, Token, TokenKind};
use super::{BinaryOp, Expression, Statement};

/// Lexical or grammatical error with its location in the source.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    /// Byte offset into the source.
    pub offset: usize,
    /// 1-based line.
    pub line: usize,
    /// 1-based column, in characters.
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(source: &str, offset: usize, message: impl Into<String>) -> Self {
        let before = &source[..offset.min(source.len())];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        ParseError {
            offset,
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

struct Parser<'a> {
    source: &'a str,
    tokens: Vec<Token>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(source: &'a str) -> Result<Self, ParseError> {
        Ok(Parser {
            source,
            tokens: tokenize(source)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &TokenKind {
        &self.tokens[self.pos].kind
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].offset
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].clone();
        if tok.kind != TokenKind::Eof {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.source, self.offset(), message)
    }

    fn expect(&mut self, kind: TokenKind) -> Result<Token, ParseError> {
        if *self.peek() == kind {
            Ok(self.bump())
        } else {
            Err(self.error(format!(
                "expected {}, found {}",
                kind.describe(),
                self.peek().describe()
            )))
        }
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        if *self.peek() == TokenKind::Eof {
            return Err(self.error("empty statement"));
        }
        let left = self.expr()?;
        match self.peek() {
            TokenKind::Equals => {
                self.bump();
            }
            TokenKind::Eof => return Err(self.error("missing relation: expected `=`")),
            other => {
                return Err(self.error(format!("expected `=`, found {}", other.describe())));
            }
        }
        let right = self.expr()?;
        match self.peek() {
            TokenKind::Eof => {}
            TokenKind::Equals => return Err(self.error("statement has more than one relation")),
            other => {
                return Err(self.error(format!("unexpected {} after statement", other.describe())));
            }
        }
        Ok(Statement {
            left,
            relation: super::Relation::Equals,
            right,
            source: self.source.to_string(),
        })
    }

    // expr := term { ("+" | "-") term }
    fn expr(&mut self) -> Result<Expression, ParseError> {
        let mut left = self.term()?;
        loop {
            let op = match self.peek() {
                TokenKind::Plus => BinaryOp::Add,
                TokenKind::Minus => BinaryOp::Sub,
                _ => return Ok(left),
            };
            self.bump();
            let right = self.term()?;
            left = Expression::binary(op, left, right);
        }
    }

    // term := unary { ("*" | "/") unary }
    fn term(&mut self) -> Result<Expression, ParseError> {
        let mut left = self.unary()?;
        loop {
            let op = match self.peek() {
                TokenKind::Star => BinaryOp::Mul,
                TokenKind::Slash => BinaryOp::Div,
                _ => return Ok(left),
            };
            self.bump();
            let right = self.unary()?;
            left = Expression::binary(op, left, right);
        }
    }

    // unary := "-" unary | power
    fn unary(&mut self) -> Result<Expression, ParseError> {
        if *self.peek() == TokenKind::Minus {
            self.bump();
            Ok(Expression::negate(self.unary()?))
        } else {
            self.power()
        }
    }

    // power := atom [ "^" unary ]
    fn power(&mut self) -> Result<Expression, ParseError> {
        let base = self.atom()?;
        if *self.peek() == TokenKind::Caret {
            self.bump();
            let exponent = self.unary()?;
            Ok(Expression::binary(BinaryOp::Pow, base, exponent))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expression, ParseError> {
        match self.peek().clone() {
            TokenKind::Number(value) => {
                self.bump();
                Ok(Expression::Number(value))
            }
            TokenKind::Ident(name) => {
                self.bump();
                if *self.peek() != TokenKind::LParen {
                    return Ok(Expression::Symbol(name));
                }
                let open = self.bump();
                let mut args = vec![self.expr()?];
                while *self.peek() == TokenKind::Comma {
                    self.bump();
                    args.push(self.expr()?);
                }
                if *self.peek() != TokenKind::RParen {
                    return Err(self.unclosed(open.offset));
                }
                self.bump();
                Ok(Expression::Apply {
                    function: name,
                    args,
                })
            }
            TokenKind::LParen => {
                let open = self.bump();
                let inner = self.expr()?;
                if *self.peek() != TokenKind::RParen {
                    return Err(self.unclosed(open.offset));
                }
                self.bump();
                Ok(inner)
            }
            TokenKind::RParen => Err(self.error("unbalanced parentheses: unexpected `)`")),
            other => Err(self.error(format!("expected operand, found {}", other.describe()))),
        }
    }

    fn unclosed(&self, open: usize) -> ParseError {
        let found = self.peek().describe();
        let at = ParseError::new(self.source, open, "");
        self.error(format!(
            "unbalanced parentheses: `(` opened at {}:{} is not closed (found {found})",
            at.line, at.column
        ))
    }
}

/// Parses `expr = expr`.
pub fn parse_statement(source: &str) -> Result<Statement, ParseError> {
    Parser::new(source)?.statement()
}

/// Parses a bare expression, e.g. an auxiliary definition.
pub fn parse_expression(source: &str) -> Result<Expression, ParseError> {
    let mut parser = Parser::new(source)?;
    if *parser.peek() == TokenKind::Eof {
        return Err(parser.error("empty expression"));
    }
    let expr = parser.expr()?;
    parser.expect(TokenKind::Eof)?;
    Ok(expr)
}
