//! Text format for problems.
//!
//! ```text
//! # two disks
//! var x in [-1, 1];
//! var y in [-1, 1];
//! con x^2 + y^2 - 1 < 0;
//! con (x - 1)^2 + y^2 - 1 < 0;
//! ```
//!
//! Expressions use `+ - * /`, integer powers `^k`, `sqrt(...)`, parentheses
//! and decimal literals. Literals that are not exactly representable are
//! enclosed by the two neighbouring floats. Every constraint compares an
//! expression with `0` using `=` or `<`. `#` starts a comment.

use thiserror::Error;

use crate::expr::{Constraint, Expr, Problem, ProblemError, Relation};
use crate::interval::{Interval, IntervalBox};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Number(String),
    Sym(char),
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut tokens = Vec::new();
    let mut line = 1;
    let mut column = 1;
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = (line, column);
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            column += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let begin = i;
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            Tok::Ident(chars[begin..i].iter().collect())
        } else if c.is_ascii_digit() || c == '.' {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[begin..i].iter().collect();
            if text.parse::<f64>().is_err() {
                return Err(ParseError {
                    line: start.0,
                    column: start.1,
                    message: format!("malformed number `{text}`"),
                });
            }
            Tok::Number(text)
        } else if "+-*/^()[],;=<".contains(c) {
            i += 1;
            Tok::Sym(c)
        } else {
            return Err(ParseError {
                line: start.0,
                column: start.1,
                message: format!("unexpected character `{c}`"),
            });
        };
        column += i - begin;
        tokens.push(Token { tok, line: start.0, column: start.1 });
    }
    tokens.push(Token { tok: Tok::Eof, line, column });
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    names: Vec<String>,
    bounds: Vec<Interval>,
    constraints: Vec<Constraint>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn error_at<T>(&self, t: &Token, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { line: t.line, column: t.column, message: message.into() })
    }

    fn describe(t: &Tok) -> String {
        match t {
            Tok::Ident(s) | Tok::Number(s) => format!("`{s}`"),
            Tok::Sym(c) => format!("`{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<(), ParseError> {
        let t = self.next();
        if t.tok == Tok::Sym(c) {
            Ok(())
        } else {
            self.error_at(&t, format!("expected `{c}`, found {}", Self::describe(&t.tok)))
        }
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Sym(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn program(&mut self) -> Result<(), ParseError> {
        loop {
            let t = self.next();
            match &t.tok {
                Tok::Eof => return Ok(()),
                Tok::Ident(kw) if kw == "var" => self.var_decl()?,
                Tok::Ident(kw) if kw == "con" => self.constraint()?,
                other => {
                    return self.error_at(&t, format!("expected `var` or `con`, found {}", Self::describe(other)));
                }
            }
        }
    }

    fn var_decl(&mut self) -> Result<(), ParseError> {
        let t = self.next();
        let Tok::Ident(name) = t.tok.clone() else {
            return self.error_at(&t, format!("expected a variable name, found {}", Self::describe(&t.tok)));
        };
        if is_keyword(&name) {
            return self.error_at(&t, format!("`{name}` is reserved"));
        }
        if self.names.contains(&name) {
            return self.error_at(&t, format!("variable `{name}` declared twice"));
        }
        let kw = self.next();
        if kw.tok != Tok::Ident("in".into()) {
            return self.error_at(&kw, format!("expected `in`, found {}", Self::describe(&kw.tok)));
        }
        let open = self.peek().clone();
        self.expect_sym('[')?;
        let lo = self.signed_literal()?.lo();
        self.expect_sym(',')?;
        let hi = self.signed_literal()?.hi();
        self.expect_sym(']')?;
        self.expect_sym(';')?;
        if lo > hi {
            return self.error_at(&open, format!("empty domain for `{name}`: lower bound exceeds upper bound"));
        }
        self.names.push(name);
        self.bounds.push(Interval::new(lo, hi));
        Ok(())
    }

    fn signed_literal(&mut self) -> Result<Interval, ParseError> {
        let negative = self.eat_sym('-');
        if !negative {
            self.eat_sym('+');
        }
        let t = self.next();
        let Tok::Number(text) = &t.tok else {
            return self.error_at(&t, format!("expected a number, found {}", Self::describe(&t.tok)));
        };
        let Some(v) = Interval::from_decimal(text) else {
            return self.error_at(&t, format!("number `{text}` out of range"));
        };
        Ok(if negative { v.neg() } else { v })
    }

    fn constraint(&mut self) -> Result<(), ParseError> {
        let body = self.expr()?;
        let t = self.next();
        let relation = match t.tok {
            Tok::Sym('=') => Relation::EqZero,
            Tok::Sym('<') => Relation::LtZero,
            ref other => {
                return self.error_at(&t, format!("expected `=` or `<`, found {}", Self::describe(other)));
            }
        };
        let zero = self.next();
        match &zero.tok {
            Tok::Number(text) if text.parse::<f64>() == Ok(0.0) => {}
            other => {
                return self.error_at(&zero, format!("right-hand side must be 0, found {}", Self::describe(other)));
            }
        }
        self.expect_sym(';')?;
        self.constraints.push(Constraint::new(body, relation));
        Ok(())
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.term()?;
        loop {
            if self.eat_sym('+') {
                e = e + self.term()?;
            } else if self.eat_sym('-') {
                e = e - self.term()?;
            } else {
                return Ok(e);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.unary()?;
        loop {
            if self.eat_sym('*') {
                e = e * self.unary()?;
            } else if self.eat_sym('/') {
                e = e / self.unary()?;
            } else {
                return Ok(e);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat_sym('-') {
            return Ok(match self.unary()? {
                Expr::Const(c) => Expr::Const(c.neg()),
                e => -e,
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.eat_sym('^') {
            return Ok(base);
        }
        let t = self.next();
        let k = match &t.tok {
            Tok::Number(text) => text.parse::<u32>().ok(),
            _ => None,
        };
        match k {
            Some(k) => Ok(base.pow(k)),
            None => self.error_at(&t, format!("exponent must be a non-negative integer, found {}", Self::describe(&t.tok))),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let t = self.next();
        match &t.tok {
            Tok::Number(text) => match Interval::from_decimal(text) {
                Some(v) => Ok(Expr::Const(v)),
                None => self.error_at(&t, format!("number `{text}` out of range")),
            },
            Tok::Ident(name) if name == "sqrt" => {
                self.expect_sym('(')?;
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e.sqrt())
            }
            Tok::Ident(name) => match self.names.iter().position(|n| n == name) {
                Some(i) => Ok(Expr::var(i)),
                None => self.error_at(&t, format!("unknown identifier `{name}`")),
            },
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            other => self.error_at(&t, format!("expected an expression, found {}", Self::describe(other))),
        }
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "var" | "con" | "in" | "sqrt")
}

/// Parses a problem description. Variables must be declared before use.
pub fn parse_problem(text: &str) -> Result<Problem, ParseError> {
    let mut p = Parser {
        tokens: tokenize(text)?,
        pos: 0,
        names: Vec::new(),
        bounds: Vec::new(),
        constraints: Vec::new(),
    };
    p.program()?;
    if p.names.is_empty() {
        return Err(ParseError { line: 1, column: 1, message: "no variables declared".into() });
    }
    Problem::new(p.names, IntervalBox::new(p.bounds), p.constraints).map_err(|e: ProblemError| ParseError {
        line: 1,
        column: 1,
        message: e.to_string(),
    })
}
