//! Tiny expression grammar for custom functions in config files.
//!
//! Supported: `+ − * /`, unary minus, integer powers via `^`, `abs(e)`,
//! `max(e, ...)`, `min(e, ...)`, numeric literals, and the variables
//! `x`, `y`, `z` (aliases `x1`, `x2`, `x3`). Anything richer belongs in the
//! function registry.

use crate::error::{Error, Result};
use crate::grid::DomainBox;
use crate::subdiff::FunctionOracle;

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Const(f64),
    Var(usize),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Neg(Box<Node>),
    Pow(Box<Node>, u32),
    Abs(Box<Node>),
    Max(Vec<Node>),
    Min(Vec<Node>),
}

impl Node {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Node::Const(c) => *c,
            Node::Var(i) => x[*i],
            Node::Add(a, b) => a.eval(x) + b.eval(x),
            Node::Sub(a, b) => a.eval(x) - b.eval(x),
            Node::Mul(a, b) => a.eval(x) * b.eval(x),
            Node::Div(a, b) => a.eval(x) / b.eval(x),
            Node::Neg(a) => -a.eval(x),
            Node::Pow(a, n) => a.eval(x).powi(*n as i32),
            Node::Abs(a) => a.eval(x).abs(),
            Node::Max(args) => args.iter().map(|a| a.eval(x)).fold(f64::NEG_INFINITY, f64::max),
            Node::Min(args) => args.iter().map(|a| a.eval(x)).fold(f64::INFINITY, f64::min),
        }
    }
}

/// Parses `src` against a space of `dim` variables.
pub fn parse(src: &str, dim: usize) -> Result<Node> {
    let tokens = lex(src)?;
    let mut p = Parser { tokens, pos: 0, dim };
    let node = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::InvalidInput(format!(
            "unexpected trailing input at token {:?}",
            p.tokens[p.pos]
        )));
    }
    Ok(node)
}

/// Wraps a parsed expression as a [`FunctionOracle`] named `expr`.
pub fn expr_oracle(src: &str, domain: DomainBox) -> Result<FunctionOracle> {
    let node = parse(src, domain.dim())?;
    Ok(FunctionOracle::new("expr", domain, move |x| node.eval(x)))
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

fn lex(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '/' => {
                out.push(Token::Slash);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '(' => {
                out.push(Token::LParen);
                i += 1;
            }
            ')' => {
                out.push(Token::RParen);
                i += 1;
            }
            ',' => {
                out.push(Token::Comma);
                i += 1;
            }
            _ if c.is_ascii_digit() || c == '.' => {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_ascii_digit()
                        || chars[i] == '.'
                        || chars[i] == 'e'
                        || chars[i] == 'E'
                        || ((chars[i] == '+' || chars[i] == '-')
                            && i > start
                            && (chars[i - 1] == 'e' || chars[i - 1] == 'E')))
                {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                let v: f64 = text
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad number literal '{text}'")))?;
                out.push(Token::Num(v));
            }
            _ if c.is_ascii_alphabetic() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token::Ident(chars[start..i].iter().collect()));
            }
            other => {
                return Err(Error::InvalidInput(format!(
                    "unexpected character '{other}' in expression"
                )))
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    dim: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Token) -> Result<()> {
        match self.bump() {
            Some(got) if got == t => Ok(()),
            got => Err(Error::InvalidInput(format!("expected {t:?}, got {got:?}"))),
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut node = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    node = Node::Add(Box::new(node), Box::new(self.term()?));
                }
                Some(Token::Minus) => {
                    self.bump();
                    node = Node::Sub(Box::new(node), Box::new(self.term()?));
                }
                _ => return Ok(node),
            }
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut node = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    node = Node::Mul(Box::new(node), Box::new(self.unary()?));
                }
                Some(Token::Slash) => {
                    self.bump();
                    node = Node::Div(Box::new(node), Box::new(self.unary()?));
                }
                _ => return Ok(node),
            }
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if matches!(self.peek(), Some(Token::Minus)) {
            self.bump();
            return Ok(Node::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.bump();
            match self.bump() {
                Some(Token::Num(v)) if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 => {
                    return Ok(Node::Pow(Box::new(base), v as u32));
                }
                got => {
                    return Err(Error::InvalidInput(format!(
                        "exponent must be a non-negative integer literal, got {got:?}"
                    )))
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        match self.bump() {
            Some(Token::Num(v)) => Ok(Node::Const(v)),
            Some(Token::LParen) => {
                let node = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(node)
            }
            Some(Token::Ident(name)) => {
                if matches!(self.peek(), Some(Token::LParen)) {
                    self.bump();
                    let mut args = vec![self.expr()?];
                    while matches!(self.peek(), Some(Token::Comma)) {
                        self.bump();
                        args.push(self.expr()?);
                    }
                    self.expect(Token::RParen)?;
                    match (name.as_str(), args.len()) {
                        ("abs", 1) => Ok(Node::Abs(Box::new(args.pop().unwrap()))),
                        ("abs", n) => {
                            Err(Error::InvalidInput(format!("abs takes 1 argument, got {n}")))
                        }
                        ("max", n) if n >= 2 => Ok(Node::Max(args)),
                        ("min", n) if n >= 2 => Ok(Node::Min(args)),
                        ("max" | "min", _) => Err(Error::InvalidInput(
                            "max/min take at least 2 arguments".into(),
                        )),
                        (other, _) => Err(Error::InvalidInput(format!(
                            "unknown function '{other}' (have abs, max, min)"
                        ))),
                    }
                } else {
                    let idx = match name.as_str() {
                        "x" | "x1" => 0,
                        "y" | "x2" => 1,
                        "z" | "x3" => 2,
                        other => {
                            return Err(Error::InvalidInput(format!(
                                "unknown variable '{other}' (have x, y, z)"
                            )))
                        }
                    };
                    if idx >= self.dim {
                        return Err(Error::InvalidInput(format!(
                            "variable '{name}' exceeds dimension {}",
                            self.dim
                        )));
                    }
                    Ok(Node::Var(idx))
                }
            }
            got => Err(Error::InvalidInput(format!("unexpected token {got:?}"))),
        }
    }
}
