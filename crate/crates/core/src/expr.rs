//! A small expression language for user-supplied symbols `u` and `phi`.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | power
//! power  := atom ("^" unary)?
//! atom   := number | "z" | "i" | ident | "log(" expr ")" | "conj(" ident ")" | "(" expr ")"
//! ```
//!
//! `^` is right-associative. Any identifier other than `z`, `i`, `log` and
//! `conj` is a parameter whose value is bound when the expression is compiled.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::Jet;
use crate::Complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => " + ",
            BinOp::Sub => " - ",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Pow => "^",
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Expr {
    Num(f64),
    /// The imaginary unit `i`.
    Imag,
    /// The variable `z`.
    Var,
    Param(String),
    /// Complex conjugate of a parameter; never applied to `z`.
    Conj(String),
    Neg(Box<Expr>),
    Log(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

const NEG_PRECEDENCE: u8 = 3;
const ATOM_PRECEDENCE: u8 = 5;

impl Expr {
    pub fn bin(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Bin(op, Box::new(lhs), Box::new(rhs))
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(op, _, _) => op.precedence(),
            Expr::Neg(_) => NEG_PRECEDENCE,
            Expr::Num(x) if *x < 0.0 => NEG_PRECEDENCE,
            _ => ATOM_PRECEDENCE,
        }
    }

    pub fn depends_on_z(&self) -> bool {
        match self {
            Expr::Var => true,
            Expr::Num(_) | Expr::Imag | Expr::Param(_) | Expr::Conj(_) => false,
            Expr::Neg(e) | Expr::Log(e) => e.depends_on_z(),
            Expr::Bin(_, l, r) => l.depends_on_z() || r.depends_on_z(),
        }
    }

    /// Parameter names referenced by the tree, sorted.
    pub fn parameters(&self) -> Vec<String> {
        fn walk(e: &Expr, out: &mut Vec<String>) {
            match e {
                Expr::Param(p) | Expr::Conj(p) => out.push(p.clone()),
                Expr::Neg(x) | Expr::Log(x) => walk(x, out),
                Expr::Bin(_, l, r) => {
                    walk(l, out);
                    walk(r, out);
                }
                _ => {}
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort();
        out.dedup();
        out
    }
}

fn write_child(f: &mut fmt::Formatter<'_>, e: &Expr, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(x) if *x < 0.0 => write!(f, "(0 - {})", -x),
            Expr::Num(x) => write!(f, "{x}"),
            Expr::Imag => f.write_str("i"),
            Expr::Var => f.write_str("z"),
            Expr::Param(p) => f.write_str(p),
            Expr::Conj(p) => write!(f, "conj({p})"),
            Expr::Log(e) => write!(f, "log({e})"),
            Expr::Neg(e) => {
                f.write_str("-")?;
                write_child(f, e, e.precedence() < NEG_PRECEDENCE)
            }
            Expr::Bin(BinOp::Pow, l, r) => {
                write_child(f, l, l.precedence() <= BinOp::Pow.precedence())?;
                f.write_str("^")?;
                write_child(f, r, r.precedence() < NEG_PRECEDENCE)
            }
            Expr::Bin(op, l, r) => {
                let p = op.precedence();
                write_child(f, l, l.precedence() < p)?;
                f.write_str(op.symbol())?;
                write_child(f, r, r.precedence() <= p)
            }
        }
    }
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
    End,
}

fn describe(t: &Token) -> String {
    match t {
        Token::Num(x) => format!("number {x}"),
        Token::Ident(s) => format!("identifier `{s}`"),
        Token::Plus => "`+`".into(),
        Token::Minus => "`-`".into(),
        Token::Star => "`*`".into(),
        Token::Slash => "`/`".into(),
        Token::Caret => "`^`".into(),
        Token::LParen => "`(`".into(),
        Token::RParen => "`)`".into(),
        Token::End => "end of input".into(),
    }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let ch = bytes[i];
        let single = match ch {
            b'+' => Some(Token::Plus),
            b'-' => Some(Token::Minus),
            b'*' => Some(Token::Star),
            b'/' => Some(Token::Slash),
            b'^' => Some(Token::Caret),
            b'(' => Some(Token::LParen),
            b')' => Some(Token::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            out.push((i, tok));
            i += 1;
        } else if ch.is_ascii_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() || ch == b'.' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text = &src[start..i];
            let value: f64 = text.parse().map_err(|_| Error::Parse {
                offset: start,
                message: format!("malformed number `{text}`"),
            })?;
            out.push((start, Token::Num(value)));
        } else if ch.is_ascii_alphabetic() || ch == b'_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Token::Ident(src[start..i].to_string())));
        } else {
            let c = src[i..].chars().next().unwrap_or('?');
            return Err(Error::Parse {
                offset: i,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push((src.len(), Token::End));
    Ok(out)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].1
    }

    fn offset(&self) -> usize {
        self.tokens[self.pos].0
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].1.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expect(&mut self, want: Token) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", describe(&want), describe(self.peek())))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Token::Plus => BinOp::Add,
                Token::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = Expr::bin(op, lhs, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Token::Star => BinOp::Mul,
                Token::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = Expr::bin(op, lhs, rhs);
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if *self.peek() == Token::Minus {
            self.bump();
            Ok(Expr::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() == Token::Caret {
            self.bump();
            let exponent = self.unary()?;
            Ok(Expr::bin(BinOp::Pow, base, exponent))
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().clone() {
            Token::Num(x) => {
                self.bump();
                Ok(Expr::Num(x))
            }
            Token::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(inner)
            }
            Token::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "z" => Ok(Expr::Var),
                    "i" => Ok(Expr::Imag),
                    "log" => {
                        self.expect(Token::LParen)?;
                        let inner = self.expr()?;
                        self.expect(Token::RParen)?;
                        Ok(Expr::Log(Box::new(inner)))
                    }
                    "conj" => {
                        self.expect(Token::LParen)?;
                        let param = match self.peek().clone() {
                            Token::Ident(p) if !matches!(p.as_str(), "z" | "i" | "log" | "conj") => {
                                self.bump();
                                p
                            }
                            other => {
                                return self.error(format!(
                                    "conj applies to parameters only, found {}",
                                    describe(&other)
                                ))
                            }
                        };
                        self.expect(Token::RParen)?;
                        Ok(Expr::Conj(param))
                    }
                    _ => Ok(Expr::Param(name)),
                }
            }
            other => self.error(format!("expected an operand, found {}", describe(&other))),
        }
    }
}

pub fn parse_expression(src: &str) -> Result<Expr> {
    let mut parser = Parser {
        tokens: tokenize(src)?,
        pos: 0,
    };
    let tree = parser.expr()?;
    if *parser.peek() != Token::End {
        return parser.error(format!("unexpected {}", describe(parser.peek())));
    }
    Ok(tree)
}

/// An expression together with values for all its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CompiledExpr {
    tree: Expr,
    params: BTreeMap<String, Complex>,
}

impl CompiledExpr {
    pub fn new(tree: Expr, params: BTreeMap<String, Complex>) -> Result<Self> {
        if let Some(missing) = tree.parameters().into_iter().find(|p| !params.contains_key(p)) {
            return Err(Error::UnboundParameter(missing));
        }
        Ok(CompiledExpr { tree, params })
    }

    pub fn parse(src: &str, params: BTreeMap<String, Complex>) -> Result<Self> {
        Self::new(parse_expression(src)?, params)
    }

    pub fn tree(&self) -> &Expr {
        &self.tree
    }

    pub fn params(&self) -> &BTreeMap<String, Complex> {
        &self.params
    }

    /// Evaluates the tree with `z` replaced by the jet `var`.
    pub fn eval_jet(&self, var: &Jet) -> Result<Jet> {
        self.eval_node(&self.tree, var)
    }

    fn param(&self, name: &str) -> Result<Complex> {
        self.params
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnboundParameter(name.to_string()))
    }

    fn eval_node(&self, node: &Expr, var: &Jet) -> Result<Jet> {
        let constant = |v: Complex| Jet::constant(var.center(), v, var.order());
        Ok(match node {
            Expr::Num(x) => constant(Complex::new(*x, 0.0)),
            Expr::Imag => constant(Complex::new(0.0, 1.0)),
            Expr::Var => var.clone(),
            Expr::Param(p) => constant(self.param(p)?),
            Expr::Conj(p) => constant(self.param(p)?.conj()),
            Expr::Neg(e) => -&self.eval_node(e, var)?,
            Expr::Log(e) => self.eval_node(e, var)?.ln()?,
            Expr::Bin(op, l, r) => {
                let lhs = self.eval_node(l, var)?;
                if *op == BinOp::Pow {
                    return self.power(&lhs, r, var);
                }
                let rhs = self.eval_node(r, var)?;
                match op {
                    BinOp::Add => &lhs + &rhs,
                    BinOp::Sub => &lhs - &rhs,
                    BinOp::Mul => &lhs * &rhs,
                    BinOp::Div => lhs.checked_div(&rhs)?,
                    BinOp::Pow => unreachable!(),
                }
            }
        })
    }

    fn power(&self, base: &Jet, exponent: &Expr, var: &Jet) -> Result<Jet> {
        if exponent.depends_on_z() {
            let e = self.eval_node(exponent, var)?;
            return (&e * &base.ln()?).exp();
        }
        let e = self.eval_node(exponent, &Jet::variable(var.center(), 0))?.value();
        if e.im == 0.0 && e.re.fract() == 0.0 && e.re.abs() <= i32::MAX as f64 {
            base.powi(e.re as i64)
        } else {
            base.powc(e)
        }
    }
}
