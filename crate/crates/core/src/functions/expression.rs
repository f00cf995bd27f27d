//! Arithmetic expressions over an indexed variable.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | 'pi' | var '[' index ']' | func '(' expr ')' | '(' expr ')'
//! ```
//!
//! so `^` is right associative and binds tighter than unary minus:
//! `-x[0]^2` is `-(x[0]^2)`. Functions are `sin`, `cos`, `exp`, `sqrt`, `abs`.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Sqrt,
    Abs,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "exp" => Func::Exp,
            "sqrt" => Func::Sqrt,
            "abs" => Func::Abs,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Abs => "abs",
        }
    }
}

/// Parse tree of an expression.
#[derive(Debug, Clone, PartialEq)]
pub enum Ast {
    Number(f64),
    Variable(usize),
    Neg(Box<Ast>),
    Binary(BinaryOp, Box<Ast>, Box<Ast>),
    Call(Func, Box<Ast>),
}

impl Ast {
    /// Largest variable index referenced, if any.
    pub fn max_variable(&self) -> Option<usize> {
        match self {
            Ast::Number(_) => None,
            Ast::Variable(i) => Some(*i),
            Ast::Neg(a) | Ast::Call(_, a) => a.max_variable(),
            Ast::Binary(_, a, b) => a.max_variable().max(b.max_variable()),
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        let v = match self {
            Ast::Number(v) => *v,
            Ast::Variable(i) => *x.get(*i).ok_or_else(|| {
                Error::Evaluation(format!("variable index {i} out of range for a point of dimension {}", x.len()))
            })?,
            Ast::Neg(a) => -a.eval(x)?,
            Ast::Binary(op, a, b) => {
                let (a, b) = (a.eval(x)?, b.eval(x)?);
                let v = match op {
                    BinaryOp::Add => a + b,
                    BinaryOp::Sub => a - b,
                    BinaryOp::Mul => a * b,
                    BinaryOp::Div => {
                        if b == 0.0 {
                            return Err(Error::Evaluation("division by zero".into()));
                        }
                        a / b
                    }
                    BinaryOp::Pow => a.powf(b),
                };
                if v.is_nan() && !a.is_nan() && !b.is_nan() {
                    return Err(Error::Evaluation(format!("{a} {op} {b} is undefined")));
                }
                v
            }
            Ast::Call(f, a) => {
                let a = a.eval(x)?;
                let v = match f {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Exp => a.exp(),
                    Func::Sqrt => a.sqrt(),
                    Func::Abs => a.abs(),
                };
                if v.is_nan() && !a.is_nan() {
                    return Err(Error::Evaluation(format!("{}({a}) is undefined", f.name())));
                }
                v
            }
        };
        Ok(v)
    }
}

impl fmt::Display for BinaryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BinaryOp::Add => "+",
            BinaryOp::Sub => "-",
            BinaryOp::Mul => "*",
            BinaryOp::Div => "/",
            BinaryOp::Pow => "^",
        })
    }
}

/// A parsed expression together with its source text.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    source: String,
    ast: Ast,
}

impl Expression {
    /// Parses `text` with the variable called `variable`.
    pub fn parse(text: &str, variable: &str) -> Result<Self> {
        let mut p = Parser {
            text,
            bytes: text.as_bytes(),
            pos: 0,
            variable,
        };
        let ast = p.expr()?;
        p.skip_ws();
        if p.pos < p.bytes.len() {
            return Err(p.error(format!("unexpected '{}'", p.bytes[p.pos] as char)));
        }
        Ok(Self {
            source: text.trim().to_string(),
            ast,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn ast(&self) -> &Ast {
        &self.ast
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.ast.eval(x)
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.source)
    }
}

struct Parser<'t> {
    text: &'t str,
    bytes: &'t [u8],
    pos: usize,
    variable: &'t str,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::Expression {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.peek() {
            Some(found) if found == c => {
                self.pos += 1;
                Ok(())
            }
            Some(found) => Err(self.error(format!("expected '{}', found '{}'", c as char, found as char))),
            None => Err(self.error(format!("expected '{}', found end of input", c as char))),
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let op = if c == b'+' { BinaryOp::Add } else { BinaryOp::Sub };
            lhs = Ast::Binary(op, Box::new(lhs), Box::new(self.term()?));
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let op = if c == b'*' { BinaryOp::Mul } else { BinaryOp::Div };
            lhs = Ast::Binary(op, Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Ast> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(Ast::Binary(BinaryOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Ast> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            Some(c) => Err(self.error(format!("unexpected '{}'", c as char))),
        }
    }

    fn number(&mut self) -> Result<Ast> {
        let start = self.pos;
        let digits = |p: &mut Self| {
            while p.pos < p.bytes.len() && p.bytes[p.pos].is_ascii_digit() {
                p.pos += 1;
            }
        };
        digits(self);
        if self.bytes.get(self.pos) == Some(&b'.') {
            self.pos += 1;
            digits(self);
        }
        if matches!(self.bytes.get(self.pos), Some(b'e' | b'E')) {
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.bytes.get(self.pos), Some(b'+' | b'-')) {
                self.pos += 1;
            }
            if self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
                digits(self);
            } else {
                self.pos = mark;
            }
        }
        let literal = &self.text[start..self.pos];
        literal.parse::<f64>().map(Ast::Number).map_err(|_| Error::Expression {
            position: start,
            message: format!("invalid number '{literal}'"),
        })
    }

    fn identifier(&mut self) -> Result<Ast> {
        let start = self.pos;
        while self.pos < self.bytes.len() && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = &self.text[start..self.pos];
        if name == self.variable {
            self.expect(b'[')?;
            self.skip_ws();
            let idx_start = self.pos;
            while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let index = self.text[idx_start..self.pos].parse::<usize>().map_err(|_| Error::Expression {
                position: idx_start,
                message: format!("expected an index after '{name}['"),
            })?;
            self.expect(b']')?;
            return Ok(Ast::Variable(index));
        }
        if name == "pi" {
            return Ok(Ast::Number(PI));
        }
        let func = Func::from_name(name).ok_or_else(|| Error::Expression {
            position: start,
            message: format!("unknown identifier '{name}'"),
        })?;
        self.expect(b'(')?;
        let arg = self.expr()?;
        if self.peek() == Some(b',') {
            return Err(self.error(format!("{name} takes exactly one argument")));
        }
        self.expect(b')')?;
        Ok(Ast::Call(func, Box::new(arg)))
    }
}

/// Splits a bracketed list of expressions such as `[x[0] sin(x[1])]`.
///
/// Items are separated by whitespace outside parentheses and index brackets.
/// Whitespace next to a binary operator does not separate, so `[x[0] + 1 2]`
/// has the two items `x[0] + 1` and `2`. A `-` directly followed by its
/// operand is a sign and starts a new item: `[x[0] -x[1]]` has two items.
/// Text without surrounding brackets is a single item.
pub fn split_expression_list(text: &str) -> Result<Vec<String>> {
    let trimmed = text.trim();
    let Some(body) = trimmed.strip_prefix('[') else {
        return Ok(vec![trimmed.to_string()]);
    };
    let body = body.strip_suffix(']').ok_or_else(|| Error::Expression {
        position: text.len(),
        message: "missing closing ']'".into(),
    })?;
    let is_op = |c: char| matches!(c, '+' | '-' | '*' | '/' | '^');
    let mut items: Vec<String> = Vec::new();
    let mut current = String::new();
    let mut depth = 0i32;
    let chars: Vec<char> = body.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return Err(Error::Expression {
                position: i + 1,
                message: format!("unbalanced '{c}'"),
            });
        }
        if c.is_whitespace() && depth == 0 {
            let mut j = i;
            while j < chars.len() && chars[j].is_whitespace() {
                j += 1;
            }
            let prev_op = current.chars().last().is_some_and(is_op);
            let sign = chars.get(j) == Some(&'-') && chars.get(j + 1).is_some_and(|c| !c.is_whitespace());
            let next_op = chars.get(j).is_some_and(|&n| is_op(n)) && !sign;
            if !current.is_empty() && j < chars.len() {
                if prev_op || next_op {
                    current.push(' ');
                } else {
                    items.push(std::mem::take(&mut current));
                }
            }
            i = j;
            continue;
        }
        current.push(c);
        i += 1;
    }
    if depth != 0 {
        return Err(Error::Expression {
            position: text.len(),
            message: "unbalanced brackets".into(),
        });
    }
    if !current.is_empty() {
        items.push(current);
    }
    if items.is_empty() {
        return Err(Error::Expression {
            position: 0,
            message: "empty expression list".into(),
        });
    }
    Ok(items)
}
