//! String grammar for scalars, vectors and matrices.
//!
//! Vectors are written as `[1 2 3]`, matrices as `[1 2; 3 4]`. A bare literal
//! such as `5` is accepted wherever a vector or matrix is expected and counts
//! as a single entry. Requested sizes of `0` mean "whatever was parsed";
//! positive sizes take the leading entries and fail if too few are present.

use crate::error::{Error, Result};

/// Element type of a typed config value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Element {
    Real,
    Integer,
}

/// Shape and element type requested from a string value. Lengths of `0`
/// request automatic size detection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueKind {
    Scalar(Element),
    Vector(usize, Element),
    Matrix(usize, usize, Element),
}

impl ValueKind {
    pub fn element(self) -> Element {
        match self {
            ValueKind::Scalar(e) | ValueKind::Vector(_, e) | ValueKind::Matrix(_, _, e) => e,
        }
    }
}

/// A parsed value. Integer-kind values are stored as reals holding integers.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Scalar(f64),
    Vector(Vec<f64>),
    Matrix(Vec<Vec<f64>>),
}

impl Value {
    pub fn as_scalar(&self) -> Option<f64> {
        match self {
            Value::Scalar(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_vector(&self) -> Option<&[f64]> {
        match self {
            Value::Vector(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_matrix(&self) -> Option<&[Vec<f64>]> {
        match self {
            Value::Matrix(m) => Some(m),
            _ => None,
        }
    }
}

struct Token<'a> {
    text: &'a str,
    position: usize,
}

/// Splits `text` on whitespace, keeping byte offsets relative to `base`.
fn tokens(text: &str, base: usize) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        if c.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: &text[s..i],
                    position: base + s,
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &text[s..],
            position: base + s,
        });
    }
    out
}

fn parse_real(token: &Token<'_>) -> Result<f64> {
    token.text.parse::<f64>().map_err(|_| Error::Parse {
        position: token.position,
        message: format!("'{}' is not a real number", token.text),
    })
}

fn parse_integer(token: &Token<'_>) -> Result<f64> {
    token
        .text
        .parse::<i64>()
        .map(|v| v as f64)
        .map_err(|_| Error::Parse {
            position: token.position,
            message: format!("'{}' is not an integer", token.text),
        })
}

fn parse_entry(token: &Token<'_>, element: Element) -> Result<f64> {
    match element {
        Element::Real => parse_real(token),
        Element::Integer => parse_integer(token),
    }
}

/// Returns the contents between the outer brackets and their offset, or
/// `None` for a bare literal.
fn bracket_body(text: &str) -> Result<Option<(&str, usize)>> {
    let lead = text.len() - text.trim_start().len();
    let trimmed = text.trim();
    if let Some(rest) = trimmed.strip_prefix('[') {
        let body = rest.strip_suffix(']').ok_or_else(|| Error::Parse {
            position: lead + trimmed.len(),
            message: "missing closing ']'".into(),
        })?;
        if let Some(i) = body.find(['[', ']']) {
            return Err(Error::Parse {
                position: lead + 1 + i,
                message: "unexpected bracket".into(),
            });
        }
        Ok(Some((body, lead + 1)))
    } else if trimmed.is_empty() {
        Err(Error::Parse {
            position: lead,
            message: "empty value".into(),
        })
    } else {
        Ok(None)
    }
}

fn take_leading<T>(mut values: Vec<T>, size: usize) -> Result<Vec<T>> {
    if size > 0 {
        if values.len() < size {
            return Err(Error::Size {
                requested: size,
                available: values.len(),
            });
        }
        values.truncate(size);
    }
    Ok(values)
}

fn parse_vector_as(text: &str, size: usize, element: Element) -> Result<Vec<f64>> {
    let entries = match bracket_body(text)? {
        Some((body, offset)) => {
            if let Some(i) = body.find(';') {
                return Err(Error::Parse {
                    position: offset + i,
                    message: "';' is not allowed in a vector".into(),
                });
            }
            tokens(body, offset)
                .iter()
                .map(|t| parse_entry(t, element))
                .collect::<Result<Vec<_>>>()?
        }
        None => {
            let bare = tokens(text, 0);
            if bare.len() != 1 {
                return Err(Error::Parse {
                    position: bare.get(1).map_or(0, |t| t.position),
                    message: "expected a single literal or a bracketed list".into(),
                });
            }
            vec![parse_entry(&bare[0], element)?]
        }
    };
    take_leading(entries, size)
}

fn parse_matrix_as(text: &str, rows: usize, cols: usize, element: Element) -> Result<Vec<Vec<f64>>> {
    let parsed: Vec<Vec<f64>> = match bracket_body(text)? {
        Some((body, offset)) => {
            if body.trim().is_empty() {
                Vec::new()
            } else {
                let mut out = Vec::new();
                let mut row_offset = offset;
                for row_text in body.split(';') {
                    let row = tokens(row_text, row_offset)
                        .iter()
                        .map(|t| parse_entry(t, element))
                        .collect::<Result<Vec<_>>>()?;
                    if row.is_empty() {
                        return Err(Error::Parse {
                            position: row_offset,
                            message: "empty matrix row".into(),
                        });
                    }
                    if let Some(first) = out.first() {
                        let first: &Vec<f64> = first;
                        if first.len() != row.len() {
                            return Err(Error::Parse {
                                position: row_offset,
                                message: format!(
                                    "ragged matrix: row has {} entries, expected {}",
                                    row.len(),
                                    first.len()
                                ),
                            });
                        }
                    }
                    out.push(row);
                    row_offset += row_text.len() + 1;
                }
                out
            }
        }
        None => vec![parse_vector_as(text, 0, element)?],
    };
    let parsed = take_leading(parsed, rows)?;
    parsed.into_iter().map(|row| take_leading(row, cols)).collect()
}

/// Parses a vector literal. See the module docs for the size rule.
pub fn parse_vector(text: &str, size: usize) -> Result<Vec<f64>> {
    parse_vector_as(text, size, Element::Real)
}

/// Parses a matrix literal with `;`-separated rows.
pub fn parse_matrix(text: &str, rows: usize, cols: usize) -> Result<Vec<Vec<f64>>> {
    parse_matrix_as(text, rows, cols, Element::Real)
}

/// Parses a single scalar literal.
pub fn parse_scalar(text: &str, element: Element) -> Result<f64> {
    let toks = tokens(text, 0);
    match toks.as_slice() {
        [single] => parse_entry(single, element),
        [] => Err(Error::Parse {
            position: 0,
            message: "empty value".into(),
        }),
        [_, second, ..] => Err(Error::Parse {
            position: second.position,
            message: "expected a single literal".into(),
        }),
    }
}

/// Parses `text` according to `kind`.
pub fn parse_value(text: &str, kind: ValueKind) -> Result<Value> {
    match kind {
        ValueKind::Scalar(e) => parse_scalar(text, e).map(Value::Scalar),
        ValueKind::Vector(n, e) => parse_vector_as(text, n, e).map(Value::Vector),
        ValueKind::Matrix(r, c, e) => parse_matrix_as(text, r, c, e).map(Value::Matrix),
    }
}

/// Shortest decimal text that parses back to exactly `v`.
pub fn format_scalar(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || !a.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn format_vector(v: &[f64]) -> String {
    let entries: Vec<String> = v.iter().copied().map(format_scalar).collect();
    format!("[{}]", entries.join(" "))
}

pub fn format_matrix(m: &[Vec<f64>]) -> String {
    let rows: Vec<String> = m
        .iter()
        .map(|row| {
            row.iter()
                .copied()
                .map(format_scalar)
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect();
    format!("[{}]", rows.join("; "))
}

pub fn format_value(v: &Value) -> String {
    match v {
        Value::Scalar(s) => format_scalar(*s),
        Value::Vector(v) => format_vector(v),
        Value::Matrix(m) => format_matrix(m),
    }
}
