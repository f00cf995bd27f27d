//! Hierarchical string-keyed configuration trees with typed extraction.

use std::collections::BTreeMap;
use std::fmt;

use crate::common::value::{self, Element, Value, ValueKind};
use crate::error::{Error, Result};

/// A tree of string leaves addressed by dotted paths such as `grid.type`.
///
/// A path is either a leaf or an interior group, never both.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConfigTree {
    entries: BTreeMap<String, String>,
}

fn validate_key(key: &str) -> Result<()> {
    if key.is_empty() {
        return Err(Error::Config("empty key".into()));
    }
    for segment in key.split('.') {
        if segment.is_empty() {
            return Err(Error::Config(format!("key '{key}' has an empty segment")));
        }
        if segment
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '=' | '[' | ']' | '#'))
        {
            return Err(Error::Config(format!("key '{key}' contains an invalid character")));
        }
    }
    Ok(())
}

impl ConfigTree {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a tree from `(key, value)` pairs, later pairs overriding earlier ones.
    pub fn from_pairs<K: AsRef<str>, V: AsRef<str>>(pairs: impl IntoIterator<Item = (K, V)>) -> Result<Self> {
        let mut cfg = Self::new();
        for (k, v) in pairs {
            cfg.set(k.as_ref(), v.as_ref())?;
        }
        Ok(cfg)
    }

    /// Parses the ini dialect: `key = value`, `[group.path]` headers and `#` comments.
    pub fn from_ini(text: &str) -> Result<Self> {
        let mut cfg = Self::new();
        let mut prefix = String::new();
        for (number, raw) in text.lines().enumerate() {
            let line = raw.trim();
            let line_no = number + 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(header) = line.strip_prefix('[') {
                let group = header
                    .strip_suffix(']')
                    .map(str::trim)
                    .ok_or_else(|| Error::Ini {
                        line: line_no,
                        message: "unterminated section header".into(),
                    })?;
                validate_key(group).map_err(|e| Error::Ini {
                    line: line_no,
                    message: e.to_string(),
                })?;
                prefix = group.to_string();
                continue;
            }
            let Some((key, val)) = line.split_once('=') else {
                return Err(Error::Ini {
                    line: line_no,
                    message: format!("expected 'key = value', got '{line}'"),
                });
            };
            let key = key.trim();
            let full = if prefix.is_empty() {
                key.to_string()
            } else {
                format!("{prefix}.{key}")
            };
            cfg.set(&full, val).map_err(|e| Error::Ini {
                line: line_no,
                message: e.to_string(),
            })?;
        }
        Ok(cfg)
    }

    /// Canonical ini text: top-level leaves first, then one section per
    /// top-level group. Reparses to an equal tree.
    pub fn report(&self) -> String {
        let mut out = String::new();
        for (k, v) in self.entries.iter().filter(|(k, _)| !k.contains('.')) {
            out.push_str(&format!("{k} = {v}\n"));
        }
        let mut current: Option<&str> = None;
        for (k, v) in &self.entries {
            let Some((group, rest)) = k.split_once('.') else {
                continue;
            };
            if current != Some(group) {
                if !out.is_empty() {
                    out.push('\n');
                }
                out.push_str(&format!("[{group}]\n"));
                current = Some(group);
            }
            out.push_str(&format!("{rest} = {v}\n"));
        }
        out
    }

    /// Sets a leaf. Values are stored trimmed and may not span lines.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        validate_key(key)?;
        if value.contains(['\n', '\r']) {
            return Err(Error::Config(format!("value for '{key}' spans multiple lines")));
        }
        let group_prefix = format!("{key}.");
        if self
            .entries
            .range(group_prefix.clone()..)
            .next()
            .is_some_and(|(k, _)| k.starts_with(&group_prefix))
        {
            return Err(Error::Config(format!("'{key}' is a group and cannot hold a value")));
        }
        let mut end = 0;
        while let Some(pos) = key[end..].find('.') {
            let ancestor = &key[..end + pos];
            if self.entries.contains_key(ancestor) {
                return Err(Error::Config(format!(
                    "'{ancestor}' is a value and cannot contain '{key}'"
                )));
            }
            end += pos + 1;
        }
        self.entries.insert(key.to_string(), value.trim().to_string());
        Ok(())
    }

    /// Applies a `key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("override '{assignment}' is not of the form key=value")))?;
        self.set(k.trim(), v)
    }

    /// Copies all leaves of `other` into `self`, replacing existing ones.
    pub fn merge(&mut self, other: &ConfigTree) -> Result<()> {
        for (k, v) in &other.entries {
            self.set(k, v)?;
        }
        Ok(())
    }

    pub fn has_key(&self, key: &str) -> bool {
        self.entries.contains_key(key)
    }

    /// True if `prefix` names a group holding at least one leaf.
    pub fn has_sub(&self, prefix: &str) -> bool {
        let p = format!("{prefix}.");
        self.entries.keys().any(|k| k.starts_with(&p))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// The subtree below `prefix`, with the prefix stripped from its keys.
    pub fn sub(&self, prefix: &str) -> ConfigTree {
        let p = format!("{prefix}.");
        ConfigTree {
            entries: self
                .entries
                .iter()
                .filter_map(|(k, v)| k.strip_prefix(&p).map(|rest| (rest.to_string(), v.clone())))
                .collect(),
        }
    }

    /// The raw string leaf.
    pub fn get_str(&self, key: &str) -> Result<&str> {
        self.entries
            .get(key)
            .map(String::as_str)
            .ok_or_else(|| Error::MissingKey(key.to_string()))
    }

    /// Typed extraction. Absent keys yield `default` when given.
    pub fn get(&self, key: &str, kind: ValueKind, default: Option<Value>) -> Result<Value> {
        if key.is_empty() {
            return Err(Error::Config("empty key".into()));
        }
        match self.entries.get(key) {
            Some(text) => value::parse_value(text, kind).map_err(|e| e.with_key(key)),
            None => default.ok_or_else(|| Error::MissingKey(key.to_string())),
        }
    }

    pub fn get_real(&self, key: &str) -> Result<f64> {
        let v = self.get(key, ValueKind::Scalar(Element::Real), None)?;
        Ok(v.as_scalar().expect("scalar kind"))
    }

    pub fn get_real_or(&self, key: &str, default: f64) -> Result<f64> {
        let v = self.get(key, ValueKind::Scalar(Element::Real), Some(Value::Scalar(default)))?;
        Ok(v.as_scalar().expect("scalar kind"))
    }

    pub fn get_int(&self, key: &str) -> Result<i64> {
        let v = self.get(key, ValueKind::Scalar(Element::Integer), None)?;
        Ok(v.as_scalar().expect("scalar kind") as i64)
    }

    pub fn get_int_or(&self, key: &str, default: i64) -> Result<i64> {
        let v = self.get(
            key,
            ValueKind::Scalar(Element::Integer),
            Some(Value::Scalar(default as f64)),
        )?;
        Ok(v.as_scalar().expect("scalar kind") as i64)
    }

    /// Nonnegative integer extraction.
    pub fn get_count(&self, key: &str) -> Result<usize> {
        let v = self.get_int(key)?;
        usize::try_from(v).map_err(|_| Error::Config(format!("'{key}' must be nonnegative, got {v}")))
    }

    pub fn get_count_or(&self, key: &str, default: usize) -> Result<usize> {
        if self.has_key(key) {
            self.get_count(key)
        } else {
            Ok(default)
        }
    }

    pub fn get_vector(&self, key: &str, size: usize) -> Result<Vec<f64>> {
        match self.get(key, ValueKind::Vector(size, Element::Real), None)? {
            Value::Vector(v) => Ok(v),
            _ => unreachable!("vector kind"),
        }
    }

    pub fn get_count_vector(&self, key: &str, size: usize) -> Result<Vec<usize>> {
        match self.get(key, ValueKind::Vector(size, Element::Integer), None)? {
            Value::Vector(v) => v
                .into_iter()
                .map(|x| {
                    if x < 0.0 {
                        Err(Error::Config(format!("'{key}' entries must be nonnegative")))
                    } else {
                        Ok(x as usize)
                    }
                })
                .collect(),
            _ => unreachable!("vector kind"),
        }
    }

    /// A list of `0`/`1` flags.
    pub fn get_flag_vector(&self, key: &str, size: usize) -> Result<Vec<bool>> {
        match self.get(key, ValueKind::Vector(size, Element::Integer), None)? {
            Value::Vector(v) => v
                .into_iter()
                .map(|x| match x as i64 {
                    0 => Ok(false),
                    1 => Ok(true),
                    _ => Err(Error::Config(format!("'{key}' entries must be 0 or 1"))),
                })
                .collect(),
            _ => unreachable!("vector kind"),
        }
    }

    pub fn get_matrix(&self, key: &str, rows: usize, cols: usize) -> Result<Vec<Vec<f64>>> {
        match self.get(key, ValueKind::Matrix(rows, cols, Element::Real), None)? {
            Value::Matrix(m) => Ok(m),
            _ => unreachable!("matrix kind"),
        }
    }
}

impl fmt::Display for ConfigTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.report())
    }
}
