use crate::common::Value;
use crate::error::{Error, Result};
use crate::functions::interfaces::{localize, GlobalFunction, LocalFunctionSet, LocalizableFunction};
use crate::grid::{Entity, GridView};

/// A constant scalar, vector (`r × 1`) or matrix valued function.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstantFunction {
    dim: usize,
    range: (usize, usize),
    value: Vec<f64>,
    name: String,
}

impl ConstantFunction {
    pub fn new(dim: usize, value: Value) -> Result<Self> {
        let (range, flat) = match value {
            Value::Scalar(v) => ((1, 1), vec![v]),
            Value::Vector(v) => ((v.len(), 1), v),
            Value::Matrix(rows) => {
                let cols = rows.first().map_or(0, Vec::len);
                if rows.iter().any(|r| r.len() != cols) {
                    return Err(Error::Shape("ragged matrix value".into()));
                }
                ((rows.len(), cols), rows.concat())
            }
        };
        if flat.is_empty() {
            return Err(Error::Shape("a constant needs at least one component".into()));
        }
        Ok(Self {
            dim,
            range,
            value: flat,
            name: "constant".into(),
        })
    }

    pub fn scalar(dim: usize, value: f64) -> Self {
        Self::new(dim, Value::Scalar(value)).expect("a scalar is a valid value")
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// The value flattened row-major.
    pub fn value(&self) -> &[f64] {
        &self.value
    }
}

impl GlobalFunction for ConstantFunction {
    fn dim(&self) -> usize {
        self.dim
    }

    fn range(&self) -> (usize, usize) {
        self.range
    }

    fn order(&self) -> usize {
        0
    }

    fn evaluate_global(&self, _: &[f64]) -> Result<Vec<f64>> {
        Ok(self.value.clone())
    }

    fn jacobian_global(&self, _: &[f64]) -> Result<Vec<f64>> {
        Ok(vec![0.0; self.value.len() * self.dim])
    }
}

impl LocalizableFunction for ConstantFunction {
    fn dim(&self) -> usize {
        self.dim
    }

    fn range(&self) -> (usize, usize) {
        self.range
    }

    fn name(&self) -> String {
        self.name.clone()
    }

    fn order(&self) -> usize {
        0
    }

    fn local_function<'a>(&'a self, view: &GridView, cell: &Entity) -> Result<Box<dyn LocalFunctionSet + 'a>> {
        localize(self, view, cell)
    }
}
