use crate::error::{Error, Result};
use crate::functions::expression::{split_expression_list, Expression};
use crate::functions::interfaces::{localize, GlobalFunction, LocalFunctionSet, LocalizableFunction};
use crate::grid::{Entity, GridView};

/// A vector valued function `R^d -> R^r` given by one expression per
/// component, with optional gradient expressions.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpressionFunction {
    dim: usize,
    order: usize,
    components: Vec<Expression>,
    gradients: Option<Vec<Vec<Expression>>>,
    name: String,
}

fn parse_all(texts: &[String], variable: &str, dim: usize) -> Result<Vec<Expression>> {
    texts
        .iter()
        .map(|t| {
            let e = Expression::parse(t, variable)?;
            match e.ast().max_variable() {
                Some(i) if i >= dim => Err(Error::Expression {
                    position: 0,
                    message: format!("'{t}' references {variable}[{i}] but the domain has dimension {dim}"),
                }),
                _ => Ok(e),
            }
        })
        .collect()
}

impl ExpressionFunction {
    /// `expressions` holds one entry per range component; `gradients[k]`, if
    /// given, holds the `dim` partial derivatives of component `k`.
    pub fn new(
        dim: usize,
        variable: &str,
        order: usize,
        expressions: &[String],
        gradients: Option<&[Vec<String>]>,
    ) -> Result<Self> {
        if expressions.is_empty() {
            return Err(Error::Shape("an expression function needs at least one component".into()));
        }
        let components = parse_all(expressions, variable, dim)?;
        let gradients = match gradients {
            None => None,
            Some(rows) => {
                if rows.len() != components.len() {
                    return Err(Error::Shape(format!(
                        "{} gradient rows given for {} components",
                        rows.len(),
                        components.len()
                    )));
                }
                let parsed = rows
                    .iter()
                    .map(|row| {
                        if row.len() != dim {
                            return Err(Error::Shape(format!(
                                "gradient row has {} entries, expected {dim}",
                                row.len()
                            )));
                        }
                        parse_all(row, variable, dim)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some(parsed)
            }
        };
        let name = format!("[{}]", expressions.join(" "));
        Ok(Self {
            dim,
            order,
            components,
            gradients,
            name,
        })
    }

    /// Builds from list literals such as `[x[0] sin(x[1])]`; `gradients[k]` is
    /// the list literal of component `k`.
    pub fn from_lists(
        dim: usize,
        variable: &str,
        order: usize,
        expression: &str,
        gradients: Option<&[String]>,
    ) -> Result<Self> {
        let components = split_expression_list(expression)?;
        let rows = gradients
            .map(|g| g.iter().map(|row| split_expression_list(row)).collect::<Result<Vec<_>>>())
            .transpose()?;
        Self::new(dim, variable, order, &components, rows.as_deref())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn has_gradients(&self) -> bool {
        self.gradients.is_some()
    }
}

impl GlobalFunction for ExpressionFunction {
    fn dim(&self) -> usize {
        self.dim
    }

    fn range(&self) -> (usize, usize) {
        (self.components.len(), 1)
    }

    fn order(&self) -> usize {
        self.order
    }

    fn evaluate_global(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.components.iter().map(|e| e.eval(x)).collect()
    }

    fn jacobian_global(&self, x: &[f64]) -> Result<Vec<f64>> {
        let rows = self.gradients.as_ref().ok_or_else(|| {
            Error::Capability(format!("expression function '{}' was given no gradient expressions", self.name))
        })?;
        rows.iter().flatten().map(|e| e.eval(x)).collect()
    }
}

impl LocalizableFunction for ExpressionFunction {
    fn dim(&self) -> usize {
        self.dim
    }

    fn range(&self) -> (usize, usize) {
        (self.components.len(), 1)
    }

    fn name(&self) -> String {
        self.name.clone()
    }

    fn order(&self) -> usize {
        self.order
    }

    fn local_function<'a>(&'a self, view: &GridView, cell: &Entity) -> Result<Box<dyn LocalFunctionSet + 'a>> {
        localize(self, view, cell)
    }
}
