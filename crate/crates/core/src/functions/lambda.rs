use crate::error::{Error, Result};
use crate::functions::interfaces::{localize, GlobalFunction, LocalFunctionSet, LocalizableFunction};
use crate::grid::{Entity, GridView};

type Callable = Box<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>;

/// A function given by a closure of the global point, with a caller-declared
/// polynomial order.
pub struct LambdaFunction {
    dim: usize,
    range: (usize, usize),
    order: usize,
    evaluate: Callable,
    jacobian: Option<Callable>,
    name: String,
}

impl LambdaFunction {
    /// `evaluate` returns the `r * c` components row-major.
    pub fn new(
        dim: usize,
        range: (usize, usize),
        order: usize,
        evaluate: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            range,
            order,
            evaluate: Box::new(evaluate),
            jacobian: None,
            name: "lambda".into(),
        }
    }

    /// A scalar lambda.
    pub fn scalar(dim: usize, order: usize, f: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(dim, (1, 1), order, move |x| vec![f(x)])
    }

    /// Supplies the jacobian: `r * c * d` entries, component-major.
    pub fn with_jacobian(mut self, jacobian: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        self.jacobian = Some(Box::new(jacobian));
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    fn checked(&self, what: &str, values: Vec<f64>, expected: usize) -> Result<Vec<f64>> {
        if values.len() == expected {
            Ok(values)
        } else {
            Err(Error::Evaluation(format!(
                "lambda '{}' returned {} {what} entries, expected {expected}",
                self.name,
                values.len()
            )))
        }
    }
}

impl std::fmt::Debug for LambdaFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LambdaFunction")
            .field("dim", &self.dim)
            .field("range", &self.range)
            .field("order", &self.order)
            .field("name", &self.name)
            .finish_non_exhaustive()
    }
}

impl GlobalFunction for LambdaFunction {
    fn dim(&self) -> usize {
        self.dim
    }

    fn range(&self) -> (usize, usize) {
        self.range
    }

    fn order(&self) -> usize {
        self.order
    }

    fn evaluate_global(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.checked("value", (self.evaluate)(x), self.range.0 * self.range.1)
    }

    fn jacobian_global(&self, x: &[f64]) -> Result<Vec<f64>> {
        let jacobian = self
            .jacobian
            .as_ref()
            .ok_or_else(|| Error::Capability(format!("lambda '{}' was given no jacobian", self.name)))?;
        self.checked("jacobian", jacobian(x), self.range.0 * self.range.1 * self.dim)
    }
}

impl LocalizableFunction for LambdaFunction {
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
        self.order
    }

    fn local_function<'a>(&'a self, view: &GridView, cell: &Entity) -> Result<Box<dyn LocalFunctionSet + 'a>> {
        localize(self, view, cell)
    }
}
