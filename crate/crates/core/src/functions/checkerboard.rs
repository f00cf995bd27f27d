use crate::error::{Error, Result};
use crate::functions::interfaces::{localize, GlobalFunction, LocalFunctionSet, LocalizableFunction};
use crate::grid::{Entity, GridView};

/// A piecewise constant scalar function on an equidistant box partition.
///
/// Boxes are half-open, `[a_i, b_i)`, except that the last box of each
/// direction also contains the upper boundary. `values` are ordered with
/// direction 0 running fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckerboardFunction {
    lower_left: Vec<f64>,
    upper_right: Vec<f64>,
    num_elements: Vec<usize>,
    values: Vec<f64>,
    name: String,
}

impl CheckerboardFunction {
    pub fn new(lower_left: Vec<f64>, upper_right: Vec<f64>, num_elements: Vec<usize>, values: Vec<f64>) -> Result<Self> {
        let dim = lower_left.len();
        if dim == 0 || upper_right.len() != dim || num_elements.len() != dim {
            return Err(Error::Shape(format!(
                "lower_left, upper_right and num_elements have lengths {}, {} and {}",
                dim,
                upper_right.len(),
                num_elements.len()
            )));
        }
        if let Some(i) = (0..dim).find(|&i| !(lower_left[i] < upper_right[i])) {
            return Err(Error::Spec(format!("lower_left[{i}] is not below upper_right[{i}]")));
        }
        if num_elements.contains(&0) {
            return Err(Error::Spec("num_elements must be positive".into()));
        }
        let expected: usize = num_elements.iter().product();
        if values.len() != expected {
            return Err(Error::Shape(format!(
                "{} values given for {} subdomains",
                values.len(),
                expected
            )));
        }
        Ok(Self {
            lower_left,
            upper_right,
            num_elements,
            values,
            name: "checkerboard".into(),
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Index of the subdomain containing `x`.
    pub fn subdomain(&self, x: &[f64]) -> Result<usize> {
        let mut index = 0;
        let mut stride = 1;
        for i in 0..self.lower_left.len() {
            let (a, b, n) = (self.lower_left[i], self.upper_right[i], self.num_elements[i]);
            let slack = 1e-12 * (b - a);
            if !(x[i] >= a - slack && x[i] <= b + slack) {
                return Err(Error::Evaluation(format!(
                    "point {x:?} lies outside the checkerboard domain in direction {i}"
                )));
            }
            let k = (((x[i] - a) / (b - a) * n as f64).floor().max(0.0) as usize).min(n - 1);
            index += k * stride;
            stride *= n;
        }
        Ok(index)
    }
}

impl GlobalFunction for CheckerboardFunction {
    fn dim(&self) -> usize {
        self.lower_left.len()
    }

    fn range(&self) -> (usize, usize) {
        (1, 1)
    }

    fn order(&self) -> usize {
        0
    }

    fn evaluate_global(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(vec![self.values[self.subdomain(x)?]])
    }

    fn jacobian_global(&self, _: &[f64]) -> Result<Vec<f64>> {
        Ok(vec![0.0; self.lower_left.len()])
    }
}

impl LocalizableFunction for CheckerboardFunction {
    fn dim(&self) -> usize {
        self.lower_left.len()
    }

    fn range(&self) -> (usize, usize) {
        (1, 1)
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
