use std::sync::Arc;

use crate::error::{Error, Result};
use crate::functions::geometry::CellGeometry;
use crate::functions::interfaces::{FunctionRef, LocalFunctionSet, LocalizableFunction};
use crate::grid::{Entity, GridView};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Combination {
    Difference,
    Sum,
    /// Scalar `f` times arbitrary `g`.
    Product,
}

/// The pointwise combination of two localizable functions.
pub struct CombinedFunction {
    op: Combination,
    f: FunctionRef,
    g: FunctionRef,
}

/// Combines `f` and `g`; see [`Combination`] for the dimension rules.
pub fn combine(op: Combination, f: FunctionRef, g: FunctionRef) -> Result<FunctionRef> {
    if f.dim() != g.dim() {
        return Err(Error::Shape(format!(
            "cannot combine functions of domain dimensions {} and {}",
            f.dim(),
            g.dim()
        )));
    }
    match op {
        Combination::Difference | Combination::Sum if f.range() != g.range() => Err(Error::Shape(format!(
            "cannot add functions with ranges {:?} and {:?}",
            f.range(),
            g.range()
        ))),
        Combination::Product if !f.is_scalar() => Err(Error::Shape(format!(
            "the left factor of a product must be scalar, not {:?}",
            f.range()
        ))),
        _ => Ok(Arc::new(CombinedFunction { op, f, g })),
    }
}

pub fn difference(f: FunctionRef, g: FunctionRef) -> Result<FunctionRef> {
    combine(Combination::Difference, f, g)
}

pub fn sum(f: FunctionRef, g: FunctionRef) -> Result<FunctionRef> {
    combine(Combination::Sum, f, g)
}

pub fn product(f: FunctionRef, g: FunctionRef) -> Result<FunctionRef> {
    combine(Combination::Product, f, g)
}

impl LocalizableFunction for CombinedFunction {
    fn dim(&self) -> usize {
        self.f.dim()
    }

    fn range(&self) -> (usize, usize) {
        self.g.range()
    }

    fn name(&self) -> String {
        let sym = match self.op {
            Combination::Difference => "-",
            Combination::Sum => "+",
            Combination::Product => "*",
        };
        format!("({} {sym} {})", self.f.name(), self.g.name())
    }

    fn order(&self) -> usize {
        match self.op {
            Combination::Difference | Combination::Sum => self.f.order().max(self.g.order()),
            Combination::Product => self.f.order() + self.g.order(),
        }
    }

    fn local_function<'a>(&'a self, view: &GridView, cell: &Entity) -> Result<Box<dyn LocalFunctionSet + 'a>> {
        Ok(Box::new(CombinedLocal {
            op: self.op,
            order: self.order(),
            range: self.range(),
            f: self.f.local_function(view, cell)?,
            g: self.g.local_function(view, cell)?,
        }))
    }
}

struct CombinedLocal<'a> {
    op: Combination,
    order: usize,
    range: (usize, usize),
    f: Box<dyn LocalFunctionSet + 'a>,
    g: Box<dyn LocalFunctionSet + 'a>,
}

impl LocalFunctionSet for CombinedLocal<'_> {
    fn entity(&self) -> &Entity {
        self.f.entity()
    }

    fn geometry(&self) -> &CellGeometry {
        self.f.geometry()
    }

    fn size(&self) -> usize {
        1
    }

    fn order(&self) -> usize {
        self.order
    }

    fn range(&self) -> (usize, usize) {
        self.range
    }

    fn evaluate(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        let (a, b) = (self.f.value(x)?, self.g.value(x)?);
        let v = match self.op {
            Combination::Difference => a.iter().zip(&b).map(|(a, b)| a - b).collect(),
            Combination::Sum => a.iter().zip(&b).map(|(a, b)| a + b).collect(),
            Combination::Product => b.iter().map(|b| a[0] * b).collect(),
        };
        Ok(vec![v])
    }

    fn jacobian(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        let (ja, jb) = (self.f.gradient(x)?, self.g.gradient(x)?);
        let j = match self.op {
            Combination::Difference => ja.iter().zip(&jb).map(|(a, b)| a - b).collect(),
            Combination::Sum => ja.iter().zip(&jb).map(|(a, b)| a + b).collect(),
            Combination::Product => {
                // ∂(f g_k) = g_k ∂f + f ∂g_k
                let (fa, gb) = (self.f.value(x)?[0], self.g.value(x)?);
                let d = ja.len();
                jb.iter().enumerate().map(|(idx, dg)| gb[idx / d] * ja[idx % d] + fa * dg).collect()
            }
        };
        Ok(vec![j])
    }
}
