use std::sync::Arc;

use crate::error::{Error, Result};
use crate::functions::geometry::CellGeometry;
use crate::grid::{Entity, GridView};

/// A set of functions `φ^t: [0,1]^d -> R^{r×c}` bound to one cell `t`.
///
/// Values are flattened row-major into `r * c` entries. Jacobians hold, per
/// value component, the `d` derivatives with respect to the *global*
/// coordinates at `Φ^t(x̂)` (the localized gradient), so each jacobian has
/// `r * c * d` entries.
pub trait LocalFunctionSet {
    fn entity(&self) -> &Entity;

    fn geometry(&self) -> &CellGeometry;

    fn size(&self) -> usize;

    fn order(&self) -> usize;

    fn range(&self) -> (usize, usize);

    /// One value per member of the set at the local point `x`.
    fn evaluate(&self, x: &[f64]) -> Result<Vec<Vec<f64>>>;

    /// One localized jacobian per member of the set at the local point `x`.
    fn jacobian(&self, x: &[f64]) -> Result<Vec<Vec<f64>>>;

    /// The value of a set of size one.
    fn value(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.evaluate(x)?.swap_remove(0))
    }

    /// The localized jacobian of a set of size one.
    fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.jacobian(x)?.swap_remove(0))
    }
}

/// A function `Ω -> R^{r×c}` with a local function on every cell of a view.
pub trait LocalizableFunction: Send + Sync {
    /// Domain dimension `d`.
    fn dim(&self) -> usize;

    /// `(r, c)`.
    fn range(&self) -> (usize, usize);

    fn name(&self) -> String;

    /// Polynomial order used when integrating the function.
    fn order(&self) -> usize;

    /// The local function (a set of size one) on `cell`.
    fn local_function<'a>(&'a self, view: &GridView, cell: &Entity) -> Result<Box<dyn LocalFunctionSet + 'a>>;

    fn is_scalar(&self) -> bool {
        self.range() == (1, 1)
    }
}

pub type FunctionRef = Arc<dyn LocalizableFunction>;

pub(crate) fn check_view_dim(function_dim: usize, view: &GridView) -> Result<()> {
    if function_dim == view.dim() {
        Ok(())
    } else {
        Err(Error::Shape(format!(
            "function of domain dimension {function_dim} used on a grid of dimension {}",
            view.dim()
        )))
    }
}

/// Functions defined by evaluation at global points.
pub(crate) trait GlobalFunction: Send + Sync {
    fn dim(&self) -> usize;

    fn range(&self) -> (usize, usize);

    fn order(&self) -> usize;

    fn evaluate_global(&self, x: &[f64]) -> Result<Vec<f64>>;

    fn jacobian_global(&self, x: &[f64]) -> Result<Vec<f64>>;
}

/// `f ∘ Φ^t` with localized gradient `∇f ∘ Φ^t`.
pub(crate) struct GlobalLocalFunction<'a, G: ?Sized> {
    function: &'a G,
    entity: Entity,
    geometry: CellGeometry,
}

pub(crate) fn localize<'a, G: GlobalFunction>(
    function: &'a G,
    view: &GridView,
    cell: &Entity,
) -> Result<Box<dyn LocalFunctionSet + 'a>> {
    check_view_dim(function.dim(), view)?;
    Ok(Box::new(GlobalLocalFunction {
        function,
        entity: *cell,
        geometry: CellGeometry::of(view, cell),
    }))
}

impl<G: GlobalFunction + ?Sized> LocalFunctionSet for GlobalLocalFunction<'_, G> {
    fn entity(&self) -> &Entity {
        &self.entity
    }

    fn geometry(&self) -> &CellGeometry {
        &self.geometry
    }

    fn size(&self) -> usize {
        1
    }

    fn order(&self) -> usize {
        self.function.order()
    }

    fn range(&self) -> (usize, usize) {
        self.function.range()
    }

    fn evaluate(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        Ok(vec![self.function.evaluate_global(&self.geometry.global(x))?])
    }

    fn jacobian(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        Ok(vec![self.function.jacobian_global(&self.geometry.global(x))?])
    }
}
