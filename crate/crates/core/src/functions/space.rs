use std::sync::Arc;

use crate::error::{Error, Result};
use crate::functions::geometry::CellGeometry;
use crate::functions::interfaces::{LocalFunctionSet, LocalizableFunction};
use crate::grid::{Entity, GridView};
use crate::la::DenseVector;

/// Highest supported per-direction polynomial degree.
pub const MAX_ORDER: usize = 3;

/// Discontinuous piecewise polynomials of per-direction degree `k` on a view.
///
/// The basis on each cell is the tensor monomials `∏ x̂_i^{p_i}`, `0 <= p_i <= k`,
/// numbered with direction 0 fastest. DoFs are numbered cell by cell.
#[derive(Debug, Clone, PartialEq)]
pub struct DgSpace {
    view: GridView,
    order: usize,
}

impl DgSpace {
    pub fn new(view: GridView, order: usize) -> Result<Self> {
        if order > MAX_ORDER {
            return Err(Error::Spec(format!("polynomial order {order} exceeds {MAX_ORDER}")));
        }
        Ok(Self { view, order })
    }

    pub fn view(&self) -> &GridView {
        &self.view
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Basis functions per cell, `(k + 1)^dim`.
    pub fn basis_size(&self) -> usize {
        (self.order + 1).pow(self.view.dim() as u32)
    }

    pub fn num_dofs(&self) -> usize {
        self.view.num_cells() * self.basis_size()
    }

    /// Global index of local basis function `i` on the cell with index `cell`.
    pub fn global_index(&self, cell: usize, i: usize) -> usize {
        cell * self.basis_size() + i
    }

    /// The exponents of local basis function `i`.
    pub fn exponents(&self, i: usize) -> Vec<usize> {
        let n = self.order + 1;
        (0..self.view.dim()).map(|d| (i / n.pow(d as u32)) % n).collect()
    }

    pub fn local_basis(&self, cell: &Entity) -> MonomialBasis {
        MonomialBasis {
            entity: *cell,
            geometry: CellGeometry::of(&self.view, cell),
            order: self.order,
            exponents: (0..self.basis_size()).map(|i| self.exponents(i)).collect(),
        }
    }
}

/// The local basis of a [`DgSpace`] on one cell.
#[derive(Debug, Clone)]
pub struct MonomialBasis {
    entity: Entity,
    geometry: CellGeometry,
    order: usize,
    exponents: Vec<Vec<usize>>,
}

fn monomial(x: &[f64], p: &[usize]) -> f64 {
    x.iter().zip(p).map(|(x, p)| x.powi(*p as i32)).product()
}

/// Derivatives of `∏ x̂_i^{p_i}` with respect to the reference coordinates.
fn monomial_reference_gradient(x: &[f64], p: &[usize]) -> Vec<f64> {
    (0..x.len())
        .map(|d| {
            if p[d] == 0 {
                return 0.0;
            }
            (0..x.len())
                .map(|i| {
                    if i == d {
                        p[i] as f64 * x[i].powi(p[i] as i32 - 1)
                    } else {
                        x[i].powi(p[i] as i32)
                    }
                })
                .product()
        })
        .collect()
}

impl MonomialBasis {
    /// Gradients with respect to the reference coordinates, `∇φ^t`.
    pub fn reference_jacobian(&self, x: &[f64]) -> Vec<Vec<f64>> {
        self.exponents.iter().map(|p| monomial_reference_gradient(x, p)).collect()
    }
}

/// `∇_t φ^t = ∇φ^t (∇Φ^t)^{-1}`, i.e. divide by the cell widths.
fn localize_gradient(geometry: &CellGeometry, mut reference: Vec<f64>) -> Vec<f64> {
    for (g, h) in reference.iter_mut().zip(geometry.widths()) {
        *g /= h;
    }
    reference
}

impl LocalFunctionSet for MonomialBasis {
    fn entity(&self) -> &Entity {
        &self.entity
    }

    fn geometry(&self) -> &CellGeometry {
        &self.geometry
    }

    fn size(&self) -> usize {
        self.exponents.len()
    }

    fn order(&self) -> usize {
        self.order
    }

    fn range(&self) -> (usize, usize) {
        (1, 1)
    }

    fn evaluate(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        Ok(self.exponents.iter().map(|p| vec![monomial(x, p)]).collect())
    }

    fn jacobian(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        Ok(self
            .reference_jacobian(x)
            .into_iter()
            .map(|g| localize_gradient(&self.geometry, g))
            .collect())
    }
}

/// An element of a [`DgSpace`] given by its DoF vector.
#[derive(Debug, Clone)]
pub struct DiscreteFunction {
    space: Arc<DgSpace>,
    dofs: DenseVector,
    name: String,
}

/// The discrete function with coefficients `dofs` in `space`.
pub fn discrete_fn(space: &DgSpace, dofs: DenseVector) -> Result<DiscreteFunction> {
    DiscreteFunction::new(Arc::new(space.clone()), dofs)
}

impl DiscreteFunction {
    pub fn new(space: Arc<DgSpace>, dofs: DenseVector) -> Result<Self> {
        if dofs.size() != space.num_dofs() {
            return Err(Error::Shape(format!(
                "{} DoFs given for a space with {} DoFs",
                dofs.size(),
                space.num_dofs()
            )));
        }
        Ok(Self {
            space,
            dofs,
            name: "discrete function".into(),
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn space(&self) -> &DgSpace {
        &self.space
    }

    pub fn dofs(&self) -> &DenseVector {
        &self.dofs
    }
}

impl LocalizableFunction for DiscreteFunction {
    fn dim(&self) -> usize {
        self.space.view().dim()
    }

    fn range(&self) -> (usize, usize) {
        (1, 1)
    }

    fn name(&self) -> String {
        self.name.clone()
    }

    fn order(&self) -> usize {
        self.space.order()
    }

    fn local_function<'a>(&'a self, view: &GridView, cell: &Entity) -> Result<Box<dyn LocalFunctionSet + 'a>> {
        if view != self.space.view() {
            return Err(Error::Shape("discrete function used on a view other than its space's".into()));
        }
        let index = view.index(cell);
        let n = self.space.basis_size();
        let start = self.space.global_index(index, 0);
        Ok(Box::new(DiscreteLocal {
            basis: self.space.local_basis(cell),
            coefficients: &self.dofs.as_slice()[start..start + n],
        }))
    }
}

struct DiscreteLocal<'a> {
    basis: MonomialBasis,
    coefficients: &'a [f64],
}

impl LocalFunctionSet for DiscreteLocal<'_> {
    fn entity(&self) -> &Entity {
        &self.basis.entity
    }

    fn geometry(&self) -> &CellGeometry {
        &self.basis.geometry
    }

    fn size(&self) -> usize {
        1
    }

    fn order(&self) -> usize {
        self.basis.order
    }

    fn range(&self) -> (usize, usize) {
        (1, 1)
    }

    fn evaluate(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        let v = self
            .basis
            .exponents
            .iter()
            .zip(self.coefficients)
            .map(|(p, c)| c * monomial(x, p))
            .sum();
        Ok(vec![vec![v]])
    }

    fn jacobian(&self, x: &[f64]) -> Result<Vec<Vec<f64>>> {
        // gradient of the local function f^t, then the chain rule
        let mut reference = vec![0.0; x.len()];
        for (g, c) in self.basis.reference_jacobian(x).iter().zip(self.coefficients) {
            for (r, gi) in reference.iter_mut().zip(g) {
                *r += c * gi;
            }
        }
        Ok(vec![localize_gradient(&self.basis.geometry, reference)])
    }
}
