use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::functions::geometry::CellGeometry;
use crate::functions::interfaces::{check_view_dim, LocalFunctionSet, LocalizableFunction};
use crate::functions::quadrature::Quadrature;
use crate::functions::space::DgSpace;
use crate::grid::{ApplyOn, ElementFunctor, Entity, GridView, Walker};
use crate::la::{DenseMatrix, DenseVector, Matrix, Solver};

/// The local mass matrix and load vector of one cell.
#[derive(Debug, Clone)]
pub struct LocalSystem {
    pub cell: usize,
    pub matrix: DenseMatrix,
    pub rhs: DenseVector,
}

struct ProjectionAssembler<'a> {
    function: &'a dyn LocalizableFunction,
    space: &'a DgSpace,
    mass_quadrature: Quadrature,
    rhs_quadrature: Quadrature,
    systems: Mutex<Vec<Option<LocalSystem>>>,
}

impl ProjectionAssembler<'_> {
    fn assemble(&self, view: &GridView, cell: &Entity) -> Result<LocalSystem> {
        let basis = self.space.local_basis(cell);
        let local_f = self.function.local_function(view, cell)?;
        let n = basis.size();
        let integration_element = basis.geometry().integration_element();
        let mut local_matrix = DenseMatrix::zeros(n, n);
        let mut local_vector = DenseVector::zeros(n);
        for (x, quadrature_weight) in self.mass_quadrature.iter() {
            let basis_values = basis.evaluate(x)?;
            for ii in 0..n {
                for jj in 0..n {
                    local_matrix.add_to_entry(
                        ii,
                        jj,
                        integration_element * quadrature_weight * (basis_values[ii][0] * basis_values[jj][0]),
                    )?;
                }
            }
        }
        for (x, quadrature_weight) in self.rhs_quadrature.iter() {
            let basis_values = basis.evaluate(x)?;
            let source_value = local_f.value(x)?[0];
            for ii in 0..n {
                local_vector.add_to_entry(ii, integration_element * quadrature_weight * (source_value * basis_values[ii][0]))?;
            }
        }
        Ok(LocalSystem {
            cell: view.index(cell),
            matrix: local_matrix,
            rhs: local_vector,
        })
    }
}

impl ElementFunctor for ProjectionAssembler<'_> {
    fn apply_local(&self, view: &GridView, element: &Entity) -> Result<()> {
        let system = self.assemble(view, element)?;
        let cell = system.cell;
        self.systems.lock().expect("assembly buffer poisoned")[cell] = Some(system);
        Ok(())
    }
}

fn check_scalar(f: &dyn LocalizableFunction) -> Result<()> {
    if f.is_scalar() {
        Ok(())
    } else {
        Err(Error::Shape(format!(
            "'{}' has range {:?}, expected a scalar function",
            f.name(),
            f.range()
        )))
    }
}

/// Assembles the local L2 projection systems of `f` on every cell of the
/// space's view, integrating the mass matrix with degree `2k` and the load
/// vector with degree `2k + order(f)`.
pub fn assemble_local_systems(f: &dyn LocalizableFunction, space: &DgSpace, parallel: bool) -> Result<Vec<LocalSystem>> {
    check_scalar(f)?;
    let view = space.view();
    check_view_dim(f.dim(), view)?;
    let k = space.order();
    let mut assembler = ProjectionAssembler {
        function: f,
        space,
        mass_quadrature: Quadrature::new(view.dim(), 2 * k),
        rhs_quadrature: Quadrature::new(view.dim(), 2 * k + f.order()),
        systems: Mutex::new(vec![None; view.num_cells()]),
    };
    {
        let mut walker = Walker::new(view);
        walker.add_element_functor(&mut assembler, ApplyOn::AllEntities)?;
        walker.walk(parallel)?;
    }
    let systems = assembler.systems.into_inner().expect("assembly buffer poisoned");
    Ok(systems.into_iter().map(|s| s.expect("every cell is visited")).collect())
}

/// Solves every local system with the dense solver (its first type unless
/// `solver_type` is given) and scatters the result into a global DoF vector.
pub fn solve_local_systems(space: &DgSpace, systems: &[LocalSystem], solver_type: Option<&str>) -> Result<DenseVector> {
    let n = space.basis_size();
    let mut dofs = DenseVector::zeros(space.num_dofs());
    let mut local_dofs = DenseVector::zeros(n);
    for system in systems {
        let solver = Solver::new(&system.matrix);
        let solved = match solver_type {
            Some(ty) => solver.apply_type(&system.rhs, &mut local_dofs, ty),
            None => solver.apply(&system.rhs, &mut local_dofs),
        };
        if let Err(e) = solved {
            return Err(match e {
                Error::Solver(failure) => Error::Projection(format!(
                    "L2 projection failed because a local matrix could not be inverted!\n\nThis was the original error: {failure}"
                )),
                other => other,
            });
        }
        let out = dofs.as_mut_slice();
        for (i, v) in local_dofs.as_slice().iter().enumerate() {
            out[space.global_index(system.cell, i)] = *v;
        }
    }
    Ok(dofs)
}

/// The DoF vector of the L2 projection of the scalar function `f` onto `space`.
pub fn l2_projection(f: &dyn LocalizableFunction, space: &DgSpace, solver_type: Option<&str>) -> Result<DenseVector> {
    let systems = assemble_local_systems(f, space, false)?;
    solve_local_systems(space, &systems, solver_type)
}

struct NormIntegrator<'a> {
    function: &'a dyn LocalizableFunction,
    quadrature: Quadrature,
    contributions: Mutex<Vec<f64>>,
}

impl ElementFunctor for NormIntegrator<'_> {
    fn apply_local(&self, view: &GridView, element: &Entity) -> Result<()> {
        let local = self.function.local_function(view, element)?;
        let integration_element = CellGeometry::of(view, element).integration_element();
        let mut sum = 0.0;
        for (x, w) in self.quadrature.iter() {
            let v = local.value(x)?;
            sum += w * v.iter().map(|c| c * c).sum::<f64>();
        }
        self.contributions.lock().expect("norm buffer poisoned")[view.index(element)] = integration_element * sum;
        Ok(())
    }
}

/// `sqrt(∫ |f|^2)` over `view`, integrated cellwise with a rule of the given
/// per-direction degree. Cell contributions are summed in cell order, so
/// serial and parallel walks give identical results.
pub fn l2_norm(f: &dyn LocalizableFunction, view: &GridView, degree: usize, parallel: bool) -> Result<f64> {
    check_view_dim(f.dim(), view)?;
    let mut integrator = NormIntegrator {
        function: f,
        quadrature: Quadrature::new(view.dim(), degree),
        contributions: Mutex::new(vec![0.0; view.num_cells()]),
    };
    {
        let mut walker = Walker::new(view);
        walker.add_element_functor(&mut integrator, ApplyOn::AllEntities)?;
        walker.walk(parallel)?;
    }
    let contributions = integrator.contributions.into_inner().expect("norm buffer poisoned");
    Ok(contributions.iter().sum::<f64>().sqrt())
}
