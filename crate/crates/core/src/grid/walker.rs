//! One-pass application of several functors to the cells and intersections
//! of a view.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::boundary::{BoundaryInfo, BoundaryType};
use crate::grid::view::{Entity, GridView, Intersection, Side};

/// Selects the items a functor is applied to.
#[derive(Debug, Clone, PartialEq)]
pub enum ApplyOn {
    AllEntities,
    AllIntersections,
    /// Intersections with a neighbor (periodic ones included), from both sides.
    InnerIntersections,
    /// Each inner intersection once: from the cell with the smaller index,
    /// or from the high-coordinate side for periodic wrap faces.
    InnerIntersectionsPrimally,
    BoundaryIntersections,
    DirichletIntersections(BoundaryInfo),
    NeumannIntersections(BoundaryInfo),
}

impl ApplyOn {
    pub fn is_entity_filter(&self) -> bool {
        matches!(self, ApplyOn::AllEntities)
    }

    /// Whether `intersection` is selected. Always false for entity filters.
    pub fn matches(&self, view: &GridView, intersection: &Intersection) -> bool {
        match self {
            ApplyOn::AllEntities => false,
            ApplyOn::AllIntersections => true,
            ApplyOn::InnerIntersections => intersection.neighbor(),
            ApplyOn::InnerIntersectionsPrimally => match intersection.outside {
                None => false,
                Some(_) if intersection.periodic => intersection.side == Side::High,
                Some(outside) => view.index(&intersection.inside) < view.index(&outside),
            },
            ApplyOn::BoundaryIntersections => intersection.boundary(),
            ApplyOn::DirichletIntersections(info) => info.boundary_type(intersection) == BoundaryType::Dirichlet,
            ApplyOn::NeumannIntersections(info) => info.boundary_type(intersection) == BoundaryType::Neumann,
        }
    }
}

/// A functor applied to cells.
///
/// `apply_local` may run concurrently in parallel walks; `prepare` and
/// `finalize` run once on the calling thread.
pub trait ElementFunctor: Sync {
    fn prepare(&mut self) -> Result<()> {
        Ok(())
    }

    fn apply_local(&self, view: &GridView, element: &Entity) -> Result<()>;

    fn finalize(&mut self) -> Result<()> {
        Ok(())
    }
}

/// A functor applied to intersections. Same threading contract as
/// [`ElementFunctor`].
pub trait IntersectionFunctor: Sync {
    fn prepare(&mut self) -> Result<()> {
        Ok(())
    }

    fn apply_local(
        &self,
        view: &GridView,
        intersection: &Intersection,
        inside: &Entity,
        outside: Option<&Entity>,
    ) -> Result<()>;

    fn finalize(&mut self) -> Result<()> {
        Ok(())
    }
}

pub struct Walker<'a> {
    view: &'a GridView,
    elements: Vec<(&'a mut dyn ElementFunctor, ApplyOn)>,
    intersections: Vec<(&'a mut dyn IntersectionFunctor, ApplyOn)>,
}

impl<'a> Walker<'a> {
    pub fn new(view: &'a GridView) -> Self {
        Self {
            view,
            elements: Vec::new(),
            intersections: Vec::new(),
        }
    }

    pub fn view(&self) -> &GridView {
        self.view
    }

    pub fn add_element_functor(&mut self, functor: &'a mut dyn ElementFunctor, filter: ApplyOn) -> Result<()> {
        if !filter.is_entity_filter() {
            return Err(Error::Usage(format!("{filter:?} does not select entities")));
        }
        self.elements.push((functor, filter));
        Ok(())
    }

    pub fn add_intersection_functor(
        &mut self,
        functor: &'a mut dyn IntersectionFunctor,
        filter: ApplyOn,
    ) -> Result<()> {
        if filter.is_entity_filter() {
            return Err(Error::Usage(format!("{filter:?} does not select intersections")));
        }
        self.intersections.push((functor, filter));
        Ok(())
    }

    fn visit(
        view: &GridView,
        elements: &[(&dyn ElementFunctor, &ApplyOn)],
        intersections: &[(&dyn IntersectionFunctor, &ApplyOn)],
        cell: &Entity,
    ) -> Result<()> {
        for (functor, _) in elements {
            functor.apply_local(view, cell)?;
        }
        if !intersections.is_empty() {
            for is in view.intersections(cell) {
                for (functor, filter) in intersections {
                    if filter.matches(view, &is) {
                        functor.apply_local(view, &is, cell, is.outside.as_ref())?;
                    }
                }
            }
        }
        Ok(())
    }

    /// Runs `prepare`, then `apply_local` on every selected item, then
    /// `finalize`. The first functor error aborts the walk.
    pub fn walk(&mut self, parallel: bool) -> Result<()> {
        for (f, _) in &mut self.elements {
            f.prepare()?;
        }
        for (f, _) in &mut self.intersections {
            f.prepare()?;
        }
        {
            let view = self.view;
            let elements: Vec<(&dyn ElementFunctor, &ApplyOn)> =
                self.elements.iter().map(|(f, a)| (&**f, a)).collect();
            let intersections: Vec<(&dyn IntersectionFunctor, &ApplyOn)> =
                self.intersections.iter().map(|(f, a)| (&**f, a)).collect();
            let n = view.num_cells();
            let visit = |i: usize| {
                let cell = view.cell(i)?;
                Self::visit(view, &elements, &intersections, &cell)
            };
            if parallel {
                (0..n).into_par_iter().try_for_each(visit)?;
            } else {
                (0..n).try_for_each(visit)?;
            }
        }
        for (f, _) in &mut self.elements {
            f.finalize()?;
        }
        for (f, _) in &mut self.intersections {
            f.finalize()?;
        }
        Ok(())
    }
}
