use crate::error::{Error, Result};
use crate::grid::{Entity, GridView};

/// The affine reference map `x = offset + diag(h) x̂` of an axis-parallel
/// cell, taking `[0,1]^dim` onto the cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellGeometry {
    offset: Vec<f64>,
    widths: Vec<f64>,
}

impl CellGeometry {
    pub fn new(offset: Vec<f64>, widths: Vec<f64>) -> Result<Self> {
        if offset.len() != widths.len() {
            return Err(Error::Shape(format!(
                "offset has dimension {} but widths have {}",
                offset.len(),
                widths.len()
            )));
        }
        if let Some(h) = widths.iter().find(|h| !(**h > 0.0 && h.is_finite())) {
            return Err(Error::Spec(format!("cell widths must be positive, got {h}")));
        }
        Ok(Self { offset, widths })
    }

    /// The geometry of a cell of `view`.
    pub fn of(view: &GridView, cell: &Entity) -> Self {
        let (offset, widths) = view.cell_bounds(cell);
        Self { offset, widths }
    }

    pub fn dim(&self) -> usize {
        self.offset.len()
    }

    pub fn offset(&self) -> &[f64] {
        &self.offset
    }

    /// Diagonal of the map's jacobian.
    pub fn widths(&self) -> &[f64] {
        &self.widths
    }

    pub fn global(&self, local: &[f64]) -> Vec<f64> {
        self.offset.iter().zip(&self.widths).zip(local).map(|((o, h), x)| o + h * x).collect()
    }

    pub fn local(&self, global: &[f64]) -> Vec<f64> {
        self.offset.iter().zip(&self.widths).zip(global).map(|((o, h), x)| (x - o) / h).collect()
    }

    /// `|det ∇Φ|`, the cell volume.
    pub fn integration_element(&self) -> f64 {
        self.widths.iter().product()
    }

    pub fn center(&self) -> Vec<f64> {
        self.global(&vec![0.5; self.dim()])
    }
}
