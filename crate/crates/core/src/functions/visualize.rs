use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::common::format_scalar;
use crate::error::{Error, Result};
use crate::functions::interfaces::LocalizableFunction;
use crate::grid::GridView;

/// Writes `f` sampled at cell centers as a legacy ASCII VTK rectilinear grid.
pub fn write_vtk<W: Write>(f: &dyn LocalizableFunction, view: &GridView, name: &str, sink: &mut W) -> Result<()> {
    if !f.is_scalar() {
        return Err(Error::Shape(format!("cannot visualize '{}' with range {:?}", f.name(), f.range())));
    }
    if name.is_empty() || name.chars().any(char::is_whitespace) {
        return Err(Error::Usage(format!("'{name}' is not a valid VTK field name")));
    }
    let dim = view.dim();
    let cells = view.cells_per_direction();
    let mut values = Vec::with_capacity(view.num_cells());
    let center = vec![0.5; dim];
    for cell in view.cells() {
        values.push(f.local_function(view, &cell)?.value(&center)?[0]);
    }
    let counts: Vec<usize> = (0..3).map(|i| if i < dim { cells[i] + 1 } else { 1 }).collect();
    writeln!(sink, "# vtk DataFile Version 3.0")?;
    writeln!(sink, "{name}")?;
    writeln!(sink, "ASCII")?;
    writeln!(sink, "DATASET RECTILINEAR_GRID")?;
    writeln!(sink, "DIMENSIONS {} {} {}", counts[0], counts[1], counts[2])?;
    for (axis, label) in ["X", "Y", "Z"].iter().enumerate() {
        writeln!(sink, "{label}_COORDINATES {} double", counts[axis])?;
        let coords: Vec<String> = if axis < dim {
            (0..counts[axis]).map(|k| format_scalar(view.node(axis, k))).collect()
        } else {
            vec!["0".into()]
        };
        writeln!(sink, "{}", coords.join(" "))?;
    }
    writeln!(sink, "CELL_DATA {}", values.len())?;
    writeln!(sink, "SCALARS {name} double 1")?;
    writeln!(sink, "LOOKUP_TABLE default")?;
    for v in values {
        writeln!(sink, "{}", format_scalar(v))?;
    }
    Ok(())
}

/// [`write_vtk`] into the file at `path`.
pub fn visualize(f: &dyn LocalizableFunction, view: &GridView, name: &str, path: impl AsRef<Path>) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_vtk(f, view, name, &mut out)?;
    out.flush()?;
    Ok(())
}
